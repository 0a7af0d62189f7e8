"""Exact rational linear programming via two-phase simplex with Bland's rule.

The solver works over exact rationals end to end, so optimality, infeasibility,
and unboundedness are decided, not estimated. Every answer carries a
certificate that can be re-verified by exact arithmetic:

* optimal    -> per-constraint dual multipliers (KKT conditions),
* infeasible -> a Farkas ray over the constraint rows,
* unbounded  -> a feasible point plus an improving ray.

Internally the solver uses gmpy2's GMP-backed rationals when available (3-4x
faster pivots); the public interface is stdlib ``Fraction`` either way.

Dual-multiplier convention: multipliers always refer to the *minimization*
form of the program (the objective is negated internally when sense is
``"max"``). For a minimization, a ``<=`` row has multiplier <= 0, a ``>=``
row has multiplier >= 0, and an ``=`` row is unconstrained.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

try:  # GMP-backed rationals are a pure speedup; semantics are identical.
    from gmpy2 import mpq as _R
except ImportError:  # pragma: no cover
    _R = Fraction

MIN = "min"
MAX = "max"
LE = "<="
EQ = "="
GE = ">="

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


def _to_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    return Fraction(int(v.numerator), int(v.denominator))


@dataclass(frozen=True)
class Variable:
    """A named variable with bounds; ``None`` means unbounded on that side."""

    name: str
    lo: Fraction | None = Fraction(0)
    hi: Fraction | None = None

    @staticmethod
    def free(name: str) -> "Variable":
        return Variable(name, None, None)

    @staticmethod
    def nonneg(name: str) -> "Variable":
        return Variable(name, Fraction(0), None)

    @staticmethod
    def boxed(name: str, lo, hi) -> "Variable":
        return Variable(name, Fraction(lo), Fraction(hi))


@dataclass(frozen=True)
class Constraint:
    coeffs: dict  # var name -> Fraction
    rel: str      # "<=", "=", ">="
    rhs: Fraction


@dataclass
class LinearProgram:
    sense: str
    variables: list  # of Variable, ordered
    objective: dict  # var name -> Fraction (sparse)
    constraints: list  # of Constraint

    def validate(self) -> None:
        if self.sense not in (MIN, MAX):
            raise ValueError(f"sense must be 'min' or 'max', got {self.sense!r}")
        names = [v.name for v in self.variables]
        declared = set(names)
        if len(declared) != len(names):
            raise ValueError("duplicate variable names")
        for v in self.variables:
            if v.lo is not None and v.hi is not None and v.lo > v.hi:
                raise ValueError(f"variable {v.name}: lower bound exceeds upper bound")
        for name in self.objective:
            if name not in declared:
                raise ValueError(f"objective references undeclared variable {name!r}")
        for k, con in enumerate(self.constraints):
            if con.rel not in (LE, EQ, GE):
                raise ValueError(f"constraint {k}: bad relation {con.rel!r}")
            for name in con.coeffs:
                if name not in declared:
                    raise ValueError(f"constraint {k} references undeclared variable {name!r}")


@dataclass
class LpSolution:
    status: str
    value: Fraction | None = None
    assignment: dict = field(default_factory=dict)
    # Certificates (see module docstring for conventions):
    dual: list | None = None    # per-constraint multipliers when optimal
    farkas: list | None = None  # per-constraint Farkas ray when infeasible
    ray: dict | None = None     # improving feasible direction when unbounded


# --- internal column bookkeeping -------------------------------------------
#
# Each original variable is rewritten in terms of nonnegative internal
# columns:  free x -> p - m;  [lo, inf) -> x' + lo;  (-inf, hi] -> hi - x';
# [lo, hi] -> x' + lo with an extra row x' <= hi - lo.


class _Transform:
    __slots__ = ("kind", "col", "col2", "offset")

    def __init__(self, kind, col, col2=None, offset=None):
        self.kind = kind      # "split" | "shift" | "mirror"
        self.col = col
        self.col2 = col2
        self.offset = offset  # internal rational


def lp_solve(lp: LinearProgram) -> LpSolution:
    """Solve ``lp`` exactly. Optimal solutions are vertex (basic) solutions."""
    lp.validate()
    n_orig = len(lp.variables)
    var_index = {v.name: j for j, v in enumerate(lp.variables)}

    minimize = lp.sense == MIN
    c_orig = [_R(0)] * n_orig
    for name, coef in lp.objective.items():
        c_orig[var_index[name]] = _R(coef) if minimize else -_R(coef)

    # Build internal columns per variable.
    transforms: list[_Transform] = []
    ncols = 0
    ub_rows: list[tuple[int, object]] = []  # (internal col, capacity hi - lo)
    for v in lp.variables:
        if v.lo is None and v.hi is None:
            transforms.append(_Transform("split", ncols, ncols + 1))
            ncols += 2
        elif v.lo is not None and v.hi is None:
            transforms.append(_Transform("shift", ncols, offset=_R(v.lo)))
            ncols += 1
        elif v.lo is None:
            transforms.append(_Transform("mirror", ncols, offset=_R(v.hi)))
            ncols += 1
        else:
            transforms.append(_Transform("shift", ncols, offset=_R(v.lo)))
            ub_rows.append((ncols, _R(v.hi) - _R(v.lo)))
            ncols += 1

    # Internal objective over columns.
    c_int = [_R(0)] * ncols
    for j, tr in enumerate(transforms):
        cj = c_orig[j]
        if cj == 0:
            continue
        if tr.kind == "split":
            c_int[tr.col] = cj
            c_int[tr.col2] = -cj
        elif tr.kind == "shift":
            c_int[tr.col] = cj
        else:  # mirror
            c_int[tr.col] = -cj

    # Internal rows in original orientation: (coeffs over cols, rel, rhs).
    # row_origin[i] is the index into lp.constraints, or None for bound rows.
    rows: list[list] = []
    rels: list[str] = []
    rhss: list = []
    row_origin: list[int | None] = []
    for i, con in enumerate(lp.constraints):
        row = [_R(0)] * ncols
        rhs = _R(con.rhs)
        for name, coef in con.coeffs.items():
            j = var_index[name]
            a = _R(coef)
            if a == 0:
                continue
            tr = transforms[j]
            if tr.kind == "split":
                row[tr.col] += a
                row[tr.col2] -= a
            elif tr.kind == "shift":
                row[tr.col] += a
                rhs -= a * tr.offset
            else:  # mirror: x = hi - x'
                row[tr.col] -= a
                rhs -= a * tr.offset
        rows.append(row)
        rels.append(con.rel)
        rhss.append(rhs)
        row_origin.append(i)
    for col, cap in ub_rows:
        row = [_R(0)] * ncols
        row[col] = _R(1)
        rows.append(row)
        rels.append(LE)
        rhss.append(cap)
        row_origin.append(None)

    # Equality standard form with nonnegative rhs; slack columns after the
    # structural ones, artificials last.
    m = len(rows)
    flipped = [False] * m
    slack_col = {}
    nslack = 0
    for i in range(m):
        if rels[i] != EQ:
            slack_col[i] = ncols + nslack
            nslack += 1
    n_nonart = ncols + nslack

    art_col = {}
    nart = 0
    basis: list[int] = []
    body: list[list] = []
    body_rhs: list = []
    for i in range(m):
        neg = rhss[i] < 0
        flipped[i] = neg
        row = [(-x if neg else x) for x in rows[i]] + [_R(0)] * nslack
        if rels[i] != EQ:
            row[slack_col[i]] = _R(-1) if (rels[i] == GE) != neg else _R(1)
        body.append(row)
        body_rhs.append(-rhss[i] if neg else rhss[i])
        if rels[i] != EQ and row[slack_col[i]] == 1:
            basis.append(slack_col[i])
        else:
            art_col[i] = n_nonart + nart
            nart += 1
            basis.append(art_col[i])
    total_cols = n_nonart + nart
    tableau: list[list] = []
    for i in range(m):
        row = body[i] + [_R(0)] * nart + [body_rhs[i]]
        if i in art_col:
            row[art_col[i]] = _R(1)
        tableau.append(row)

    # Snapshot of the equality-form matrix for certificate extraction.
    eq_matrix = [row[:total_cols] for row in tableau]

    def extract_dual(costs, live_basis, live_matrix):
        """Solve B^T y = c_B over the live (non-deleted) rows."""
        k = len(live_matrix)
        if k == 0:
            return []
        mat = [[live_matrix[i][live_basis[r]] for i in range(k)] for r in range(k)]
        rhs = [costs[live_basis[r]] for r in range(k)]
        return _gauss_solve(mat, rhs)

    # --- Phase 1 ---
    if nart:
        c1 = [_R(0)] * total_cols
        for i in art_col.values():
            c1[i] = _R(1)
        status, enter = _simplex(tableau, basis, c1, banned=None)
        assert status == OPTIMAL  # phase 1 is always bounded below by 0
        p1val = sum((tableau[i][-1] for i, b in enumerate(basis) if b >= n_nonart), _R(0))
        if p1val > 0:
            y = extract_dual(c1, basis, eq_matrix)
            farkas = [Fraction(0)] * len(lp.constraints)
            for i in range(m):
                if row_origin[i] is not None:
                    yi = -y[i] if flipped[i] else y[i]
                    farkas[row_origin[i]] = _to_fraction(yi)
            return LpSolution(status=INFEASIBLE, farkas=farkas)

        # Drive zero-level artificials out of the basis; drop redundant rows.
        live = list(range(m))
        drop: list[int] = []
        for r in range(len(basis)):
            if basis[r] < n_nonart:
                continue
            pivot_col = None
            for j in range(n_nonart):
                if tableau[r][j] != 0:
                    pivot_col = j
                    break
            if pivot_col is None:
                drop.append(r)
            else:
                _pivot(tableau, basis, r, pivot_col)
        if drop:
            for r in sorted(drop, reverse=True):
                del tableau[r]
                del basis[r]
                del live[r]
    else:
        live = list(range(m))

    # --- Phase 2 --- (artificial columns truncated away)
    for i in range(len(tableau)):
        tableau[i] = tableau[i][:n_nonart] + [tableau[i][-1]]
    c2 = c_int + [_R(0)] * nslack
    status, enter = _simplex(tableau, basis, c2, banned=None)

    if status == UNBOUNDED:
        point = _read_point(tableau, basis, ncols)
        # Improving ray: entering column moves up by 1, basic columns adjust.
        direction = [_R(0)] * ncols
        if enter < ncols:
            direction[enter] = _R(1)
        for r, b in enumerate(basis):
            if b < ncols:
                direction[b] = -tableau[r][enter]
        assignment = _map_back(lp, transforms, point)
        ray = _map_back_direction(lp, transforms, direction)
        return LpSolution(status=UNBOUNDED, assignment=assignment, ray=ray)

    point = _read_point(tableau, basis, ncols)
    assignment = _map_back(lp, transforms, point)
    value = Fraction(0)
    for name, coef in lp.objective.items():
        value += Fraction(coef) * assignment[name]

    live_matrix = [eq_matrix[i] for i in live]
    y_live = extract_dual(c2 + [_R(0)] * nart, basis, live_matrix)
    dual = [Fraction(0)] * len(lp.constraints)
    for pos, i in enumerate(live):
        if row_origin[i] is not None:
            yi = -y_live[pos] if flipped[i] else y_live[pos]
            dual[row_origin[i]] = _to_fraction(yi)
    return LpSolution(status=OPTIMAL, value=value, assignment=assignment, dual=dual)


def _gauss_solve(mat, rhs):
    """Solve a square nonsingular system exactly (internal rationals)."""
    k = len(mat)
    aug = [mat[i][:] + [rhs[i]] for i in range(k)]
    for c in range(k):
        p = next(i for i in range(c, k) if aug[i][c] != 0)
        aug[c], aug[p] = aug[p], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for i in range(k):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[c])]
    return [aug[i][k] for i in range(k)]


def _pivot(tableau, basis, r, c):
    piv = tableau[r][c]
    if piv != 1:
        inv = 1 / piv
        tableau[r] = [x * inv for x in tableau[r]]
    row_r = tableau[r]
    for i in range(len(tableau)):
        if i == r:
            continue
        f = tableau[i][c]
        if f != 0:
            row_i = tableau[i]
            tableau[i] = [a - f * b for a, b in zip(row_i, row_r)]
    basis[r] = c


def _simplex(tableau, basis, costs, banned):
    """Bland's-rule simplex on an equality-form tableau (min).

    Returns (OPTIMAL, None) or (UNBOUNDED, entering_column).
    """
    m = len(tableau)
    ncols = len(costs)
    # Reduced-cost row, maintained across pivots.
    zrow = list(costs)
    for r, b in enumerate(basis):
        f = zrow[b]
        if f != 0:
            row = tableau[r]
            zrow = [a - f * bb for a, bb in zip(zrow, row[:ncols])]
    while True:
        enter = -1
        for j in range(ncols):
            if zrow[j] < 0:
                enter = j
                break
        if enter < 0:
            return OPTIMAL, None
        # Ratio test; ties broken by smallest basic variable index (Bland).
        leave = -1
        best = None
        for i in range(m):
            a = tableau[i][enter]
            if a > 0:
                ratio = tableau[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave < 0:
            return UNBOUNDED, enter
        _pivot(tableau, basis, leave, enter)
        f = zrow[enter]
        if f != 0:
            row = tableau[leave]
            zrow = [a - f * b for a, b in zip(zrow, row[:ncols])]


def _read_point(tableau, basis, ncols):
    point = [_R(0)] * ncols
    for r, b in enumerate(basis):
        if b < ncols:
            point[b] = tableau[r][-1]
    return point


def _map_back(lp, transforms, point):
    out = {}
    for j, v in enumerate(lp.variables):
        tr = transforms[j]
        if tr.kind == "split":
            val = point[tr.col] - point[tr.col2]
        elif tr.kind == "shift":
            val = point[tr.col] + tr.offset
        else:
            val = tr.offset - point[tr.col]
        out[v.name] = _to_fraction(val)
    return out


def _map_back_direction(lp, transforms, direction):
    out = {}
    for j, v in enumerate(lp.variables):
        tr = transforms[j]
        if tr.kind == "split":
            val = direction[tr.col] - direction[tr.col2]
        elif tr.kind == "shift":
            val = direction[tr.col]
        else:
            val = -direction[tr.col]
        out[v.name] = _to_fraction(val)
    return out


# --- certificate verification ------------------------------------------------


def _row_value(con: Constraint, x: dict) -> Fraction:
    return sum((Fraction(c) * x[name] for name, c in con.coeffs.items()), Fraction(0))


def check_feasible(lp: LinearProgram, x: dict) -> str | None:
    """Exact feasibility check; returns None or the first violation."""
    for v in lp.variables:
        val = x[v.name]
        if v.lo is not None and val < v.lo:
            return f"variable {v.name} below lower bound"
        if v.hi is not None and val > v.hi:
            return f"variable {v.name} above upper bound"
    for k, con in enumerate(lp.constraints):
        lhs = _row_value(con, x)
        if con.rel == LE and lhs > con.rhs:
            return f"constraint {k} violated"
        if con.rel == GE and lhs < con.rhs:
            return f"constraint {k} violated"
        if con.rel == EQ and lhs != con.rhs:
            return f"constraint {k} violated"
    return None


def verify_optimal(lp: LinearProgram, sol: LpSolution) -> str | None:
    """Exact KKT check of an optimal solution. Returns None or a reason."""
    if sol.status != OPTIMAL:
        return "status is not optimal"
    bad = check_feasible(lp, sol.assignment)
    if bad:
        return f"primal infeasible: {bad}"
    value = sum(
        (Fraction(c) * sol.assignment[name] for name, c in lp.objective.items()), Fraction(0)
    )
    if value != sol.value:
        return "objective value mismatch"
    y = sol.dual
    if y is None or len(y) != len(lp.constraints):
        return "missing or misshapen dual"
    sign = Fraction(1) if lp.sense == MIN else Fraction(-1)
    # Dual feasibility and complementary slackness on rows (min convention).
    for k, con in enumerate(lp.constraints):
        if con.rel == LE and y[k] > 0:
            return f"dual sign violated on constraint {k}"
        if con.rel == GE and y[k] < 0:
            return f"dual sign violated on constraint {k}"
        if y[k] != 0 and _row_value(con, sol.assignment) != con.rhs:
            return f"complementary slackness violated on constraint {k}"
    # Stationarity against the variable bounds.
    for v in lp.variables:
        z = sign * Fraction(lp.objective.get(v.name, 0))
        for k, con in enumerate(lp.constraints):
            c = con.coeffs.get(v.name)
            if c is not None and y[k] != 0:
                z -= y[k] * Fraction(c)
        at_lo = v.lo is not None and sol.assignment[v.name] == v.lo
        at_hi = v.hi is not None and sol.assignment[v.name] == v.hi
        if at_lo and at_hi:
            continue
        if at_lo:
            if z < 0:
                return f"reduced cost of {v.name} negative at lower bound"
        elif at_hi:
            if z > 0:
                return f"reduced cost of {v.name} positive at upper bound"
        elif z != 0:
            return f"reduced cost of {v.name} nonzero between bounds"
    return None


def verify_infeasible(lp: LinearProgram, sol: LpSolution) -> str | None:
    """Exact Farkas check of an infeasibility certificate."""
    if sol.status != INFEASIBLE:
        return "status is not infeasible"
    y = sol.farkas
    if y is None or len(y) != len(lp.constraints):
        return "missing or misshapen Farkas ray"
    for k, con in enumerate(lp.constraints):
        if con.rel == LE and y[k] > 0:
            return f"Farkas sign violated on constraint {k}"
        if con.rel == GE and y[k] < 0:
            return f"Farkas sign violated on constraint {k}"
    g = {v.name: Fraction(0) for v in lp.variables}
    for k, con in enumerate(lp.constraints):
        if y[k] == 0:
            continue
        for name, c in con.coeffs.items():
            g[name] += y[k] * Fraction(c)
    bound_term = Fraction(0)
    for v in lp.variables:
        gj = g[v.name]
        if gj > 0:
            if v.hi is None:
                return f"ray allows unbounded increase of {v.name}"
            bound_term += gj * v.hi
        elif gj < 0:
            if v.lo is None:
                return f"ray allows unbounded decrease of {v.name}"
            bound_term += gj * v.lo
    lhs = sum((y[k] * Fraction(con.rhs) for k, con in enumerate(lp.constraints)), Fraction(0))
    if lhs <= bound_term:
        return "Farkas inequality not strict"
    return None


def verify_unbounded(lp: LinearProgram, sol: LpSolution) -> str | None:
    """Exact check of an unboundedness certificate (point + improving ray)."""
    if sol.status != UNBOUNDED:
        return "status is not unbounded"
    bad = check_feasible(lp, sol.assignment)
    if bad:
        return f"certificate point infeasible: {bad}"
    r = sol.ray
    if r is None:
        return "missing ray"
    for v in lp.variables:
        if v.lo is not None and r[v.name] < 0:
            return f"ray leaves lower bound of {v.name}"
        if v.hi is not None and r[v.name] > 0:
            return f"ray leaves upper bound of {v.name}"
    for k, con in enumerate(lp.constraints):
        along = _row_value(con, r)
        if con.rel == LE and along > 0:
            return f"ray violates constraint {k}"
        if con.rel == GE and along < 0:
            return f"ray violates constraint {k}"
        if con.rel == EQ and along != 0:
            return f"ray violates constraint {k}"
    gain = sum((Fraction(c) * r[name] for name, c in lp.objective.items()), Fraction(0))
    if lp.sense == MIN and gain >= 0:
        return "ray does not improve the minimum"
    if lp.sense == MAX and gain <= 0:
        return "ray does not improve the maximum"
    return None
