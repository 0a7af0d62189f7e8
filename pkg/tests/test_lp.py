import random
from fractions import Fraction as F
from itertools import combinations

import pytest

from robustftap.lp import (
    INFEASIBLE,
    OPTIMAL,
    UNBOUNDED,
    Constraint,
    LinearProgram,
    Variable,
    lp_solve,
    verify_infeasible,
    verify_optimal,
    verify_unbounded,
)


# --- independent brute-force oracle -----------------------------------------
# Enumerates basic points (all nonsingular n-subsets of active equalities,
# constraint rows plus finite bounds) with its own Gaussian solver, so it
# shares no code path with the simplex.


def _oracle_gauss(A, b):
    n = len(A)
    aug = [row[:] + [b[i]] for i, row in enumerate(A)]
    for c in range(n):
        p = None
        for i in range(c, n):
            if aug[i][c] != 0:
                p = i
                break
        if p is None:
            return None  # singular
        aug[c], aug[p] = aug[p], aug[c]
        inv = F(1) / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    return [aug[i][n] for i in range(n)]


def _oracle_feasible(lp, assign):
    for v in lp.variables:
        if v.lo is not None and assign[v.name] < v.lo:
            return False
        if v.hi is not None and assign[v.name] > v.hi:
            return False
    for con in lp.constraints:
        lhs = sum(F(c) * assign[n] for n, c in con.coeffs.items())
        if con.rel == "<=" and lhs > con.rhs:
            return False
        if con.rel == ">=" and lhs < con.rhs:
            return False
        if con.rel == "=" and lhs != con.rhs:
            return False
    return True


def enumerate_basic_points(lp):
    names = [v.name for v in lp.variables]
    cands = [(con.coeffs, F(con.rhs)) for con in lp.constraints]
    for v in lp.variables:
        if v.lo is not None:
            cands.append(({v.name: F(1)}, F(v.lo)))
        if v.hi is not None and v.hi != v.lo:
            cands.append(({v.name: F(1)}, F(v.hi)))
    n = len(names)
    points = []
    for subset in combinations(range(len(cands)), n):
        A = [[F(cands[i][0].get(nm, 0)) for nm in names] for i in subset]
        b = [cands[i][1] for i in subset]
        x = _oracle_gauss(A, b)
        if x is None:
            continue
        assign = dict(zip(names, x))
        if _oracle_feasible(lp, assign):
            points.append(assign)
    return points


def oracle_best_value(lp):
    points = enumerate_basic_points(lp)
    if not points:
        return None
    values = [sum(F(c) * p[n] for n, c in lp.objective.items()) for p in points]
    return max(values) if lp.sense == "max" else min(values)


# --- hand-checked instances ---------------------------------------------------


def test_max_box():
    lp = LinearProgram(
        sense="max",
        variables=[Variable.nonneg("x")],
        objective={"x": F(1)},
        constraints=[Constraint({"x": F(1)}, "<=", F(1))],
    )
    sol = lp_solve(lp)
    assert sol.status == OPTIMAL
    assert sol.value == 1
    assert sol.assignment["x"] == 1
    assert verify_optimal(lp, sol) is None


def test_one_period_robust_hedge_program():
    # min x subject to the four coverage rows with volatilities 1 and 2;
    # cross-checked by enumerating active pairs of constraints by hand:
    # the binding pair (x + H >= 3, x - 2H >= 0) gives x = 2, H = 1.
    lp = LinearProgram(
        sense="min",
        variables=[Variable.free("x"), Variable.free("H")],
        objective={"x": F(1)},
        constraints=[
            Constraint({"x": F(1), "H": F(1)}, ">=", F(3)),
            Constraint({"x": F(1), "H": F(-1)}, ">=", F(0)),
            Constraint({"x": F(1), "H": F(2)}, ">=", F(3)),
            Constraint({"x": F(1), "H": F(-2)}, ">=", F(0)),
        ],
    )
    sol = lp_solve(lp)
    assert sol.status == OPTIMAL
    assert sol.value == 2
    assert sol.assignment == {"x": F(2), "H": F(1)}
    assert verify_optimal(lp, sol) is None


def test_unbounded_above():
    lp = LinearProgram(
        sense="max",
        variables=[Variable.nonneg("x")],
        objective={"x": F(1)},
        constraints=[Constraint({"x": F(1)}, ">=", F(1))],
    )
    sol = lp_solve(lp)
    assert sol.status == UNBOUNDED
    assert verify_unbounded(lp, sol) is None


def test_infeasible_with_farkas():
    lp = LinearProgram(
        sense="min",
        variables=[Variable.nonneg("x")],
        objective={"x": F(1)},
        constraints=[
            Constraint({"x": F(1)}, "<=", F(1)),
            Constraint({"x": F(1)}, ">=", F(2)),
        ],
    )
    sol = lp_solve(lp)
    assert sol.status == INFEASIBLE
    assert verify_infeasible(lp, sol) is None


def test_free_variable_equality():
    lp = LinearProgram(
        sense="min",
        variables=[Variable.free("x")],
        objective={"x": F(1)},
        constraints=[Constraint({"x": F(1)}, "=", F(-5))],
    )
    sol = lp_solve(lp)
    assert sol.status == OPTIMAL
    assert sol.value == -5
    assert verify_optimal(lp, sol) is None


def test_upper_bounded_variable():
    lp = LinearProgram(
        sense="max",
        variables=[Variable("x", None, F(3)), Variable.boxed("y", F(-1), F(2))],
        objective={"x": F(1), "y": F(2)},
        constraints=[Constraint({"x": F(1), "y": F(1)}, "<=", F(4))],
    )
    sol = lp_solve(lp)
    assert sol.status == OPTIMAL
    assert sol.value == 6  # x = 2, y = 2
    assert verify_optimal(lp, sol) is None


def test_degenerate_duplicated_rows_terminate():
    # Duplicated and redundant rows exercise degenerate pivoting; Bland's
    # rule must still terminate at the right value.
    rows = [
        Constraint({"x": F(1), "y": F(1)}, "<=", F(2)),
        Constraint({"x": F(1), "y": F(1)}, "<=", F(2)),
        Constraint({"x": F(2), "y": F(2)}, "<=", F(4)),
        Constraint({"x": F(1)}, "<=", F(2)),
        Constraint({"x": F(1)}, ">=", F(0)),
    ]
    lp = LinearProgram(
        sense="max",
        variables=[Variable.nonneg("x"), Variable.nonneg("y")],
        objective={"x": F(3), "y": F(1)},
        constraints=rows,
    )
    sol = lp_solve(lp)
    assert sol.status == OPTIMAL
    assert sol.value == 6
    assert verify_optimal(lp, sol) is None


def test_equality_with_negative_rhs():
    lp = LinearProgram(
        sense="min",
        variables=[Variable.nonneg("x"), Variable.nonneg("y")],
        objective={"x": F(1), "y": F(1)},
        constraints=[Constraint({"x": F(-1), "y": F(-1)}, "=", F(-2))],
    )
    sol = lp_solve(lp)
    assert sol.status == OPTIMAL
    assert sol.value == 2
    assert verify_optimal(lp, sol) is None


# --- randomized agreement with the enumeration oracle -------------------------


def _random_lp(rng):
    nvars = rng.randint(1, 4)
    nrows = rng.randint(1, 6)
    names = [f"x{j}" for j in range(nvars)]
    variables = []
    for name in names:
        if rng.random() < 0.25:
            variables.append(Variable.boxed(name, F(0), F(rng.randint(1, 5))))
        else:
            variables.append(Variable.nonneg(name))
    objective = {n: F(rng.randint(-4, 4)) for n in names}
    constraints = []
    for _ in range(nrows):
        coeffs = {n: F(rng.randint(-4, 4)) for n in names}
        rel = rng.choice(["<=", ">=", "="])
        constraints.append(Constraint(coeffs, rel, F(rng.randint(-6, 6))))
    if rng.random() < 0.3:
        constraints.append(constraints[0])  # deliberate degeneracy
    return LinearProgram(
        sense=rng.choice(["min", "max"]),
        variables=variables,
        objective=objective,
        constraints=constraints,
    )


@pytest.mark.parametrize("seed", range(4))
def test_random_lps_agree_with_enumeration(seed):
    rng = random.Random(1000 + seed)
    for _ in range(30):
        lp = _random_lp(rng)
        sol = lp_solve(lp)
        if sol.status == OPTIMAL:
            assert verify_optimal(lp, sol) is None
            assert sol.value == oracle_best_value(lp)
        elif sol.status == INFEASIBLE:
            assert verify_infeasible(lp, sol) is None
            assert oracle_best_value(lp) is None
        else:
            assert verify_unbounded(lp, sol) is None
            # Unbounded implies feasibility; with nonnegative variables a
            # feasible region always contains a basic point.
            assert oracle_best_value(lp) is not None
