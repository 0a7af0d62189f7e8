"""Robust and classical no-arbitrage decisions with explicit witnesses.

The robust decision maximizes the total slack below the terminal gains over
all models and outcomes: strategies are the free variables, each slack is
capped at 1 so the program stays bounded, and the market admits a robust
arbitrage exactly when the optimum is positive. Any positive-slack vertex
already is an arbitrage, no rescaling needed.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .errors import ThetaUnknown
from .lp import Constraint, LinearProgram, Variable, lp_solve
from .market import ModelFamily, PredictableStrategy
from .pricing import RobustPricingSystem, find_pricing_system


def max_threads() -> int:
    """Parallelism cap from ROBUSTFTAP_THREADS (default 1: serial)."""
    raw = os.environ.get("ROBUSTFTAP_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def strategy_variables(family: ModelFamily):
    """LP variable names for a predictable strategy: one per (t, atom, asset)."""
    space = family.space
    names = {}
    variables = []
    for t in range(1, space.horizon + 1):
        for k in range(len(space.atoms(t - 1))):
            for j in range(family.dims):
                name = f"H{t}_{k}_{j}"
                names[(t, k, j)] = name
                variables.append(Variable.free(name))
    return names, variables


def gain_row(family: ModelFamily, names: dict, theta: str, outcome: str) -> dict:
    """Coefficients of the terminal gain (H . S^theta_T)(outcome) in H variables."""
    space = family.space
    proc = family.processes[theta]
    coeffs = {}
    for t in range(1, space.horizon + 1):
        k = space.atom_index(t - 1, outcome)
        for j in range(family.dims):
            delta = proc.values[(t, outcome, j)] - proc.values[(t - 1, outcome, j)]
            if delta != 0:
                name = names[(t, k, j)]
                coeffs[name] = coeffs.get(name, Fraction(0)) + delta
    return coeffs


def strategy_from_assignment(
    family: ModelFamily, names: dict, assignment: dict
) -> PredictableStrategy:
    space = family.space
    positions = {}
    for (t, k, j), name in names.items():
        for outcome in space.partitions[t - 1][k]:
            positions[(t, outcome, j)] = assignment[name]
    return PredictableStrategy(positions)


def arbitrage_lp(family: ModelFamily, options=()):
    """The slack program deciding (semi-static) robust no-arbitrage.

    Returns (lp, h_names, static_names, slack_pairs).
    """
    space = family.space
    h_names, variables = strategy_variables(family)
    static_names = []
    for i in range(len(options)):
        name = f"a{i}"
        static_names.append(name)
        variables.append(Variable.free(name))
    slack_pairs = []
    objective = {}
    constraints = []
    translated = [opt.translated() for opt in options]
    for th in family.thetas:
        for w in space.outcomes:
            sname = f"s{len(slack_pairs)}"
            slack_pairs.append((th, w))
            variables.append(Variable.boxed(sname, Fraction(0), Fraction(1)))
            objective[sname] = Fraction(1)
            coeffs = gain_row(family, h_names, th, w)
            for i, payoff in enumerate(translated):
                v = payoff.value(th, w)
                if v != 0:
                    coeffs[static_names[i]] = v
            coeffs[sname] = Fraction(-1)
            constraints.append(Constraint(coeffs, ">=", Fraction(0)))
    lp = LinearProgram(
        sense="max", variables=variables, objective=objective, constraints=constraints
    )
    return lp, h_names, static_names, slack_pairs


def nra_optimum(family: ModelFamily, options=()):
    """Optimal total slack plus the maximizing strategy and static positions."""
    lp, h_names, static_names, _ = arbitrage_lp(family, options)
    sol = lp_solve(lp)
    assert sol.status == "optimal"  # slacks are boxed, so the program is bounded
    strategy = strategy_from_assignment(family, h_names, sol.assignment)
    statics = {i: sol.assignment[n] for i, n in enumerate(static_names)}
    return sol.value, strategy, statics


@dataclass
class NraVerdict:
    holds: bool
    witness: PredictableStrategy | None = None
    static_witness: dict | None = None  # option index -> position (with options)
    per_theta_certificates: dict | None = None  # theta -> RobustPricingSystem


def check_nra(family: ModelFamily, options=(), with_certificates: bool = True) -> NraVerdict:
    """Decide robust no-arbitrage; attach a witness or per-model certificates.

    The decision and the certificates come from independent programs: the
    slack maximization on the primal side, one polytope search per model on
    the dual side.
    """
    family.validate()
    value, strategy, statics = nra_optimum(family, options)
    if value > 0:
        return NraVerdict(
            holds=False,
            witness=strategy,
            static_witness=statics if options else None,
        )
    certificates = None
    if with_certificates:
        workers = min(max_threads(), len(family.thetas))
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                found = list(
                    pool.map(lambda th: find_pricing_system(family, th, options), family.thetas)
                )
        else:
            found = [find_pricing_system(family, th, options) for th in family.thetas]
        certificates = dict(zip(family.thetas, found))
        missing = [th for th, sys_ in certificates.items() if sys_ is None]
        assert not missing, f"no pricing certificate for {missing} despite zero slack"
    return NraVerdict(holds=True, per_theta_certificates=certificates)


@dataclass
class ClassicalNaResult:
    holds: bool
    martingale_measure: dict | None = None  # outcome -> Fraction
    witness: PredictableStrategy | None = None


def check_classical_na(family: ModelFamily, theta: str) -> ClassicalNaResult:
    """Classical no-arbitrage for one model: search for an equivalent
    martingale measure by maximizing the minimum outcome weight."""
    family.validate()
    if theta not in family.thetas:
        raise ThetaUnknown(f"unknown model {theta!r}")
    space = family.space
    proc = family.processes[theta]
    q_names = {w: f"Q{k}" for k, w in enumerate(space.outcomes)}
    variables = [Variable.nonneg(n) for n in q_names.values()]
    variables.append(Variable.free("eps"))
    constraints = [
        Constraint({q_names[w]: Fraction(1), "eps": Fraction(-1)}, ">=", Fraction(0))
        for w in space.outcomes
    ]
    constraints.append(
        Constraint({n: Fraction(1) for n in q_names.values()}, "=", Fraction(1))
    )
    for t in range(1, space.horizon + 1):
        for atom in space.atoms(t - 1):
            for j in range(family.dims):
                coeffs = {}
                for w in atom:
                    delta = proc.values[(t, w, j)] - proc.values[(t - 1, w, j)]
                    if delta != 0:
                        coeffs[q_names[w]] = delta
                constraints.append(Constraint(coeffs, "=", Fraction(0)))
    lp = LinearProgram(
        sense="max", variables=variables, objective={"eps": Fraction(1)}, constraints=constraints
    )
    sol = lp_solve(lp)
    if sol.status == "optimal" and sol.value > 0:
        measure = {w: sol.assignment[n] for w, n in q_names.items()}
        return ClassicalNaResult(holds=True, martingale_measure=measure)
    # No equivalent martingale measure: extract an arbitrage for this model.
    single = family.restrict([theta])
    value, strategy, _ = nra_optimum(single)
    assert value > 0, "classical FTAP: no measure must yield an arbitrage"
    # Re-key the witness onto the full family's space (identical space).
    return ClassicalNaResult(holds=False, witness=strategy)


def embed_classical_certificate(
    family: ModelFamily, theta: str, measure: dict
) -> RobustPricingSystem:
    """A classical martingale measure for one model, viewed as a robust system."""
    from .pricing import embed_classical

    return embed_classical(family, theta, measure)
