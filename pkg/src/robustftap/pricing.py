"""Robust pricing systems: the dual polytope, membership search, and bounds.

A pricing system is stored as a weight vector q over (model, outcome) pairs;
the density of model theta is q[theta, w] / P(w), which is well defined
because the reference measure is strictly positive. The polytope is cut out
by exactly three families of equalities: normalization, the per-atom
martingale rows, and (optionally) one calibration row per quoted option.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import NoPricingSystem, ShapeMismatchError, ThetaUnknown
from .lp import Constraint, LinearProgram, Variable, lp_solve
from .market import Claim, ModelFamily, StaticOption


@dataclass(frozen=True)
class RobustPricingSystem:
    """Nonnegative normalized weights making every model's price process
    a generalized martingale."""

    weights: dict  # (theta, outcome) -> Fraction

    def theta_mass(self, theta: str) -> Fraction:
        return sum(
            (v for (th, _), v in self.weights.items() if th == theta), Fraction(0)
        )

    def total_mass(self) -> Fraction:
        return sum(self.weights.values(), Fraction(0))

    def scaled(self, factor) -> "RobustPricingSystem":
        f = Fraction(factor)
        return RobustPricingSystem({k: f * v for k, v in self.weights.items()})

    def mix(self, other: "RobustPricingSystem", weight) -> "RobustPricingSystem":
        """Convex combination weight*self + (1-weight)*other."""
        lam = Fraction(weight)
        return RobustPricingSystem(
            {
                k: lam * v + (1 - lam) * other.weights[k]
                for k, v in self.weights.items()
            }
        )


def embed_classical(family: ModelFamily, theta: str, measure: dict) -> RobustPricingSystem:
    """Lift a single-model martingale measure to a system supported on one model."""
    if theta not in family.thetas:
        raise ThetaUnknown(f"unknown model {theta!r}")
    weights = {
        (th, w): Fraction(measure[w]) if th == theta else Fraction(0)
        for th in family.thetas
        for w in family.space.outcomes
    }
    return RobustPricingSystem(weights)


@dataclass(frozen=True)
class PricingConstraintSet:
    """The LP encoding of the pricing-system polytope.

    Rows are exactly: normalization, martingale equalities, calibration
    equalities. ``pair_names`` maps each (theta, outcome) pair to its LP
    variable name.
    """

    family: ModelFamily
    variables: list
    pair_names: dict  # (theta, outcome) -> variable name
    constraints: list
    labels: list

    @classmethod
    def build(cls, family: ModelFamily, options=()) -> "PricingConstraintSet":
        space = family.space
        pair_names = {}
        variables = []
        for i, th in enumerate(family.thetas):
            for k, w in enumerate(space.outcomes):
                name = f"q{i}_{k}"
                pair_names[(th, w)] = name
                variables.append(Variable.nonneg(name))

        constraints = []
        labels = []
        constraints.append(
            Constraint({n: Fraction(1) for n in pair_names.values()}, "=", Fraction(1))
        )
        labels.append("normalization")
        for t in range(1, space.horizon + 1):
            for k, atom in enumerate(space.atoms(t - 1)):
                for j in range(family.dims):
                    coeffs = {}
                    for th in family.thetas:
                        proc = family.processes[th]
                        for w in atom:
                            delta = proc.values[(t, w, j)] - proc.values[(t - 1, w, j)]
                            if delta != 0:
                                coeffs[pair_names[(th, w)]] = delta
                    constraints.append(Constraint(coeffs, "=", Fraction(0)))
                    labels.append(f"martingale t={t} atom={k} asset={j}")
        for i, option in enumerate(options):
            payoff = option.translated()
            coeffs = {}
            for (th, w), name in pair_names.items():
                v = payoff.value(th, w)
                if v != 0:
                    coeffs[name] = v
            constraints.append(Constraint(coeffs, "=", Fraction(0)))
            labels.append(f"calibration option={i}")
        return cls(family, variables, pair_names, constraints, labels)

    def lp(self, sense: str, objective: dict) -> LinearProgram:
        return LinearProgram(
            sense=sense,
            variables=self.variables,
            objective=objective,
            constraints=self.constraints,
        )

    def system_from_assignment(self, assignment: dict) -> RobustPricingSystem:
        return RobustPricingSystem(
            {pair: assignment[name] for pair, name in self.pair_names.items()}
        )


def evaluate(system: RobustPricingSystem, claim: Claim) -> Fraction:
    """The price functional: sum of weights times payoffs over all pairs."""
    if set(system.weights) != set(claim.payoffs):
        raise ShapeMismatchError("system and claim are indexed differently")
    return sum(
        (v * claim.payoffs[k] for k, v in system.weights.items() if v != 0), Fraction(0)
    )


def find_pricing_system(
    family: ModelFamily, theta: str, options=()
) -> RobustPricingSystem | None:
    """A pricing system putting maximal weight on ``theta``, or None.

    Membership in the model's dual set requires strictly positive mass on
    the model, so the mass maximizer decides existence.
    """
    family.validate()
    if theta not in family.thetas:
        raise ThetaUnknown(f"unknown model {theta!r}")
    cons = PricingConstraintSet.build(family, options)
    objective = {
        cons.pair_names[(theta, w)]: Fraction(1) for w in family.space.outcomes
    }
    sol = lp_solve(cons.lp("max", objective))
    if sol.status != "optimal" or sol.value == 0:
        return None
    return cons.system_from_assignment(sol.assignment)


def verify_pricing_system(
    family: ModelFamily, system: RobustPricingSystem, options=()
) -> str | None:
    """Exact check of every defining row; returns the first violation or None."""
    space = family.space
    want = {(th, w) for th in family.thetas for w in space.outcomes}
    if set(system.weights) != want:
        return "shape: weights are not indexed by every (model, outcome) pair"
    for th in family.thetas:
        for w in space.outcomes:
            if system.weights[(th, w)] < 0:
                return f"negativity: weight ({th}, {w}) = {system.weights[(th, w)]}"
    cons = PricingConstraintSet.build(family, options)
    for con, label in zip(cons.constraints, cons.labels):
        lhs = Fraction(0)
        for (th, w), name in cons.pair_names.items():
            c = con.coeffs.get(name)
            if c is not None:
                lhs += c * system.weights[(th, w)]
        if lhs != con.rhs:
            return f"{label}: lhs = {lhs}, expected {con.rhs}"
    return None


@dataclass(frozen=True)
class PriceBounds:
    lo: Fraction
    hi: Fraction
    lo_system: RobustPricingSystem
    hi_system: RobustPricingSystem


def pricing_bounds(family: ModelFamily, claim: Claim, options=()) -> PriceBounds:
    """Exact price interval of a claim over the (calibrated) polytope.

    Raises NoPricingSystem when the polytope is empty, which is exactly the
    failure of (semi-static) robust no-arbitrage at the pricing level.
    """
    family.validate()
    claim.validate(family)
    cons = PricingConstraintSet.build(family, options)
    objective = {}
    for (th, w), name in cons.pair_names.items():
        v = claim.value(th, w)
        if v != 0:
            objective[name] = v
    sol_hi = lp_solve(cons.lp("max", objective))
    if sol_hi.status == "infeasible":
        raise NoPricingSystem("the pricing polytope is empty")
    sol_lo = lp_solve(cons.lp("min", objective))
    assert sol_hi.status == "optimal" and sol_lo.status == "optimal"
    return PriceBounds(
        lo=sol_lo.value,
        hi=sol_hi.value,
        lo_system=cons.system_from_assignment(sol_lo.assignment),
        hi_system=cons.system_from_assignment(sol_hi.assignment),
    )
