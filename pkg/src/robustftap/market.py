"""Finite filtered market models: spaces, price processes, strategies, claims.

The probability measure is strictly positive on every outcome, so
almost-sure statements are outcome-by-outcome statements and equality is
decidable. All values are exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    HorizonError,
    MeasureError,
    RefinementError,
    ShapeMismatchError,
    ThetaUnknown,
)
from .rationals import as_fraction

Atom = tuple[str, ...]


@dataclass(frozen=True)
class FilteredSpace:
    """A finite outcome space with a refining chain of partitions and a measure.

    ``partitions[t]`` lists the atoms of the time-t information set; the
    chain must refine and the terminal partition must separate outcomes.
    """

    horizon: int
    outcomes: tuple[str, ...]
    partitions: tuple[tuple[Atom, ...], ...]
    prob: dict[str, Fraction]
    _atom_index: dict[tuple[int, str], int] = field(
        default_factory=dict, repr=False, compare=False
    )

    def __post_init__(self):
        index = {}
        for t, part in enumerate(self.partitions):
            for k, atom in enumerate(part):
                for outcome in atom:
                    index[(t, outcome)] = k
        object.__setattr__(self, "_atom_index", index)

    def atoms(self, t: int) -> tuple[Atom, ...]:
        if not 0 <= t <= self.horizon:
            raise HorizonError(f"time {t} outside 0..{self.horizon}")
        return self.partitions[t]

    def atom_index(self, t: int, outcome: str) -> int:
        return self._atom_index[(t, outcome)]

    def atom_of(self, t: int, outcome: str) -> Atom:
        return self.partitions[t][self.atom_index(t, outcome)]

    def children(self, t: int, atom_idx: int) -> list[int]:
        """Indices of the time-(t+1) atoms contained in a time-t atom."""
        atom = self.partitions[t][atom_idx]
        seen = []
        for outcome in atom:
            k = self.atom_index(t + 1, outcome)
            if k not in seen:
                seen.append(k)
        return seen

    def atom_prob(self, t: int, atom_idx: int) -> Fraction:
        return sum((self.prob[w] for w in self.partitions[t][atom_idx]), Fraction(0))


def build_space(horizon: int, partitions, prob) -> FilteredSpace:
    """Validate and build a filtered space.

    Raises RefinementError if the partition chain does not refine (or the
    terminal partition does not separate outcomes), MeasureError for a
    nonpositive weight or total mass != 1, and ValueError for inputs that
    are not partitions of one outcome set at all.
    """
    if horizon < 0:
        raise ValueError("horizon must be nonnegative")
    parts = tuple(tuple(tuple(atom) for atom in level) for level in partitions)
    if len(parts) != horizon + 1:
        raise ValueError(f"expected {horizon + 1} partition levels, got {len(parts)}")
    outcomes = tuple(w for atom in parts[0] for w in atom)
    universe = set(outcomes)
    if len(universe) != len(outcomes):
        raise ValueError("duplicate outcome in partition level 0")
    for t, level in enumerate(parts):
        flat = [w for atom in level for w in atom]
        if len(flat) != len(set(flat)) or set(flat) != universe or any(not a for a in level):
            raise ValueError(f"level {t} is not a partition of the outcome set")
    for t in range(horizon):
        coarse = {w: k for k, atom in enumerate(parts[t]) for w in atom}
        for atom in parts[t + 1]:
            owners = {coarse[w] for w in atom}
            if len(owners) != 1:
                raise RefinementError(
                    f"atom {atom} at time {t + 1} straddles atoms of time {t}"
                )
    for atom in parts[horizon]:
        if len(atom) != 1:
            raise RefinementError(
                f"terminal partition must separate outcomes, found atom {atom}"
            )
    measure = {w: as_fraction(p) for w, p in prob.items()}
    if set(measure) != universe:
        raise MeasureError("probability keys do not match the outcome set")
    for w, p in measure.items():
        if p <= 0:
            raise MeasureError(f"outcome {w!r} has nonpositive probability {p}")
    total = sum(measure.values())
    if total != 1:
        raise MeasureError(f"probabilities sum to {total}, expected 1")
    return FilteredSpace(horizon, outcomes, parts, measure)


@dataclass(frozen=True)
class AdaptedProcess:
    """A d-dimensional process; values must be constant on each time-t atom."""

    dims: int
    values: dict  # (t, outcome, asset) -> Fraction

    @classmethod
    def from_table(cls, dims: int, table) -> "AdaptedProcess":
        """Build from {t: {outcome: [v_asset0, ...]}} with coercible entries."""
        values = {}
        for t, per_outcome in table.items():
            for outcome, vec in per_outcome.items():
                if len(vec) != dims:
                    raise ShapeMismatchError(
                        f"expected {dims} assets at ({t}, {outcome}), got {len(vec)}"
                    )
                for j, v in enumerate(vec):
                    values[(int(t), outcome, j)] = as_fraction(v)
        return cls(dims, values)

    def at(self, t: int, outcome: str) -> tuple[Fraction, ...]:
        return tuple(self.values[(t, outcome, j)] for j in range(self.dims))


@dataclass(frozen=True)
class AdaptednessViolation:
    t: int
    atom_index: int
    asset: int

    def __str__(self):
        return f"values differ on atom {self.atom_index} at time {self.t}, asset {self.asset}"


def validate_adapted(space: FilteredSpace, process: AdaptedProcess) -> AdaptednessViolation | None:
    """None if the process is constant on every atom, else the first violation."""
    for t in range(space.horizon + 1):
        for outcome in space.outcomes:
            for j in range(process.dims):
                if (t, outcome, j) not in process.values:
                    raise ShapeMismatchError(f"missing value at ({t}, {outcome!r}, {j})")
        for k, atom in enumerate(space.atoms(t)):
            for j in range(process.dims):
                ref = process.values[(t, atom[0], j)]
                for outcome in atom[1:]:
                    if process.values[(t, outcome, j)] != ref:
                        return AdaptednessViolation(t, k, j)
    return None


@dataclass(frozen=True)
class ModelFamily:
    """A finite set of parametrized price processes on one filtered space."""

    space: FilteredSpace
    thetas: tuple[str, ...]
    processes: dict  # theta -> AdaptedProcess

    @property
    def dims(self) -> int:
        return self.processes[self.thetas[0]].dims

    def process(self, theta: str) -> AdaptedProcess:
        try:
            return self.processes[theta]
        except KeyError:
            raise ThetaUnknown(f"unknown model {theta!r}") from None

    def price(self, theta: str, t: int, outcome: str) -> tuple[Fraction, ...]:
        return self.process(theta).at(t, outcome)

    def validate(self) -> None:
        if not self.thetas:
            raise ShapeMismatchError("model family must be non-empty")
        d = self.dims
        for theta in self.thetas:
            proc = self.process(theta)
            if proc.dims != d:
                raise ShapeMismatchError(f"model {theta!r} has dimension {proc.dims} != {d}")
            violation = validate_adapted(self.space, proc)
            if violation is not None:
                raise ShapeMismatchError(f"model {theta!r}: {violation}")

    def restrict(self, thetas) -> "ModelFamily":
        """Sub-family containing only the given models (order preserved)."""
        kept = tuple(th for th in self.thetas if th in set(thetas))
        if not kept:
            raise ThetaUnknown(f"no models left after restricting to {list(thetas)!r}")
        return ModelFamily(self.space, kept, {th: self.processes[th] for th in kept})


@dataclass(frozen=True)
class PredictableStrategy:
    """Per-period positions, constant on the atoms of the previous time."""

    positions: dict  # (t, outcome, asset) -> Fraction for t in 1..T

    @classmethod
    def from_atom_table(cls, space: FilteredSpace, dims: int, table) -> "PredictableStrategy":
        """Build from {(t, atom_index): [positions per asset]}."""
        positions = {}
        for (t, k), vec in table.items():
            for outcome in space.partitions[t - 1][k]:
                for j in range(dims):
                    positions[(t, outcome, j)] = as_fraction(vec[j])
        return cls(positions)

    @classmethod
    def constant(cls, space: FilteredSpace, dims: int, value) -> "PredictableStrategy":
        v = as_fraction(value)
        positions = {
            (t, outcome, j): v
            for t in range(1, space.horizon + 1)
            for outcome in space.outcomes
            for j in range(dims)
        }
        return cls(positions)

    def at(self, t: int, outcome: str, dims: int) -> tuple[Fraction, ...]:
        return tuple(self.positions[(t, outcome, j)] for j in range(dims))

    def __neg__(self) -> "PredictableStrategy":
        return PredictableStrategy({k: -v for k, v in self.positions.items()})

    def add(self, other: "PredictableStrategy") -> "PredictableStrategy":
        if set(self.positions) != set(other.positions):
            raise ShapeMismatchError("strategies are indexed differently")
        return PredictableStrategy(
            {k: v + other.positions[k] for k, v in self.positions.items()}
        )


def validate_predictable(
    space: FilteredSpace, strategy: PredictableStrategy, dims: int
) -> None:
    """Raise if positions are missing or not constant on previous-time atoms."""
    for t in range(1, space.horizon + 1):
        for atom in space.atoms(t - 1):
            for j in range(dims):
                try:
                    ref = strategy.positions[(t, atom[0], j)]
                except KeyError:
                    raise ShapeMismatchError(f"missing position at ({t}, {atom[0]!r}, {j})")
                for outcome in atom[1:]:
                    if strategy.positions[(t, outcome, j)] != ref:
                        raise ShapeMismatchError(
                            f"positions not measurable at time {t}, atom {atom}"
                        )


def gain(family: ModelFamily, strategy: PredictableStrategy, theta: str, t: int) -> dict:
    """Cumulative trading gain sum_{s<=t} H_s . (S_s - S_{s-1}) per outcome."""
    space = family.space
    if t > space.horizon:
        raise HorizonError(f"time {t} exceeds horizon {space.horizon}")
    proc = family.process(theta)
    out = {}
    for outcome in space.outcomes:
        acc = Fraction(0)
        for s in range(1, t + 1):
            for j in range(proc.dims):
                h = strategy.positions[(s, outcome, j)]
                if h != 0:
                    acc += h * (
                        proc.values[(s, outcome, j)] - proc.values[(s - 1, outcome, j)]
                    )
        out[outcome] = acc
    return out


@dataclass(frozen=True)
class Claim:
    """A vector payoff: one terminal value per (model, outcome) pair."""

    payoffs: dict  # (theta, outcome) -> Fraction

    def validate(self, family: ModelFamily) -> None:
        want = {(th, w) for th in family.thetas for w in family.space.outcomes}
        if set(self.payoffs) != want:
            raise ShapeMismatchError("claim is not indexed by every (model, outcome) pair")

    def value(self, theta: str, outcome: str) -> Fraction:
        return self.payoffs[(theta, outcome)]

    def is_nonnegative(self) -> bool:
        return all(v >= 0 for v in self.payoffs.values())

    def scaled(self, factor) -> "Claim":
        f = as_fraction(factor)
        return Claim({k: f * v for k, v in self.payoffs.items()})

    def shifted(self, constant) -> "Claim":
        c = as_fraction(constant)
        return Claim({k: v + c for k, v in self.payoffs.items()})

    def __neg__(self) -> "Claim":
        return self.scaled(-1)

    def __add__(self, other: "Claim") -> "Claim":
        if set(self.payoffs) != set(other.payoffs):
            raise ShapeMismatchError("claims are indexed differently")
        return Claim({k: v + other.payoffs[k] for k, v in self.payoffs.items()})

    def restrict(self, thetas) -> "Claim":
        keep = set(thetas)
        return Claim({k: v for k, v in self.payoffs.items() if k[0] in keep})

    @classmethod
    def constant(cls, family: ModelFamily, value) -> "Claim":
        v = as_fraction(value)
        return cls(
            {(th, w): v for th in family.thetas for w in family.space.outcomes}
        )

    @classmethod
    def from_table(cls, family: ModelFamily, table) -> "Claim":
        """Build from {theta: {outcome: value}} with coercible entries."""
        payoffs = {}
        for th, row in table.items():
            for w, v in row.items():
                payoffs[(th, w)] = as_fraction(v)
        claim = cls(payoffs)
        claim.validate(family)
        return claim

    @classmethod
    def terminal_stock(cls, family: ModelFamily, asset: int = 0) -> "Claim":
        """One share of each model's asset at the horizon: f^theta = S^theta_T."""
        T = family.space.horizon
        return cls(
            {
                (th, w): family.price(th, T, w)[asset]
                for th in family.thetas
                for w in family.space.outcomes
            }
        )

    @classmethod
    def indicator(cls, family: ModelFamily, theta: str, outcomes) -> "Claim":
        """The claim paying 1 on the given outcomes in one model, 0 elsewhere."""
        hit = set(outcomes)
        return cls(
            {
                (th, w): Fraction(1) if th == theta and w in hit else Fraction(0)
                for th in family.thetas
                for w in family.space.outcomes
            }
        )


@dataclass(frozen=True)
class StaticOption:
    """An option tradeable only at time zero: a payoff claim plus its quote."""

    payoff: Claim
    quote: Fraction

    def translated(self) -> Claim:
        """Quote-adjusted payoff (effective market price zero)."""
        return self.payoff.shifted(-self.quote)
