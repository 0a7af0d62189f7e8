"""Exception hierarchy shared across the package."""


class RobustFtapError(Exception):
    """Base class for all errors raised by this package."""


class RefinementError(RobustFtapError):
    """A later partition does not refine an earlier one."""


class MeasureError(RobustFtapError):
    """The reference measure has a nonpositive weight or does not sum to 1."""


class HorizonError(RobustFtapError):
    """A time index lies outside 0..T."""


class ThetaUnknown(RobustFtapError):
    """A model identifier is not part of the family."""


class ShapeMismatchError(RobustFtapError):
    """A claim, system, or process does not match the family's index sets."""


class NraViolated(RobustFtapError):
    """An operation requiring robust no-arbitrage was called on a market without it."""


class NoPricingSystem(RobustFtapError):
    """The pricing polytope is empty, so no price bounds exist."""


class UnboundedBelow(RobustFtapError):
    """A hedging program is unbounded below (semi-static no-arbitrage fails)."""


class ParamError(RobustFtapError):
    """Invalid model parameters (e.g. nonpositive volatility)."""


class DomainError(RobustFtapError):
    """Arguments outside the domain of a closed-form expression."""


class RegionError(RobustFtapError):
    """A weight-family point lies outside its feasibility region."""


class ParseError(RobustFtapError):
    """A market document failed to parse; carries a path into the document."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message
