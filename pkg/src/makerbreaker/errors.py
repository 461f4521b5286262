"""Exception types shared across the package."""


class MakerBreakerError(Exception):
    """Base class for all package errors."""


class InvalidInput(MakerBreakerError, ValueError):
    """Malformed graph, vertex set, parameter or file."""


class CapExceeded(MakerBreakerError):
    """An exact search would exceed its configured enumeration cap."""


class NoHittingTime(MakerBreakerError):
    """The property never holds along the process."""


class PreconditionError(MakerBreakerError, ValueError):
    """A strategy or verifier was constructed outside its stated domain."""


class IllegalMove(MakerBreakerError):
    """A strategy tried to claim an element that is not free."""

    def __init__(self, offender: str, element, reason: str = "not free"):
        self.offender = offender
        self.element = element
        super().__init__(f"{offender} played {element!r}: {reason}")


class SplitFailed(MakerBreakerError):
    """No verified board split was found within the retry budget."""


class ThinningFailed(MakerBreakerError):
    """No verified thinned subgraph was found within the retry budget."""
