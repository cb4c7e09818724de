"""Exception hierarchy shared by all modules."""


class ReidTreeError(Exception):
    """Base class for every error raised by the package."""


class InvalidVertex(ReidTreeError):
    pass


class DepthExceeded(ReidTreeError):
    pass


class CapExceeded(ReidTreeError):
    """Raised when an enumeration grows past its element cap."""

    def __init__(self, cap, partial):
        super().__init__(f"enumeration exceeded cap {cap} (reached {partial} elements)")
        self.cap = cap
        self.partial = partial


class RequiresEnumeration(ReidTreeError):
    pass


class UnknownGroup(ReidTreeError):
    pass


class UndeclaredGenerator(ReidTreeError):
    pass


class SpecParseError(ReidTreeError):
    pass


class CommutationViolation(ReidTreeError):
    pass


class InvalidNormalizer(ReidTreeError):
    pass


class PreconditionError(ReidTreeError):
    pass


class CertificateError(ReidTreeError):
    """A certificate failed re-verification; ``invariant`` names the failed check."""

    def __init__(self, invariant, detail=""):
        msg = f"certificate invariant failed: {invariant}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)
        self.invariant = invariant
        self.detail = detail
