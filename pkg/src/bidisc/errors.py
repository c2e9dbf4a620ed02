"""Semantic exception hierarchy. Public operations raise these, never bare ValueError."""


class BidiscError(Exception):
    """Base error for the package."""


class InvalidInput(BidiscError, ValueError):
    """Inputs violate a contract: shape, domain, NaN/Inf, unknown names."""


class NoRoots(BidiscError):
    """Root finding requested on a degree-0 polynomial."""


class DegenerateSlice(BidiscError):
    """A polynomial slice collapsed to degree 0 where degree >= 1 is required."""

    def __init__(self, message, z1=None):
        super().__init__(message)
        self.z1 = z1


class StabilityViolation(BidiscError):
    """Sampled stability certificate found a root inside the bidisc."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class InnernessViolation(BidiscError):
    """A sampled torus point gave ||phi| - 1| above tolerance away from the zero set."""


class NearPole(BidiscError):
    """Denominator vanished at a supposedly interior evaluation point."""


class DegreeGuard(BidiscError):
    """Iterated composition would exceed the configured degree bound."""


class NoBranch(BidiscError):
    """An operation needs a level-set branch and none is available."""


class RefineResolution(BidiscError):
    """Sampling too coarse for the requested estimate; carries a suggestion."""

    def __init__(self, message, required_resolution=None):
        super().__init__(message)
        self.required_resolution = required_resolution


class InsufficientLadder(BidiscError):
    """Fewer usable ladder rungs than the fit requires."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or []


class InclusionViolated(BidiscError):
    """A probe sample landed outside the target box at the fitted constant."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotBoundaryContact(BidiscError):
    """Transversality requested at a point the symbol does not map to the bitorus."""


class IncompleteAnalysis(BidiscError):
    """The verdict engine is missing required feature-extraction inputs."""

    def __init__(self, message, missing=None):
        super().__init__(message)
        self.missing = missing or []
