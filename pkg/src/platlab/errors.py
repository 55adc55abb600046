"""Exception taxonomy shared across the package.

Every error raised on purpose derives from PlatlabError so the CLI can map
failures onto its exit-code contract (2 = bad input, 3 = resource limit,
1 = check failure).
"""


class PlatlabError(Exception):
    """Base class for all deliberate errors."""


class ShapeError(PlatlabError):
    """Twist grid row lengths violate the odd/even parity rule."""


class TwistednessError(PlatlabError):
    """A twist magnitude is below the demanded twistedness level."""


class UnresolvedDiagram(PlatlabError):
    """A weighted diagram still carries pending crossing data."""


class AmbiguousOrder(PlatlabError):
    """Two symbolic weights cannot be ordered over the declared ranges."""


class TangencyError(PlatlabError):
    """A curve is tangent to a twist-support circle at working precision."""


class BudgetExceeded(PlatlabError):
    """Oracle resource budget (vertices or twist magnitude) exceeded."""


class DegenerateSubdivision(PlatlabError):
    """Planar subdivision hit a tangency/coincidence at precision limit."""


class CensusMismatch(PlatlabError):
    """Labyrinth face structure is not the expected five-component census."""


class CaseInapplicable(PlatlabError):
    """A matching replay case's precondition fails for this twist vector."""
