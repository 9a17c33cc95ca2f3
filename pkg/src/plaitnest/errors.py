"""Exception taxonomy shared by all modules.

Geometric failures are loud: nothing in the library silently repairs bad
input. Every error below derives from PlaitnestError so callers can catch
the whole family at the CLI boundary.
"""


class PlaitnestError(Exception):
    """Base class for all library errors."""


class CollinearOverlap(PlaitnestError):
    """Two segments share a sub-segment longer than the tolerance."""


class PointOnBoundary(PlaitnestError):
    """Winding-number query point lies on the loop."""


class DegenerateArrangement(PlaitnestError):
    """Splitting curves at intersections produced sub-tolerance edges."""


class WindowTooCoarse(PlaitnestError):
    """Adaptive sampling would exceed the vertex budget."""


class IdenticalArcs(PlaitnestError):
    """Intersection equation is trivially satisfied: the arcs coincide."""


class DegenerateAmplitude(PlaitnestError):
    """Amplitude zero: every arc degenerates to the same ray."""


class ArgumentJump(PlaitnestError):
    """Consecutive vertices subtend an angle >= pi at the base point."""


class NonIntegerOffset(PlaitnestError):
    """A lifted crossing's branch offset is not an integer."""


class SpliceMismatch(PlaitnestError):
    """Stage splice points disagree beyond tolerance."""


class SelfIntersection(PlaitnestError):
    """A curve required to be simple crosses itself."""


class EmptyScene(PlaitnestError):
    """Nothing to render."""


class UsageError(PlaitnestError):
    """Bad command-line arguments (maps to exit code 2)."""
