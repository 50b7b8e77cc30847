"""Exception hierarchy shared across the toolkit."""


class PolyvolError(Exception):
    """Base class for all toolkit errors."""


class DivergentPlanes(PolyvolError):
    """The two planes do not intersect in hyperbolic space."""


class NotAnIsometry(PolyvolError):
    """A 4x4 matrix does not preserve the Minkowski form."""


class BadIncidence(PolyvolError):
    """A vertex lies on fewer than three faces."""


class DegenerateVertex(PolyvolError):
    """Incident face normals span fewer than three dimensions."""


class OriginOutside(PolyvolError):
    """The origin is not an interior point of the polyhedron."""


class NotCompact(PolyvolError):
    """A vertex lies on or outside the unit ball."""


class IndexMismatch(PolyvolError):
    """Edge-indexed vectors do not share an index set."""


class PathBroken(PolyvolError):
    """An intermediate realization along a path is invalid."""


class DegenerateFlag(PolyvolError):
    """A pinned vertex/edge/face flag is not mutually incident."""


class ConstraintProjectionFailed(PolyvolError):
    """A finite-difference probe could not be reprojected onto the
    constraint manifold."""


class SingularJacobian(PolyvolError):
    """Newton's method hit a (numerically) singular Jacobian."""


class LeftStratum(PolyvolError):
    """A deformation crossed a membership inequality.

    ``detail`` names the violated condition.
    """

    def __init__(self, detail: str = ""):
        super().__init__(detail)
        self.detail = detail


class NoConvergence(PolyvolError):
    """Newton iteration exhausted its iteration budget."""


class ContinuationStalled(PolyvolError):
    """Path following could not advance past ``last_t``."""

    def __init__(self, last_t: float, detail: str = ""):
        super().__init__(f"continuation stalled at t={last_t!r}: {detail}")
        self.last_t = last_t


class SkeletonMismatch(PolyvolError):
    """Two realizations do not share a combinatorial skeleton."""


class AnglesDiffer(PolyvolError):
    """Angle-match precondition failed for a comparison."""


class IdealPoint(PolyvolError):
    """The dual-point parameter alpha <= 1 would be ideal."""


class OutOfRange(PolyvolError):
    """Quantum integer index outside [0, r-1]."""


class Inadmissible(PolyvolError):
    """A coloring violates r-admissibility."""


class NotTrivalent(PolyvolError):
    """Graph has a vertex of valence != 3."""


class ReductionStuck(PolyvolError):
    """The bracket reduction found no applicable move."""


class UnsupportedVertexSplitting(PolyvolError):
    """Non-trivalent invariant requested without a configured
    vertex-splitting weight."""


class NoAdmissibleColoring(PolyvolError):
    """No admissible coloring found within the adjustment budget."""


class ZeroInvariant(PolyvolError):
    """The invariant vanished; its log-slope is undefined."""


class CatalogBroken(PolyvolError):
    """A catalog entry failed its own verification."""


class ConfigError(PolyvolError):
    """Invalid experiment configuration."""
