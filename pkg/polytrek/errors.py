from typing_extensions import ClassVar


class PolytrekError(Exception):
    """
    Base class for every error raised by polytrek. `exit_code` is the process status the command-line tool reports
    when the error escapes a command.
    """

    exit_code: ClassVar[int] = 1


class SubscriberError(PolytrekError):
    """A subscriber on the message bus is missing its generic message type."""


# geometry


class GeometryError(PolytrekError): ...


class UnboundedPolytope(GeometryError): ...


class DimensionMismatch(GeometryError): ...


class DegenerateIntersection(GeometryError):
    """The intersection has a lower affine dimension than the operation needs."""


class DegenerateBoundary(DegenerateIntersection):
    """The boundary collapses to a single point."""


class InvalidObject(GeometryError): ...


# milp


class SolverError(PolytrekError): ...


class Unbounded(SolverError): ...


class NumericalFailure(SolverError): ...


class EmptyBounds(SolverError): ...


# encode


class EncodingError(PolytrekError): ...


class NonConvexQuad(EncodingError): ...


class MixedMotion(EncodingError):
    """Two waypoints differ in both translation and rotation."""


class RotationStepTooLarge(EncodingError): ...


# decompose


class DecompositionError(PolytrekError): ...


class SamplingExhausted(DecompositionError): ...


class NoUncoveredEdges(DecompositionError): ...


class SeedInObstacle(DecompositionError): ...


class CoverageStall(DecompositionError):
    exit_code: ClassVar[int] = 2


# densegraph


class InvalidTraversal(PolytrekError): ...


# query


class QueryError(PolytrekError): ...


class InvalidQuery(QueryError):
    exit_code: ClassVar[int] = 5


class Disconnected(QueryError):
    exit_code: ClassVar[int] = 4


class NoPath(QueryError):
    exit_code: ClassVar[int] = 4


class PlanRejected(QueryError):
    """A found plan failed the dense collision replay."""

    exit_code: ClassVar[int] = 6


# files


class FileFormatError(PolytrekError): ...


class _LocatedParseError(FileFormatError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        super().__init__(f"{message} (line {line}, column {column})" if line else message)


class SceneParseError(_LocatedParseError): ...


class ObjectParseError(_LocatedParseError): ...


class RoadmapFormatError(FileFormatError): ...


class UnknownRoadmapVersion(RoadmapFormatError): ...


class FingerprintCollision(FileFormatError):
    """A stored dense graph has the same object fingerprint but different object geometry."""

    exit_code: ClassVar[int] = 3
