"""Error types raised by the msd engine.

Semi-decision outcomes (Unknown, NotFound, RefutedByHomology) are plain values
and never show up here.
"""


class MsdError(Exception):
    """Base class for every msd failure."""


# surface-core
class NonOrientable(MsdError, ValueError):
    pass


class Disconnected(MsdError, ValueError):
    pass


class DanglingSide(MsdError, ValueError):
    pass


class ClosedInput(MsdError, ValueError):
    pass


class NotEmbeddable(MsdError, ValueError):
    pass


class DifferentSurfaces(MsdError, ValueError):
    pass


class ArcInput(MsdError, ValueError):
    pass


# mcg
class ArcAboutCurve(MsdError, ValueError):
    pass


class CurveTooLong(MsdError, RuntimeError):
    pass


# heegaard
class BandCrossesSystem(MsdError, ValueError):
    pass


# divides
class NotSeparating(MsdError, ValueError):
    pass


class PiecesNotHomeomorphic(MsdError, ValueError):
    pass


# palf
class NullHomologousCycle(MsdError, ValueError):
    def __init__(self, index: int, message: str = ""):
        self.index = index
        super().__init__(message or f"vanishing cycle {index} is null-homologous in the fiber")


class EmptyFiberBoundary(MsdError, ValueError):
    pass


# moves
class InvalidSite(MsdError, ValueError):
    pass


class RelationNotVerified(MsdError, ValueError):
    pass


class DualityFailure(MsdError, ValueError):
    pass


class RangeMismatch(MsdError, ValueError):
    pass


# invariants
class KiUnknown(MsdError, RuntimeError):
    pass


# kirby / io
class FrontSyntaxError(MsdError, ValueError):
    def __init__(self, line_no: int, message: str):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


class FrontValidityError(MsdError, ValueError):
    pass


class DiagramFormatError(MsdError, ValueError):
    pass


class PipelineDefect(MsdError, RuntimeError):
    """A construction produced output that fails its own checks."""
