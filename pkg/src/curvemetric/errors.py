"""Exception taxonomy shared by all curvemetric modules."""


class CurveMetricError(Exception):
    """Base class for all errors raised by this package."""


class TooFewPoints(CurveMetricError):
    """A curve or sample set has fewer entries than the operation needs."""


class NonFiniteCoordinate(CurveMetricError):
    """Input coordinates contain NaN or infinity."""


class DegenerateSegment(CurveMetricError):
    """Two consecutive sampling points coincide, so the local tangent is undefined."""


class ShapeMismatch(CurveMetricError):
    """Operands do not share the sampling layout the operation requires."""


class MetricMismatch(CurveMetricError):
    """Transform-space values built under different stretching parameters were mixed."""


class NonPositiveA(CurveMetricError):
    """The stretching parameter must be strictly positive."""


class ZeroSample(CurveMetricError):
    """A transform-space sample is too close to zero for its angle to be recovered."""


class SingularDesign(CurveMetricError):
    """The regression design matrix is not invertible (e.g. all times equal)."""


class ZeroVariance(CurveMetricError):
    """The evaluation set is constant, so the coefficient of determination is undefined."""


class DegenerateSplit(CurveMetricError):
    """A trajectory split leaves too few curves in the train or validation segment."""


class TrajectoryTooShort(CurveMetricError):
    """The trajectory has too few time points for a 60/30/10 split."""


class EmptyInput(CurveMetricError):
    """An aggregation was asked to summarize nothing."""
