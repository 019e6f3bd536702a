"""Exception hierarchy shared across the package."""


class HyperflipError(Exception):
    """Base class for all package-specific errors."""


class GeometryError(HyperflipError):
    """Invalid geometric input (degenerate triangle, bad polygon, ...)."""


class RegionTraceError(GeometryError):
    """The gap structure cannot be represented as simple polygons."""


class LabelError(HyperflipError):
    """Malformed label or label arithmetic out of range."""


class EdgeConditionViolated(LabelError):
    """A pair of labels does not satisfy the edge condition |I & J| = k-1."""

    def __init__(self, a, b, size):
        self.pair = (a, b)
        self.size = size
        super().__init__(
            f"labels {a} and {b} intersect in {size} indices, expected {len(a) - 1}"
        )


class ColorUndefined(LabelError):
    """A label triple passes the edge condition but has no color."""

    def __init__(self, labels, size):
        self.labels = labels
        self.size = size
        super().__init__(
            f"triple intersection of {labels} has size {size}, "
            f"expected {len(labels[0]) - 1} (white) or {len(labels[0]) - 2} (black)"
        )


class GenericityError(HyperflipError):
    """The point configuration is too degenerate for the requested operation."""

    def __init__(self, message, witness=None):
        self.witness = witness
        super().__init__(message)


class InvalidHypertriangulation(HyperflipError):
    """An operation received a hypertriangulation that fails validation."""

    def __init__(self, report):
        self.report = report
        super().__init__(f"invalid hypertriangulation: {report.summary()}")


class FlipNotApplicable(HyperflipError):
    """A flip cannot be applied to the current hypertriangulation."""


class BudgetExceeded(HyperflipError):
    """A configurable resource budget (search nodes, path length) ran out."""


class PreconditionError(HyperflipError):
    """An operation's documented precondition does not hold."""
