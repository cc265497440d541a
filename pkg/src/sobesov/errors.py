"""Exception types with stable machine-readable codes.

Every error raised by the toolkit carries a ``code`` string that is kept
stable across releases so that CLI consumers and cross-implementation
harnesses can match on it.
"""


class ToolkitError(Exception):
    """Base class for all toolkit errors."""

    code = "toolkit-error"


class InvalidArgument(ToolkitError, ValueError):
    code = "invalid-argument"


class SupportOverflow(ToolkitError, ValueError):
    code = "support-overflow"


class UnsupportedDilation(ToolkitError, ValueError):
    code = "unsupported-dilation"


class GridTooCoarse(ToolkitError, ValueError):
    code = "grid-too-coarse"


class BandOutOfRange(ToolkitError, ValueError):
    code = "band-out-of-range"


class EpsilonUnderResolved(ToolkitError, ValueError):
    code = "epsilon-under-resolved"


class DegenerateMollifier(ToolkitError, ValueError):
    code = "degenerate-mollifier"


class InvalidEpsilon(ToolkitError, ValueError):
    code = "invalid-epsilon"


class NotBandLimited(ToolkitError, ValueError):
    code = "not-band-limited"


class MomentOrderTooLow(ToolkitError, ValueError):
    code = "moment-order-too-low"


class ExponentMismatch(ToolkitError, ValueError):
    code = "exponent-mismatch"


class MissingExponent(ToolkitError, ValueError):
    code = "missing-exponent"


class ConditionViolated(ToolkitError, ValueError):
    """An exponent side condition does not hold.

    ``condition`` names the violated relation, e.g. ``"p2*(alpha2+sigma) > 1"``.
    """

    code = "condition-violated"

    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition


class UnresolvableAtScale(ToolkitError, ValueError):
    code = "unresolvable-at-scale"
