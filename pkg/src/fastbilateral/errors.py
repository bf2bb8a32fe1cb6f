"""Exception types shared across the package."""


class ParameterError(ValueError):
    """A parameter is outside its valid domain (nonpositive sigma, bad order, ...)."""


class RangeViolationError(ValueError):
    """An image sample lies outside the declared intensity range."""


class BoundInapplicableError(ValueError):
    """The filtering-accuracy bound is vacuous (kernel error >= center weight)."""


class NumericRangeError(ArithmeticError):
    """Intermediate values left the representable range of 64-bit floats."""
