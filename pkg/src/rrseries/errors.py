"""Exception types raised by the series engine and the verification layers."""


class SeriesError(ValueError):
    """Base class for every error raised by rrseries."""


class ZeroConstantTerm(SeriesError):
    pass


class NonzeroInnerConstant(SeriesError):
    pass


class BadLowestTerm(SeriesError):
    pass


class NonIntegerExponent(SeriesError):
    pass


class ArityMismatch(SeriesError):
    pass


class CapExceeded(SeriesError):
    """A term would leave the graded truncation (negative weight, unsound substitution)."""


class DivergentProduct(SeriesError):
    """An infinite product has a factor of weight zero, so it is not a formal series."""


class NotAPowerSeries(SeriesError):
    """The requested object carries negative powers of the series variable."""


class UnknownIdentity(SeriesError, KeyError):
    def __str__(self):
        return f"unknown identity {self.args[0]!r}" if self.args else "unknown identity"


class BadParameter(SeriesError):
    pass


class SizeTooLarge(SeriesError):
    pass


class NoStabilization(SeriesError):
    pass


class NonIntegerZ(SeriesError):
    pass


class UnboundedSum(SeriesError):
    pass
