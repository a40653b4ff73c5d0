"""Truncated univariate formal power series over the rationals.

A :class:`Series` stores the coefficients of degrees ``0..order``; everything
above ``order`` is unknown rather than zero.  Every operation returns the
largest order it can vouch for, so two series are compared only on the prefix
both of them know.

Coefficients are exact rationals.  Integral values are held as ``int`` and the
rest as :class:`fractions.Fraction`; :func:`exact` performs that normalisation
and rejects floats.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from numbers import Rational

from .errors import (
    BadLowestTerm,
    NonIntegerExponent,
    NonzeroInnerConstant,
    ZeroConstantTerm,
)


def exact(x):
    """Return ``x`` as an int if integral, else as a Fraction.  Floats are refused."""
    if type(x) is int:
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, bool):
        return int(x)
    if isinstance(x, Rational):
        return exact(Fraction(x.numerator, x.denominator))
    raise TypeError(f"coefficients must be exact rationals, got {type(x).__name__}")


def _div(a, b):
    if b == 1:
        return a
    return exact(Fraction(a) / b)


class Series:
    """Truncated power series ``c_0 + c_1 x + ... + c_K x^K + O(x^{K+1})``."""

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs=(0,), order=None):
        cs = [exact(c) for c in coeffs]
        if order is None:
            order = max(len(cs) - 1, 0)
        if order < 0:
            raise ValueError("order must be nonnegative")
        if len(cs) <= order:
            cs.extend([0] * (order + 1 - len(cs)))
        self.coeffs = tuple(cs[: order + 1])
        self.order = order

    @classmethod
    def _raw(cls, coeffs, order):
        # trusted constructor: coeffs already exact and of length order + 1
        s = cls.__new__(cls)
        s.coeffs = tuple(coeffs)
        s.order = order
        return s

    @classmethod
    def constant(cls, c, order):
        return cls([c], order)

    @classmethod
    def x(cls, order, power=1):
        if power > order:
            return cls([0], order)
        return cls([0] * power + [1], order)

    @classmethod
    def polynomial(cls, coeffs):
        """An exact polynomial; its order is its length minus one."""
        return cls(coeffs)

    # -- inspection -------------------------------------------------------

    def __getitem__(self, k):
        if isinstance(k, slice):
            return self.coeffs[k]
        if k < 0:
            return 0
        if k > self.order:
            raise IndexError(f"degree {k} is beyond the truncation order {self.order}")
        return self.coeffs[k]

    def __iter__(self):
        return iter(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def valuation(self):
        """Lowest degree with a nonzero coefficient, or None if the known part is 0."""
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return None

    def degree(self):
        """Highest degree with a nonzero coefficient (useful for exact polynomials)."""
        for k in range(self.order, -1, -1):
            if self.coeffs[k]:
                return k
        return -1

    def is_zero(self):
        return not any(self.coeffs)

    def truncate(self, order):
        order = min(order, self.order)
        return Series._raw(self.coeffs[: order + 1], order)

    def __repr__(self):
        return f"Series({list(self.coeffs)!r}, order={self.order})"

    def __str__(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if k == 0 else f"{c}*x^{k}")
        return (" + ".join(terms) or "0") + f" + O(x^{self.order + 1})"

    # -- comparison -------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Series):
            n = min(self.order, other.order) + 1
            return self.coeffs[:n] == other.coeffs[:n]
        if isinstance(other, (int, Fraction)):
            return self.coeffs[0] == other and not any(self.coeffs[1:])
        return NotImplemented

    __hash__ = None

    def first_mismatch(self, other):
        """First degree (within the common order) where the two series differ."""
        n = min(self.order, other.order) + 1
        for k in range(n):
            if self.coeffs[k] != other.coeffs[k]:
                return k
        return None

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Series):
            return other
        return Series([other], self.order)

    def __add__(self, other):
        if not isinstance(other, Series):
            if isinstance(other, (int, Fraction)):
                cs = list(self.coeffs)
                cs[0] = exact(cs[0] + other)
                return Series._raw(cs, self.order)
            return NotImplemented
        return add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return Series._raw([-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        if isinstance(other, Series):
            return add(self, -other)
        if isinstance(other, (int, Fraction)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Series):
            return mul(self, other)
        if isinstance(other, (int, Fraction)):
            other = exact(other)
            return Series._raw([exact(c * other) for c in self.coeffs], self.order)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Series):
            return mul(self, invert(other))
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division of a series by zero")
            return Series._raw([_div(c, other) for c in self.coeffs], self.order)
        return NotImplemented

    def __rtruediv__(self, other):
        return invert(self) * other

    def __pow__(self, e):
        return power(self, e)

    # -- calculus and shifts ----------------------------------------------

    def shift(self, k):
        """Multiply by x^k (k >= 0); the known order grows by k."""
        if k < 0:
            raise ValueError("use divide_by_x for negative shifts")
        return Series._raw((0,) * k + self.coeffs, self.order + k)

    def divide_by_x(self, k=1):
        """Divide by x^k; the lowest k coefficients must vanish."""
        if any(self.coeffs[:k]):
            raise BadLowestTerm(f"series is not divisible by x^{k}")
        if k > self.order:
            raise ValueError("nothing known after the division")
        return Series._raw(self.coeffs[k:], self.order - k)

    def derivative(self):
        if self.order == 0:
            return Series._raw((0,), 0)
        return Series._raw([k * self.coeffs[k] for k in range(1, self.order + 1)], self.order - 1)

    def integral(self):
        """Antiderivative with zero constant term; order grows by one."""
        cs = [0] + [_div(c, k + 1) for k, c in enumerate(self.coeffs)]
        return Series._raw(cs, self.order + 1)


# -- ring operations ------------------------------------------------------


def add(a, b):
    order = min(a.order, b.order)
    ac, bc = a.coeffs, b.coeffs
    return Series._raw([exact(ac[k] + bc[k]) for k in range(order + 1)], order)


def mul(a, b):
    """Cauchy product truncated at the smaller order."""
    order = min(a.order, b.order)
    ac, bc = a.coeffs, b.coeffs
    out = [0] * (order + 1)
    for i in range(order + 1):
        ai = ac[i]
        if not ai:
            continue
        for j in range(order + 1 - i):
            bj = bc[j]
            if bj:
                out[i + j] += ai * bj
    return Series._raw([exact(c) for c in out], order)


def invert(a):
    """Multiplicative inverse; needs a nonzero constant term."""
    a0 = a.coeffs[0]
    if not a0:
        raise ZeroConstantTerm("cannot invert a series with zero constant term")
    order = a.order
    ac = a.coeffs
    inv0 = exact(Fraction(1) / a0) if a0 not in (1, -1) else a0
    out = [inv0]
    for n in range(1, order + 1):
        s = 0
        for k in range(1, n + 1):
            ak = ac[k]
            if ak:
                s += ak * out[n - k]
        out.append(exact(-s * inv0))
    return Series._raw(out, order)


def power(a, e):
    """Integer power by repeated squaring; negative powers go through invert."""
    if not isinstance(e, int):
        raise TypeError("only integer powers are supported")
    if e < 0:
        return power(invert(a), -e)
    result = Series.constant(1, a.order)
    base = a
    while e:
        if e & 1:
            result = mul(result, base)
        e >>= 1
        if e:
            base = mul(base, base)
    return result


def substitute_power(a, k):
    """Replace x by x^k, keeping the order of ``a``."""
    if k < 1:
        raise ValueError("substitute_power needs k >= 1")
    out = [0] * (a.order + 1)
    for j in range(0, a.order // k + 1):
        out[j * k] = a.coeffs[j]
    return Series._raw(out, a.order)


def compose(outer, inner):
    """outer(inner(x)); inner must have zero constant term."""
    if inner.coeffs[0]:
        raise NonzeroInnerConstant("inner series must have zero constant term")
    order = min(outer.order, inner.order)
    inner = inner.truncate(order)
    result = Series.constant(outer.coeffs[order], order)
    for k in range(order - 1, -1, -1):
        result = mul(result, inner)
        result = result + outer.coeffs[k]
    return result


def reversion(f):
    """Compositional inverse g with f(g(x)) = x.

    Fixed-point iteration g <- (x - h(g)) / f_1 where h = f - f_1 x; each pass
    fixes one more coefficient, so pass ``d`` only needs to work to order ``d``.
    """
    if f.order < 1 or f.coeffs[0] or not f.coeffs[1]:
        raise BadLowestTerm("reversion needs f(0) = 0 and a nonzero linear term")
    order = f.order
    f1 = f.coeffs[1]
    h = Series._raw((0, 0) + f.coeffs[2:], order)
    g = Series.x(order) / f1
    for d in range(2, order + 1):
        hg = compose(h.truncate(d), g.truncate(d))
        step = (Series.x(d) - hg) / f1
        g = Series._raw(step.coeffs + g.coeffs[d + 1 :], order)
    return g


def log(a):
    """Logarithm of a series with constant term 1."""
    if a.coeffs[0] != 1:
        raise BadLowestTerm("log needs constant term 1")
    if a.order == 0:
        return Series.constant(0, 0)
    return mul(a.derivative(), invert(a.truncate(a.order - 1))).integral()


def exp(a):
    """Exponential of a series with zero constant term (g' = a' g)."""
    if a.coeffs[0]:
        raise BadLowestTerm("exp needs zero constant term")
    order = a.order
    da = [k * a.coeffs[k] for k in range(1, order + 1)]
    out = [1]
    for n in range(1, order + 1):
        s = 0
        for k in range(1, n + 1):
            if da[k - 1]:
                s += da[k - 1] * out[n - k]
        out.append(_div(s, n))
    return Series._raw(out, order)


def log_derivative_times_x(a):
    """x * d/dx log a, with the order of ``a`` preserved."""
    if not a.coeffs[0]:
        raise ZeroConstantTerm("logarithmic derivative needs a nonzero constant term")
    return mul(a.derivative().shift(1), invert(a))


def multiply_binomial(coeffs, k, c=1, e=1):
    """In place: multiply a coefficient list by (1 - c x^k)^e for integer e.

    Positive e multiplies by the binomial e times; negative e divides by it.
    """
    n = len(coeffs)
    if k >= n or not c or not e:
        return coeffs
    if k == 0:
        raise ValueError("factor of degree zero")
    if e > 0:
        for _ in range(e):
            for j in range(n - 1, k - 1, -1):
                if coeffs[j - k]:
                    coeffs[j] = exact(coeffs[j] - c * coeffs[j - k])
    else:
        for _ in range(-e):
            for j in range(k, n):
                if coeffs[j - k]:
                    coeffs[j] = exact(coeffs[j] + c * coeffs[j - k])
    return coeffs


def extract_product_exponents(f):
    """Integers c_1..c_K with f = prod_{n=1..K} (1 - x^n)^{c_n} + O(x^{K+1})."""
    if f.coeffs[0] != 1:
        raise BadLowestTerm("product exponents need constant term 1")
    residual = list(f.coeffs)
    exps = []
    for n in range(1, f.order + 1):
        c = -residual[n]
        if not isinstance(c, int):
            raise NonIntegerExponent(f"exponent of (1 - x^{n}) is {c}, not an integer")
        exps.append(c)
        multiply_binomial(residual, n, 1, -c)
    return exps


def product_from_exponents(exps, order=None):
    """Expand prod_n (1 - x^n)^{exps[n-1]} to the given order (default len(exps))."""
    if order is None:
        order = len(exps)
    cs = [1] + [0] * order
    for n, e in enumerate(exps, start=1):
        multiply_binomial(cs, n, 1, e)
    return Series._raw(cs, order)


def binomial_coefficient(alpha, j):
    """Generalised binomial coefficient alpha choose j for rational alpha."""
    alpha = exact(alpha)
    if isinstance(alpha, int) and alpha >= 0:
        return comb(alpha, j) if j <= alpha else 0
    num = Fraction(1)
    for i in range(j):
        num *= alpha - i
    return exact(num / _factorial(j))


def _factorial(j):
    out = 1
    for i in range(2, j + 1):
        out *= i
    return out


# -- symbolic infinite products ---------------------------------------------


@dataclass(frozen=True)
class Factor:
    """prod_{n>=0} (1 - c x^{offset + modulus*n})^exponent."""

    c: object
    offset: int
    modulus: int
    exponent: int = 1

    def __post_init__(self):
        object.__setattr__(self, "c", exact(self.c))
        if self.modulus < 1:
            raise ValueError("modulus must be positive")
        if self.exponent and self.c and self.offset < 1:
            raise ValueError("factor offset must be >= 1 so the product is a formal series")


@dataclass(frozen=True)
class ProductSpec:
    """A finite list of :class:`Factor` blocks, expandable to any order."""

    factors: tuple

    def __init__(self, factors):
        object.__setattr__(self, "factors", tuple(factors))

    def expand(self, order):
        num = [1] + [0] * order
        den = [1] + [0] * order
        for f in self.factors:
            if not f.exponent or not f.c:
                continue
            target = num if f.exponent > 0 else den
            k = f.offset
            while k <= order:
                multiply_binomial(target, k, f.c, abs(f.exponent))
                k += f.modulus
        numerator = Series._raw(num, order)
        if any(den[1:]):
            return mul(numerator, invert(Series._raw(den, order)))
        return numerator

    def __mul__(self, other):
        return ProductSpec(self.factors + other.factors)

    def inverse(self):
        return ProductSpec(Factor(f.c, f.offset, f.modulus, -f.exponent) for f in self.factors)
