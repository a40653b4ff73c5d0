"""q-Pochhammer symbols, Gaussian binomials, Pi products and theta products."""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import DivergentProduct, NotAPowerSeries
from .multiseries import LaurentSeries
from .series import Factor, ProductSpec, Series, exact, multiply_binomial, substitute_power


@dataclass(frozen=True)
class Monomial:
    """coefficient * q^exponent."""

    coefficient: object = 1
    exponent: int = 1

    def __post_init__(self):
        object.__setattr__(self, "coefficient", exact(self.coefficient))
        if self.exponent < 0:
            raise ValueError("Monomial exponent must be nonnegative")


def q(exponent=1, coefficient=1):
    return Monomial(coefficient, exponent)


INFINITY = float("inf")


def pochhammer(a, n, order, step=1):
    """(a; q^step)_n = prod_{j<n} (1 - a q^{step*j}) truncated at ``order``.

    ``n`` may be ``INFINITY``; then ``a`` must carry a positive power of q.
    """
    if not isinstance(a, Monomial):
        a = Monomial(1, a)
    c, e = a.coefficient, a.exponent
    cs = [1] + [0] * order
    if n == INFINITY:
        if e == 0 and c:
            raise DivergentProduct("(a; q)_inf with a of degree zero does not converge")
        j = 0
        while e + step * j <= order:
            multiply_binomial(cs, e + step * j, c, 1)
            j += 1
        return Series._raw(cs, order)
    if n < 0:
        raise ValueError("finite Pochhammer needs n >= 0")
    for j in range(n):
        k = e + step * j
        if k == 0:
            cs = [exact(v * (1 - c)) for v in cs]
        elif k <= order:
            multiply_binomial(cs, k, c, 1)
    return Series._raw(cs, order)


def qpoch(n, order, step=1):
    """(q^step; q^step)_n; zero-length and negative n follow the usual conventions."""
    return pochhammer(Monomial(1, step), n, order, step)


def inv_qpoch(n, order, step=1):
    """1/(q^step; q^step)_n, with 1/(q)_n = 0 for negative n."""
    if n < 0:
        return Series.constant(0, order)
    cs = [1] + [0] * order
    if n == INFINITY:
        j = 1
        while step * j <= order:
            multiply_binomial(cs, step * j, 1, -1)
            j += 1
        return Series._raw(cs, order)
    for j in range(1, n + 1):
        multiply_binomial(cs, step * j, 1, -1)
    return Series._raw(cs, order)


@lru_cache(maxsize=None)
def gauss_poly(n, m):
    """Coefficients of [n choose m]_q for 0 <= m <= n (exact polynomial)."""
    if m < 0 or m > n:
        return (0,)
    if m == 0 or m == n:
        return (1,)
    # [n, m] = [n-1, m-1] + q^m [n-1, m]
    a = gauss_poly(n - 1, m - 1)
    b = gauss_poly(n - 1, m)
    out = [0] * (m * (n - m) + 1)
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i + m] += c
    return tuple(out)


def gauss_binom_laurent(top, m):
    """[top choose m] under the extended convention: (shift, coefficients).

    The value is q^shift * poly.  For top >= 0 it is the ordinary Gaussian
    polynomial (shift 0, and 0 when m > top).  For top < 0 and m >= 1 the
    extended product (q^{top-m+1}; q)_m / (q; q)_m equals
    (-1)^m q^{-s} [m - top - 1 choose m] with s = m(m - 2 top - 1)/2.
    """
    if m < 0:
        return 0, (0,)
    if top >= 0:
        return 0, gauss_poly(top, m)
    if m == 0:
        return 0, (1,)
    s = m * (m - 2 * top - 1) // 2
    sign = -1 if m % 2 else 1
    return -s, tuple(sign * c for c in gauss_poly(m - top - 1, m))


def gauss_binom(n, m, order=None, extended=False):
    """Gaussian binomial [n choose m]_q as a Series.

    Default convention: the polynomial for 0 <= m <= n and 0 otherwise.  With
    ``extended=True`` a negative top entry uses (q^{n-m+1}; q)_m/(q; q)_m; the
    only such values that are power series are those with m = 0.
    """
    if extended and n < 0:
        shift, poly = gauss_binom_laurent(n, m)
        if shift < 0 and any(poly):
            raise NotAPowerSeries(f"extended [{n} choose {m}] has a q^{shift} term")
    else:
        poly = gauss_poly(n, m) if 0 <= m <= n else (0,)
    if order is None:
        return Series(poly)
    return Series(poly[: order + 1], order)


def gauss_binom_qk(n, m, k, order):
    """[n choose m] in the base q^k."""
    return substitute_power(gauss_binom(n, m, order), k)


def product_Pi(args, order, step=1):
    """Pi(a_1, ..., a_r; q^step) = prod_i (a_i; q^step)_inf."""
    cs = [1] + [0] * order
    for a in args:
        if not isinstance(a, Monomial):
            a = Monomial(1, a)
        if a.exponent < 1:
            raise DivergentProduct("Pi arguments need a positive power of q")
        k = a.exponent
        while k <= order:
            multiply_binomial(cs, k, a.coefficient, 1)
            k += step
    return Series._raw(cs, order)


NAMED_PRODUCTS = {
    "G": ProductSpec([Factor(1, 1, 5, -1), Factor(1, 4, 5, -1)]),
    "H": ProductSpec([Factor(1, 2, 5, -1), Factor(1, 3, 5, -1)]),
    "P": ProductSpec([Factor(1, 1, 2, 1)]),
    "Q": ProductSpec([Factor(1, 1, 1, 1)]),
}


def expand_named(name, order):
    """Expansion of G, H, P or Q in x."""
    try:
        spec = NAMED_PRODUCTS[name]
    except KeyError:
        raise ValueError(f"unknown named product {name!r}") from None
    return spec.expand(order)


def theta(z, base, ring, c=1):
    """theta(c z; b) = prod_{n>=0} (1 - b^n c z)(1 - b^{n+1} / (c z)) in ``ring``.

    ``z`` is an exponent vector, ``base`` the index of the variable b, and
    ``ring`` any LaurentSeries fixing weights, cap and signed variables.  Returns
    the zero series when a factor is identically zero (theta vanishes at
    z = b^k), and raises DivergentProduct when a factor has weight <= 0.
    """
    z = tuple(z)
    n = ring.nvars
    unit = tuple(int(i == base) for i in range(n))
    c = exact(c)
    inv_c = exact(Fraction(1) / c)
    kmax = ring.cap + sum(abs(e) for e in z) + 2
    pairs = []
    for k in range(kmax + 1):
        fwd = tuple(k * u + e for u, e in zip(unit, z))
        bwd = tuple((k + 1) * u - e for u, e in zip(unit, z))
        for mono, coef in ((fwd, c), (bwd, inv_c)):
            if not any(mono) and coef == 1:
                return ring.zero()
            pairs.append((mono, coef))
    factors = []
    for mono, coef in pairs:
        w = ring.weight_of(mono)
        if w <= 0:
            raise DivergentProduct(f"theta factor 1 - {coef}*{mono} has weight {w}")
        if w <= ring.cap:
            factors.append((mono, coef))
    out = ring.one()
    for mono, coef in factors:
        out = out.mul_factor(mono, coef, 1)
    return out


def laurent_ring(weights, cap, signed=None):
    return LaurentSeries(weights=weights, cap=cap, signed=signed)
