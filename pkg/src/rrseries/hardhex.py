"""Hard-hexagon lattice gas: exact torus enumeration and the parametric solution series."""

from dataclasses import dataclass
from decimal import Decimal, getcontext
from fractions import Fraction

import numpy as np

from .errors import NoStabilization, SizeTooLarge
from .qfunctions import NAMED_PRODUCTS
from .series import (
    Factor,
    ProductSpec,
    Series,
    compose,
    extract_product_exponents,
    invert,
    log,
    exp,
    log_derivative_times_x,
    mul,
    reversion,
    substitute_power,
)

BRUTE_FORCE_MAX_SITES = 24


@dataclass(frozen=True)
class TriangularTorus:
    rows: int
    cols: int

    def __post_init__(self):
        if self.rows < 4 or self.cols < 4:
            raise ValueError("torus dimensions must be >= 4")

    @property
    def N(self):
        return self.rows * self.cols

    def site(self, i, j):
        return (i % self.rows) + self.rows * (j % self.cols)

    def neighbors(self, i, j):
        steps = ((1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1))
        return [self.site(i + di, j + dj) for di, dj in steps]

    def adjacency_masks(self):
        masks = [0] * self.N
        for j in range(self.cols):
            for i in range(self.rows):
                for nb in self.neighbors(i, j):
                    masks[self.site(i, j)] |= 1 << nb
        return masks


@dataclass(frozen=True)
class OccupancyCounts:
    g: tuple
    N: int

    def __getitem__(self, n):
        return self.g[n] if 0 <= n < len(self.g) else 0


def brute_force_counts(t):
    """Enumerate every independent set site by site (oracle for small tori)."""
    if t.N > BRUTE_FORCE_MAX_SITES:
        raise SizeTooLarge(f"brute force limited to {BRUTE_FORCE_MAX_SITES} sites")
    masks = t.adjacency_masks()
    counts = [0] * (t.N // 3 + 2)

    def walk(i, blocked, n):
        if i == t.N:
            counts[n] += 1
            return
        walk(i + 1, blocked, n)
        if not blocked >> i & 1:
            walk(i + 1, blocked | masks[i], n + 1)

    walk(0, 0, 0)
    while len(counts) > 1 and counts[-1] == 0:
        counts.pop()
    return OccupancyCounts(tuple(counts), t.N)


def column_profiles(rows):
    """Occupation patterns of one column: no two cyclically adjacent bits."""
    mask = (1 << rows) - 1
    return [s for s in range(1 << rows) if not s & (((s << 1) | (s >> (rows - 1))) & mask)]


def _transfer(rows):
    profiles = column_profiles(rows)
    mask = (1 << rows) - 1

    def rotl(b):
        return ((b << 1) | (b >> (rows - 1))) & mask

    T = np.array([[int(not a & b and not a & rotl(b)) for b in profiles] for a in profiles], dtype=np.int64)
    pops = [bin(s).count("1") for s in profiles]
    return profiles, T, pops


def _transfer_counts(rows, cols, degree):
    """Coefficients of trace(T(z)^cols) up to z^degree, T(z)[a, b] = [a ~ b] z^{|b|}."""
    profiles, T, pops = _transfer(rows)
    P = len(profiles)
    D = degree + 1
    # entries count placements of at most ``degree`` particles, so C(N, d) <= N^d bounds them
    safe = min(P**cols, (rows * cols) ** degree) < 2**62
    dtype = np.int64 if safe else object
    T = T.astype(dtype)
    # state[s0, b, d]: paths from the first profile s0 to b using d particles
    state = np.zeros((P, P, D), dtype=dtype)
    for k, p in enumerate(pops):
        if p < D:
            state[k, k, p] = 1
    for _ in range(cols - 1):
        moved = np.einsum("sad,ab->sbd", state, T) if safe else _einsum_object(state, T)
        state = np.zeros_like(moved)
        for b, p in enumerate(pops):
            if p < D:
                state[:, b, p:] = moved[:, b, : D - p]
    total = [0] * D
    for s0 in range(P):
        for b in range(P):
            if T[b, s0]:
                for d in range(D):
                    total[d] += int(state[s0, b, d])
    return total


def _einsum_object(state, T):
    P = T.shape[0]
    out = np.zeros_like(state)
    for a in range(P):
        for b in range(P):
            if T[a, b]:
                out[:, b, :] += state[:, a, :]
    return out


def count_configs(t, method="dp", max_rows=6, max_cols=16, degree=None):
    """g[n] = number of ways to place n mutually non-adjacent particles on ``t``.

    ``degree`` truncates the count list (useful for series work on large tori).
    """
    if method == "brute":
        return brute_force_counts(t)
    rows, cols = sorted((t.rows, t.cols))
    if rows > max_rows or cols > max_cols:
        raise SizeTooLarge(f"{t.rows}x{t.cols} exceeds the DP bound {max_rows}x{max_cols}")
    full = t.N // 3
    g = _transfer_counts(rows, cols, full if degree is None else min(degree, full))
    if degree is not None and degree > full:
        g = g + [0] * (degree - full)
    while degree is None and len(g) > 1 and g[-1] == 0:
        g.pop()
    return OccupancyCounts(tuple(g), t.N)


def grand_partition(t, order=None, **kw):
    """Z(z) = sum_n g[n] z^n; exact polynomial unless ``order`` truncates it."""
    if order is None:
        return Series(count_configs(t, **kw).g)
    g = count_configs(t, degree=order, **kw).g
    return Series(list(g[: order + 1]) + [0] * (order + 1 - len(g)), order)


def free_energy_series(s, order):
    """(1/N) log Z on the s x s torus, truncated at z^order."""
    t = TriangularTorus(s, s)
    Z = grand_partition(t, order, max_rows=s, max_cols=s)
    return log(Z) / t.N


def free_energy_lowz(order, max_size=12, start=4):
    """Per-site log Z, each z^k coefficient taken once it is stable across sizes.

    The coefficient of z^k is exact on an s x s torus when s > k + 1, because no
    connected cluster of k particles can wrap around the torus.  A value is
    accepted when it agrees on two successive sizes that are both past that bound.
    """
    fixed = [0] * (order + 1)
    prev = None
    done = 0
    for s in range(start, max_size + 1):
        cur = free_energy_series(s, order)
        if prev is not None:
            while done <= order and s - 1 > done + 1 and prev[done] == cur[done]:
                fixed[done] = cur[done]
                done += 1
        if done > order:
            return Series(fixed, order)
        prev = cur
    raise NoStabilization(f"coefficients up to z^{order} did not stabilize by size {max_size}")


def kappa_series_lowz(order, max_size=12):
    """kappa(z) = lim Z^{1/N} from torus enumeration."""
    return exp(free_energy_lowz(order, max_size))


def density_lowz_enum(order, max_size=12):
    """rho(z) = z d/dz (log Z)/N from torus enumeration."""
    f = free_energy_lowz(order, max_size)
    return f.derivative().shift(1).truncate(order)


# -- exact trace by modular evaluation (oracle for large tori) ---------------


def _small_primes(count, bits=20):
    out = []
    p = (1 << bits) - 1
    while len(out) < count:
        if all(p % d for d in range(2, int(p**0.5) + 1)):
            out.append(p)
        p -= 2
    return out


def _interpolate_mod(values, p):
    """Monomial coefficients of the polynomial through (k, values[k]) mod p."""
    n = len(values)
    c = list(values)
    for j in range(1, n):
        inv = pow(j, -1, p)
        for i in range(n - 1, j - 1, -1):
            c[i] = (c[i] - c[i - 1]) * inv % p
    poly = [0] * n
    for i in range(n - 1, -1, -1):
        poly = [((poly[k - 1] if k else 0) - i * poly[k] + (c[i] if k == 0 else 0)) % p for k in range(n)]
    return poly


def trace_counts(rows, cols):
    """Full g[n] list from trace(T(z)^cols), evaluated at integer z modulo primes.

    Entries stay below 2^20 so float64 matrix products are exact; the counts are
    recovered by interpolation and the Chinese remainder theorem.
    """
    profiles, T, pops = _transfer(rows)
    P = len(profiles)
    D = rows * cols // 3
    bound = P**cols
    primes = []
    M = 1
    for p in _small_primes(64):
        if M > 2 * bound:
            break
        primes.append(p)
        M *= p
    residues = []
    Tf = T.astype(np.float64)
    for p in primes:
        vals = []
        for z in range(D + 1):
            scale = np.array([pow(z, k, p) for k in pops], dtype=np.float64)
            A = np.mod(Tf * scale[None, :], p)
            R = np.eye(P)
            e = cols
            while e:
                if e & 1:
                    R = np.mod(R @ A, p)
                A = np.mod(A @ A, p)
                e >>= 1
            vals.append(int(np.trace(R)) % p)
        residues.append(_interpolate_mod(vals, p))
    g = []
    for k in range(D + 1):
        x = 0
        for p, poly in zip(primes, residues):
            Mi = M // p
            x += poly[k] * Mi * pow(Mi, -1, p)
        g.append(x % M)
    return g


def total_density_highz_enum(rows, cols, order):
    """rho_1 + 2 rho_2 in w = 1/z from the top of Z on a torus with sides divisible by 3.

    The torus has three close-packed states, so Z = 3 z^{N/3} exp(N f(w)) up to
    wrap-around terms, and rho_1 + 2 rho_2 = 1 - 3 w f'(w).
    """
    if rows % 3 or cols % 3:
        raise ValueError("torus sides must be multiples of 3")
    g = trace_counts(rows, cols)
    N = rows * cols
    top = [Fraction(g[N // 3 - k], 3) for k in range(order + 1)]
    f = log(Series(top, order)) / N
    return 1 - f.derivative().shift(1).truncate(order) * 3


# -- parametric solution ------------------------------------------------------


def _spec(*blocks):
    return ProductSpec([Factor(1, a, m, e) for a, m, e in blocks])


G_SPEC = NAMED_PRODUCTS["G"]
H_SPEC = NAMED_PRODUCTS["H"]
Q_SPEC = NAMED_PRODUCTS["Q"]
P_SPEC = NAMED_PRODUCTS["P"]

# (H/G)^5
HG5 = _spec((2, 5, -5), (3, 5, -5), (1, 5, 5), (4, 5, 5))
# H^3 Q(x^5)^2 / G^2 times the mod-6 product
KAPPA_LOW = _spec(
    (2, 5, -3), (3, 5, -3), (1, 5, 2), (4, 5, 2), (5, 5, 2),
    (2, 6, 1), (3, 6, 2), (4, 6, 1), (1, 6, -1), (5, 6, -1), (6, 6, -2),
)
# G(x) H(x^6) P(x^3) / P(x)
RHO_LOW = _spec((1, 5, -1), (4, 5, -1), (12, 30, -1), (18, 30, -1), (3, 6, 1), (1, 2, -1))
# G^3 Q(x^5)^2 / H^2 times the mod-3 product
KAPPA_HIGH = _spec(
    (1, 5, -3), (4, 5, -3), (2, 5, 2), (3, 5, 2), (5, 5, 2),
    (1, 3, 1), (2, 3, 1), (3, 3, -2),
)


def z_of_x(order):
    """z = -x (H/G)^5."""
    return -(HG5.expand(order).shift(1).truncate(order))


@dataclass(frozen=True)
class LowZSolution:
    z_of_x: Series
    kappa_of_x: Series
    rho_of_x: Series
    x_of_z: Series
    kappa_of_z: Series
    rho_of_z: Series


def solution_lowz(order):
    zx = z_of_x(order)
    kx = KAPPA_LOW.expand(order)
    rx = -(RHO_LOW.expand(order).shift(1).truncate(order))
    xz = reversion(zx)
    return LowZSolution(zx, kx, rx, xz, compose(kx, xz), compose(rx, xz))


def z_product_exponents(order=29):
    """c_1..c_order with -z(x)/x = prod (1 - x^n)^{c_n}."""
    return extract_product_exponents(-(z_of_x(order + 1).divide_by_x()))


@dataclass(frozen=True)
class HighZSolution:
    w_of_x: Series
    x_of_w: Series
    rho1: Series
    rho2: Series
    R: Series
    w_kappa_cubed: Series


def _q_at(k, order):
    return substitute_power(Q_SPEC.expand(order), k)


def solution_highz(order):
    """Series in w = 1/z for the phase with type-1 sites preferred.

    kappa itself behaves like w^{-1/3}; the returned ``w_kappa_cubed`` is
    w * kappa^3, a power series with constant term 1.
    """
    G = G_SPEC.expand(order)
    H = H_SPEC.expand(order)
    Q = Q_SPEC.expand(order)
    H9 = substitute_power(H, 9)
    Q9 = _q_at(9, order)
    Q3sq_inv = invert(mul(_q_at(3, order), _q_at(3, order)))
    tail = mul(H9, Q9).shift(2).truncate(order)
    HQ = mul(H, Q)
    rho1_x = mul(mul(HQ, mul(G, Q) + tail), Q3sq_inv)
    rho2_x = mul(mul(HQ, tail), Q3sq_inv)
    wx = HG5.expand(order).shift(1).truncate(order)
    xw = reversion(wx)
    # w kappa^3 = (w / x) K(x)^3 = (H/G)^5 K^3
    K = KAPPA_HIGH.expand(order)
    wk3_x = mul(HG5.expand(order), mul(K, mul(K, K)))
    r1 = compose(rho1_x, xw)
    r2 = compose(rho2_x, xw)
    return HighZSolution(wx, xw, r1, r2, r1 - r2, compose(wk3_x, xw))


def R_direct_x(order):
    """Q(x) Q(x^5) / Q(x^3)^2 as a series in x."""
    Q3 = _q_at(3, order)
    return mul(mul(Q_SPEC.expand(order), _q_at(5, order)), invert(mul(Q3, Q3)))


def R_from_rho_x(order):
    """rho_1 - rho_2 in x, which reduces to H G Q^2 / Q(x^3)^2."""
    G = G_SPEC.expand(order)
    H = H_SPEC.expand(order)
    Q = Q_SPEC.expand(order)
    Q3 = _q_at(3, order)
    return mul(mul(mul(G, H), mul(Q, Q)), invert(mul(Q3, Q3)))


def highz_density_check(order):
    """(rho_1 + 2 rho_2)/3 against -(1/3) w d/dw log kappa^3 with kappa^3 = S/w.

    Returns the two sides of rho_1 + 2 rho_2 = 1 - w S'/S.
    """
    sol = solution_highz(order)
    lhs = sol.rho1 + sol.rho2 * 2
    rhs = 1 - log_derivative_times_x(sol.w_kappa_cubed)
    return lhs, rhs


# -- quoted density series ---------------------------------------------------

QUOTED_DENSITIES = {
    "low activity, -58 variant": (0, 1, -7, -58, -519, 4856),
    "low activity, +58 variant": (0, 1, -7, 58, -519, 4856),
    "rho_2 at high activity, +9 variant": (0, 0, 1, 9, 80, 965),
    "rho_2 at high activity, -9 variant": (0, 0, 1, -9, 80, 965),
    "rho_1 at high activity": (1, -1, -5, -34, -267, -2037),
}


def density_report(order=8):
    """Compare each quoted density series against the computed one."""
    low = solution_lowz(order).rho_of_z
    high = solution_highz(order)
    targets = {
        "low activity, -58 variant": low,
        "low activity, +58 variant": low,
        "rho_2 at high activity, +9 variant": high.rho2,
        "rho_2 at high activity, -9 variant": high.rho2,
        "rho_1 at high activity": high.rho1,
    }
    out = {}
    for name, quoted in QUOTED_DENSITIES.items():
        computed = targets[name]
        k = Series(quoted).first_mismatch(computed.truncate(len(quoted) - 1))
        out[name] = {
            "quoted": quoted,
            "computed": tuple(computed.coeffs[: len(quoted)]),
            "matches": k is None,
            "first_mismatch": k,
        }
    return out


# -- critical activity --------------------------------------------------------


@dataclass(frozen=True)
class QSqrt5:
    """a + b sqrt(5) with rational a, b."""

    a: Fraction
    b: Fraction = Fraction(0)

    def __add__(self, o):
        return QSqrt5(self.a + o.a, self.b + o.b)

    def __sub__(self, o):
        return QSqrt5(self.a - o.a, self.b - o.b)

    def __mul__(self, o):
        return QSqrt5(self.a * o.a + 5 * self.b * o.b, self.a * o.b + self.b * o.a)

    def __pow__(self, n):
        out = QSqrt5(Fraction(1))
        for _ in range(n):
            out = out * self
        return out

    def is_zero(self):
        return self.a == 0 and self.b == 0

    def decimal(self, places):
        getcontext().prec = places + 20
        v = Decimal(self.a.numerator) / Decimal(self.a.denominator) + Decimal(self.b.numerator) / Decimal(self.b.denominator) * Decimal(5).sqrt()
        return v.quantize(Decimal(1).scaleb(-places), rounding="ROUND_HALF_EVEN")


PHI = QSqrt5(Fraction(1, 2), Fraction(1, 2))
Z_CRITICAL = QSqrt5(Fraction(11, 2), Fraction(5, 2))


def critical_activity(places=5):
    return {
        "phi^5 - z_c": PHI**5 - Z_CRITICAL,
        "phi^2 - phi - 1": PHI**2 - PHI - QSqrt5(Fraction(1)),
        "phi^5 equals z_c": (PHI**5 - Z_CRITICAL).is_zero(),
        "golden relation": (PHI**2 - PHI - QSqrt5(Fraction(1))).is_zero(),
        "decimal": str(Z_CRITICAL.decimal(places)),
    }
