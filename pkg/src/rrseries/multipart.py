"""Vector-partition products F_n and fermionic sums with their momentum windows."""

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .errors import BadParameter, NotAPowerSeries, UnboundedSum
from .identities import VerifyReport
from .multiseries import MultiSeries
from .qfunctions import INFINITY, gauss_binom_laurent, gauss_poly, inv_qpoch
from .series import Series, exact

# -- vector partitions --------------------------------------------------------


@dataclass(frozen=True)
class VecPartEnv:
    """Variables ordered (q_1, ..., q_n, a, t) under a total-degree cap."""

    n: int
    degree_cap: int

    def __post_init__(self):
        if self.n < 0 or self.degree_cap < 0:
            raise BadParameter("n and degree_cap must be nonnegative")

    @property
    def arity(self):
        return self.n + 2

    @property
    def a(self):
        return self.n

    @property
    def t(self):
        return self.n + 1


def _multi_indices(n, max_total):
    """All alpha in N^n with |alpha| <= max_total."""
    if n == 0:
        yield ()
        return
    for first in range(max_total + 1):
        for rest in _multi_indices(n - 1, max_total - first):
            yield (first,) + rest


def vecpart_F(env):
    """prod_alpha (1 - q^alpha a t) / (1 - q^alpha t), truncated at the degree cap."""
    one = MultiSeries.from_constant(1, env.arity, env.degree_cap)
    out = one
    for alpha in _multi_indices(env.n, env.degree_cap - 1):
        den = alpha + (0, 1)
        num = alpha + (1, 1)
        out = out.mul_factor(den, 1, -1)
        if sum(num) <= env.degree_cap:
            out = out.mul_factor(num, 1, 1)
    return out


def _t_shift(F, env, subset):
    """F(q_S t): t -> (prod_{i in S} q_i) t."""
    images = []
    for i in range(env.arity):
        e = [0] * env.arity
        e[i] = 1
        if i == env.t:
            for j in subset:
                e[j] = 1
        images.append(tuple(e))
    return F.transform(images)


def functional_sides(n, degree_cap):
    """(alternating product over subsets of {q_1..q_n}, (1 - at)/(1 - t))."""
    env = VecPartEnv(n, degree_cap)
    F = vecpart_F(env)
    num = MultiSeries.from_constant(1, env.arity, degree_cap)
    den = MultiSeries.from_constant(1, env.arity, degree_cap)
    for size in range(n + 1):
        for subset in itertools.combinations(range(n), size):
            term = _t_shift(F, env, subset)
            if size % 2:
                den = den * term
            else:
                num = num * term
    lhs = num * den.invert()
    at = tuple(int(i in (env.a, env.t)) for i in range(env.arity))
    t = tuple(int(i == env.t) for i in range(env.arity))
    rhs = MultiSeries.from_constant(1, env.arity, degree_cap).mul_factor(at, 1, 1).mul_factor(t, 1, -1)
    return lhs, rhs


def vecpart_functional_check(n, degree_cap):
    lhs, rhs = functional_sides(n, degree_cap)
    mm = lhs.first_mismatch(rhs)
    if mm is None:
        return VerifyReport(f"VP-{n}", degree_cap, "pass")
    exps, l, r = mm
    return VerifyReport(f"VP-{n}", degree_cap, "fail", (sum(exps), l, r), detail=f"first mismatch at {exps}")


def vecpart_coefficients(env, k):
    """Coefficient of t^k as a series in (q_1, ..., q_n, a), exact to cap - k."""
    if k < 0 or k > env.degree_cap:
        raise BadParameter("k must lie in 0..degree_cap")
    return vecpart_F(env).slice(env.t, k)


def drop_last_q(F, env):
    """Set q_n = 0 and remove the variable: F_n -> F_{n-1}."""
    if env.n < 1:
        raise BadParameter("needs n >= 1")
    return MultiSeries._from_laurent(F.specialize_zero(env.n - 1).drop_var(env.n - 1))


# -- fermionic sums -----------------------------------------------------------


@dataclass(frozen=True)
class FermionicData:
    """Quadratic-form data (B, A, u) for sum_m q^{mBm/2 - Am/2} prod [((1-B)m + u/2)_i choose m_i]."""

    B: tuple
    A: tuple
    u: tuple
    restriction: Optional[Callable] = field(default=None, compare=False)

    def __post_init__(self):
        B = tuple(tuple(exact(x) for x in row) for row in self.B)
        n = len(B)
        if any(len(row) != n for row in B) or len(self.A) != n or len(self.u) != n:
            raise BadParameter("B must be n x n and A, u must have length n")
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "A", tuple(exact(x) for x in self.A))
        object.__setattr__(self, "u", tuple(x if x == INFINITY else exact(x) for x in self.u))

    @property
    def nspecies(self):
        return len(self.B)

    def allows(self, m):
        return self.restriction is None or self.restriction(m)

    def exponent(self, m):
        n = self.nspecies
        quad = sum(m[i] * self.B[i][j] * m[j] for i in range(n) for j in range(n))
        e = Fraction(quad, 2) - Fraction(sum(a * x for a, x in zip(self.A, m)), 2)
        if e.denominator != 1:
            raise BadParameter(f"mBm/2 - Am/2 = {e} is not an integer at m = {m}")
        return int(e)

    def top(self, m, i):
        """((1 - B) m + u/2)_i, or None when u_i is infinite."""
        if self.u[i] == INFINITY:
            return None
        v = m[i] - sum(self.B[i][j] * m[j] for j in range(self.nspecies)) + Fraction(self.u[i], 2)
        if Fraction(v).denominator != 1:
            raise BadParameter(f"binomial top entry {v} is not an integer at m = {m}")
        return int(v)


def rr_fermionic_data(a, L=None):
    """B = 2, A = -2a, u = 2(L - a) (or infinity): the Rogers-Ramanujan data."""
    u = INFINITY if L is None else 2 * (L - a)
    return FermionicData(((2,),), (-2 * a,), (u,))


def _m_bounds(data, order):
    """Per-species bound on m from the quadratic form, or None when none is derivable."""
    n = data.nspecies
    B = data.B
    lam = []
    for i in range(n):
        off = sum(abs(B[i][j]) for j in range(n) if j != i)
        if B[i][i] - off <= 0:
            return None
        lam.append(B[i][i] - off)

    def one(i, x):
        return Fraction(lam[i] * x * x, 2) - Fraction(data.A[i] * x, 2)

    # smallest value each separable term can take over x >= 0
    floors = []
    for i in range(n):
        best = 0
        x = 0
        while True:
            v = one(i, x)
            best = min(best, v)
            if x > 0 and v > 0 and v > one(i, x - 1):
                break
            x += 1
        floors.append(best)
    bounds = []
    for i in range(n):
        rest = sum(floors) - floors[i]
        x = 0
        while not (one(i, x + 1) + rest > order and one(i, x + 1) > one(i, x)):
            x += 1
        bounds.append(x)
    return bounds


def fermionic_sum(data, order, m_bound=None, extended=False):
    """Truncated sum over admissible m.

    Binomials follow the ordinary convention (0 unless 0 <= m <= top); with
    ``extended`` a negative top uses (q^{top-m+1}; q)_m / (q; q)_m.  For u = inf
    the binomial is replaced by its limit 1/(q)_m.  The m-range comes from the
    quadratic form when B is strictly diagonally dominant, or from ``m_bound``.
    """
    n = data.nspecies
    if extended and m_bound is None:
        raise UnboundedSum("the extended binomial needs an explicit m_bound")
    if extended and INFINITY in data.u:
        raise BadParameter("the extended binomial needs every u_i finite")
    bounds = [m_bound] * n if m_bound is not None else _m_bounds(data, order)
    if bounds is None:
        raise UnboundedSum("no termination bound derivable from B; pass m_bound")
    acc = {}
    for m in itertools.product(*(range(b + 1) for b in bounds)):
        if not data.allows(m):
            continue
        e = data.exponent(m)
        term = {0: 1}
        for i in range(n):
            top = data.top(m, i)
            if top is None:
                s = inv_qpoch(m[i], max(order - e, 0))
                factor = dict(enumerate(s.coeffs))
            elif extended:
                shift, poly = gauss_binom_laurent(top, m[i])
                factor = {shift + k: c for k, c in enumerate(poly) if c}
            else:
                factor = {k: c for k, c in enumerate(gauss_poly(top, m[i])) if c} if 0 <= m[i] <= top else {}
            term = _laurent_mul(term, factor, order - e)
            if not term:
                break
        for k, c in term.items():
            if k + e <= order:
                acc[k + e] = acc.get(k + e, 0) + c
    acc = {k: c for k, c in acc.items() if c}
    if acc and min(acc) < 0:
        raise NotAPowerSeries(f"the sum has a q^{min(acc)} term")
    return Series([acc.get(k, 0) for k in range(order + 1)], order)


def _laurent_mul(a, b, limit):
    """Product of sparse Laurent polynomials; terms above ``limit`` are dropped
    only when neither factor has negative powers."""
    cut = (min(a, default=0) >= 0) and (min(b, default=0) >= 0)
    out = {}
    for i, x in a.items():
        for j, y in b.items():
            if cut and i + j > limit:
                continue
            out[i + j] = out.get(i + j, 0) + x * y
    return {k: v for k, v in out.items() if v}


# -- momentum windows -------------------------------------------------------


@dataclass(frozen=True)
class MomentumWindow:
    """Per species: P_min, P_max in units of pi/M; momenta step by 2 units (2 pi / M)."""

    M: int
    p_min: tuple
    p_max: tuple

    def slots(self, i):
        span = self.p_max[i] - self.p_min[i]
        if span < 0:
            return 0
        if Fraction(span, 2).denominator != 1:
            raise BadParameter("window width is not a multiple of 2 pi / M")
        return int(span) // 2 + 1

    def momenta(self, i):
        return [self.p_min[i] + 2 * k for k in range(self.slots(i))]


def momentum_window(data, m, M=1):
    """P_min = ((B-1)m)_i - A_i + 1 and P_max = -P_min + 2 (u/2 - A)_i, in units of pi/M."""
    n = data.nspecies
    pmin, pmax = [], []
    for i in range(n):
        if data.u[i] == INFINITY:
            raise BadParameter("the window is unbounded for u = inf")
        bm = sum(data.B[i][j] * m[j] for j in range(n)) - m[i]
        lo = exact(bm - data.A[i] + 1)
        pmin.append(lo)
        pmax.append(exact(-lo + 2 * (Fraction(data.u[i], 2) - data.A[i])))
    return MomentumWindow(M, tuple(pmin), tuple(pmax))


def momentum_generating_function(data, m):
    """sum over distinct momenta per species of q^{(total momentum)/2}, by brute force."""
    win = momentum_window(data, m)
    per_species = []
    for i in range(data.nspecies):
        counts = {}
        for pick in itertools.combinations(win.momenta(i), m[i]):
            e = Fraction(sum(pick), 2)
            counts[e] = counts.get(e, 0) + 1
        per_species.append(counts)
    total = {0: 1}
    for counts in per_species:
        nxt = {}
        for i, x in total.items():
            for j, y in counts.items():
                nxt[i + j] = nxt.get(i + j, 0) + x * y
        total = nxt
    if any(Fraction(k).denominator != 1 for k in total):
        raise BadParameter("total momentum is not an even multiple of pi/M")
    return {int(k): v for k, v in total.items() if v}


def momentum_formula(data, m):
    """q^{mBm/2 - Am/2} prod [slots_i choose m_i] as a sparse dict."""
    win = momentum_window(data, m)
    e = data.exponent(m)
    total = {e: 1}
    for i in range(data.nspecies):
        poly = gauss_poly(win.slots(i), m[i]) if 0 <= m[i] <= win.slots(i) else (0,)
        nxt = {}
        for a_, x in total.items():
            for k, y in enumerate(poly):
                if y:
                    nxt[a_ + k] = nxt.get(a_ + k, 0) + x * y
        total = nxt
    return {k: v for k, v in total.items() if v}
