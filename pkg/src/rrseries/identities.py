"""Registry of sum = product and polynomial identities, each checked coefficientwise."""

from dataclasses import dataclass, field
from typing import Callable, Optional

from .errors import BadParameter, UnknownIdentity
from .qfunctions import (
    INFINITY,
    Monomial,
    gauss_binom,
    gauss_poly,
    inv_qpoch,
    pochhammer,
    product_Pi,
)
from .series import Series, invert, mul, substitute_power


@dataclass(frozen=True)
class VerifyReport:
    id: str
    order: int
    status: str
    first_mismatch: Optional[tuple] = None
    coefficients: tuple = ()
    detail: str = ""

    @property
    def passed(self):
        return self.status == "pass"

    def to_dict(self):
        mm = None
        if self.first_mismatch is not None:
            deg, lhs, rhs = self.first_mismatch
            mm = {"degree": deg, "lhs": str(lhs), "rhs": str(rhs)}
        return {
            "id": self.id,
            "order": self.order,
            "status": self.status,
            "coefficients": [str(c) for c in self.coefficients],
            "first_mismatch": mm,
        }


def compare(case_id, lhs, rhs, order=None, detail=""):
    """Compare two series on their common order and build a report."""
    k = lhs.first_mismatch(rhs)
    common = min(lhs.order, rhs.order)
    if order is None:
        order = common
    if k is None:
        return VerifyReport(case_id, order, "pass", None, lhs.truncate(common).coeffs, detail)
    return VerifyReport(case_id, order, "fail", (k, lhs[k], rhs[k]), lhs.truncate(common).coeffs, detail)


def _monomial_sum(order, terms):
    """Sum of q^e * series over (e, series-builder) pairs with e <= order."""
    out = [0] * (order + 1)
    for e, build in terms:
        if e > order:
            continue
        s = build(order - e)
        for i, c in enumerate(s.coeffs):
            if c:
                out[e + i] += c
    return Series(out, order)


# -- Rogers-Ramanujan -------------------------------------------------------


def rr_sum_side(a, order):
    """sum_{n>=0} q^{n(n+a)} / (q)_n."""
    if a not in (0, 1):
        raise BadParameter("a must be 0 or 1")
    terms = []
    n = 0
    while n * (n + a) <= order:
        terms.append((n * (n + a), lambda k, n=n: inv_qpoch(n, k)))
        n += 1
    return _monomial_sum(order, terms)


def rr_product_side(a, order):
    """prod_{n>=1} 1/((1 - q^{5n-1-a})(1 - q^{5n-4+a}))."""
    if a not in (0, 1):
        raise BadParameter("a must be 0 or 1")
    return invert(product_Pi([1 + a, 4 - a], order, step=5))


def _bilateral_range(order, *exponents):
    """All m with at least one exponent(m) <= order; the exponents grow like m^2."""
    ms = []
    for sign in (1, -1):
        m = 0 if sign == 1 else -1
        while True:
            if min(f(m) for f in exponents) > order:
                break
            ms.append(m)
            m += sign
    return sorted(ms)


def rr_alternating_side(a, order, skip=()):
    """(1/(q)_inf) sum_m (q^{m(10m+1+2a)} - q^{(5m+2-a)(2m+1)}).

    ``skip`` drops the listed m values (used to show the range matters).
    """
    if a not in (0, 1):
        raise BadParameter("a must be 0 or 1")
    pos = lambda m: m * (10 * m + 1 + 2 * a)
    neg = lambda m: (5 * m + 2 - a) * (2 * m + 1)
    out = [0] * (order + 1)
    for m in _bilateral_range(order, pos, neg):
        if m in skip:
            continue
        if 0 <= pos(m) <= order:
            out[pos(m)] += 1
        if 0 <= neg(m) <= order:
            out[neg(m)] -= 1
    return mul(Series(out, order), inv_qpoch(INFINITY, order))


# -- Regimes I, III, IV -----------------------------------------------------


def _ri(a):
    def lhs(order):
        return rr_sum_side(a, order)

    def rhs(order):
        return invert(product_Pi([1 + a, 4 - a], order, step=5))

    return lhs, rhs


def _riii_1_lhs(order):
    terms = []
    n = 0
    while n * (3 * n - 1) // 2 <= order:
        terms.append((n * (3 * n - 1) // 2, lambda k, n=n: mul(inv_qpoch(n, k), invert(pochhammer(Monomial(1, 1), n, k, step=2)))))
        n += 1
    return _monomial_sum(order, terms)


def _riii_2_lhs(order):
    terms = []
    n = 0
    while 3 * n * (n + 1) // 2 <= order:
        terms.append((3 * n * (n + 1) // 2, lambda k, n=n: mul(inv_qpoch(n, k), invert(pochhammer(Monomial(1, 1), n + 1, k, step=2)))))
        n += 1
    return _monomial_sum(order, terms)


def _over_qinf(series):
    return mul(series, inv_qpoch(INFINITY, series.order))


def _riv_sum(exponent, index, start=0):
    def lhs(order):
        terms = []
        n = start
        while exponent(n) <= order:
            terms.append((exponent(n), lambda k, n=n: inv_qpoch(index(n), k)))
            n += 1
        return _monomial_sum(order, terms)

    return lhs


def _q_odd_inf(order):
    return pochhammer(Monomial(1, 1), INFINITY, order, step=2)


REGIME_CASES = {
    "RI-1": (*_ri(0), "Regime I: sum q^{n^2}/(q)_n = 1/Pi(q, q^4; q^5)"),
    "RI-2": (*_ri(1), "Regime I: sum q^{n(n+1)}/(q)_n = 1/Pi(q^2, q^3; q^5)"),
    "RIII-1": (
        _riii_1_lhs,
        lambda k: _over_qinf(product_Pi([4, 6, 10], k, step=10)),
        "Regime III: sum q^{n(3n-1)/2}/((q)_n (q;q^2)_n) = Pi(q^4,q^6,q^10;q^10)/(q)_inf",
    ),
    "RIII-2": (
        _riii_2_lhs,
        lambda k: _over_qinf(product_Pi([2, 8, 10], k, step=10)),
        "Regime III: sum q^{3n(n+1)/2}/((q)_n (q;q^2)_{n+1}) = Pi(q^2,q^8,q^10;q^10)/(q)_inf",
    ),
    "RIV-1": (
        _riv_sum(lambda n: n * (n + 1), lambda n: 2 * n + 1),
        lambda k: _over_qinf(mul(product_Pi([3, 7, 10], k, step=10), product_Pi([4, 16], k, step=20))),
        "Regime IV: sum q^{n(n+1)}/(q)_{2n+1} = Pi(q^3,q^7,q^10;q^10) Pi(q^4,q^16;q^20)/(q)_inf",
    ),
    "RIV-2": (
        _riv_sum(lambda n: n * (n + 1), lambda n: 2 * n),
        lambda k: _over_qinf(mul(product_Pi([1, 9, 10], k, step=10), product_Pi([8, 12], k, step=20))),
        "Regime IV: sum q^{n(n+1)}/(q)_{2n} = Pi(q,q^9,q^10;q^10) Pi(q^8,q^12;q^20)/(q)_inf",
    ),
    "RIV-3": (
        _riv_sum(lambda n: n * n, lambda n: 2 * n),
        lambda k: invert(mul(product_Pi([4, 16], k, step=20), _q_odd_inf(k))),
        "Regime IV: sum q^{n^2}/(q)_{2n} = 1/(Pi(q^4,q^16;q^20) (q;q^2)_inf)",
    ),
    "RIV-4": (
        _riv_sum(lambda n: n * n, lambda n: 2 * n - 1, start=1),
        lambda k: invert(mul(product_Pi([8, 12], k, step=20), _q_odd_inf(k))).shift(1).truncate(k),
        "Regime IV: sum_{n>=1} q^{n^2}/(q)_{2n-1} = q/(Pi(q^8,q^12;q^20) (q;q^2)_inf)",
    ),
}


def regime_identity(case_id, order):
    try:
        lhs, rhs, note = REGIME_CASES[case_id]
    except KeyError:
        raise UnknownIdentity(case_id) from None
    return compare(case_id, lhs(order), rhs(order), order, note)


# -- Regime II double sums --------------------------------------------------

# selector -> (n start, exponent(n, r), max r(n), index of (q)_{...}(n, r))
REGIME_II_SUMS = {
    "F1-0": (0, lambda n, r: 3 * n * (n + 1) // 2 - r, lambda n: (3 * n + 1) // 2, lambda n, r: 3 * n - 2 * r + 1),
    "F1-1": (0, lambda n, r: 3 * n * (n + 1) // 2 - r, lambda n: (3 * n) // 2, lambda n, r: 3 * n - 2 * r),
    "F2-0": (1, lambda n, r: n * (3 * n - 1) // 2 - r, lambda n: (3 * n - 1) // 2, lambda n, r: 3 * n - 2 * r - 1),
    "F2-1": (0, lambda n, r: n * (3 * n + 5) // 2 + 1 - r, lambda n: (3 * n + 1) // 2, lambda n, r: 3 * n - 2 * r + 1),
    "F3-0": (0, lambda n, r: n * (3 * n + 1) // 2 - r, lambda n: (3 * n) // 2, lambda n, r: 3 * n - 2 * r),
    "F3-1": (1, lambda n, r: n * (3 * n + 1) // 2 - r, lambda n: (3 * n - 1) // 2, lambda n, r: 3 * n - 2 * r - 1),
}


def regime_ii_terms(which, order):
    """(n, r, exponent, pochhammer index) for every term that can reach ``order``."""
    try:
        start, expo, rmax, idx = REGIME_II_SUMS[which]
    except KeyError:
        raise UnknownIdentity(which) from None
    out = []
    # the smallest exponent in row n grows like 3n^2/2, so rows past order + 2 are empty
    for n in range(start, order + 3):
        for r in range(0, rmax(n) + 1):
            e = expo(n, r)
            if e <= order:
                out.append((n, r, e, idx(n, r)))
    return out


def regimeII_sum(which, order):
    """Double sum for F_k(sigma); 1/(q)_m = 0 for negative m."""
    terms = []
    for n, r, e, m in regime_ii_terms(which, order):
        if m < 0:
            continue
        terms.append((e, lambda k, r=r, m=m: mul(inv_qpoch(r, k, step=2), inv_qpoch(m, k))))
    return _monomial_sum(order, terms)


# selector -> [(power of q, sign, Pi arguments mod 15)]
REGIME_II_PRODUCTS = {
    "F1-0": [(0, 1, [4, 11, 15]), (1, 1, [1, 14, 15])],
    "F1-1": [(0, 1, [7, 8, 15]), (1, -1, [2, 13, 15])],
    "F2-0": [(0, 1, [6, 9, 15])],
    "F2-1": [(1, 1, [3, 12, 15])],
    "F3-0": [(0, 1, [6, 9, 15])],
    "F3-1": [(1, 1, [3, 12, 15])],
}

# the same combination with a plus sign; kept so the difference stays visible
REGIME_II_PLUS_VARIANT = {"F1-1": [(0, 1, [7, 8, 15]), (1, 1, [2, 13, 15])]}


def regimeII_product(which, order, parts=None):
    if parts is None:
        try:
            parts = REGIME_II_PRODUCTS[which]
        except KeyError:
            raise UnknownIdentity(which) from None
    total = [0] * (order + 1)
    for shift, sign, args in parts:
        if shift > order:
            continue
        s = product_Pi(args, order - shift, step=15)
        for i, c in enumerate(s.coeffs):
            total[i + shift] += sign * c
    return _over_qinf(Series(total, order))


# -- finite (polynomial) identities -------------------------------------------


def _poly_add(acc, shift, poly, sign=1):
    if shift < 0:
        raise ValueError("negative power in a polynomial identity term")
    need = shift + len(poly)
    if len(acc) < need:
        acc.extend([0] * (need - len(acc)))
    for i, c in enumerate(poly):
        if c:
            acc[shift + i] += sign * c


def _as_poly(acc):
    while len(acc) > 1 and acc[-1] == 0:
        acc.pop()
    return Series(acc or [0])


def finite_poly_F(L, a):
    """F_a(L, q) = sum_n q^{n(n+a)} [L-n-a choose n]."""
    if L < 0:
        raise BadParameter("L must be >= 0")
    acc = [0]
    n = 0
    while 2 * n + a <= L:
        _poly_add(acc, n * (n + a), gauss_poly(L - n - a, n))
        n += 1
    return _as_poly(acc)


def finite_poly_B(L, a):
    """B_a(L, q) = sum_n (-1)^n q^{n(5n+1+2a)/2} [L choose floor((L-5n-a)/2)]."""
    if L < 0:
        raise BadParameter("L must be >= 0")
    acc = [0]
    bound = L // 5 + 2
    for n in range(-bound, bound + 1):
        low = (L - 5 * n - a) // 2
        if 0 <= low <= L:
            _poly_add(acc, n * (5 * n + 1 + 2 * a) // 2, gauss_poly(L, low), -1 if n % 2 else 1)
    return _as_poly(acc)


def _gauss_poly_base(n, m, k):
    """[n choose m] in base q^k as a coefficient tuple."""
    p = gauss_poly(n, m) if 0 <= m <= n else (0,)
    if k == 1:
        return p
    out = [0] * (k * (len(p) - 1) + 1)
    for i, c in enumerate(p):
        out[k * i] = c
    return tuple(out)


def _conv(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return out


def poly_720_lhs(N, extra=0, quad=lambda n: n * (3 * n + 1) // 2):
    """sum_{n,r>=0} q^{quad(n) + r} [N-2n-2r-extra choose n]_q [r+n choose r]_{q^2}."""
    acc = [0]
    n = 0
    while 3 * n + extra <= N:
        r = 0
        while 2 * n + 2 * r + n + extra <= N:
            prod = _conv(gauss_poly(N - 2 * n - 2 * r - extra, n), _gauss_poly_base(r + n, r, 2))
            _poly_add(acc, quad(n) + r, prod)
            r += 1
        n += 1
    return _as_poly(acc)


def poly_720_rhs(N, extra=0, quad=lambda l: l * (5 * l + 1), top=None):
    """sum_l (-1)^l q^{quad(l)} [top choose floor((N-5l)/2) + extra]."""
    T = N if top is None else top
    acc = [0]
    bound = N // 5 + 2
    for l in range(-bound, bound + 1):
        low = (N - 5 * l) // 2 + extra
        if 0 <= low <= T:
            _poly_add(acc, quad(l), gauss_poly(T, low), -1 if l % 2 else 1)
    return _as_poly(acc)


def poly_723_lhs(N, a=0):
    """sum_j q^{j(j+a)} [N-j choose j]."""
    acc = [0]
    j = 0
    while 2 * j <= N:
        _poly_add(acc, j * (j + a), gauss_poly(N - j, j))
        j += 1
    return _as_poly(acc)


def poly_723_rhs(N):
    """sum_l (-1)^l q^{l(5l+1)/2} [N choose floor((N-5l)/2)]."""
    acc = [0]
    bound = N // 5 + 2
    for l in range(-bound, bound + 1):
        low = (N - 5 * l) // 2
        if 0 <= low <= N:
            _poly_add(acc, l * (5 * l + 1) // 2, gauss_poly(N, low), -1 if l % 2 else 1)
    return _as_poly(acc)


def poly_724_rhs(N, top_shift=1):
    """sum_l (-1)^l q^{l(5l-3)/2} [N+top_shift choose floor((N+1-5l)/2)+1]."""
    acc = [0]
    T = N + top_shift
    bound = N // 5 + 2
    for l in range(-bound, bound + 1):
        low = (N + 1 - 5 * l) // 2 + 1
        if 0 <= low <= T:
            _poly_add(acc, l * (5 * l - 3) // 2, gauss_poly(T, low), -1 if l % 2 else 1)
    return _as_poly(acc)


POLY_FAMILIES = {
    "POLY-720": (lambda N: poly_720_lhs(N), lambda N: poly_720_rhs(N)),
    "POLY-721": (
        lambda N: poly_720_lhs(N, extra=1, quad=lambda n: 3 * n * (n + 1) // 2),
        lambda N: poly_720_rhs(N, extra=1, quad=lambda l: l * (5 * l - 3)),
    ),
    "POLY-723": (lambda N: poly_723_lhs(N, 0), poly_723_rhs),
    "POLY-724": (lambda N: poly_723_lhs(N, 1), poly_724_rhs),
    "POLY-729": (
        lambda L: _pair_poly(finite_poly_F, L),
        lambda L: _pair_poly(finite_poly_B, L),
    ),
}


def _pair_poly(builder, L):
    """Both a = 0 and a = 1 instances packed as one polynomial pair (for reporting)."""
    return builder(L, 0), builder(L, 1)


def _compare_polys(case_id, N, lhs, rhs):
    if isinstance(lhs, tuple):
        for a, (l, r) in enumerate(zip(lhs, rhs)):
            rep = _compare_polys(case_id, N, l, r)
            if not rep.passed:
                return VerifyReport(case_id, N, "fail", rep.first_mismatch, l.coeffs, f"{case_id} fails at L={N}, a={a}")
        return VerifyReport(case_id, N, "pass", None, lhs[0].coeffs)
    d = max(lhs.order, rhs.order)
    l = Series(lhs.coeffs, d)
    r = Series(rhs.coeffs, d)
    k = l.first_mismatch(r)
    if k is None:
        return VerifyReport(case_id, N, "pass", None, lhs.coeffs)
    return VerifyReport(case_id, N, "fail", (k, l[k], r[k]), lhs.coeffs, f"{case_id} fails at N={N}")


def poly_2023(N, variant):
    """Check one instance of a polynomial identity family (both sides exact)."""
    key = variant if str(variant).startswith("POLY-") else f"POLY-{str(variant).replace('7.', '7')}"
    try:
        lhs, rhs = POLY_FAMILIES[key]
    except KeyError:
        raise UnknownIdentity(variant) from None
    if N < 0:
        raise BadParameter("N must be >= 0")
    return _compare_polys(key, N, lhs(N), rhs(N))


def verify_poly_family(key, max_n):
    """Check every instance 0..max_n; report the first failure or the last instance."""
    rep = None
    for N in range(max_n + 1):
        rep = poly_2023(N, key)
        if not rep.passed:
            return VerifyReport(key, max_n, "fail", rep.first_mismatch, rep.coefficients, rep.detail)
    return VerifyReport(key, max_n, "pass", None, rep.coefficients, f"all instances 0..{max_n}")


# -- q -> 1/q duality -----------------------------------------------------


def reverse_polynomial(p):
    """q^{deg p} p(1/q): reverse the coefficient list of an exact polynomial."""
    d = p.degree()
    if d < 0:
        return Series([0])
    return Series(list(reversed(p.coeffs[: d + 1])))


DUALITY_PAIRS = {
    # (a in q^{j(j+a)}, parity of N) -> (Regime IV id, extra power of q to divide out)
    (0, 0): ("RIV-3", 0),
    (0, 1): ("RIV-1", 0),
    (1, 0): ("RIV-2", 0),
    (1, 1): ("RIV-4", 1),
}


def reverse_and_stabilize(a, parity, M):
    """Reverse sum_j q^{j(j+a)}[N-j choose j] at N = 2M + parity.

    Returns the reversed polynomial as a Series truncated at degree M, the
    range on which it agrees with its N -> infinity limit.
    """
    rev = reverse_polynomial(poly_723_lhs(2 * M + parity, a))
    return Series(rev.coeffs[: M + 1], M)


def duality_partner(a, parity, order):
    """The Regime IV sum side that the reversed polynomials converge to."""
    case_id, drop = DUALITY_PAIRS[(a, parity)]
    lhs = REGIME_CASES[case_id][0](order + drop)
    return lhs.divide_by_x(drop) if drop else lhs


# -- registry -------------------------------------------------------------


@dataclass(frozen=True)
class IdentityCase:
    id: str
    lhs: Callable
    rhs: Callable
    provenance: str
    kind: str = "series"
    params: dict = field(default_factory=dict)


def _rr_triple(a):
    def check(order):
        s = rr_sum_side(a, order)
        p = rr_product_side(a, order)
        b = rr_alternating_side(a, order)
        for lhs, rhs, tag in ((s, p, "sum=product"), (s, b, "sum=bosonic"), (p, b, "product=bosonic")):
            rep = compare(f"RR-TRIPLE-{a}", lhs, rhs, order, tag)
            if not rep.passed:
                return rep
        return compare(f"RR-TRIPLE-{a}", s, p, order, "all three members agree")

    return check


def _build_registry():
    reg = {}
    for cid, (lhs, rhs, note) in REGIME_CASES.items():
        reg[cid] = IdentityCase(cid, lhs, rhs, note)
    for which in REGIME_II_SUMS:
        cid = f"RII-{which}"
        reg[cid] = IdentityCase(
            cid,
            lambda k, w=which: regimeII_sum(w, k),
            lambda k, w=which: regimeII_product(w, k),
            f"Regime II double sum F{which[1]}({which[3]}) against its product",
        )
    for key, (lhs, rhs) in POLY_FAMILIES.items():
        reg[key] = IdentityCase(key, lhs, rhs, f"polynomial family {key}", kind="poly")
    for a in (0, 1):
        cid = f"RR-TRIPLE-{a}"
        reg[cid] = IdentityCase(cid, _rr_triple(a), None, "Rogers-Ramanujan sum = product = bosonic sum", kind="triple")
    return reg


REGISTRY = _build_registry()


def verify_identity(case_id, order):
    """Run one registry entry.  For polynomial families ``order`` bounds N (or L)."""
    try:
        case = REGISTRY[case_id]
    except KeyError:
        raise UnknownIdentity(case_id) from None
    if order < 0:
        raise BadParameter("order must be >= 0")
    if case.kind == "poly":
        return verify_poly_family(case_id, order)
    if case.kind == "triple":
        return case.lhs(order)
    return compare(case_id, case.lhs(order), case.rhs(order), order, case.provenance)
