"""Elliptic gamma function, its functional equations and the multiplication formula.

Series live in graded Laurent rings (see ``LaurentSeries``): every variable has a
positive weight and terms are kept up to a weight cap.  Variables that may carry
negative powers (z, or q in the tilde-gamma ring) are "signed"; all stored terms
still have nonnegative weight, so truncation is sound.
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import BadParameter, NonIntegerZ
from .multiseries import LaurentSeries
from .qfunctions import theta

P, Q, Z = 0, 1, 2


@dataclass(frozen=True)
class GammaReport:
    name: str
    status: str
    first_mismatch: object = None
    detail: str = ""

    @property
    def passed(self):
        return self.status == "pass"


def _report(name, lhs, rhs, detail=""):
    mm = lhs.first_mismatch(rhs)
    return GammaReport(name, "pass" if mm is None else "fail", mm, detail)


def _ring(weights, cap, signed=(False, False, True)):
    return LaurentSeries(weights=weights, cap=cap, signed=signed)


def elliptic_gamma(ring):
    """prod_{m,n>=0} (1 - p^{m+1} q^{n+1} / z) / (1 - p^m q^n z) in a (p, q, z) ring."""
    out = ring.one()
    cap = ring.cap
    wp, wq, wz = ring.weights
    for m in range(cap // wp + 1):
        for n in range(cap // wq + 1):
            num = (m + 1, n + 1, -1)
            if ring.weight_of(num) <= cap:
                out = out.mul_factor(num, 1, 1)
            den = (m, n, 1)
            if ring.weight_of(den) <= cap:
                out = out.mul_factor(den, 1, -1)
    return out


def reflection_ring(zcap, D):
    """Weights (1, 1, 1): z -> pq/z preserves weight; the cap covers |c| <= zcap, a + b <= D."""
    return _ring((1, 1, 1), D + zcap)


def reflection_check(zcap=6, D=10):
    ring = reflection_ring(zcap, D)
    g = elliptic_gamma(ring)
    reflected = g.transform([(1, 0, 0), (0, 1, 0), (1, 1, -1)])
    return _report("reflection", g * reflected, ring.one(), "Gamma(z) Gamma(pq/z) = 1")


def shift_check(which="p", zcap=5, D=9, mutate=False):
    """Gamma(bz) = theta(z; b') Gamma(z) with (b, b') = (p, q) or (q, p).

    Gamma is expanded with weight 3 on z and then mapped by z -> b z into the
    grading with weight 1 on z, which preserves every monomial's weight.
    ``mutate`` drops the n = 0 factor of theta (the check must then fail).
    """
    if which not in ("p", "q"):
        raise BadParameter("which must be 'p' or 'q'")
    W = 2 * D + 3 * zcap
    src = _ring((2, 2, 3), W)
    dst = _ring((2, 2, 1), W)
    shift = P if which == "p" else Q
    other = Q if which == "p" else P
    image_z = tuple(1 if i in (shift, Z) else 0 for i in range(3))
    shifted = elliptic_gamma(src).transform([(1, 0, 0), (0, 1, 0), image_z], weights=dst.weights)
    th = theta((0, 0, 1), other, dst)
    if mutate:
        th = th.mul_factor((0, 0, 1), 1, -1)
    rhs = th * elliptic_gamma(dst)
    return _report(f"{which}-shift", shifted, rhs, f"Gamma({which}z) = theta(z) Gamma(z)")


def p_zero_check(zcap=6, D=10):
    """Gamma(z; 0, q) (z; q)_inf = 1."""
    ring = reflection_ring(zcap, D)
    g = elliptic_gamma(ring).specialize_zero(P)
    n = 0
    while n <= ring.cap:
        g = g.mul_factor((0, n, 1), 1, 1)
        n += 1
    return _report("p=0", g, ring.one(), "Gamma(z;0,q) (z;q)_inf = 1")


# -- tilde gamma ------------------------------------------------------------


def tilde_ring(wp, cap):
    """(p, q) ring with q signed: q weight 1, p weight wp."""
    return LaurentSeries(weights=(wp, 1), cap=cap, signed=(False, True))


def _pq_theta(s, ring):
    """theta(q^s; p) = prod_k (1 - p^k q^s)(1 - p^{k+1} q^{-s})."""
    return theta((0, s), 0, ring)


def _euler(ring, var, step=1):
    """(x^step; x^step)_inf for x = p (var 0) or q (var 1)."""
    out = ring.one()
    k = 1
    while True:
        e = [0, 0]
        e[var] = k * step
        if ring.weight_of(e) > ring.cap:
            return out
        out = out.mul_factor(tuple(e), 1, 1)
        k += 1


def tilde_gamma(x, s, ring):
    """Gamma~(x; p, q^s) for rational x with s*x a positive integer.

    Gamma~(x; p, r) = (r; r)_inf / (p; p)_inf * theta(r; p)^{1-x}
                      * prod_{m,k>=0} (1 - p^{m+1} r^{k+1-x}) / (1 - p^m r^{k+x}).
    Factors whose q-power is nonpositive are kept as literal factors; the ring
    weights make them positive-weight monomials.
    """
    x = Fraction(x)
    sx = s * x
    if sx.denominator != 1:
        raise NonIntegerZ(f"r^x = q^{sx} is not an integer power of q")
    sx = int(sx)
    if sx <= 0:
        raise BadParameter("Gamma~ has a pole at x = 0 (factor 1 - q^0)")
    out = _euler(ring, 1, s)
    out = out * _euler(ring, 0).invert()
    alpha = 1 - x
    if alpha:
        out = out * _theta_power(s, alpha, ring)
    wp = ring.weights[0]
    cap = ring.cap
    for m in range(cap // wp + 1):
        k = 0
        while True:
            num = (m + 1, s * (k + 1) - sx)
            den = (m, s * k + sx)
            wn, wd = ring.weight_of(num), ring.weight_of(den)
            if wn > cap and wd > cap:
                break
            if wn <= cap:
                out = out.mul_factor(num, 1, 1)
            if wd <= cap:
                out = out.mul_factor(den, 1, -1)
            k += 1
    return out


def _theta_power(s, alpha, ring):
    """theta(q^s; p)^alpha built factor by factor with the binomial series."""
    out = ring.one()
    k = 0
    while True:
        fwd = (k, s)
        bwd = (k + 1, -s)
        wf, wb = ring.weight_of(fwd), ring.weight_of(bwd)
        if wf > ring.cap and wb > ring.cap:
            return out
        if wf <= ring.cap:
            out = out.mul_factor(fwd, 1, alpha)
        if wb <= ring.cap:
            out = out.mul_factor(bwd, 1, alpha)
        k += 1


def multiplication_ring(n, z, D):
    """p weight exceeds every negative q-power that appears, so all factors have positive weight."""
    wp = max(n * z, n + 1)
    return tilde_ring(wp, D * wp)


def multiplication_sides(n, z, D, rhs_base="r"):
    """Both sides of the multiplication formula for Gamma~ at integer z.

    LHS: Gamma~(nz; p, q) prod_{j=1}^{n-1} Gamma~(j/n; p, r), r = q^n.
    RHS: (theta(r;p)/theta(q;p))^{nz-1} Gamma~(z; p, b) prod_{j=1}^{n-1} Gamma~(z + j/n; p, r)
    with b = r (``rhs_base="r"``) or b = q (``rhs_base="q"``).
    """
    if n < 2:
        raise BadParameter("n must be >= 2")
    if z < 1 or int(z) != z:
        raise NonIntegerZ("the multiplication formula is checked at positive integer z")
    ring = multiplication_ring(n, z, D)
    lhs = tilde_gamma(n * z, 1, ring)
    for j in range(1, n):
        lhs = lhs * tilde_gamma(Fraction(j, n), n, ring)
    ratio = _pq_theta(n, ring) * _pq_theta(1, ring).invert()
    rhs = ratio ** (n * z - 1)
    rhs = rhs * (tilde_gamma(z, n, ring) if rhs_base == "r" else tilde_gamma(z, 1, ring))
    for j in range(1, n):
        rhs = rhs * tilde_gamma(z + Fraction(j, n), n, ring)
    return lhs, rhs


def multiplication_check(n, z, D=8, rhs_base="r"):
    lhs, rhs = multiplication_sides(n, z, D, rhs_base)
    base = "r" if rhs_base == "r" else "q"
    return _report(f"multiplication n={n} z={z} (Gamma~(z;p,{base}))", lhs, rhs)


def duplication_check(z, D=8):
    rep = multiplication_check(2, z, D)
    return GammaReport(f"duplication z={z}", rep.status, rep.first_mismatch)


def triplication_check(z, D=8):
    rep = multiplication_check(3, z, D)
    return GammaReport(f"triplication z={z}", rep.status, rep.first_mismatch)
