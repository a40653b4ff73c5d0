"""Sparse multivariate series under a weighted-degree truncation.

:class:`LaurentSeries` holds monomials ``x_1^{e_1} ... x_n^{e_n}`` whose
exponents may be negative in variables flagged ``signed``.  Each variable has
a positive integer weight and only monomials of total weight ``<= cap`` are
kept.  Every stored monomial must have weight >= 0; with that invariant the
monomials of weight ``> cap`` form an ideal, so truncated products are exact
through ``cap``.  This is what lets the elliptic gamma function (which has
negative powers of its argument) live in an honest truncated ring.

:class:`MultiSeries` is the special case with unit weights and nonnegative
exponents: ordinary total-degree truncation.

Monomials are packed into Python ints so that multiplying monomials is integer
addition.  The top digit of the packed key carries the weight.
"""

from fractions import Fraction

from .errors import ArityMismatch, CapExceeded, ZeroConstantTerm
from .series import binomial_coefficient, exact

_SHIFT = 21
_BIAS = 1 << 20
_MASK = (1 << _SHIFT) - 1


class _Packer:
    __slots__ = ("n", "weights", "off", "unit")

    def __init__(self, weights):
        self.n = len(weights)
        self.weights = tuple(weights)
        self.off = self.encode((0,) * self.n)
        self.unit = [self.encode(tuple(int(i == j) for j in range(self.n))) - self.off for i in range(self.n)]

    def encode(self, e):
        key = 0
        w = 0
        for i, (ei, wi) in enumerate(zip(e, self.weights)):
            key |= (ei + _BIAS) << (_SHIFT * i)
            w += ei * wi
        return key | ((w + _BIAS) << (_SHIFT * self.n))

    def delta(self, e):
        return self.encode(e) - self.off

    def decode(self, key):
        return tuple(((key >> (_SHIFT * i)) & _MASK) - _BIAS for i in range(self.n))

    def weight(self, key):
        return (key >> (_SHIFT * self.n)) - _BIAS


_PACKERS = {}


def _packer(weights):
    p = _PACKERS.get(weights)
    if p is None:
        p = _PACKERS[weights] = _Packer(weights)
    return p


class LaurentSeries:
    """Weighted-truncated multivariate Laurent series with exact coefficients."""

    __slots__ = ("nvars", "weights", "signed", "cap", "_t", "_pk")

    def __init__(self, terms=None, *, weights, cap, signed=None):
        weights = tuple(int(w) for w in weights)
        if any(w < 1 for w in weights):
            raise ValueError("variable weights must be positive integers")
        self.nvars = len(weights)
        self.weights = weights
        self.signed = tuple(bool(s) for s in signed) if signed is not None else (False,) * self.nvars
        if len(self.signed) != self.nvars:
            raise ArityMismatch("signed flags must match the number of variables")
        self.cap = cap
        self._pk = _packer(weights)
        self._t = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != self.nvars:
                raise ArityMismatch(f"exponent {e} has the wrong length for {self.nvars} variables")
            c = exact(c)
            if not c:
                continue
            self._check_exponents(e)
            key = self._pk.encode(e)
            w = self._pk.weight(key)
            if w < 0:
                raise CapExceeded(f"monomial {e} has negative weight {w}")
            if w <= cap:
                self._t[key] = exact(self._t.get(key, 0) + c)
                if not self._t[key]:
                    del self._t[key]

    def _check_exponents(self, e):
        for ei, s in zip(e, self.signed):
            if ei < 0 and not s:
                raise CapExceeded(f"negative exponent in an unsigned variable: {e}")

    def _like(self, table, cap=None):
        out = object.__new__(type(self))
        out.nvars = self.nvars
        out.weights = self.weights
        out.signed = self.signed
        out.cap = self.cap if cap is None else cap
        out._pk = self._pk
        out._t = table
        return out

    # -- constructors -----------------------------------------------------

    def constant(self, c):
        c = exact(c)
        return self._like({self._pk.off: c} if c else {})

    def one(self):
        return self.constant(1)

    def zero(self):
        return self._like({})

    def monomial(self, exps, c=1):
        key = self._pk.encode(tuple(exps))
        self._check_exponents(tuple(exps))
        w = self._pk.weight(key)
        if w < 0:
            raise CapExceeded(f"monomial {tuple(exps)} has negative weight")
        c = exact(c)
        return self._like({key: c} if (c and w <= self.cap) else {})

    # -- inspection -------------------------------------------------------

    @property
    def terms(self):
        return {self._pk.decode(k): c for k, c in self._t.items()}

    def items(self):
        """(exponents, coefficient) pairs sorted by weight, then exponents."""
        pk = self._pk
        return sorted(((pk.decode(k), c) for k, c in self._t.items()), key=lambda t: (self.weight_of(t[0]), t[0]))

    def weight_of(self, e):
        return sum(ei * wi for ei, wi in zip(e, self.weights))

    def coefficient(self, exps):
        return self._t.get(self._pk.encode(tuple(exps)), 0)

    def constant_term(self):
        return self._t.get(self._pk.off, 0)

    def __len__(self):
        return len(self._t)

    def is_zero(self):
        return not self._t

    def __repr__(self):
        shown = ", ".join(f"{e}: {c}" for e, c in self.items()[:8])
        more = " ..." if len(self._t) > 8 else ""
        return f"{type(self).__name__}({{{shown}{more}}}, weights={self.weights}, cap={self.cap})"

    # -- comparison -------------------------------------------------------

    def _compatible(self, other):
        if not isinstance(other, LaurentSeries):
            return False
        if other.nvars != self.nvars or other.weights != self.weights:
            raise ArityMismatch("series live in different rings")
        return True

    def _restricted(self, cap):
        if cap >= self.cap:
            return self._t
        pk = self._pk
        return {k: c for k, c in self._t.items() if pk.weight(k) <= cap}

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.constant(other)
        if not self._compatible(other):
            return NotImplemented
        cap = min(self.cap, other.cap)
        return self._restricted(cap) == other._restricted(cap)

    __hash__ = None

    def first_mismatch(self, other):
        """Lowest (weight, exponents) where the two series differ, with both values."""
        cap = min(self.cap, other.cap)
        a, b = self._restricted(cap), other._restricted(cap)
        bad = [k for k in set(a) | set(b) if a.get(k, 0) != b.get(k, 0)]
        if not bad:
            return None
        pk = self._pk
        k = min(bad, key=lambda k: (pk.weight(k), pk.decode(k)))
        return pk.decode(k), a.get(k, 0), b.get(k, 0)

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.constant(other)
        if not self._compatible(other):
            return NotImplemented
        cap = min(self.cap, other.cap)
        out = dict(self._restricted(cap))
        for k, c in other._restricted(cap).items():
            v = exact(out.get(k, 0) + c)
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return self._like(out, cap)

    __radd__ = __add__

    def __neg__(self):
        return self._like({k: -c for k, c in self._t.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = exact(c)
        if not c:
            return self.zero()
        return self._like({k: exact(v * c) for k, v in self._t.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not self._compatible(other):
            return NotImplemented
        cap = min(self.cap, other.cap)
        pk = self._pk
        off = pk.off
        bs = sorted(((pk.weight(k), k, c) for k, c in other._t.items() if pk.weight(k) <= cap))
        out = {}
        get = out.get
        for ka, ca in self._t.items():
            wa = pk.weight(ka)
            room = cap - wa
            if room < 0:
                continue
            base = ka - off
            for wb, kb, cb in bs:
                if wb > room:
                    break
                key = base + kb
                out[key] = get(key, 0) + ca * cb
        return self._like({k: exact(v) for k, v in out.items() if v}, cap)

    __rmul__ = __mul__

    def __pow__(self, e):
        if not isinstance(e, int):
            raise TypeError("only integer powers; use mul_factor for binomial powers")
        if e < 0:
            return self.invert() ** (-e)
        result = self.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(Fraction(1) / other)
        return self * other.invert()

    def invert(self):
        """Inverse of a series whose weight-zero part is a nonzero constant."""
        pk = self._pk
        const = 0
        rest = []
        for k, c in self._t.items():
            if pk.weight(k) == 0:
                if k != pk.off:
                    raise ZeroConstantTerm("weight-zero part is not a constant")
                const = c
            else:
                rest.append((pk.weight(k), k, c))
        if not const:
            raise ZeroConstantTerm("cannot invert a series with zero constant term")
        inv0 = exact(Fraction(1) / const)
        rest.sort()
        # homogeneous recurrence: B_w = -inv0 * sum_{v>=1} A_v B_{w-v}
        by_weight = {0: {pk.off: inv0}}
        off = pk.off
        for w in range(1, self.cap + 1):
            acc = {}
            for wa, ka, ca in rest:
                if wa > w:
                    break
                prev = by_weight.get(w - wa)
                if not prev:
                    continue
                base = ka - off
                for kb, cb in prev.items():
                    key = base + kb
                    acc[key] = acc.get(key, 0) + ca * cb
            layer = {k: exact(-v * inv0) for k, v in acc.items() if v}
            if layer:
                by_weight[w] = layer
        out = {}
        for layer in by_weight.values():
            out.update(layer)
        return self._like(out)

    def mul_factor(self, exps, c=1, alpha=1):
        """Multiply by (1 - c * m)^alpha for a monomial m of positive weight.

        ``alpha`` may be any rational; the binomial series is cut off where the
        powers of m leave the cap.
        """
        exps = tuple(exps)
        self._check_exponents_image(exps)
        d = self._pk.delta(exps)
        wm = self.weight_of(exps)
        if wm <= 0:
            raise CapExceeded(f"factor monomial {exps} must have positive weight")
        c = exact(c)
        alpha = exact(alpha)
        if not c or not alpha:
            return self
        pk = self._pk
        jmax = self.cap // wm
        coeffs = []
        cj = 1
        for j in range(jmax + 1):
            b = binomial_coefficient(alpha, j)
            if b == 0 and isinstance(alpha, int) and alpha >= 0 and j > alpha:
                break
            coeffs.append(exact(b * cj))
            cj = -cj * c
        out = {}
        get = out.get
        cap = self.cap
        for k, v in self._t.items():
            w = pk.weight(k)
            key = k
            for j, bj in enumerate(coeffs):
                if w + j * wm > cap:
                    break
                if bj:
                    out[key] = get(key, 0) + v * bj
                key += d
        return self._like({k: exact(v) for k, v in out.items() if v})

    def _check_exponents_image(self, e):
        if len(e) != self.nvars:
            raise ArityMismatch("monomial has the wrong number of variables")

    # -- substitutions ----------------------------------------------------

    def transform(self, images, weights=None, signed=None):
        """Substitute x_i -> (monomial with exponent vector images[i]).

        The map must not lower the weight of any monomial that could appear:
        each variable's image weight must be >= its own weight, with equality
        for signed variables.  Otherwise truncated terms could drop below the
        cap and the result would be wrong, so that case raises CapExceeded.
        """
        weights = self.weights if weights is None else tuple(weights)
        signed = self.signed if signed is None else tuple(signed)
        images = [tuple(v) for v in images]
        if len(images) != self.nvars or any(len(v) != len(weights) for v in images):
            raise ArityMismatch("substitution images have the wrong shape")
        for i, v in enumerate(images):
            w_img = sum(a * b for a, b in zip(v, weights))
            if w_img < self.weights[i] or (self.signed[i] and w_img != self.weights[i]):
                raise CapExceeded(f"substitution lowers the weight of variable {i}")
        new = LaurentSeries(weights=weights, cap=self.cap, signed=signed)
        npk = new._pk
        deltas = [npk.delta(v) for v in images]
        out = {}
        for e, c in self.terms.items():
            key = npk.off
            for ei, d in zip(e, deltas):
                if ei:
                    key += ei * d
            ne = npk.decode(key)
            new._check_exponents(ne)
            if npk.weight(key) <= self.cap:
                out[key] = exact(out.get(key, 0) + c)
        new._t = {k: v for k, v in out.items() if v}
        if type(self) is not LaurentSeries and all(w == 1 for w in weights) and not any(signed):
            return MultiSeries._from_laurent(new)
        return new

    def specialize_zero(self, var):
        """Set variable ``var`` to zero (terms carrying it vanish)."""
        pk = self._pk
        out = {}
        for k, c in self._t.items():
            e = pk.decode(k)
            if e[var] < 0:
                raise CapExceeded("cannot set a variable with negative powers to zero")
            if e[var] == 0:
                out[k] = c
        return self._like(out)

    def drop_var(self, var):
        """Remove a variable that no term depends on."""
        weights = self.weights[:var] + self.weights[var + 1 :]
        signed = self.signed[:var] + self.signed[var + 1 :]
        terms = {}
        for e, c in self.terms.items():
            if e[var]:
                raise ValueError(f"series still depends on variable {var}")
            terms[e[:var] + e[var + 1 :]] = c
        return type(self)._build(terms, weights, self.cap, signed)

    def slice(self, var, k):
        """Coefficient of x_var^k as a series in the remaining variables.

        The remaining part is exact through cap - k * weight(var).
        """
        weights = self.weights[:var] + self.weights[var + 1 :]
        signed = self.signed[:var] + self.signed[var + 1 :]
        terms = {e[:var] + e[var + 1 :]: c for e, c in self.terms.items() if e[var] == k}
        return type(self)._build(terms, weights, self.cap - k * self.weights[var], signed)

    @classmethod
    def _build(cls, terms, weights, cap, signed):
        return LaurentSeries(terms, weights=weights, cap=cap, signed=signed)


class MultiSeries(LaurentSeries):
    """Total-degree truncated series in ``arity`` variables with nonnegative exponents."""

    __slots__ = ()

    def __init__(self, terms=None, *, arity, degree_cap):
        super().__init__(terms, weights=(1,) * arity, cap=degree_cap)

    @classmethod
    def _from_laurent(cls, s):
        out = object.__new__(cls)
        out.nvars, out.weights, out.signed, out.cap, out._pk, out._t = s.nvars, s.weights, s.signed, s.cap, s._pk, s._t
        return out

    @classmethod
    def _build(cls, terms, weights, cap, signed):
        return cls(terms, arity=len(weights), degree_cap=cap)

    @property
    def arity(self):
        return self.nvars

    @property
    def degree_cap(self):
        return self.cap

    @classmethod
    def variable(cls, i, arity, degree_cap, c=1):
        e = [0] * arity
        e[i] = 1
        return cls({tuple(e): c}, arity=arity, degree_cap=degree_cap)

    @classmethod
    def from_constant(cls, c, arity, degree_cap):
        return cls({(0,) * arity: c}, arity=arity, degree_cap=degree_cap)


def multi_add(a, b):
    return a + b


def multi_mul(a, b):
    if a.nvars != b.nvars:
        raise ArityMismatch(f"arity {a.nvars} vs {b.nvars}")
    return a * b


def multi_substitute(ms, assignments):
    """Replace variables by series: ``assignments`` maps variable index -> MultiSeries.

    Every assigned value needs zero constant term so that no term's degree can
    fall; the result is exact through the smallest cap involved.
    """
    for v, val in assignments.items():
        if val.nvars != ms.nvars:
            raise ArityMismatch("assigned series must share the ambient variables")
        if val.constant_term():
            raise CapExceeded(f"value assigned to variable {v} has a nonzero constant term")
    cap = min([ms.cap] + [val.cap for val in assignments.values()])
    one = MultiSeries.from_constant(1, ms.nvars, cap)
    powers = {v: [one] for v in assignments}
    result = MultiSeries({}, arity=ms.nvars, degree_cap=cap)
    for e, c in ms.items():
        if sum(e) > cap:
            continue
        kept = tuple(0 if i in assignments else ei for i, ei in enumerate(e))
        term = MultiSeries({kept: c}, arity=ms.nvars, degree_cap=cap)
        for v, val in assignments.items():
            k = e[v]
            if not k:
                continue
            pw = powers[v]
            while len(pw) <= k:
                pw.append(pw[-1] * val)
            term = term * pw[k]
        result = result + term
    return result
