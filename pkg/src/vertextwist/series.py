"""Windowed-lazy multivariate Laurent series with rational exponents and logs.

A series knows its variable tuple, conservative per-variable support bounds,
exponent cosets and log-power bounds, and can materialize its exact terms on
any box.  A box is a per-variable exponent interval (sides may be unbounded)
plus a log-power cap; a fully bounded box is a window.  Materialization must
either be certifiably finite or raise InfiniteConvolution.

Coefficients are Scalar, or Vec for operator-valued series; a product may mix
the two as long as at most one factor is vector-valued.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InfiniteConvolution, NonMeromorphicVariable
from .scalars import ONE, Scalar, Vec, binomial

F0 = Fraction(0)
F1 = Fraction(1)


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def c_mul(a, b):
    if isinstance(b, Vec):
        return b.scale(a)
    if isinstance(a, Vec):
        return a.scale(b)
    return a * b


# ---------------------------------------------------------------------------
# monomials and boxes
# ---------------------------------------------------------------------------

def mono(powers, logs=None):
    powers = tuple(_frac(p) for p in powers)
    if logs is None:
        logs = (0,) * len(powers)
    return (powers, tuple(int(k) for k in logs))


def mono_add(m1, m2):
    return (tuple(a + b for a, b in zip(m1[0], m2[0])),
            tuple(a + b for a, b in zip(m1[1], m2[1])))


def mono_sort_key(m):
    return (m[0], m[1])


class Box:
    """Per-variable exponent interval (None = unbounded side) plus log caps."""

    __slots__ = ("lows", "highs", "logcaps")

    def __init__(self, lows, highs, logcaps):
        self.lows = tuple(None if x is None else _frac(x) for x in lows)
        self.highs = tuple(None if x is None else _frac(x) for x in highs)
        self.logcaps = tuple(int(k) for k in logcaps)

    @staticmethod
    def cube(nvars: int, lo, hi, logcap: int = 0) -> "Box":
        return Box((lo,) * nvars, (hi,) * nvars, (logcap,) * nvars)

    def is_window(self) -> bool:
        return None not in self.lows and None not in self.highs

    def contains(self, m) -> bool:
        for p, lo, hi in zip(m[0], self.lows, self.highs):
            if lo is not None and p < lo:
                return False
            if hi is not None and p > hi:
                return False
        return all(k <= cap for k, cap in zip(m[1], self.logcaps))

    def with_var(self, idx: int, lo, hi, logcap=None) -> "Box":
        lows = list(self.lows)
        highs = list(self.highs)
        caps = list(self.logcaps)
        lows[idx], highs[idx] = lo, hi
        if logcap is not None:
            caps[idx] = logcap
        return Box(lows, highs, caps)

    def drop_var(self, idx: int) -> "Box":
        keep = [i for i in range(len(self.lows)) if i != idx]
        return Box([self.lows[i] for i in keep], [self.highs[i] for i in keep],
                   [self.logcaps[i] for i in keep])

    def shift(self, m) -> "Box":
        """Box translated by -m (the complementary box in a convolution)."""
        lows = [None if lo is None else lo - p for lo, p in zip(self.lows, m[0])]
        highs = [None if hi is None else hi - p for hi, p in zip(self.highs, m[0])]
        caps = [c - k for c, k in zip(self.logcaps, m[1])]
        return Box(lows, highs, caps)

    def minus_bounds(self, bounds, logmaxes) -> "Box":
        """Box that one convolution factor must cover, given the other's bounds."""
        lows, highs, caps = [], [], []
        for (lo, hi), (blo, bhi), cap in zip(zip(self.lows, self.highs), bounds,
                                             self.logcaps):
            lows.append(None if (lo is None or bhi is None) else lo - bhi)
            highs.append(None if (hi is None or blo is None) else hi - blo)
            caps.append(cap)
        return Box(lows, highs, caps)

    def key(self):
        return (self.lows, self.highs, self.logcaps)

    def __repr__(self):
        rng = ",".join("[%s,%s]" % (lo, hi) for lo, hi in zip(self.lows, self.highs))
        return "Box(%s; logs<=%s)" % (rng, self.logcaps)


def _irange(lo: Fraction, hi: Fraction):
    """Integers n with lo <= n <= hi."""
    import math
    n = math.ceil(lo)
    while n <= hi:
        yield n
        n += 1


def coset_range(lo, hi, offset: Fraction):
    """Exponents p in offset+Z with lo <= p <= hi (either side may be None)."""
    if lo is None or hi is None:
        raise InfiniteConvolution("unbounded coset enumeration")
    for n in _irange(lo - offset, hi - offset):
        yield offset + n


# ---------------------------------------------------------------------------
# series protocol
# ---------------------------------------------------------------------------

class Series:
    """Base class; subclasses fill vars/bounds/cosets/logmax and _terms_in."""

    def __init__(self, vars, bounds, cosets, logmax):
        self.vars = tuple(vars)
        self.bounds = tuple(bounds)
        self.cosets = tuple(frozenset(c) for c in cosets)
        self.logmax = tuple(logmax)
        self._cache = {}

    def terms_in(self, box: Box) -> dict:
        key = box.key()
        hit = self._cache.get(key)
        if hit is None:
            hit = {m: c for m, c in self._terms_in(box).items()
                   if not c.is_zero()}
            self._cache[key] = hit
        return hit

    def _terms_in(self, box: Box) -> dict:
        raise NotImplementedError

    def coeff(self, m):
        box = Box(m[0], m[0], m[1])
        return self.terms_in(box).get(m)

    # arithmetic sugar
    def __add__(self, other):
        return Sum([self, other])

    def __sub__(self, other):
        return Sum([self, scaled(other, Scalar.rational(-1))])

    def __mul__(self, other):
        if isinstance(other, Series):
            return Product(self, other)
        return scaled(self, other)

    __rmul__ = __mul__

    def __neg__(self):
        return scaled(self, Scalar.rational(-1))


class TermSeries(Series):
    """Finite explicit Laurent polynomial (possibly with logs)."""

    def __init__(self, vars, terms=None):
        terms = {m: c for m, c in (terms or {}).items() if not c.is_zero()}
        n = len(vars)
        if terms:
            bounds = [(min(m[0][i] for m in terms), max(m[0][i] for m in terms))
                      for i in range(n)]
            logmax = [max(m[1][i] for m in terms) for i in range(n)]
            cosets = [frozenset(m[0][i] % 1 for m in terms) for i in range(n)]
        else:
            bounds = [(F0, F0)] * n
            logmax = [0] * n
            cosets = [frozenset((F0,))] * n
        super().__init__(vars, bounds, cosets, logmax)
        self.terms = terms

    def _terms_in(self, box):
        return {m: c for m, c in self.terms.items() if box.contains(m)}

    @staticmethod
    def monomial(vars, powers, logs=None, coeff=ONE) -> "TermSeries":
        return TermSeries(vars, {mono(powers, logs): coeff})

    @staticmethod
    def constant(vars, coeff) -> "TermSeries":
        return TermSeries(vars, {mono((0,) * len(vars)): coeff})

    @staticmethod
    def zero(vars) -> "TermSeries":
        return TermSeries(vars, {})


def scaled(s: Series, c) -> Series:
    if isinstance(c, (int, Fraction)):
        c = Scalar.rational(c)
    return _Scaled(s, c)


class _Scaled(Series):
    def __init__(self, base: Series, c: Scalar):
        super().__init__(base.vars, base.bounds, base.cosets, base.logmax)
        self.base, self.c = base, c

    def _terms_in(self, box):
        return {m: c_mul(self.c, v) for m, v in self.base.terms_in(box).items()}


class Sum(Series):
    def __init__(self, parts):
        flat = []
        for p in parts:
            flat.extend(p.parts if isinstance(p, Sum) else [p])
        vars = flat[0].vars
        n = len(vars)
        lows, highs, cosets, logmax = [], [], [], []
        for i in range(n):
            los = [p.bounds[i][0] for p in flat]
            his = [p.bounds[i][1] for p in flat]
            lows.append(None if any(x is None for x in los) else min(los))
            highs.append(None if any(x is None for x in his) else max(his))
            cosets.append(frozenset().union(*(p.cosets[i] for p in flat)))
            logmax.append(max(p.logmax[i] for p in flat))
        super().__init__(vars, zip(lows, highs), cosets, logmax)
        self.parts = flat

    def _terms_in(self, box):
        out = {}
        for p in self.parts:
            for m, c in p.terms_in(box).items():
                prev = out.get(m)
                out[m] = c if prev is None else prev + c
        return out


class Product(Series):
    def __init__(self, a: Series, b: Series):
        if a.vars != b.vars:
            raise ValueError("factors must share a variable tuple")
        n = len(a.vars)
        bounds, cosets, logmax = [], [], []
        for i in range(n):
            alo, ahi = a.bounds[i]
            blo, bhi = b.bounds[i]
            bounds.append((None if alo is None or blo is None else alo + blo,
                           None if ahi is None or bhi is None else ahi + bhi))
            cosets.append(frozenset((x + y) % 1 for x in a.cosets[i]
                          for y in b.cosets[i]))
            logmax.append(a.logmax[i] + b.logmax[i])
        super().__init__(a.vars, bounds, cosets, logmax)
        self.a, self.b = a, b

    def _terms_in(self, box):
        for first, second in ((self.a, self.b), (self.b, self.a)):
            try:
                ta = first.terms_in(box.minus_bounds(second.bounds, second.logmax))
            except InfiniteConvolution:
                continue
            if not ta:
                return {}
            n = len(self.vars)
            lows = [min(m[0][i] for m in ta) for i in range(n)]
            highs = [max(m[0][i] for m in ta) for i in range(n)]
            hull = Box(lows, highs, [max(m[1][i] for m in ta) for i in range(n)])
            tb = second.terms_in(box.minus_bounds(
                tuple(zip(hull.lows, hull.highs)), hull.logcaps))
            out = {}
            for m1, c1 in ta.items():
                for m2, c2 in tb.items():
                    m = mono_add(m1, m2)
                    if not box.contains(m):
                        continue
                    c = c_mul(c1, c2)
                    prev = out.get(m)
                    out[m] = c if prev is None else prev + c
            return out
        raise InfiniteConvolution(
            "cannot certify finite convolution for product on %r" % (box,))


def series_add(a: Series, b: Series) -> Series:
    return Sum([a, b])


def series_mul(a: Series, b: Series) -> Series:
    return Product(a, b)


def product_of(factors) -> Series:
    out = factors[0]
    for f in factors[1:]:
        out = Product(out, f)
    return out


# ---------------------------------------------------------------------------
# kernels
# ---------------------------------------------------------------------------

class BinomialKernel(Series):
    """(x_lead + sign*x_exp)^A expanded in x_exp, optionally scaled.

    Terms:  scale * C(A, n) * sign^n * x_lead^(A-n) * x_exp^n,  n >= 0.
    """

    def __init__(self, vars, A, lead: int, exp: int, sign: int = -1, scale=ONE):
        A = _frac(A)
        n = len(vars)
        bounds = [(F0, F0)] * n
        cosets = [frozenset((F0,))] * n
        if A.denominator == 1 and A >= 0:
            # polynomial case: the expansion terminates on its own
            bounds[lead] = (F0, A)
            bounds[exp] = (F0, A)
        else:
            bounds[lead] = (None, A)
            bounds[exp] = (F0, None)
        cosets[lead] = frozenset((A % 1,))
        super().__init__(vars, bounds, cosets, [0] * n)
        self.A, self.lead, self.exp, self.sign, self.scale = A, lead, exp, sign, scale

    def _terms_in(self, box):
        A = self.A
        lo_n = F0
        hi_n = None
        if A.denominator == 1 and A >= 0:
            hi_n = A
        blo, bhi = box.lows[self.exp], box.highs[self.exp]
        if blo is not None:
            lo_n = max(lo_n, blo)
        if bhi is not None:
            hi_n = bhi if hi_n is None else min(hi_n, bhi)
        llo = box.lows[self.lead]
        if llo is not None:
            cap = A - llo
            hi_n = cap if hi_n is None else min(hi_n, cap)
        if hi_n is None:
            raise InfiniteConvolution("binomial expansion unbounded on %r" % (box,))
        out = {}
        n = len(self.vars)
        for k in _irange(lo_n, hi_n):
            powers = [F0] * n
            powers[self.lead] = A - k
            powers[self.exp] = _frac(k)
            m = (tuple(powers), (0,) * n)
            if not box.contains(m):
                continue
            c = self.scale * (binomial(A, k) * Fraction(self.sign) ** k)
            if not c.is_zero():
                out[m] = c
        return out


def binomial_expand(vars, A, lead: int, exp: int) -> Series:
    """(x_lead - x_exp)^A as a power series in x_exp."""
    return BinomialKernel(vars, A, lead, exp, sign=-1)


def minus_convention(vars, A, lead: int, exp: int) -> Series:
    """(-x_exp + x_lead)^A = e^{pi i A} (x_exp - x_lead)^A, expanded in x_lead."""
    A = _frac(A)
    return BinomialKernel(vars, A, exp, lead, sign=-1, scale=Scalar.e(A))


class DeltaKernel(Series):
    """den^{-1} delta((x_a + b_sign*x_b)/den) dressed by an exponent coset.

    Terms over m in offset+Z, j >= 0:
        C(m, j) * b_sign^j * [e^{pi i m} if minus_phase] * scale
          * x_a^(m-j) * x_b^j * den^(-m-1).
    The b-variable is the expansion variable.
    """

    def __init__(self, vars, den: int, a: int, b: int, b_sign: int = 1,
                 offset=F0, minus_phase: bool = False, scale=ONE):
        offset = _frac(offset)
        n = len(vars)
        bounds = [(F0, F0)] * n
        cosets = [frozenset((F0,))] * n
        bounds[den] = (None, None)
        bounds[a] = (None, None)
        bounds[b] = (F0, None)
        cosets[den] = frozenset(((-offset - 1) % 1,))
        cosets[a] = frozenset((offset % 1,))
        super().__init__(vars, bounds, cosets, [0] * n)
        self.den, self.va, self.vb = den, a, b
        self.b_sign, self.offset, self.minus_phase, self.scale = \
            b_sign, offset, minus_phase, scale

    def _terms_in(self, box):
        dlo, dhi = box.lows[self.den], box.highs[self.den]
        if dlo is None or dhi is None:
            raise InfiniteConvolution("delta kernel needs a bounded window on its "
                                      "denominator variable")
        out = {}
        nv = len(self.vars)
        for dm in coset_range(dlo, dhi, (-self.offset - 1) % 1):
            m = -dm - 1        # in offset+Z
            j_hi = box.highs[self.vb]
            alo = box.lows[self.va]
            if alo is not None:
                cap = m - alo
                j_hi = cap if j_hi is None else min(j_hi, cap)
            if j_hi is None:
                raise InfiniteConvolution("delta kernel expansion unbounded")
            j_lo = max(F0, box.lows[self.vb] if box.lows[self.vb] is not None else F0)
            ahi = box.highs[self.va]
            if ahi is not None:
                j_lo = max(j_lo, m - ahi)
            for j in _irange(j_lo, j_hi):
                powers = [F0] * nv
                powers[self.den] = dm
                powers[self.va] = m - j
                powers[self.vb] = _frac(j)
                mn = (tuple(powers), (0,) * nv)
                if not box.contains(mn):
                    continue
                c = self.scale * (binomial(m, j) * Fraction(self.b_sign) ** j)
                if self.minus_phase:
                    c = c * Scalar.e(m)
                if not c.is_zero():
                    out[mn] = c
        return out


def delta_prod(vars, x0: int, x1: int, x2: int, offset=F0) -> Series:
    """x0^{-1} delta((x1 - x2)/x0), optionally dressed by ((x1-x2)/x0)^offset."""
    return DeltaKernel(vars, den=x0, a=x1, b=x2, b_sign=-1, offset=offset)


def delta_prod_rev(vars, x0: int, x1: int, x2: int, offset=F0) -> Series:
    """x0^{-1} delta((-x2 + x1)/x0) under the minus convention, dressed."""
    return DeltaKernel(vars, den=x0, a=x2, b=x1, b_sign=-1, offset=offset,
                       minus_phase=True)


def delta_iter(vars, x0: int, x1: int, x2: int, offset=F0) -> Series:
    """x1^{-1} delta((x2 + x0)/x1), optionally dressed by ((x2+x0)/x1)^offset."""
    return DeltaKernel(vars, den=x1, a=x2, b=x0, b_sign=1, offset=offset)


class DeltaDerivKernel(Series):
    """(1/k!) den^{-1} (d/dx_num)^k delta(x_num/den) = sum_m C(m,k) x_num^(m-k) den^(-m-1)."""

    def __init__(self, vars, den: int, num: int, k: int):
        n = len(vars)
        bounds = [(F0, F0)] * n
        cosets = [frozenset((F0,))] * n
        bounds[den] = (None, None)
        bounds[num] = (None, None)
        super().__init__(vars, bounds, cosets, [0] * n)
        self.den, self.num, self.k = den, num, k

    def _terms_in(self, box):
        dlo, dhi = box.lows[self.den], box.highs[self.den]
        if dlo is None or dhi is None:
            nlo, nhi = box.lows[self.num], box.highs[self.num]
            if nlo is None or nhi is None:
                raise InfiniteConvolution("delta derivative needs one bounded axis")
            ms = [n + self.k for n in _irange(nlo, nhi)]
        else:
            ms = [-d - 1 for d in _irange(dlo, dhi)]
        out = {}
        nv = len(self.vars)
        for m in ms:
            powers = [F0] * nv
            powers[self.den] = _frac(-m - 1)
            powers[self.num] = _frac(m - self.k)
            mn = (tuple(powers), (0,) * nv)
            if not box.contains(mn):
                continue
            c = binomial(m, self.k)
            if c:
                out[mn] = Scalar.rational(c)
        return out


class PlainDelta(Series):
    """delta(x) = sum over all integers n of x^n in one designated variable."""

    def __init__(self, vars, idx: int):
        n = len(vars)
        bounds = [(F0, F0)] * n
        bounds[idx] = (None, None)
        super().__init__(vars, bounds, [frozenset((F0,))] * n, [0] * n)
        self.idx = idx

    def _terms_in(self, box):
        lo, hi = box.lows[self.idx], box.highs[self.idx]
        if lo is None or hi is None:
            raise InfiniteConvolution("delta(x) has unbounded support")
        out = {}
        n = len(self.vars)
        for k in _irange(lo, hi):
            powers = [F0] * n
            powers[self.idx] = _frac(k)
            out[(tuple(powers), (0,) * n)] = ONE
        return out


# ---------------------------------------------------------------------------
# variable transforms
# ---------------------------------------------------------------------------

class _PhaseShift(Series):
    """x^n -> e^{pi i h n} x^n and log x -> log x + h*PI on one variable."""

    def __init__(self, base: Series, idx: int, half_turns, rename: str = None):
        vars = list(base.vars)
        if rename is not None:
            vars[idx] = rename
        super().__init__(vars, base.bounds, base.cosets, base.logmax)
        self.base, self.idx, self.h = base, idx, _frac(half_turns)

    def _terms_in(self, box):
        src = Box(box.lows, box.highs,
                  tuple(self.base.logmax[i] if i == self.idx else c
                        for i, c in enumerate(box.logcaps)))
        out = {}
        i = self.idx
        for m, c in self.base.terms_in(src).items():
            phase = Scalar.e(self.h * m[0][i]) if (self.h * m[0][i]) % 2 else ONE
            k = m[1][i]
            # (log x + h*PI)^k expands over lower log powers
            for j in range(0, k + 1):
                if j > box.logcaps[i]:
                    continue
                fac = binomial(k, k - j) * (Scalar.pi() ** (k - j)) * (self.h ** (k - j))
                logs = tuple(j if t == i else v for t, v in enumerate(m[1]))
                mn = (m[0], logs)
                if not box.contains(mn):
                    continue
                cc = c_mul(phase * fac, c)
                prev = out.get(mn)
                out[mn] = cc if prev is None else prev + cc
        return out


def branch_shift(s: Series, idx: int, p: int) -> Series:
    """Pass to the (p shifts away) branch: x^n -> e^{2 pi i p n} x^n, log x -> log x + 2p*PI."""
    if p == 0:
        return s
    return _PhaseShift(s, idx, 2 * p)


def log_substitute(s: Series, idx: int, rename: str = "x") -> Series:
    """Substitute y -> -x on variable idx: y^n -> e^{pi i n} x^n, log y -> log x + PI."""
    return _PhaseShift(s, idx, 1, rename=rename)


class _Derivative(Series):
    def __init__(self, base: Series, idx: int):
        bounds = list(base.bounds)
        lo, hi = bounds[idx]
        bounds[idx] = (None if lo is None else lo - 1, None if hi is None else hi - 1)
        super().__init__(base.vars, bounds, base.cosets, base.logmax)
        self.base, self.idx = base, idx

    def _terms_in(self, box):
        # d/dx x^n (log x)^k = n x^(n-1) (log x)^k + k x^(n-1) (log x)^(k-1)
        i = self.idx
        lo, hi = box.lows[i], box.highs[i]
        src = box.with_var(i, None if lo is None else lo + 1,
                           None if hi is None else hi + 1,
                           min(self.base.logmax[i], box.logcaps[i] + 1))
        out = {}
        for m, c in self.base.terms_in(src).items():
            n, k = m[0][i], m[1][i]
            powers = tuple(p - 1 if t == i else p for t, p in enumerate(m[0]))
            targets = [((powers, m[1]), n)]
            if k:
                logs = tuple(v - 1 if t == i else v for t, v in enumerate(m[1]))
                targets.append(((powers, logs), k))
            for mn, fac in targets:
                if fac == 0 or not box.contains(mn):
                    continue
                cc = c_mul(Scalar.rational(fac), c)
                prev = out.get(mn)
                out[mn] = cc if prev is None else prev + cc
        return out


def derivative(s: Series, idx: int) -> Series:
    return _Derivative(s, idx)


class _Residue(Series):
    def __init__(self, base: Series, idx: int):
        if base.cosets[idx] - {F0} or base.logmax[idx] > 0:
            raise NonMeromorphicVariable(
                "residue in %s: fractional exponents or logs remain" % base.vars[idx])
        keep = [i for i in range(len(base.vars)) if i != idx]
        super().__init__([base.vars[i] for i in keep],
                         [base.bounds[i] for i in keep],
                         [base.cosets[i] for i in keep],
                         [base.logmax[i] for i in keep])
        self.base, self.idx = base, idx

    def _terms_in(self, box):
        lows = list(box.lows)
        highs = list(box.highs)
        caps = list(box.logcaps)
        lows.insert(self.idx, Fraction(-1))
        highs.insert(self.idx, Fraction(-1))
        caps.insert(self.idx, 0)
        out = {}
        for m, c in self.base.terms_in(Box(lows, highs, caps)).items():
            powers = tuple(p for i, p in enumerate(m[0]) if i != self.idx)
            logs = tuple(k for i, k in enumerate(m[1]) if i != self.idx)
            mn = (powers, logs)
            prev = out.get(mn)
            out[mn] = c if prev is None else prev + c
        return out


def residue(s: Series, idx: int) -> Series:
    """Coefficient of x_idx^{-1}; the variable must carry only integral, log-free powers."""
    return _Residue(s, idx)


# ---------------------------------------------------------------------------
# composite expansions (series in a small-valuation base)
# ---------------------------------------------------------------------------

def _positive_valuation_var(base: Series):
    for i, (lo, _hi) in enumerate(base.bounds):
        if lo is not None and lo >= 1:
            return i, lo
    raise InfiniteConvolution("base series has no strictly positive valuation")


def truncated_powers(base: Series, box: Box, max_power=None):
    """Yield (n, base^n materialized on box) while base^n can still meet box."""
    i, lo = _positive_valuation_var(base)
    hi = box.highs[i]
    if hi is None:
        raise InfiniteConvolution("power series needs a bounded window")
    cur = TermSeries.constant(base.vars, ONE)
    n = 0
    while (max_power is None or n <= max_power) and n * lo <= hi:
        yield n, cur
        cur = TermSeries(base.vars, Product(cur, base).terms_in(box))
        n += 1


def binomial_of(base: Series, A, box: Box) -> TermSeries:
    """(1 + base)^A on the box; base must have a positive-valuation variable."""
    out = {}
    for n, p in truncated_powers(base, box):
        c = binomial(A, n)
        if not c:
            continue
        for m, v in p.terms_in(box).items():
            s = out.get(m, None)
            cv = c_mul(Scalar.rational(c), v)
            out[m] = cv if s is None else s + cv
    return TermSeries(base.vars, out)


def log1p_of(base: Series, box: Box) -> TermSeries:
    """log(1 + base) on the box."""
    out = {}
    for n, p in truncated_powers(base, box):
        if n == 0:
            continue
        c = Fraction((-1) ** (n + 1), n)
        for m, v in p.terms_in(box).items():
            s = out.get(m)
            cv = c_mul(Scalar.rational(c), v)
            out[m] = cv if s is None else s + cv
    return TermSeries(base.vars, out)


def nilpotent_binomial(vars, order: int, lead: int, exp: int, box: Box,
                       minus: bool = False):
    """Coefficient series of N^k, k < order, in (x_lead - x_exp)^N = e^{N log(x_lead - x_exp)}.

    log(x_lead - x_exp) is taken as log x_lead + log(1 - x_exp/x_lead); with
    minus=True an extra PI is added per the (-x_exp + x_lead) convention
    (callers swap lead/exp themselves).
    """
    ratio = TermSeries.monomial(
        vars, [(-1 if i == lead else (1 if i == exp else 0)) for i in range(len(vars))],
        coeff=Scalar.rational(-1))
    tail = log1p_of(ratio, box)
    logterm = TermSeries(vars, {
        (tuple(F0 for _ in vars), tuple(1 if i == lead else 0 for i in range(len(vars)))): ONE})
    L = Sum([logterm, tail])
    if minus:
        L = Sum([L, TermSeries.constant(vars, Scalar.pi())])
    out = []
    cur = TermSeries.constant(vars, ONE)
    from math import factorial
    for k in range(order):
        out.append(TermSeries(vars, {m: c / factorial(k)
                                     for m, c in cur.terms.items()}))
        cur = TermSeries(vars, Product(cur, L).terms_in(box))
    return out


# ---------------------------------------------------------------------------
# comparison and display
# ---------------------------------------------------------------------------

def series_mismatch(a: Series, b: Series, box: Box):
    """First differing (monomial, lhs, rhs) in canonical order, or None."""
    ta = a.terms_in(box)
    tb = b.terms_in(box)
    for m in sorted(set(ta) | set(tb), key=mono_sort_key):
        ca = ta.get(m)
        cb = tb.get(m)
        if ca is None or cb is None or ca != cb:
            return m, ca, cb
    return None


def format_monomial(m, vars) -> str:
    parts = []
    for v, p, k in zip(vars, m[0], m[1]):
        if p:
            parts.append("%s^%s" % (v, p))
        if k == 1:
            parts.append("log(%s)" % v)
        elif k:
            parts.append("log(%s)^%d" % (v, k))
    return "*".join(parts) if parts else "1"


def format_series(terms: dict, vars) -> str:
    if not terms:
        return "0"
    out = []
    for m in sorted(terms, key=mono_sort_key):
        out.append("(%r)*%s" % (terms[m], format_monomial(m, vars)))
    return " + ".join(out)


def series_to_json(terms: dict, vars, box: Box = None):
    entries = []
    for m in sorted(terms, key=mono_sort_key):
        c = terms[m]
        entries.append({
            "powers": {v: str(p) for v, p in zip(vars, m[0]) if p},
            "log_powers": {v: k for v, k in zip(vars, m[1]) if k},
            "scalar": c.to_json() if isinstance(c, Scalar) else repr(c),
        })
    doc = {"variables": list(vars), "entries": entries}
    if box is not None:
        doc["window"] = {
            v: [str(lo), str(hi), cap]
            for v, lo, hi, cap in zip(vars, box.lows, box.highs, box.logcaps)
        }
    return doc
