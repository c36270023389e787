"""Free-field vertex superalgebras presented by Fock-space mode oracles.

Basis keys are PBW monomials in creation modes applied to the vacuum ():
for the fermion a strictly decreasing tuple of positive half-integers n,
standing for psi_{-n}; for a Heisenberg algebra a tuple of (n, gen) pairs
sorted decreasingly, standing for a_gen(-n).  Composite vertex-operator
modes come from the shared ModeOracle recursion, so the axiom checkers
below genuinely certify the construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .chains import ChainSeries, OpSlot, pair
from .errors import DegenerateForm
from .linalg import fraction_matrix_inverse
from .modes import ModeOracle
from .results import CheckResult, window_json
from .scalars import Scalar, Vec
from .series import BinomialKernel, Box, Product, scaled, series_mismatch

F0 = Fraction(0)
F1 = Fraction(1)
FH = Fraction(1, 2)


@dataclass(frozen=True)
class Gen:
    name: str
    weight: Fraction
    parity: int


class FreeFieldAlgebra:
    """Common machinery; subclasses supply the generator Fock action."""

    kind = None

    def __init__(self, gens, fault=None):
        self.gens = tuple(gens)
        self.fault = fault
        self.vac = ()
        self.oracle = ModeOracle(self, self.gen_apply, self.weight,
                                 lambda g: 0)
        self.log_bound = 0
        self._basis_cache = {}

    # -- key structure -------------------------------------------------------

    def gen_index(self, factor) -> int:
        raise NotImplementedError

    def factor_weight(self, factor) -> Fraction:
        raise NotImplementedError

    def spec_mode(self, factor) -> Fraction:
        """Mode index of the leading creation factor in the x^{-n-1} convention."""
        g = self.gens[self.gen_index(factor)]
        return -self.factor_weight(factor) + g.weight - 1

    def gen_weight(self, i) -> Fraction:
        return self.gens[i].weight

    def gen_parity(self, i) -> int:
        return self.gens[i].parity

    def weight(self, key):
        return sum(self.factor_weight(f) for f in key)

    def parity(self, key) -> int:
        return sum(self.gens[self.gen_index(f)].parity for f in key) % 2

    def gen_vector(self, name) -> Vec:
        for i, g in enumerate(self.gens):
            if g.name == name:
                return Vec.basis(self.gen_key(i))
        raise KeyError(name)

    def gen_key(self, i):
        raise NotImplementedError

    def basis(self, max_weight, order="weight-lex"):
        key = (Fraction(max_weight), order)
        hit = self._basis_cache.get(key)
        if hit is None:
            keys = list(self._enumerate(Fraction(max_weight)))
            if order == "weight-lex":
                keys.sort(key=lambda k: (self.weight(k), k))
            elif order == "weight-revlex":
                keys.sort(key=lambda k: (self.weight(k), tuple(reversed(k))))
            else:
                raise ValueError("unknown basis order %r" % order)
            hit = keys
            self._basis_cache[key] = hit
        return hit

    def _enumerate(self, max_weight):
        raise NotImplementedError

    # -- vertex operator modes -------------------------------------------------

    def gen_apply(self, i, n, key) -> Vec:
        raise NotImplementedError

    def mode_apply(self, ukey, n, wkey) -> Vec:
        return self.oracle.apply(ukey, n, wkey)

    def mode_vec(self, uvec: Vec, n, k, wvec: Vec) -> Vec:
        if k:
            return Vec.zero()
        return self.oracle.apply_vec(uvec, n, wvec)

    # module-protocol views of vectors in the first tensor slot
    def algebra_weight(self, uvec: Vec) -> Fraction:
        wts = {self.weight(k) for k in uvec.comps}
        if not wts:
            return F0     # the zero vector is harmlessly weight-0
        if len(wts) != 1:
            raise ValueError("inhomogeneous vector: weights %s" % sorted(wts))
        return wts.pop()

    def algebra_parity(self, uvec: Vec) -> int:
        ps = {self.parity(k) for k in uvec.comps}
        if not ps:
            return 0
        if len(ps) != 1:
            raise ValueError("inhomogeneous vector parity")
        return ps.pop()

    def algebra_coset(self, uvec: Vec) -> frozenset:
        return frozenset((F0,))

    def deg(self, key) -> Fraction:
        return self.weight(key)

    # -- distinguished operators -----------------------------------------------

    def L_minus1(self, vec: Vec) -> Vec:
        out = Vec.zero()
        for key, c in vec.items():
            for i in range(len(key)):
                f = key[i]
                n = self.factor_weight(f)
                h = self.gen_weight(self.gen_index(f))
                rest = key[:i] + key[i + 1:]
                sgn = (-1) ** i if self.gens[self.gen_index(f)].parity else 1
                created = self.gen_apply(self.gen_index(f),
                                         self.spec_mode(self._bump(f)), rest)
                if created:
                    out = out + created.scale(c * Scalar.rational((n - h + 1) * sgn))
        return out

    def _bump(self, factor):
        raise NotImplementedError

    def L0(self, vec: Vec) -> Vec:
        out = Vec.zero()
        for key, c in vec.items():
            out = out + Vec.basis(key).scale(c * Scalar.rational(self.weight(key)))
        return out

    @property
    def omega(self) -> Vec:
        raise NotImplementedError

    # -- matrix elements ---------------------------------------------------------

    def vertex_me(self, u: Vec, w: Vec, wprime: Vec = None) -> ChainSeries:
        wp_deg = None if wprime is None else self.algebra_weight(wprime)
        return ChainSeries(("x",), [(0, OpSlot(self, u))], w,
                           self.algebra_weight(w), wprime, wp_deg)


class FermionAlgebra(FreeFieldAlgebra):
    """Single free fermion psi of weight 1/2; {psi_m, psi_n} = delta_{m+n,0}.

    Basis keys are strictly decreasing tuples of odd positive ints o = 2n,
    standing for psi_{-n}; integer factors keep key hashing cheap.
    """

    kind = "fermion"

    def __init__(self, fault=None):
        super().__init__([Gen("psi", FH, 1)], fault)

    def gen_index(self, factor):
        return 0

    def factor_weight(self, factor):
        return Fraction(factor, 2)

    def spec_mode(self, factor):
        return -(factor + 1) // 2

    def gen_key(self, i):
        return (1,)

    def _bump(self, factor):
        return factor + 2

    def _enumerate(self, max_weight):
        top = int(2 * Fraction(max_weight))

        def rec(start, budget):
            yield ()
            o = min(start, budget)
            if o % 2 == 0:
                o -= 1
            while o >= 1:
                for rest in rec(o - 2, budget - o):
                    yield (o,) + rest
                o -= 2
        yield from rec(top, top)

    def gen_apply(self, i, n, key) -> Vec:
        # physical mode p = n + 1/2 acting on psi_{-k1}...psi_{-kr} vac
        o = 2 * Fraction(n) + 1       # doubled physical index, must be odd
        if o.denominator != 1:
            return Vec.zero()
        o = int(o)
        if o % 2 == 0:
            return Vec.zero()
        if o > 0:
            if o not in key:
                return Vec.zero()
            pos = key.index(o)
            sgn = -1 if self.fault == "clifford-sign" else 1
            return Vec.basis(key[:pos] + key[pos + 1:]).scale(
                Scalar.rational((-1) ** pos * sgn))
        c = -o
        if c in key:
            return Vec.zero()
        pos = sum(1 for f in key if f > c)
        sgn = -1 if self.fault == "creation-sign" and c >= 5 else 1
        return Vec.basis(key[:pos] + (c,) + key[pos:]).scale(
            Scalar.rational((-1) ** pos * sgn))

    @property
    def omega(self) -> Vec:
        c = FH
        if self.fault == "omega-scale":
            c = F1
        return Vec({(3, 1): Scalar.rational(c)})


class HeisenbergAlgebra(FreeFieldAlgebra):
    """Rank-r Heisenberg algebra; [a_i(m), a_j(n)] = m <a_i,a_j> delta_{m+n,0}."""

    kind = "heisenberg"

    def __init__(self, gram, names=None, fault=None):
        rank = len(gram)
        names = names or (["h"] if rank == 1 else
                          [chr(ord("a") + i) for i in range(rank)])
        self.gram = [[Fraction(x) for x in row] for row in gram]
        for i in range(rank):
            for j in range(rank):
                if self.gram[i][j] != self.gram[j][i]:
                    raise ValueError("Gram matrix must be symmetric")
        super().__init__([Gen(nm, 1, 0) for nm in names], fault)
        self.gram_inv = fraction_matrix_inverse(self.gram)
        self.degenerate = self.gram_inv is None

    def gen_index(self, factor):
        return factor[1]

    def factor_weight(self, factor):
        return factor[0]

    def spec_mode(self, factor):
        return -factor[0]

    def gen_key(self, i):
        return ((1, i),)

    def _bump(self, factor):
        return (factor[0] + 1, factor[1])

    def _enumerate(self, max_weight):
        rank = len(self.gens)

        def rec(maxfac, budget):
            yield ()
            for k in range(int(budget), 0, -1):
                for g in range(rank - 1, -1, -1):
                    f = (k, g)
                    if f > maxfac:
                        continue
                    for rest in rec(f, budget - k):
                        yield (f,) + rest
        yield from rec((int(Fraction(max_weight)) + 1, rank), Fraction(max_weight))

    def bracket(self, i, j) -> Fraction:
        v = self.gram[i][j]
        return -v if self.fault == "bracket-sign" else v

    def gen_apply(self, i, n, key) -> Vec:
        p = Fraction(n)
        if p.denominator != 1:
            return Vec.zero()
        p = int(p)
        if p == 0:
            return Vec.zero()
        if p < 0:
            f = (-p, i)
            pos = sum(1 for x in key if x > f)
            return Vec.basis(key[:pos] + (f,) + key[pos:])
        out = Vec.zero()
        seen = set()
        for pos, (m, j) in enumerate(key):
            if m != p or (m, j) in seen:
                continue
            seen.add((m, j))
            g = self.bracket(i, j)
            if g:
                count = key.count((m, j))
                out = out + Vec.basis(key[:pos] + key[pos + 1:]).scale(
                    Scalar.rational(p * g * count))
        return out

    @property
    def omega(self) -> Vec:
        if self.degenerate:
            raise DegenerateForm("Gram matrix is singular; no conformal vector")
        comps = {}
        rank = len(self.gens)
        scale = 2 if self.fault == "omega-scale" else 1
        for i in range(rank):
            for j in range(rank):
                c = self.gram_inv[i][j] * scale / 2
                if not c:
                    continue
                key = tuple(sorted([(1, i), (1, j)], reverse=True))
                comps[key] = comps.get(key, F0) + c
        return Vec({k: Scalar.rational(c) for k, c in comps.items() if c})


# ---------------------------------------------------------------------------
# axiom checks
# ---------------------------------------------------------------------------

def creation_check(V, ukey) -> bool:
    """u_(n) vac = 0 for n >= 0 and u_(-1) vac = u."""
    if V.mode_apply(ukey, -1, V.vac) != Vec.basis(ukey):
        return False
    top = V.weight(ukey)
    n = F0
    while n <= top:
        if V.mode_apply(ukey, n, V.vac):
            return False
        n += 1
    return True


def check_axioms(V, max_weight, halfwidth=4) -> list:
    """Identity, creation, L(0)-grading and both L(-1) properties, basiswise.

    Returns one CheckResult per axiom, carrying the first failing basis tuple
    and monomial if any.
    """
    results = []
    basis = V.basis(max_weight)
    try:
        omega = V.omega
    except DegenerateForm:
        omega = None

    def scan(identity, failure):
        fail = failure()
        results.append(CheckResult(identity, fail is None,
                                   fail or {"basis": len(basis)},
                                   first_mismatch=fail))
        return fail is None

    def vacuum_fail():
        for w in basis:
            if V.mode_apply((), -1, w) != Vec.basis(w) or V.mode_apply((), 0, w):
                return {"w": str(w), "monomial": "x^-1"}
    scan("vacuum-identity", vacuum_fail)

    def creation_fail():
        for u in basis:
            if not creation_check(V, u):
                return {"u": str(u)}
    scan("creation", creation_fail)

    if omega is not None:
        def grading_fail():
            for u in basis:
                got = V.mode_vec(omega, 1, 0, Vec.basis(u))
                if got != Vec.basis(u).scale(Fraction(V.weight(u))):
                    return {"u": str(u), "lhs": repr(got)}
        scan("L0-grading", grading_fail)

        def translation_fail():
            for u in basis:
                if V.mode_vec(omega, 0, 0, Vec.basis(u)) != V.L_minus1(Vec.basis(u)):
                    return {"u": str(u)}
        scan("L(-1)-from-omega", translation_fail)

    def derivative_fail():
        for u in basis:
            lu = V.L_minus1(Vec.basis(u))
            for v in basis:
                vv = Vec.basis(v)
                lv = V.L_minus1(vv)
                for n in range(-halfwidth, halfwidth + 1):
                    # (L(-1)u)_(n) v = -n u_(n-1) v = [L(-1), u_(n)] v
                    want = V.mode_apply(u, n - 1, v).scale(Fraction(-n))
                    got = V.mode_vec(lu, n, 0, vv)
                    comm = V.L_minus1(V.mode_apply(u, n, v)) - V.mode_vec(
                        Vec.basis(u), n, 0, lv)
                    if got != want or comm != want:
                        return {"u": str(u), "v": str(v),
                                "monomial": "x^%s" % (-n - 1)}
    scan("L(-1)-derivative", derivative_fail)
    return results


def weak_commutativity_order(V, u: Vec, v: Vec) -> int:
    """Minimal M >= 0 with x^M Y(u,x)v a power series."""
    from math import floor
    n = floor(V.algebra_weight(u) + V.algebra_weight(v) - 1)
    while n >= 0:
        if V.mode_vec(u, n, 0, v):
            return n + 1
        n -= 1
    return 0


def check_weak_commutativity(V, u: Vec, v: Vec, w: Vec, wprime, halfwidth,
                             clamp=True) -> CheckResult:
    """(x1-x2)^M <Y(u,x1)Y(v,x2)> = +/- (x1-x2)^M <Y(v,x2)Y(u,x1)> exactly."""
    M = weak_commutativity_order(V, u, v)
    if clamp:
        M = max(M, 1)
    vars = ("x1", "x2")
    wdeg = V.algebra_weight(w)
    pdeg = None if wprime is None else V.algebra_weight(wprime)
    pref = BinomialKernel(vars, M, 0, 1)
    lhs = Product(pref, ChainSeries(vars, [(0, OpSlot(V, u)), (1, OpSlot(V, v))],
                                    w, wdeg, wprime, pdeg))
    sign = Scalar.rational((-1) ** (V.algebra_parity(u) * V.algebra_parity(v)))
    rhs = scaled(Product(pref, ChainSeries(
        vars, [(1, OpSlot(V, v)), (0, OpSlot(V, u))], w, wdeg, wprime, pdeg)), sign)
    box = Box.cube(2, -halfwidth, halfwidth)
    mm = series_mismatch(lhs, rhs, box)
    return CheckResult.from_mismatch(
        "weak-commutativity-V", {"u": str(u), "v": str(v), "w": str(w), "M": M},
        vars, window_json(vars, box), mm)
