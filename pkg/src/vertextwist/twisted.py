"""Lower-bounded twisted modules: construction by mode extension and the
identity checkers for twisted vertex operators.

A twisted module is presented by a Fock basis, the seeded action of generator
modes (indexed in the coset alpha + Z of each generator's g-weight), and the
action of g.  Composite modes come from the same residue recursion as the
algebra's own; the checkers below certify the result against the Jacobi
identity, weak commutativity, the commutator formula, equivariance, the
log-decomposition identities and product polynomiality, coefficient-exactly
on explicit windows.
"""

from __future__ import annotations

from fractions import Fraction

from .chains import ChainSeries, OpSlot, pair
from .errors import ExtensionInconsistent, LogBoundExceeded
from .modes import ModeOracle
from .results import CheckResult, window_json
from .scalars import Scalar, Vec, acc_vec, vec_of
from .series import (BinomialKernel, Box, Product, Sum, TermSeries,
                     branch_shift, delta_iter, delta_prod, delta_prod_rev,
                     derivative, mono, residue, scaled, series_mismatch)

F0 = Fraction(0)
F1 = Fraction(1)
FH = Fraction(1, 2)


class ModuleBase:
    """Shared surface of twisted modules: gradings, chains, conformal data."""

    name = "module"
    V = None
    g = None
    log_bound = 0

    # subclass responsibilities
    def basis(self, max_deg, order="weight-lex"):
        raise NotImplementedError

    def deg(self, key) -> Fraction:
        raise NotImplementedError

    def parity(self, key) -> int:
        raise NotImplementedError

    def g_apply(self, vec: Vec) -> Vec:
        raise NotImplementedError

    def mode_vec(self, uvec: Vec, n, k, wvec: Vec) -> Vec:
        raise NotImplementedError

    def y0_mode_vec(self, uvec: Vec, n, wvec: Vec) -> Vec:
        """Log-constant part; coincides with the full modes when N_g = 0."""
        return self.mode_vec(uvec, n, 0, wvec)

    # module protocol for chain slots over the V tensor factor
    def algebra_weight(self, uvec: Vec) -> Fraction:
        return self.V.algebra_weight(uvec)

    def algebra_parity(self, uvec: Vec) -> int:
        return self.V.algebra_parity(uvec)

    def algebra_coset(self, uvec: Vec) -> frozenset:
        return self.g.coset_of(uvec)

    def algebra_alpha(self, uvec: Vec) -> Fraction:
        cs = self.algebra_coset(uvec)
        if len(cs) != 1:
            raise ValueError("vector is not g-homogeneous: cosets %s" % sorted(cs))
        return next(iter(cs))

    # -- conformal structure ---------------------------------------------------

    def L_minus1(self, vec: Vec) -> Vec:
        memo = getattr(self, "_L_memo", None)
        if memo is None:
            memo = self._L_memo = {}
        acc = {}
        for key, c in vec.items():
            hit = memo.get(key)
            if hit is None:
                hit = memo[key] = self.mode_vec(self.V.omega, 0, 0,
                                                Vec.basis(key))
            if hit:
                acc_vec(acc, hit, c)
        return vec_of(acc)

    def L0(self, vec: Vec) -> Vec:
        return self.mode_vec(self.V.omega, 1, 0, vec)

    _h_vac = None

    def vacuum_weight(self) -> Fraction:
        """L(0)-eigenvalue of the twisted vacuum, produced by the extension."""
        if self._h_vac is None:
            vals = set()
            for key in self.basis(F0):
                got = self.L0(Vec.basis(key))
                c = got.coeff(key)
                if got != Vec.basis(key).scale(c):
                    raise ExtensionInconsistent("L(0) is not diagonal on degree 0")
                vals.add(c.as_rational())
            if len(vals) != 1:
                raise ExtensionInconsistent("twisted vacuum weight is ambiguous")
            self._h_vac = vals.pop()
        return self._h_vac

    def check_L0_grading(self, max_deg) -> CheckResult:
        h = self.vacuum_weight()
        for key in self.basis(max_deg):
            want = Vec.basis(key).scale(Fraction(h + self.deg(key)))
            if self.L0(Vec.basis(key)) != want:
                return CheckResult("L0-grading-W", False, {"w": str(key)},
                                   first_mismatch={"w": str(key)})
        return CheckResult("L0-grading-W", True, {"max_deg": str(max_deg)})

    # -- matrix elements ---------------------------------------------------------

    def me(self, u: Vec, w: Vec, wprime: Vec = None, var="x") -> ChainSeries:
        return self.chain((var,), [(0, u)], w, wprime)

    def _deg_of_vec(self, wvec: Vec) -> Fraction:
        ds = {self.deg(k) for k in wvec.comps}
        if not ds:
            return F0
        if len(ds) != 1:
            raise ValueError("inhomogeneous module vector")
        return ds.pop()

    def chain(self, vars, placed_ops, w: Vec, wprime: Vec = None) -> ChainSeries:
        """<w'| ops |w> with placed_ops a list of (var_index, u vector)."""
        slots = [(i, OpSlot(self, u)) for i, u in placed_ops]
        wp = None if wprime is None else self._deg_of_vec(wprime)
        return ChainSeries(vars, slots, w, self._deg_of_vec(w), wprime, wp)

    def spectrum(self, max_deg) -> list:
        return sorted({self.alpha_of_key(k) for k in self.basis(max_deg)})

    def alpha_of_key(self, key) -> Fraction:
        raise NotImplementedError


class TwistedModule(ModuleBase):
    """Generalized g-twisted module built by seeding generator modes and
    extending recursively; requires the automorphism to act semisimply."""

    def __init__(self, name, V, g, gen_action, basis_fn, deg_fn, parity_fn,
                 g_scale_fn, crosscheck=True):
        self.name = name
        self.V = V
        self.g = g
        self.gen_seed = gen_action
        self._basis_fn = basis_fn
        self._deg = deg_fn
        self._parity = parity_fn
        self._g_scale = g_scale_fn     # module_key -> Scalar, the action of g
        self.log_bound = 0             # semisimple case: no log terms
        self.oracle = ModeOracle(V, gen_action, deg_fn,
                                 lambda gi: g.gen_alpha(gi))
        if crosscheck:
            self.oracle.crosscheck(V.basis(Fraction(3, 2)), self.basis(F1))

    def basis(self, max_deg, order="weight-lex"):
        return self._basis_fn(Fraction(max_deg), order)

    def deg(self, key) -> Fraction:
        return self._deg(key)

    def parity(self, key) -> int:
        return self._parity(key)

    def g_apply(self, vec: Vec) -> Vec:
        out = Vec.zero()
        for key, c in vec.items():
            out = out + Vec.basis(key).scale(c * self._g_scale(key))
        return out

    def alpha_of_key(self, key) -> Fraction:
        """g-weight of a basis vector, read from the eigenvalue of g."""
        for (p, q), c in self._g_scale(key).iter_terms():
            # the canonical form folds e^{pi i} into the sign of c
            return (q / 2 + (FH if c < 0 else F0)) % 1
        return F0

    def mode_vec(self, uvec: Vec, n, k, wvec: Vec) -> Vec:
        if k:
            return Vec.zero()
        return self.oracle.apply_vec(uvec, n, wvec)


class UnipotentViewModule(ModuleBase):
    """The algebra itself viewed through Y^g(u, x) := Y_V(x^{-N_g} u, x) for
    unipotent g; the log-carrying exercise case.

    This satisfies the identity property, equivariance, g-compatibility,
    weak commutativity and the log-decomposition identities exactly, but not
    the translation axiom (d/dx produces an extra -N_g/x term), so it is
    synthetic exercise data rather than a complete twisted module.  The
    checkers that assume a semisimple action refuse it outright.
    """

    def __init__(self, name, V, g, log_bound=None):
        from .automorphism import nilpotent_power_coeffs
        self.name = name
        self.V = V
        self.g = g
        self._npc = lambda vec: nilpotent_power_coeffs(g, vec)
        if log_bound is None:
            log_bound = max((len(self._npc(Vec.basis(k))) - 1
                             for k in V.basis(3)), default=0)
        self.log_bound = log_bound

    def basis(self, max_deg, order="weight-lex"):
        return self.V.basis(max_deg, order)

    def deg(self, key) -> Fraction:
        return self.V.weight(key)

    def parity(self, key) -> int:
        return self.V.parity(key)

    def g_apply(self, vec: Vec) -> Vec:
        return self.g.apply(vec)

    def alpha_of_key(self, key) -> Fraction:
        return F0

    def module_nilpotent_coeffs(self, wvec: Vec):
        return self._npc(wvec)

    def mode_vec(self, uvec: Vec, n, k, wvec: Vec) -> Vec:
        parts = self._npc(uvec)
        if k >= len(parts):
            return Vec.zero()
        if k > self.log_bound:
            raise LogBoundExceeded("log power %d beyond module bound %d"
                                   % (k, self.log_bound))
        sgn = Fraction((-1) ** k)
        return self.V.mode_vec(parts[k].scale(sgn), n, 0, wvec)

    def y0_mode_vec(self, uvec: Vec, n, wvec: Vec) -> Vec:
        return self.V.mode_vec(uvec, n, 0, wvec)


# ---------------------------------------------------------------------------
# checkers (twisted vertex operators only)
# ---------------------------------------------------------------------------

def _cube(vars, hw, logcap=0):
    return Box.cube(len(vars), -Fraction(hw), Fraction(hw), logcap)


def check_twisted_weak_commutativity(W, u, v, w, wprime, halfwidth) -> CheckResult:
    """(x1-x2)^M Y(u,x1)Y(v,x2) = -/+ (x1-x2)^M Y(v,x2)Y(u,x1) on the window."""
    from .vosa import weak_commutativity_order
    M = max(weak_commutativity_order(W.V, u, v), 1)
    vars = ("x1", "x2")
    pref = BinomialKernel(vars, M, 0, 1)
    lhs = Product(pref, W.chain(vars, [(0, u), (1, v)], w, wprime))
    sign = (-1) ** (W.algebra_parity(u) * W.algebra_parity(v))
    rhs = scaled(Product(pref, W.chain(vars, [(1, v), (0, u)], w, wprime)), sign)
    box = _cube(vars, halfwidth)
    mm = series_mismatch(lhs, rhs, box)
    return CheckResult.from_mismatch(
        "twisted-weak-commutativity", _inputs(u=u, v=v, w=w, M=M),
        vars, window_json(vars, box), mm)


def require_semisimple(W, identity):
    """The coset-dressed kernels below realize x^{L_g} through the g-weight
    alone; refuse modules whose automorphism has a nilpotent part."""
    for i in range(len(W.V.gens)):
        if W.g.K_apply(Vec.basis(W.V.gen_key(i))):
            raise ValueError(
                "%s needs a semisimple automorphism action; the nilpotent "
                "dressing of the kernel is not implemented" % identity)


def jacobi_iterate_side(W, u, v, w, wprime, vars, r_min):
    """x1^{-1} d((x2+x0)/x1) ((x2+x0)/x1)^alpha Y(Y_V(u,x0)v, x2), split per
    mode of Y_V(u,x0)v so that each term has integral x0-powers."""
    from math import floor
    al = W.algebra_alpha(u)
    parts = []
    r = floor(W.V.algebra_weight(u) + W.V.algebra_weight(v) - 1)
    while r >= r_min:
        uv = W.V.mode_vec(u, r, 0, v)
        if uv:
            kern = delta_iter(vars, 0, 1, 2, offset=al)
            x0pow = TermSeries.monomial(vars, [-r - 1, 0, 0])
            me = W.chain(vars, [(2, uv)], w, wprime)
            parts.append(Product(Product(kern, x0pow), me))
        r -= 1
    return Sum(parts) if parts else TermSeries.zero(vars)


def check_twisted_jacobi(W, u, v, w, wprime, halfwidth) -> CheckResult:
    """The three-term Jacobi identity for twisted vertex operators, exactly."""
    require_semisimple(W, "twisted-jacobi")
    vars = ("x0", "x1", "x2")
    prod = Product(delta_prod(vars, 0, 1, 2),
                   W.chain(vars, [(1, u), (2, v)], w, wprime))
    sign = (-1) ** (W.algebra_parity(u) * W.algebra_parity(v))
    revp = scaled(Product(delta_prod_rev(vars, 0, 1, 2),
                          W.chain(vars, [(2, v), (1, u)], w, wprime)), sign)
    lhs = Sum([prod, scaled(revp, Scalar.rational(-1))])
    # modes below r_min only produce x0-exponents above the window
    r_min = _ceil(-1 - Fraction(halfwidth))
    iterate = jacobi_iterate_side(W, u, v, w, wprime, vars, r_min)
    box = _cube(vars, halfwidth)
    mm = series_mismatch(lhs, iterate, box)
    return CheckResult.from_mismatch(
        "twisted-jacobi", _inputs(u=u, v=v, w=w),
        vars, window_json(vars, box), mm)


def check_commutator_formula(W, u, v, w, wprime, halfwidth) -> CheckResult:
    """[Y(u,x1), Y(v,x2)]-/+ = Res_x0 of the iterate kernel, exactly."""
    require_semisimple(W, "commutator-formula")
    vars = ("x1", "x2")
    sign = (-1) ** (W.algebra_parity(u) * W.algebra_parity(v))
    lhs = Sum([W.chain(vars, [(0, u), (1, v)], w, wprime),
               scaled(W.chain(vars, [(1, v), (0, u)], w, wprime), -sign)])
    vars3 = ("x0", "x1", "x2")
    # only modes with r >= 0 can meet the x0^{-1} coefficient
    rhs = residue(jacobi_iterate_side(W, u, v, w, wprime, vars3, 0), 0)
    box = _cube(vars, halfwidth)
    mm = series_mismatch(lhs, rhs, box)
    return CheckResult.from_mismatch(
        "commutator-formula", _inputs(u=u, v=v, w=w),
        vars, window_json(vars, box), mm)


def check_g_compatibility(W, u, w: Vec, halfwidth) -> CheckResult:
    """g Y(u,x)w = Y(gu,x) gw and parity additivity, coefficientwise."""
    gu = W.g.apply(u)
    gw = W.g_apply(w)
    pu = W.algebra_parity(u)
    e = -Fraction(halfwidth)
    while e <= halfwidth:
        n = -e - 1
        for k in range(W.log_bound + 1):
            lhs = W.g_apply(W.mode_vec(u, n, k, w))
            rhs = W.mode_vec(gu, n, k, gw)
            if lhs != rhs:
                return CheckResult("g-compatibility", False, _inputs(u=u, w=w),
                                   first_mismatch={"monomial": "x^%s" % e})
            for key in W.mode_vec(u, n, k, w).comps:
                for wkey in w.comps:
                    if W.parity(key) != (pu + W.parity(wkey)) % 2:
                        return CheckResult(
                            "fermion-compatibility", False, _inputs(u=u, w=w),
                            first_mismatch={"monomial": "x^%s" % e})
        e += FH
    return CheckResult("g-compatibility", True, _inputs(u=u, w=w))


def check_equivariance(W, u, w, wprime, halfwidth) -> CheckResult:
    """Branch-shifting <Y(gu,x)w> by one full turn returns <Y(u,x)w>."""
    vars = ("x",)
    gu = W.g.apply(u)
    lhs = branch_shift(W.chain(vars, [(0, gu)], w, wprime), 0, 1)
    rhs = W.chain(vars, [(0, u)], w, wprime)
    box = _cube(vars, halfwidth)
    mm = series_mismatch(lhs, rhs, box)
    return CheckResult.from_mismatch(
        "equivariance", _inputs(u=u, w=w), vars, window_json(vars, box), mm)


def _ceil(x: Fraction) -> int:
    from math import ceil
    return ceil(x)


def check_L_minus1_derivative_W(W, u, w, wprime, halfwidth) -> CheckResult:
    """d/dx <Y(u,x)w> = <Y(L(-1)u,x)w> = <[L(-1), Y(u,x)]w>."""
    vars = ("x",)
    box = _cube(vars, halfwidth)
    dx = derivative(W.chain(vars, [(0, u)], w, wprime), 0)
    lu = W.chain(vars, [(0, W.V.L_minus1(u))], w, wprime)
    mm = series_mismatch(dx, lu, box)
    if mm is not None:
        return CheckResult.from_mismatch(
            "L(-1)-derivative-W", _inputs(u=u, w=w), vars,
            window_json(vars, box), mm)
    # commutator form, compared with vector-valued coefficients
    t_base = W.chain(vars, [(0, u)], w).terms_in(
        box.with_var(0, box.lows[0], box.highs[0] + 1))
    t_dx = derivative(W.chain(vars, [(0, u)], w), 0).terms_in(box)
    t_luw = W.chain(vars, [(0, u)], W.L_minus1(w)).terms_in(box)
    for m in sorted(set(t_dx) | {k for k in t_base if box.contains(k)}
                    | set(t_luw)):
        comm = W.L_minus1(t_base.get(m, Vec.zero())) - t_luw.get(m, Vec.zero())
        want = t_dx.get(m, Vec.zero())
        lhs_v = pair(wprime, comm) if wprime is not None else comm
        rhs_v = pair(wprime, want) if wprime is not None else want
        if lhs_v != rhs_v:
            return CheckResult.from_mismatch(
                "L(-1)-derivative-W", _inputs(u=u, w=w), vars,
                window_json(vars, box), (m, lhs_v, rhs_v))
    return CheckResult("L(-1)-derivative-W", True, _inputs(u=u, w=w),
                       window_json(vars, box))


def check_y0_decomposition(W, u, w, wprime, halfwidth) -> CheckResult:
    """Y(u,x) = (Y)_0(x^{-N}u, x) and Y(u,x) = x^{-N}(Y)_0(u,x)x^{N}, exactly."""
    vars = ("x",)
    cap = W.log_bound
    box = Box.cube(1, -Fraction(halfwidth), Fraction(halfwidth), cap)
    full = _full_me_terms(W, u, w, wprime, box)
    lhs1 = _y0_of_dressed_terms(W, u, w, wprime, box, side="argument")
    for m in sorted(set(full) | set(lhs1), key=lambda m: (m[0], m[1])):
        if full.get(m, _zero_like(wprime)) != lhs1.get(m, _zero_like(wprime)):
            return CheckResult.from_mismatch(
                "log-decomposition-argument", _inputs(u=u, w=w), vars,
                window_json(vars, box), (m, lhs1.get(m), full.get(m)))
    lhs2 = _y0_of_dressed_terms(W, u, w, wprime, box, side="conjugated")
    for m in sorted(set(full) | set(lhs2), key=lambda m: (m[0], m[1])):
        if full.get(m, _zero_like(wprime)) != lhs2.get(m, _zero_like(wprime)):
            return CheckResult.from_mismatch(
                "log-decomposition-conjugated", _inputs(u=u, w=w), vars,
                window_json(vars, box), (m, lhs2.get(m), full.get(m)))
    return CheckResult("log-decomposition", True, _inputs(u=u, w=w),
                       window_json(vars, box))


def _zero_like(wprime):
    return Scalar.zero() if wprime is not None else Vec.zero()


def _full_me_terms(W, u, w, wprime, box):
    return W.chain(("x",), [(0, u)], w, wprime).terms_in(box)


def _y0_of_dressed_terms(W, u, w, wprime, box, side):
    """Terms of (Y)_0(x^{-N}u, x) or x^{-N}(Y)_0(u,x)x^{N} within the box."""
    from .automorphism import nilpotent_power_coeffs
    out = {}
    hw_lo, hw_hi = box.lows[0], box.highs[0]
    if side == "argument":
        parts = nilpotent_power_coeffs(W.g, u)   # N^k u / k!, V side
        for k, part in enumerate(parts):
            sgn = Fraction((-1) ** k)
            e = hw_lo
            while e <= hw_hi:
                vec = W.y0_mode_vec(part.scale(sgn), -e - 1, w)
                if vec:
                    val = pair(wprime, vec) if wprime is not None else vec
                    if not val.is_zero():
                        m = ((e,), (k,))
                        if box.contains(m):
                            out[m] = out.get(m, _zero_like(wprime)) + val
                e += FH
    else:
        # x^{-N} (Y)_0(u, x) x^{N} on the module side
        e = hw_lo
        while e <= hw_hi:
            for k2, wpart in enumerate(_module_n_powers(W, w)):
                vec = W.y0_mode_vec(u, -e - 1, wpart)
                if not vec:
                    continue
                for k1, res in enumerate(_module_n_powers_vec(W, vec)):
                    k = k1 + k2
                    sgn = Fraction((-1) ** k1)
                    val = pair(wprime, res.scale(sgn)) if wprime is not None \
                        else res.scale(sgn)
                    if not val.is_zero():
                        m = ((e,), (k,))
                        if box.contains(m):
                            out[m] = out.get(m, _zero_like(wprime)) + val
            e += FH
    return {m: v for m, v in out.items() if not v.is_zero()}


def _module_n_powers(W, wvec: Vec):
    """[N^k w / k!] on the module; trivial unless the module carries logs."""
    return W.module_nilpotent_coeffs(wvec) if hasattr(W, "module_nilpotent_coeffs") \
        else [wvec]


def _module_n_powers_vec(W, vec: Vec):
    return _module_n_powers(W, vec)


def check_product_polynomiality(W, vs, w, wprime, halfwidth) -> CheckResult:
    """Prefactored k-fold products are Laurent polynomials: exponents confined
    to the grading-predicted interval, verified by a window scan."""
    from .vosa import weak_commutativity_order
    k = len(vs)
    vars = tuple("x%d" % (i + 1) for i in range(k))
    alphas = [W.algebra_alpha(v) for v in vs]
    factors = [W.chain(vars, list(enumerate(vs)), w, wprime)]
    orders = {}
    for i in range(k):
        for j in range(i + 1, k):
            M = max(weak_commutativity_order(W.V, vs[i], vs[j]), 1)
            orders[(i, j)] = M
            factors.append(BinomialKernel(vars, M, i, j))
    for i, al in enumerate(alphas):
        if al:
            factors.append(TermSeries.monomial(
                vars, [al if t == i else 0 for t in range(k)]))
    prod = factors[0]
    for f in factors[1:]:
        prod = Product(f, prod)
    box = _cube(vars, halfwidth)
    terms = prod.terms_in(box)
    wdeg = W._deg_of_vec(w)
    pdeg = W._deg_of_vec(wprime) if wprime is not None else None
    for i in range(k):
        lo = alphas[i] - wdeg - W.V.algebra_weight(vs[i])
        hi = None
        if pdeg is not None:
            hi = alphas[i] + pdeg - W.V.algebra_weight(vs[i]) \
                + sum(orders[tuple(sorted((i, j)))] for j in range(k) if j != i)
        for m in terms:
            e = m[0][i]
            if e < lo or (hi is not None and e > hi):
                return CheckResult(
                    "product-polynomiality", False, _inputs(w=w, k=k),
                    window_json(vars, box),
                    {"monomial": str(m), "variable": vars[i],
                     "bound": "[%s, %s]" % (lo, hi)})
    return CheckResult("product-polynomiality", True, _inputs(w=w, k=k),
                       window_json(vars, box))


def check_permutation_symmetry(W, vs, w, wprime, perm, halfwidth) -> CheckResult:
    """Prefactored products agree under reordering up to the parity sign."""
    from .vosa import weak_commutativity_order
    k = len(vs)
    vars = tuple("x%d" % (i + 1) for i in range(k))
    sign = 1
    for i in range(k):
        for j in range(i + 1, k):
            if perm[i] > perm[j]:
                sign *= (-1) ** (W.algebra_parity(vs[perm[i]])
                                 * W.algebra_parity(vs[perm[j]]))

    def prefactored(order):
        fs = [W.chain(vars, [(order[t], vs[order[t]]) for t in range(k)], w,
                      wprime)]
        for i in range(k):
            for j in range(i + 1, k):
                M = max(weak_commutativity_order(W.V, vs[i], vs[j]), 1)
                fs.append(BinomialKernel(vars, M, i, j))
        for i, v in enumerate(vs):
            al = W.algebra_alpha(v)
            if al:
                fs.append(TermSeries.monomial(
                    vars, [al if t == i else 0 for t in range(k)]))
        out = fs[0]
        for f in fs[1:]:
            out = Product(f, out)
        return out

    box = _cube(vars, halfwidth)
    lhs = prefactored(list(range(k)))
    rhs = scaled(prefactored(list(perm)), Scalar.rational(sign))
    mm = series_mismatch(lhs, rhs, box)
    return CheckResult.from_mismatch(
        "permutation-symmetry", _inputs(w=w, perm=tuple(perm), sign=sign),
        vars, window_json(vars, box), mm)


def _inputs(**kw):
    out = {}
    for k, v in kw.items():
        out[k] = repr(v) if isinstance(v, Vec) else str(v)
    return out
