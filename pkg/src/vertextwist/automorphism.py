"""Automorphisms of free-field algebras and their exact Jordan data.

An automorphism is given by its action on the generator space and extended
multiplicatively to PBW monomials.  Blockwise on each weight space it is
decomposed as g = e^{2 pi i S} e^{K} with S semisimple (acting as a rational
alpha on each generalized eigenspace) and K = 2 pi i N nilpotent, computed by
the finite logarithm series.  K is the stored primitive; N itself only ever
appears multiplied by logs, contributing PI^{-1} factors that the scalar ring
carries exactly.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import NonCyclotomicSpectrum, NotIsometry, NotNilpotent
from .linalg import kernel_basis, mat_eq, mat_identity, mat_mul, solve
from .results import CheckResult
from .scalars import ONE, Scalar, Vec, acc_vec, cyclotomic_level, vec_of
from .vosa import FreeFieldAlgebra

F0 = Fraction(0)
F1 = Fraction(1)

NILPOTENCY_CAP = 24


class Automorphism:
    """Weight- and parity-preserving invertible map given on generators."""

    def __init__(self, V: FreeFieldAlgebra, images: dict, name: str = "g"):
        self.V = V
        self.name = name
        # images: generator name -> Vec over generator keys
        self.images = {V.gens[i].name: images[V.gens[i].name]
                       for i in range(len(V.gens))}
        self._apply_memo = {}
        self._alpha_memo = {}
        self._K_memo = {}
        self._semi_memo = {}
        self._gen_block = None
        self._gen_parts = None
        self._diag_alpha = None

    # -- action ----------------------------------------------------------------

    def apply_key(self, key) -> Vec:
        hit = self._apply_memo.get(key)
        if hit is not None:
            return hit
        if not key:
            out = Vec.basis(key)
        else:
            head, rest = key[0], key[1:]
            gi = self.V.gen_index(head)
            n = self.V.factor_weight(head)
            acc = {}
            rest_img = self.apply_key(rest)
            for gkey, c in self.images[self.V.gens[gi].name].items():
                j = self.V.gen_index(gkey[0])
                made = self._create(j, n, rest_img)
                if made:
                    acc_vec(acc, made, c)
            out = vec_of(acc)
        self._apply_memo[key] = out
        return out

    def _create(self, gidx, magnitude, vec: Vec) -> Vec:
        acc = {}
        spec = -magnitude + self.V.gen_weight(gidx) - 1
        for key, c in vec.items():
            r = self.V.gen_apply(gidx, spec, key)
            if r:
                acc_vec(acc, r, c)
        return vec_of(acc)

    def apply(self, vec: Vec) -> Vec:
        acc = {}
        for key, c in vec.items():
            acc_vec(acc, self.apply_key(key), c)
        return vec_of(acc)

    # -- generator-space eigenstructure -----------------------------------------

    def gen_block(self):
        """Matrix of g on the generator space, columns indexed by generators."""
        if self._gen_block is None:
            r = len(self.V.gens)
            mat = [[Scalar.zero()] * r for _ in range(r)]
            for j in range(r):
                img = self.images[self.V.gens[j].name]
                for gkey, c in img.items():
                    mat[self.V.gen_index(gkey[0])][j] = c
            self._gen_block = mat
        return self._gen_block

    def generator_parts(self):
        """Per generator, its components in the generalized eigenspaces of g."""
        if self._gen_parts is None:
            mat = self.gen_block()
            alphas, columns, col_alpha = _generalized_eigenbasis(mat)
            r = len(mat)
            parts = []
            for i in range(r):
                e = [ONE if t == i else Scalar.zero() for t in range(r)]
                coords = solve([[columns[c][t] for c in range(r)] for t in range(r)], e)
                by_alpha = {}
                for c, x in enumerate(coords):
                    if x.is_zero():
                        continue
                    comp = by_alpha.setdefault(col_alpha[c], [Scalar.zero()] * r)
                    for t in range(r):
                        comp[t] = comp[t] + x * columns[c][t]
                parts.append(sorted(by_alpha.items()))
            self._gen_parts = parts
            # every generator lying in a single generalized eigenspace makes
            # the pointwise alpha decomposition a grading, not an expansion
            diag = []
            for i, p in enumerate(parts):
                if len(p) == 1 and all(
                        (p[0][1][t] == (ONE if t == i else Scalar.zero()))
                        for t in range(r)):
                    diag.append(p[0][0])
                else:
                    diag = None
                    break
            self._diag_alpha = diag
        return self._gen_parts

    def gen_alpha(self, gidx) -> Fraction:
        parts = self.generator_parts()[gidx]
        if len(parts) != 1:
            raise NonCyclotomicSpectrum(
                "generator %s is not in a single generalized eigenspace"
                % self.V.gens[gidx].name)
        return parts[0][0]

    # -- pointwise alpha decomposition and logarithm -----------------------------

    def alpha_decompose_key(self, key) -> dict:
        hit = self._alpha_memo.get(key)
        if hit is not None:
            return hit
        self.generator_parts()
        if self._diag_alpha is not None:
            al = sum((self._diag_alpha[self.V.gen_index(f)] for f in key), F0) % 1
            out = {al: Vec.basis(key)}
        elif not key:
            out = {F0: Vec.basis(key)}
        else:
            head, rest = key[0], key[1:]
            gi = self.V.gen_index(head)
            n = self.V.factor_weight(head)
            out = {}
            for al, comp in self.generator_parts()[gi]:
                for be, wvec in self.alpha_decompose_key(rest).items():
                    made = Vec.zero()
                    for j, c in enumerate(comp):
                        if c.is_zero():
                            continue
                        r = self._create(j, n, wvec)
                        if r:
                            made = made + r.scale(c)
                    if made:
                        tot = (al + be) % 1
                        out[tot] = out.get(tot, Vec.zero()) + made
        self._alpha_memo[key] = out
        return out

    def alpha_decompose(self, vec: Vec) -> dict:
        out = {}
        for key, c in vec.items():
            for al, part in self.alpha_decompose_key(key).items():
                p = part.scale(c)
                if p:
                    out[al] = out.get(al, Vec.zero()) + p
        return {al: v for al, v in out.items() if v}

    def coset_of(self, vec: Vec) -> frozenset:
        return frozenset(self.alpha_decompose(vec))

    def scale_by_alpha(self, vec: Vec, fn) -> Vec:
        out = Vec.zero()
        for al, part in self.alpha_decompose(vec).items():
            out = out + part.scale(fn(al))
        return out

    def semisimple_exp(self, vec: Vec, sign: int = 1) -> Vec:
        """e^{+-2 pi i S_g} applied pointwise."""
        self.generator_parts()
        if self._diag_alpha is not None and not any(self._diag_alpha):
            return vec
        memo = self._semi_memo
        acc = {}
        for key, c in vec.items():
            hit = memo.get((key, sign))
            if hit is None:
                hit = Vec.zero()
                for al, part in self.alpha_decompose_key(key).items():
                    hit = hit + part.scale(Scalar.e(2 * sign * al))
                memo[(key, sign)] = hit
            acc_vec(acc, hit, c)
        return vec_of(acc)

    def K_apply(self, vec: Vec) -> Vec:
        """K = 2 pi i N_g, the nilpotent logarithm, applied pointwise."""
        acc = {}
        for key, c in vec.items():
            hit = self._K_memo.get(key)
            if hit is None:
                hit = self._K_key(key)
                self._K_memo[key] = hit
            acc_vec(acc, hit, c)
        return vec_of(acc)

    def _K_key(self, key) -> Vec:
        out = Vec.zero()
        cur = Vec.basis(key)
        j = 1
        while True:
            cur = self.semisimple_exp(self.apply(cur), sign=-1) - cur
            if not cur:
                return out
            if j > NILPOTENCY_CAP:
                raise NotNilpotent("log series did not terminate")
            out = out + cur.scale(Fraction((-1) ** (j + 1), j))
            j += 1

    def unipotent_exp(self, vec: Vec) -> Vec:
        """e^{2 pi i N_g} = e^{K} applied pointwise."""
        from math import factorial
        out = Vec.zero()
        cur = vec
        j = 0
        while cur:
            out = out + cur.scale(Fraction(1, factorial(j)))
            cur = self.K_apply(cur)
            j += 1
            if j > NILPOTENCY_CAP:
                raise NotNilpotent("exponential series did not terminate")
        return out


def parity_automorphism(V) -> Automorphism:
    images = {g.name: Vec.basis(V.gen_key(i)).scale(Scalar.rational((-1) ** g.parity))
              for i, g in enumerate(V.gens)}
    return Automorphism(V, images, name="parity")


def orthogonal_automorphism(V, matrix, name="g") -> Automorphism:
    """Automorphism of a Heisenberg algebra from a Gram-preserving matrix."""
    r = len(V.gens)
    cols = [[_as_scalar(matrix[i][j]) for i in range(r)] for j in range(r)]
    # exact isometry check: M^T G M = G
    m = [[_as_scalar(matrix[i][j]) for j in range(r)] for i in range(r)]
    g = [[Scalar.rational(V.gram[i][j]) for j in range(r)] for i in range(r)]
    mt = [[m[j][i] for j in range(r)] for i in range(r)]
    if not mat_eq(mat_mul(mat_mul(mt, g), m), g):
        raise NotIsometry("matrix does not preserve the Gram form")
    images = {V.gens[j].name: Vec({V.gen_key(i): c for i, c in enumerate(cols[j])
                                   if not c.is_zero()})
              for j in range(r)}
    return Automorphism(V, images, name=name)


def identity_automorphism(V) -> Automorphism:
    images = {g.name: Vec.basis(V.gen_key(i)) for i, g in enumerate(V.gens)}
    return Automorphism(V, images, name="id")


def _as_scalar(x) -> Scalar:
    return x if isinstance(x, Scalar) else Scalar.rational(Fraction(x))


# ---------------------------------------------------------------------------
# blockwise Jordan decomposition
# ---------------------------------------------------------------------------

def _alpha_candidates():
    m = 2 * cyclotomic_level()
    return [Fraction(j, m) for j in range(m)]


def _generalized_eigenbasis(mat):
    """(sorted alphas, list of basis columns, alpha per column) for a block."""
    d = len(mat)
    found, columns, col_alpha = [], [], []
    total = 0
    for al in _alpha_candidates():
        shifted = [[mat[i][j] - (Scalar.e(2 * al) if i == j else Scalar.zero())
                    for j in range(d)] for i in range(d)]
        if not kernel_basis(shifted):
            continue   # not an eigenvalue, no generalized eigenspace
        power = mat_identity(d)
        for _ in range(d):
            power = mat_mul(power, shifted)
        ker = kernel_basis(power)
        if ker:
            found.append(al)
            for v in ker:
                columns.append(v)
                col_alpha.append(al)
            total += len(ker)
        if total == d:
            break
    if total != d:
        raise NonCyclotomicSpectrum(
            "eigenvalues are not roots of unity of order dividing %d"
            % (2 * cyclotomic_level()))
    return found, columns, col_alpha


class BlockJordan:
    """S and K = 2 pi i N matrices of one weight block, plus its spectrum."""

    def __init__(self, basis, gmat):
        self.basis = basis
        self.g = gmat
        d = len(gmat)
        alphas, columns, col_alpha = _generalized_eigenbasis(gmat)
        self.alphas = alphas
        C = [[columns[c][i] for c in range(d)] for i in range(d)]
        Cinv = _mat_inverse(C)
        diag = lambda vals: [[vals[j] if i == j else Scalar.zero()
                              for j in range(d)] for i in range(d)]
        self.S = mat_mul(mat_mul(C, diag([Scalar.rational(a) for a in col_alpha])),
                         Cinv)
        semi_inv = mat_mul(mat_mul(C, diag([Scalar.e(-2 * a) for a in col_alpha])),
                           Cinv)
        T = mat_mul(semi_inv, gmat)
        self.K = _nilpotent_log_matrix(T)
        self.nilpotency_index = _nilpotency_index(self.K)
        semi = mat_mul(mat_mul(C, diag([Scalar.e(2 * a) for a in col_alpha])), Cinv)
        if not mat_eq(mat_mul(semi, _mat_exp(self.K)), gmat):
            raise NonCyclotomicSpectrum("exp(2 pi i (S+N)) failed to reproduce g")


def _mat_inverse(mat):
    d = len(mat)
    cols = []
    for j in range(d):
        e = [ONE if i == j else Scalar.zero() for i in range(d)]
        x = solve([row[:] for row in mat], e)
        if x is None:
            raise NonCyclotomicSpectrum("singular change of basis")
        cols.append(x)
    return [[cols[j][i] for j in range(d)] for i in range(d)]


def _nilpotent_log_matrix(T):
    d = len(T)
    A = [[T[i][j] - (ONE if i == j else Scalar.zero()) for j in range(d)]
         for i in range(d)]
    out = [[Scalar.zero()] * d for _ in range(d)]
    power = mat_identity(d)
    for j in range(1, d + 1):
        power = mat_mul(power, A)
        if all(x.is_zero() for row in power for x in row):
            return out
        out = [[o + p * Fraction((-1) ** (j + 1), j) for o, p in zip(ro, rp)]
               for ro, rp in zip(out, power)]
    if not all(x.is_zero() for row in mat_mul(power, A) for x in row):
        raise NotNilpotent("unipotent part is not nilpotent on the block")
    return out


def _nilpotency_index(K) -> int:
    d = len(K)
    power = mat_identity(d)
    for j in range(0, d + 2):
        if all(x.is_zero() for row in power for x in row):
            return j
        power = mat_mul(power, K)
    raise NotNilpotent("no nilpotency index within block dimension")


def _mat_exp(K):
    from math import factorial
    d = len(K)
    out = mat_identity(d)
    power = mat_identity(d)
    for j in range(1, d + 2):
        power = mat_mul(power, K)
        if all(x.is_zero() for row in power for x in row):
            return out
        out = [[o + p * Fraction(1, factorial(j)) for o, p in zip(ro, rp)]
               for ro, rp in zip(out, power)]
    return out


class JordanData:
    def __init__(self, blocks: dict, spectrum):
        self.blocks = blocks
        self.spectrum = sorted(spectrum)

    def to_json(self):
        return {
            "spectrum": [str(a) for a in self.spectrum],
            "blocks": {str(w): {
                "dim": len(b.basis),
                "nilpotency_index": b.nilpotency_index,
                "K": [[repr(x) for x in row] for row in b.K],
            } for w, b in sorted(self.blocks.items())},
        }


def jordan_decompose(g: Automorphism, weight_cutoff) -> JordanData:
    """Blockwise S_g, N_g and the spectrum P_V up to the weight cutoff."""
    V = g.V
    blocks = {}
    spectrum = set()
    by_weight = {}
    for key in V.basis(weight_cutoff):
        by_weight.setdefault(V.weight(key), []).append(key)
    for w, keys in sorted(by_weight.items()):
        mat = [[Scalar.zero() for _ in keys] for _ in keys]
        index = {k: i for i, k in enumerate(keys)}
        for j, k in enumerate(keys):
            img = g.apply_key(k)
            for kk, c in img.items():
                mat[index[kk]][j] = c
        blk = BlockJordan(keys, mat)
        blocks[w] = blk
        spectrum.update(blk.alphas)
    return JordanData(blocks, spectrum)


# ---------------------------------------------------------------------------
# property checks
# ---------------------------------------------------------------------------

def check_homomorphism(V, fn, weight_cutoff, halfwidth=3) -> CheckResult:
    """fn(u_(n) v) = fn(u)_(n) fn(v) on all basis pairs and window modes."""
    basis = V.basis(weight_cutoff)
    for u in basis:
        fu = fn(Vec.basis(u))
        for v in basis:
            fv = fn(Vec.basis(v))
            for e in range(-halfwidth, halfwidth + 1):
                n = -e - 1
                lhs = fn(V.mode_apply(u, n, v))
                rhs = V.mode_vec(fu, n, 0, fv)
                if lhs != rhs:
                    return CheckResult("automorphism-homomorphism", False,
                                       {"u": str(u), "v": str(v)},
                                       first_mismatch={"monomial": "x^%d" % e})
    return CheckResult("automorphism-homomorphism", True,
                       {"basis": len(basis), "halfwidth": halfwidth})


def check_derivation(V, g: Automorphism, weight_cutoff, halfwidth=6) -> CheckResult:
    """[K, Y(u,x)]v = Y(Ku,x)v with K = 2 pi i N_g, coefficientwise."""
    basis = V.basis(weight_cutoff)
    for u in basis:
        Ku = g.K_apply(Vec.basis(u))
        for v in basis:
            Kv = g.K_apply(Vec.basis(v))
            for e in range(-halfwidth, halfwidth + 1):
                n = -e - 1
                unv = V.mode_apply(u, n, v)
                lhs = g.K_apply(unv) - V.mode_vec(Vec.basis(u), n, 0, Kv)
                rhs = V.mode_vec(Ku, n, 0, Vec.basis(v))
                if lhs != rhs:
                    return CheckResult("nilpotent-derivation", False,
                                       {"u": str(u), "v": str(v)},
                                       first_mismatch={"monomial": "x^%d" % e})
    return CheckResult("nilpotent-derivation", True,
                       {"basis": len(basis), "halfwidth": halfwidth})


def nilpotent_power_coeffs(g: Automorphism, vec: Vec):
    """[N^k v / k!] for k = 0,1,... until zero; the (log x)^k coefficients of x^N v."""
    half = Scalar.pi(-1) * Fraction(1, 2)   # N = K/(2 PI)
    out = [vec]
    cur = vec
    k = 1
    while True:
        cur = g.K_apply(cur).scale(half * Fraction(1, k))
        if not cur:
            return out
        out.append(cur)
        k += 1
        if k > NILPOTENCY_CAP:
            raise NotNilpotent("x^N expansion did not terminate")


def check_conjugation(V, g: Automorphism, weight_cutoff, halfwidth=6) -> CheckResult:
    """x0^{N} Y(u,x) v = Y(x0^{N} u, x) x0^{N} v, exactly in x, log x0 and PI."""
    basis = V.basis(weight_cutoff)
    for u in basis:
        nu = nilpotent_power_coeffs(g, Vec.basis(u))
        for v in basis:
            nv = nilpotent_power_coeffs(g, Vec.basis(v))
            for e in range(-halfwidth, halfwidth + 1):
                n = -e - 1
                lhs_base = nilpotent_power_coeffs(g, V.mode_apply(u, n, v))
                kmax = max(len(lhs_base), len(nu) + len(nv)) - 1
                for k in range(kmax + 1):
                    lhs = lhs_base[k] if k < len(lhs_base) else Vec.zero()
                    rhs = Vec.zero()
                    for k1 in range(min(k, len(nu) - 1) + 1):
                        k2 = k - k1
                        if k2 >= len(nv):
                            continue
                        rhs = rhs + V.mode_vec(nu[k1], n, 0, nv[k2])
                    if lhs != rhs:
                        return CheckResult(
                            "nilpotent-conjugation", False,
                            {"u": str(u), "v": str(v)},
                            first_mismatch={"monomial": "x^%d*log(x0)^%d" % (e, k)})
    return CheckResult("nilpotent-conjugation", True,
                       {"basis": len(basis), "halfwidth": halfwidth})
