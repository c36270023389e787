"""Exact linear algebra over the rationals and the cyclotomic field."""

from __future__ import annotations

from fractions import Fraction

from .scalars import ONE, Scalar, cyclotomic_level

F0 = Fraction(0)
F1 = Fraction(1)


# -- rational matrices -------------------------------------------------------

def fraction_matrix_inverse(rows):
    """Invert a square matrix of Fractions by Gauss-Jordan; None if singular."""
    n = len(rows)
    a = [[Fraction(x) for x in r] + [F1 if i == j else F0 for j in range(n)]
         for i, r in enumerate(rows)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


# -- cyclotomic arithmetic ---------------------------------------------------

def _scalar_to_poly(s: Scalar):
    """Coefficients of s on the basis zeta^k, zeta = e(1/M), for pi-free s."""
    m = cyclotomic_level()
    out = [F0] * m
    for (p, k), c in s.terms.items():
        if p != 0:
            raise ValueError("scalar involves PI, not a cyclotomic number: %r" % s)
        out[k] += c
    return out


def _poly_to_scalar(coeffs) -> Scalar:
    m = cyclotomic_level()
    out = Scalar.zero()
    for k, c in enumerate(coeffs):
        if c:
            out = out + Scalar.e(Fraction(k, m)) * c
    return out


def _poly_divmod(a, b):
    a = list(a)
    db = max(i for i, c in enumerate(b) if c)
    q = [F0] * (max(len(a) - db, 1))
    for i in range(len(a) - 1, db - 1, -1):
        if a[i]:
            f = a[i] / b[db]
            q[i - db] = f
            for j in range(db + 1):
                a[i - db + j] -= f * b[j]
    return q, a[:db] or [F0]


def _poly_mul(a, b):
    out = [F0] * (len(a) + len(b) - 1 or 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return out


def _poly_sub(a, b):
    n = max(len(a), len(b))
    a = a + [F0] * (n - len(a))
    b = b + [F0] * (n - len(b))
    return [x - y for x, y in zip(a, b)]


def _trim(a):
    while len(a) > 1 and not a[-1]:
        a = a[:-1]
    return a


def cyclo_inverse(s: Scalar) -> Scalar:
    """Inverse in Q(zeta_2M) via extended Euclid mod x^M + 1 (irreducible for M a power of two)."""
    if s.is_rational():
        r = s.as_rational()
        if not r:
            raise ZeroDivisionError("cyclotomic inverse of zero")
        return Scalar.rational(1 / r)
    m = cyclotomic_level()
    modulus = [F1] + [F0] * (m - 1) + [F1]
    old_r, r = _trim(_scalar_to_poly(s)), modulus
    old_t, t = [F1], [F0]
    while any(r):
        q, rem = _poly_divmod(old_r, r)
        old_r, r = r, _trim(rem)
        old_t, t = t, _trim(_poly_sub(old_t, _poly_mul(q, t)))
    if _trim(old_r) == [F0] or max(i for i, c in enumerate(old_r) if c) != 0:
        raise ZeroDivisionError("not invertible mod x^M+1: %r" % s)
    res = [c / old_r[0] for c in old_t]
    _, res = _poly_divmod(res, modulus)
    res = res + [F0] * (m - len(res))
    return _poly_to_scalar(res[:m])


# -- matrices over Scalar ----------------------------------------------------

def mat_vec(mat, vec):
    return [sum((m * v for m, v in zip(row, vec) if not (m.is_zero() or v.is_zero())),
                Scalar.zero()) for row in mat]


def mat_mul(a, b):
    n, k, m = len(a), len(b), len(b[0])
    out = [[Scalar.zero()] * m for _ in range(n)]
    for i in range(n):
        for t in range(k):
            x = a[i][t]
            if x.is_zero():
                continue
            for j in range(m):
                if not b[t][j].is_zero():
                    out[i][j] = out[i][j] + x * b[t][j]
    return out


def mat_identity(n):
    return [[ONE if i == j else Scalar.zero() for j in range(n)] for i in range(n)]


def mat_add(a, b, sb=1):
    c = Scalar.rational(sb)
    return [[x + y * c for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(a, c):
    return [[x * c for x in row] for row in a]


def mat_eq(a, b):
    return all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def kernel_basis(mat):
    """Basis of the kernel of a Scalar matrix, by exact Gaussian elimination."""
    if not mat:
        return []
    rows = [list(r) for r in mat]
    n, m = len(rows), len(rows[0])
    pivots = []
    r = 0
    for col in range(m):
        piv = next((i for i in range(r, n) if not rows[i][col].is_zero()), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = cyclo_inverse(rows[r][col])
        rows[r] = [x * inv for x in rows[r]]
        for i in range(n):
            if i != r and not rows[i][col].is_zero():
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == n:
            break
    free = [c for c in range(m) if c not in pivots]
    out = []
    for fc in free:
        v = [Scalar.zero()] * m
        v[fc] = ONE
        for i, pc in enumerate(pivots):
            v[pc] = -rows[i][fc]
        out.append(v)
    return out


def solve(mat, rhs):
    """Solve mat * x = rhs over the cyclotomic field; None if inconsistent."""
    n, m = len(mat), len(mat[0])
    rows = [list(r) + [rhs[i]] for i, r in enumerate(mat)]
    pivots = []
    r = 0
    for col in range(m):
        piv = next((i for i in range(r, n) if not rows[i][col].is_zero()), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = cyclo_inverse(rows[r][col])
        rows[r] = [x * inv for x in rows[r]]
        for i in range(n):
            if i != r and not rows[i][col].is_zero():
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    for i in range(r, n):
        if not rows[i][m].is_zero():
            return None
    x = [Scalar.zero()] * m
    for i, pc in enumerate(pivots):
        x[pc] = rows[i][m]
    return x
