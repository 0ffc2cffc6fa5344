"""Dense exact linear algebra over Q(l) for 3x3 matrices and 3-vectors.

Matrices are immutable tuples of row tuples of QuadRat; vectors are
3-tuples of QuadRat.  Everything is exact.
"""

from __future__ import annotations

from .qlambda import QuadRat, ZERO, ONE

Vec = tuple
Mat = tuple


def qr(x) -> QuadRat:
    return x if isinstance(x, QuadRat) else QuadRat(x)


def vec(*coords) -> Vec:
    if len(coords) == 1 and isinstance(coords[0], (tuple, list)):
        coords = coords[0]
    return tuple(qr(c) for c in coords)


def mat(rows) -> Mat:
    return tuple(tuple(qr(x) for x in row) for row in rows)


def identity(n: int = 3) -> Mat:
    return tuple(tuple(ONE if i == j else ZERO for j in range(n))
                 for i in range(n))


def mat_mul(a: Mat, b: Mat) -> Mat:
    n, m, k = len(a), len(b[0]), len(b)
    return tuple(
        tuple(sum((a[i][t] * b[t][j] for t in range(k)), ZERO)
              for j in range(m))
        for i in range(n)
    )


def mat_vec(a: Mat, x: Vec) -> Vec:
    return tuple(sum((a[i][t] * x[t] for t in range(len(x))), ZERO)
                 for i in range(len(a)))


def mat_scale(c, a: Mat) -> Mat:
    c = qr(c)
    return tuple(tuple(c * x for x in row) for row in a)


def mat_sub(a: Mat, b: Mat) -> Mat:
    return tuple(tuple(x - y for x, y in zip(ra, rb))
                 for ra, rb in zip(a, b))


def mat_add(a: Mat, b: Mat) -> Mat:
    return tuple(tuple(x + y for x, y in zip(ra, rb))
                 for ra, rb in zip(a, b))


def transpose(a: Mat) -> Mat:
    return tuple(zip(*a))


def conj_transpose(a: Mat) -> Mat:
    return tuple(tuple(a[j][i].conj() for j in range(len(a)))
                 for i in range(len(a[0])))


def det3(a: Mat) -> QuadRat:
    return (
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    )


def adjugate3(a: Mat) -> Mat:
    def cof(i, j):
        r = [k for k in range(3) if k != i]
        c = [k for k in range(3) if k != j]
        minor = a[r[0]][c[0]] * a[r[1]][c[1]] - a[r[0]][c[1]] * a[r[1]][c[0]]
        return minor if (i + j) % 2 == 0 else -minor

    return tuple(tuple(cof(j, i) for j in range(3)) for i in range(3))


def inv3(a: Mat) -> Mat:
    d = det3(a)
    if not d:
        raise ZeroDivisionError("singular matrix")
    return tuple(tuple(x / d for x in row) for row in adjugate3(a))


def mat_pow(a: Mat, k: int) -> Mat:
    if k < 0:
        return mat_pow(inv3(a), -k)
    out = identity(len(a))
    base = a
    while k:
        if k & 1:
            out = mat_mul(out, base)
        base = mat_mul(base, base)
        k >>= 1
    return out


def solve3(a: Mat, x: Vec) -> Vec:
    return mat_vec(inv3(a), x)


def kernel3(a: Mat) -> list[Vec]:
    """Basis of the nullspace of a 3x3 matrix, by exact Gauss elimination."""
    rows = [list(r) for r in a]
    n = 3
    pivots = []
    col = 0
    r = 0
    while r < n and col < n:
        piv = next((i for i in range(r, n) if rows[i][col]), None)
        if piv is None:
            col += 1
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = ONE / rows[r][col]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(n):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        col += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [ZERO] * n
        v[f] = ONE
        for i, c in enumerate(pivots):
            v[c] = -rows[i][f]
        basis.append(tuple(v))
    return basis


def mat_eq(a: Mat, b: Mat) -> bool:
    return all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def columns(a: Mat) -> list[Vec]:
    return [tuple(a[i][j] for i in range(len(a))) for j in range(len(a[0]))]


def from_columns(cols) -> Mat:
    return tuple(tuple(col[i] for col in cols) for i in range(len(cols[0])))
