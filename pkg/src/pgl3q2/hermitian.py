"""Rank-3 Hermitian O-lattices: the unimodular lattice L, its determinant-7
sublattice M, vector enumeration, reflections, frames and isometry groups.

Vectors live in Q(l)^3 with the sesquilinear pairing

    <x, y> = form_scale * sum_i x_i * conj(y_i),

form_scale being 1/2 for the L family and 1 for plain O^3 models.  A lattice
is given by an ordered basis of three vectors.  All arithmetic is exact;
short-vector enumeration uses floating bounds only to cut the search box,
and every candidate is confirmed exactly before it is reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .linalg import (
    Mat,
    Vec,
    columns,
    from_columns,
    inv3,
    mat,
    mat_mul,
    mat_vec,
    vec,
)
from .qlambda import LAM, LBAR, ONE, QuadInt, QuadRat, THETA, ZERO

__all__ = [
    "HermLattice",
    "Frame",
    "Hyperplane",
    "lattice_L",
    "lattice_M",
    "lattice_O3",
    "S_VEC",
    "in_L",
    "in_M",
    "frames",
    "norm7_decompose",
    "index7_sublattices",
    "superlattices",
    "m_copies_in_L",
    "find_isometry",
    "lattice_equal",
    "recognize_isometry_group",
    "theta_residue",
]

_ENUM_SLACK = 1e-6


def _vec_key(v: Vec):
    return tuple((c.num.a, c.num.b, c.den) for c in v)


class HermLattice:
    """An O-lattice in Q(l)^3 with a scaled standard Hermitian form."""

    def __init__(self, basis, form_scale=Fraction(1, 2)):
        self.basis = tuple(vec(b) for b in basis)
        if len(self.basis) != 3:
            raise ValueError("need exactly 3 basis vectors")
        self.form_scale = QuadRat(form_scale) if not isinstance(
            form_scale, QuadRat) else form_scale
        self._basis_mat = from_columns(self.basis)
        from .linalg import det3
        if not det3(self._basis_mat):
            raise ValueError("basis is linearly dependent")
        self._basis_inv = inv3(self._basis_mat)
        g = self.gram()
        for i in range(3):
            if not g[i][i].is_rational():
                raise ValueError("gram diagonal must be rational")
            for j in range(3):
                if g[i][j] != g[j][i].conj():
                    raise ValueError("gram matrix is not Hermitian")
        self._isoms = None
        self._pivots = None
        self._norm_cache = {}
        self._frames = None

    # -- the form ----------------------------------------------------------

    def inner(self, x, y) -> QuadRat:
        x, y = vec(x), vec(y)
        s = ZERO
        for a, b in zip(x, y):
            s = s + a * b.conj()
        return self.form_scale * s

    def norm(self, x) -> Fraction:
        return self.inner(x, x).rational()

    def gram(self) -> Mat:
        return tuple(tuple(self.inner(bi, bj) for bj in self.basis)
                     for bi in self.basis)

    def det(self):
        from .linalg import det3
        d = det3(self.gram()).rational()
        return int(d) if d.denominator == 1 else d

    # -- membership --------------------------------------------------------

    def coords(self, x) -> Vec:
        """Coordinates of x on the basis, as exact field elements."""
        return mat_vec(self._basis_inv, vec(x))

    def contains(self, x) -> bool:
        return all(c.is_integral() for c in self.coords(x))

    # -- enumeration ---------------------------------------------------------

    def _rank6_gram(self):
        """Gram matrix of the underlying rank-6 Z-lattice with basis
        b1, l*b1, b2, l*b2, b3, l*b3, for the rational quadratic form
        q(x) = <x, x>."""
        base6 = []
        for b in self.basis:
            base6.append(b)
            base6.append(tuple(LAM * c for c in b))
        S = [[Fraction(0)] * 6 for _ in range(6)]
        for p in range(6):
            for q in range(p, 6):
                ip = self.inner(base6[p], base6[q])
                # trace form: (<u,v> + <v,u>)/2 is rational
                tr = ip + ip.conj()
                S[p][q] = S[q][p] = tr.rational() / 2
        return base6, S

    def _ldl_pivots(self):
        if self._pivots is None:
            _, S = self._rank6_gram()
            C = [row[:] for row in S]
            piv = []
            for i in range(6):
                piv.append(C[i][i])
                if C[i][i] <= 0:
                    break
                for j in range(i + 1, 6):
                    for k in range(j, 6):
                        C[j][k] -= C[i][j] * C[i][k] / C[i][i]
                        C[k][j] = C[j][k]
            self._pivots = piv
        return self._pivots

    def is_positive_definite(self) -> bool:
        piv = self._ldl_pivots()
        return len(piv) == 6 and all(p > 0 for p in piv)

    def enumerate_norm(self, n) -> list[Vec]:
        """All lattice vectors of norm exactly n, via bounded box search on
        the rank-6 form with exact confirmation."""
        if n < 0:
            raise ValueError("norm must be nonnegative")
        if not self.is_positive_definite():
            raise ValueError("form is not positive definite")
        if n == 0:
            return [vec(0, 0, 0)]
        key = Fraction(n)
        if key in self._norm_cache:
            return self._norm_cache[key]
        base6, S = self._rank6_gram()
        Sf = [[float(x) for x in row] for row in S]
        # floating LDL: q(z) = sum_i d[i] * (z_i + sum_{j>i} u[i][j] z_j)^2
        d = [0.0] * 6
        u = [[0.0] * 6 for _ in range(6)]
        C = [row[:] for row in Sf]
        for i in range(6):
            d[i] = C[i][i]
            for j in range(i + 1, 6):
                u[i][j] = C[i][j] / d[i]
            for j in range(i + 1, 6):
                for k in range(j, 6):
                    C[j][k] -= C[i][j] * C[i][k] / d[i]
                    C[k][j] = C[j][k]
        bound = float(n) + _ENUM_SLACK
        target = Fraction(n)
        out = []
        z = [0] * 6

        def exact_norm():
            total = Fraction(0)
            for i in range(6):
                if z[i]:
                    total += S[i][i] * z[i] * z[i]
                    for j in range(i + 1, 6):
                        if z[j]:
                            total += 2 * S[i][j] * z[i] * z[j]
            return total

        def descend(i, rem):
            if i < 0:
                if any(z) and exact_norm() == target:
                    c = [QuadRat(QuadInt(z[2 * t], z[2 * t + 1]))
                         for t in range(3)]
                    x = tuple(
                        c[0] * self.basis[0][k]
                        + c[1] * self.basis[1][k]
                        + c[2] * self.basis[2][k]
                        for k in range(3))
                    out.append(x)
                return
            center = sum(u[i][j] * z[j] for j in range(i + 1, 6))
            radius = math.sqrt(max(rem, 0.0) / d[i]) + _ENUM_SLACK
            lo = math.ceil(-radius - center)
            hi = math.floor(radius - center)
            for zi in range(lo, hi + 1):
                z[i] = zi
                step = d[i] * (zi + center) ** 2
                descend(i - 1, rem - step)
            z[i] = 0

        descend(5, bound)
        out.sort(key=_vec_key)
        self._norm_cache[key] = out
        return out

    # -- reflections and isometries -----------------------------------------

    def reflect(self, r, x) -> Vec:
        """Reflection of x in the hyperplane orthogonal to r."""
        r, x = vec(r), vec(x)
        rr = self.inner(r, r)
        if not rr:
            raise ValueError("cannot reflect in an isotropic vector")
        c = (self.inner(x, r) / rr) * 2
        return tuple(xi - c * ri for xi, ri in zip(x, r))

    def isometry_group(self) -> list[Mat]:
        """The full finite isometry group as ambient matrices, found by
        backtracking over images of the basis vectors."""
        if self._isoms is not None:
            return self._isoms
        G = self.gram()
        cand = [self.enumerate_norm(self.norm(b)) for b in self.basis]
        order = sorted(range(3), key=lambda i: len(cand[i]))
        found = []
        assigned = []  # list of (basis index, image vector)

        def backtrack(step):
            if step == 3:
                images = [None] * 3
                for idx, w in assigned:
                    images[idx] = w
                T = mat_mul(from_columns(images), self._basis_inv)
                found.append(T)
                return
            i = order[step]
            for w in cand[i]:
                ok = True
                for j, wj in assigned:
                    if self.inner(w, wj) != G[i][j]:
                        ok = False
                        break
                if ok:
                    assigned.append((i, w))
                    backtrack(step + 1)
                    assigned.pop()

        backtrack(0)
        found.sort(key=lambda T: tuple(_vec_key(row) for row in T))
        self._isoms = found
        return found

    def matrix_on_basis(self, T: Mat) -> Mat:
        """Rewrite an ambient isometry matrix on this lattice's basis."""
        return mat_mul(self._basis_inv, mat_mul(T, self._basis_mat))

    def is_isometry(self, T: Mat) -> bool:
        imgs = [mat_vec(T, b) for b in self.basis]
        if any(not self.contains(w) for w in imgs):
            return False
        G = self.gram()
        for i in range(3):
            for j in range(3):
                if self.inner(imgs[i], imgs[j]) != G[i][j]:
                    return False
        return True

    def __repr__(self):
        return f"HermLattice(det={self.det()}, scale={self.form_scale!r})"


# -- the concrete lattices ---------------------------------------------------

S_VEC = vec(LAM, -(LAM ** 2), LAM ** 3)


@lru_cache(maxsize=None)
def lattice_L() -> HermLattice:
    """The unimodular lattice: vectors of O^3 with all coordinates congruent
    mod lbar and coordinate sum divisible by l, under half the standard
    form."""
    return HermLattice([(2, 0, 0), (LBAR, LBAR, 0), (LAM, 1, 1)])


@lru_cache(maxsize=None)
def lattice_M() -> HermLattice:
    """The determinant-7 sublattice of L cut out by <x, s> = 0 mod theta,
    s the norm-7 vector S_VEC."""
    e1 = (-(LBAR ** 2), -LBAR, 0)
    e2 = (LAM, LAM, LAM)
    e3 = (1, LAM ** 2, -1)
    return HermLattice([e1, e2, e3])


@lru_cache(maxsize=None)
def lattice_O3() -> HermLattice:
    """O^3 with the unscaled standard form (the norm-1-vector model)."""
    return HermLattice([(1, 0, 0), (0, 1, 0), (0, 0, 1)], form_scale=1)


def in_L(x) -> bool:
    """Membership in L; input coordinates must lie in O."""
    x = vec(x)
    ints = []
    for c in x:
        if not c.is_integral():
            raise ValueError("in_L wants integral coordinates")
        ints.append(c.quadint())
    lbar = LBAR.quadint()
    lam = LAM.quadint()
    if lbar.divides(ints[0] - ints[1]) is None:
        return False
    if lbar.divides(ints[1] - ints[2]) is None:
        return False
    return lam.divides(ints[0] + ints[1] + ints[2]) is not None


def in_M(x) -> bool:
    """Membership in M = {x in L : theta | <x, s>}."""
    x = vec(x)
    if not all(c.is_integral() for c in x):
        return False
    if not in_L(x):
        return False
    ip = lattice_L().inner(x, S_VEC)
    return THETA.quadint().divides(ip.quadint()) is not None


# -- frames ------------------------------------------------------------------

@dataclass(frozen=True)
class Frame:
    """Six roots of L forming three antipodal mutually orthogonal pairs,
    all congruent mod l."""

    roots: tuple
    residue: tuple


def _lambda_residue(lat: HermLattice, x) -> tuple:
    return tuple(c.quadint().a % 2 for c in lat.coords(x))


def frames(lat: HermLattice) -> list[Frame]:
    """Partition of the 42 roots into 7 frames by their class mod l."""
    if lat._frames is not None:
        return lat._frames
    roots = lat.enumerate_norm(2)
    if len(roots) != 42 or lat.det() != 1:
        raise ValueError("frames are defined for the unimodular root lattice")
    buckets = {}
    for r in roots:
        buckets.setdefault(_lambda_residue(lat, r), []).append(r)
    out = []
    for key in sorted(buckets):
        group = sorted(buckets[key], key=_vec_key)
        if len(group) != 6:
            raise AssertionError("frame of unexpected size")
        out.append(Frame(tuple(group), key))
    lat._frames = out
    return out


def frame_of(lat: HermLattice, x) -> Frame:
    key = _lambda_residue(lat, x)
    for f in frames(lat):
        if f.residue == key:
            return f
    raise ValueError("vector lies in l*L, no frame")


def norm7_decompose(lat: HermLattice, x):
    """The unique ordered triple (e, e', e'') of mutually orthogonal roots
    of x's frame with lbar * x = e + l e' + l^2 e''."""
    x = vec(x)
    if lat.norm(x) != 7:
        raise ValueError("norm7_decompose wants a norm-7 vector")
    fr = frame_of(lat, x)
    target = tuple(LBAR * c for c in x)
    matches = []
    for e in fr.roots:
        for e1 in fr.roots:
            if lat.inner(e, e1) != ZERO:
                continue
            for e2 in fr.roots:
                if lat.inner(e, e2) != ZERO or lat.inner(e1, e2) != ZERO:
                    continue
                s = tuple(a + LAM * b + (LAM * LAM) * c
                          for a, b, c in zip(e, e1, e2))
                if s == target:
                    matches.append((e, e1, e2))
    if len(matches) != 1:
        raise AssertionError(f"expected a unique decomposition, got {len(matches)}")
    return matches[0]


# -- index-7 sublattices and unimodular superlattices -------------------------

def theta_residue(c: QuadInt) -> int:
    """Reduction of O -> O/theta = F_7 (l maps to 3)."""
    return (c.a + 3 * c.b) % 7


def theta_residue_vec(lat: HermLattice, x) -> tuple:
    return tuple(theta_residue(c.quadint()) for c in lat.coords(x))


def _normalize_point(p):
    p = tuple(c % 7 for c in p)
    for c in p:
        if c:
            inv = pow(c, -1, 7)
            return tuple((inv * x) % 7 for x in p)
    raise ValueError("zero vector is not a projective point")


def _gram_mod7(lat: HermLattice):
    g = lat.gram()
    return [[theta_residue(x.quadint()) for x in row] for row in g]


def _rank_mod7(rows) -> int:
    m = [row[:] for row in rows]
    rank = 0
    cols = len(m[0])
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, len(m)) if m[i][c] % 7), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], -1, 7)
        m[r] = [(inv * x) % 7 for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] % 7:
                f = m[i][c]
                m[i] = [(x - f * y) % 7 for x, y in zip(m[i], m[r])]
        r += 1
        rank += 1
    return rank


@dataclass(frozen=True)
class Hyperplane:
    """An index-7 sublattice of L: the preimage of the orthogonal complement
    of a point of P(L/theta L), tagged by the point's type."""

    point: tuple
    kind: str  # isotropic | plus | minus
    lattice: HermLattice


def index7_sublattices(lat: HermLattice) -> list[Hyperplane]:
    """All 57 index-7 sublattices of the unimodular lattice, classified by
    the defining point of the reduction mod theta."""
    if lat.det() != 1:
        raise ValueError("index-7 hyperplanes are set up for the unimodular lattice")
    G = _gram_mod7(lat)
    points = []
    for a in range(7):
        for b in range(7):
            for c in range(7):
                if (a, b, c) == (0, 0, 0):
                    continue
                p = (a, b, c)
                if _normalize_point(p) == p:
                    points.append(p)
    assert len(points) == 57

    def bform(p, q):
        return sum(G[i][j] * p[i] * q[j] for i in range(3) for j in range(3)) % 7

    isotropic = [p for p in points if bform(p, p) == 0]
    out = []
    for p in points:
        if bform(p, p) == 0:
            kind = "isotropic"
        elif any(bform(p, q) == 0 for q in isotropic):
            kind = "plus"
        else:
            kind = "minus"
        phi = tuple(sum(G[i][j] * p[j] for j in range(3)) % 7 for i in range(3))
        phi = _normalize_point(phi)
        k = next(i for i in range(3) if phi[i])
        cols = []
        for j in range(3):
            if j == k:
                cols.append(tuple(THETA * c if i == k else ZERO
                                  for i, c in enumerate((1, 1, 1))))
            else:
                coeff = phi[j] % 7
                cols.append(tuple((ONE if i == j else ZERO)
                                  - (QuadRat(coeff) if i == k else ZERO)
                                  for i in range(3)))
        basis = [mat_vec(lat._basis_mat, col) for col in cols]
        out.append(Hyperplane(p, kind, HermLattice(basis, lat.form_scale)))
    return out


def superlattices(lat: HermLattice) -> list[HermLattice]:
    """The integral unimodular superlattices of the determinant-7 lattice,
    spanned by the lattice and v/theta over the 8 isotropic lines of the
    reduction mod theta."""
    if lat.det() != 7:
        raise ValueError("superlattices are set up for the determinant-7 lattice")
    G = _gram_mod7(lat)
    # radical of the rank-1 form: solutions of G v = 0 mod 7
    radical = [v for v in _f7_vectors() if all(
        sum(G[i][j] * v[j] for j in range(3)) % 7 == 0 for i in range(3))]
    lines = sorted({_normalize_point(v) for v in radical if any(v)})
    out = []
    for v in lines:
        k = next(i for i in range(3) if v[i] == 1)
        w = mat_vec(lat._basis_mat, tuple(QuadRat(c) for c in v))
        w_over_theta = tuple(c / THETA for c in w)
        basis = [w_over_theta] + [lat.basis[j] for j in range(3) if j != k]
        sup = HermLattice(basis, lat.form_scale)
        if sup.det() != 1:
            raise AssertionError("superlattice is not unimodular")
        out.append(sup)
    if len(out) != 8:
        raise AssertionError(f"expected 8 superlattices, got {len(out)}")
    return out


def _f7_vectors():
    for a in range(7):
        for b in range(7):
            for c in range(7):
                yield (a, b, c)


def m_copies_in_L(lat: HermLattice) -> list[Hyperplane]:
    """The 8 index-7 sublattices with rank-1 reduction mod theta, each
    checked isometric to M by an explicit basis-to-basis isometry."""
    M = lattice_M()
    out = []
    for h in index7_sublattices(lat):
        if h.kind != "isotropic":
            continue
        if _rank_mod7(_gram_mod7(h.lattice)) != 1:
            raise AssertionError("isotropic hyperplane of unexpected rank")
        if find_isometry(M, h.lattice) is None:
            raise AssertionError("isotropic hyperplane not isometric to M")
        out.append(h)
    if len(out) != 8:
        raise AssertionError(f"expected 8 copies, got {len(out)}")
    return out


def find_isometry(src: HermLattice, dst: HermLattice):
    """An ambient matrix carrying src onto dst and matching the forms, or
    None.  Found by backtracking over images of src's basis."""
    G = src.gram()
    cand = {}
    images = []

    def candidates(i):
        n = src.norm(src.basis[i])
        if n not in cand:
            cand[n] = dst.enumerate_norm(n)
        return cand[n]

    def backtrack(i):
        if i == 3:
            return True
        for w in candidates(i):
            if all(dst.inner(w, images[j]) == G[i][j] for j in range(i)):
                images.append(w)
                if backtrack(i + 1):
                    return True
                images.pop()
        return False

    if not backtrack(0):
        return None
    W = from_columns(images)
    # the image span must be all of dst, not a proper sublattice
    from .linalg import det3
    coords = mat_mul(dst._basis_inv, W)
    if det3(coords).norm() != 1:
        raise AssertionError("gram-matching images failed to span")
    return mat_mul(W, src._basis_inv)


def lattice_equal(a: HermLattice, b: HermLattice) -> bool:
    """Equality as O-modules: each basis is contained in the other lattice."""
    return (all(b.contains(x) for x in a.basis)
            and all(a.contains(x) for x in b.basis))


# -- recognition ---------------------------------------------------------------

_PROJ_HISTOGRAMS = {
    "L3(2)": {1: 1, 2: 21, 3: 56, 4: 42, 7: 48},
    "S4": {1: 1, 2: 9, 3: 8, 4: 6},
    "F21": {1: 1, 3: 14, 7: 6},
}


def _projective_order(T: Mat, limit: int = 16) -> int:
    from .linalg import identity, mat_eq, mat_scale
    power = T
    for k in range(1, limit + 1):
        first = next((x for row in power for x in row if x), None)
        scaled = mat_scale(ONE / first, power)
        if mat_eq(scaled, identity()):
            return k
        power = mat_mul(power, T)
    raise AssertionError("projective order exceeds limit")


def recognize_isometry_group(group: list[Mat]) -> str:
    """Name the group: 'L3(2) x 2', 'F21 x 2' or 'S4 x 2' via the order and
    the histogram of projective element orders, else 'order-N'."""
    from .linalg import identity, mat_scale
    n = len(group)
    keys = {tuple(tuple((x.num.a, x.num.b, x.den) for x in row) for row in T)
            for T in group}
    minus = mat_scale(-1, identity())
    has_minus = tuple(tuple((x.num.a, x.num.b, x.den) for x in row)
                      for row in minus) in keys
    if not has_minus or n % 2:
        return f"order-{n}"
    hist = {}
    seen = set()
    for T in group:
        k1 = tuple(tuple((x.num.a, x.num.b, x.den) for x in row) for row in T)
        k2 = tuple(tuple(((-x).num.a, (-x).num.b, x.den) for x in row)
                   for row in T)
        if k1 in seen or k2 in seen:
            continue
        seen.add(k1)
        o = _projective_order(T)
        hist[o] = hist.get(o, 0) + 1
    for name, h in _PROJ_HISTOGRAMS.items():
        if hist == h and n == 2 * sum(h.values()):
            return f"{name} x 2"
    return f"order-{n}"
