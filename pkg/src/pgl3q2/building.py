"""The affine building of PGL_3(Q_2) and the actions of the two lattice
isometry groups on it.

A vertex is a homothety class of Z_2-lattices in Q_2^3.  Each class has a
unique representative lattice that is contained in Z_2^3 but not in 2 Z_2^3,
and that representative has a unique basis in column Hermite form: upper
triangular, diagonal entries powers of 2, the entry in row i of a later
column reduced modulo the diagonal of row i.  We store that integer matrix.

Group elements act through exact matrices over Q(l); the reduction of a
matrix over Q(l) to its canonical vertex only ever extracts integer residues
whose precision requirement is known exactly (the 2-adic valuations involved
are exact), so vertices never depend on a floating working precision.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import inf

from .linalg import (
    Mat,
    columns,
    det3,
    from_columns,
    identity,
    inv3,
    kernel3,
    mat,
    mat_mul,
    mat_scale,
    mat_sub,
    mat_vec,
)
from .qlambda import LAM, LBAR, ONE, QuadRat, ZERO, residue_mod_2pow

__all__ = [
    "VertexClass",
    "ProjElement",
    "OrbitTable",
    "GroupDescriptor",
    "canonicalize",
    "act",
    "neighbors",
    "relative_index",
    "projective_equal",
    "orbit_bfs",
    "stabilizer_in_finite",
    "covolume",
    "s4_vertex_type",
    "beta_l",
    "sigma",
    "tau",
    "beta_m",
    "alpha_m",
    "gamma_m",
    "reference_vertices",
    "vertex_of_lattice",
    "base_vertex",
    "signed_perm_s4",
    "mulclose",
    "generating_pair",
]

DEFAULT_PRECISION = 64


@dataclass(frozen=True)
class VertexClass:
    """Canonical representative of a lattice class: integer rows, upper
    triangular, 2-power diagonal, reduced off-diagonal entries."""

    rows: tuple

    def matrix(self) -> Mat:
        return mat(self.rows)

    def det_power(self) -> int:
        d = 1
        for i in range(3):
            d *= self.rows[i][i]
        return d

    def __lt__(self, other):
        return self.rows < other.rows

    def __repr__(self):
        return "V" + str([list(r) for r in self.rows])


def canonicalize(matrix, precision: int | None = None) -> VertexClass:
    """Canonical vertex of the Z_2-column-span of an exact matrix over Q(l).

    The result is independent of the basis presented and of `precision`;
    the parameter is accepted for interface compatibility and only sets a
    floor on internally computed residue precisions, which are already
    chosen exactly.
    """
    m = mat(matrix)
    if not det3(m):
        raise ValueError("singular matrix does not span a lattice")
    cols = [list(c) for c in columns(m)]

    # triangularize by Z_2-allowed column operations
    for r in (2, 1):
        piv, pval = None, None
        for j in range(r + 1):
            v = cols[j][r].val2()
            if v is not inf and (pval is None or v < pval):
                piv, pval = j, v
        if piv is None:
            raise ValueError("singular matrix does not span a lattice")
        cols[piv], cols[r] = cols[r], cols[piv]
        for j in range(r):
            if cols[j][r]:
                f = cols[j][r] / cols[r][r]
                cols[j] = [x - f * y for x, y in zip(cols[j], cols[r])]

    # homothety scaling: least entry valuation becomes 0
    mv = min(x.val2() for col in cols for x in col if x)
    if mv:
        factor = QuadRat(1, 1 << mv) if mv > 0 else QuadRat(1 << (-mv))
        cols = [[factor * x for x in col] for col in cols]

    # make the diagonal exactly a power of 2
    exps = []
    for r in range(3):
        a = cols[r][r].val2()
        exps.append(a)
        unit = cols[r][r] / QuadRat(1 << a)
        if unit != ONE:
            cols[r] = [x / unit for x in cols[r]]

    # reduce off-diagonal entries to integer residues
    ints = {}
    for i, j in ((1, 2), (0, 1), (0, 2)):
        x = cols[j][i]
        r_int = residue_mod_2pow(x, exps[i])
        delta = x - QuadRat(r_int)
        if delta:
            f = delta / QuadRat(1 << exps[i])
            cols[j] = [y - f * z for y, z in zip(cols[j], cols[i])]
        ints[(i, j)] = r_int

    rows = tuple(
        tuple(
            (1 << exps[i]) if i == j else ints[(i, j)] if i < j else 0
            for j in range(3)
        )
        for i in range(3)
    )
    return VertexClass(rows)


class ProjElement:
    """A 3x3 matrix over Q(l) up to scalars, acting on vertices."""

    __slots__ = ("mat", "_key")

    def __init__(self, m):
        self.mat = mat(m)
        if not det3(self.mat):
            raise ValueError("projective element must be invertible")
        self._key = None

    def key(self):
        if self._key is None:
            first = next(x for row in self.mat for x in row if x)
            self._key = tuple(tuple(x / first for x in row) for row in self.mat)
        return self._key

    def __mul__(self, other: "ProjElement") -> "ProjElement":
        return ProjElement(mat_mul(self.mat, other.mat))

    def inverse(self) -> "ProjElement":
        return ProjElement(inv3(self.mat))

    def __pow__(self, k: int) -> "ProjElement":
        from .linalg import mat_pow
        return ProjElement(mat_pow(self.mat, k))

    def __eq__(self, other):
        return isinstance(other, ProjElement) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def is_scalar(self) -> bool:
        return self.key() == _ID_KEY

    def scalar_of_power(self, k: int):
        """If self**k is scalar, return that scalar for self's matrix."""
        from .linalg import mat_pow
        p = mat_pow(self.mat, k)
        if not _is_scalar_matrix(p):
            return None
        return p[0][0]

    def projective_order(self, limit: int = 40) -> int:
        power = self
        for k in range(1, limit + 1):
            if power.is_scalar():
                return k
            power = power * self
        raise ValueError("projective order exceeds limit")

    def __repr__(self):
        return f"ProjElement({[ [str(x) for x in row] for row in self.mat ]})"


_ID_KEY = tuple(tuple(ONE if i == j else ZERO for j in range(3))
                for i in range(3))


def _is_scalar_matrix(m: Mat) -> bool:
    c = m[0][0]
    if not c:
        return False
    for i in range(3):
        for j in range(3):
            if (m[i][j] != c) if i == j else bool(m[i][j]):
                return False
    return True


def projective_equal(g: ProjElement, h: ProjElement) -> bool:
    """Equality in PGL_3: the matrices differ by a Q(l)* scalar."""
    return g.key() == h.key()


def act(g: ProjElement, v: VertexClass, precision: int | None = None) -> VertexClass:
    """The canonical class of g applied to v's lattice."""
    return canonicalize(mat_mul(g.mat, v.matrix()), precision)


def neighbors(v: VertexClass) -> list[VertexClass]:
    """The 14 adjacent classes: 7 index-2 sublattices and 7 index-2
    superlattices, up to scaling."""
    base = columns(v.matrix())
    out = set()
    masks = [(a, b, c) for a in (0, 1) for b in (0, 1) for c in (0, 1)
             if (a, b, c) != (0, 0, 0)]
    half = QuadRat(1, 2)
    for phi in masks:
        support = [j for j in range(3) if phi[j]]
        k = support[0]
        cols = []
        for j in range(3):
            if j == k:
                cols.append(tuple(x + x for x in base[k]))
            elif j in support:
                cols.append(tuple(x - y for x, y in zip(base[j], base[k])))
            else:
                cols.append(base[j])
        out.add(canonicalize(from_columns(cols)))
    for w in masks:
        k = next(j for j in range(3) if w[j])
        s = tuple(sum((base[j][i] for j in range(3) if w[j]), ZERO)
                  for i in range(3))
        cols = [tuple(half * x for x in s)]
        cols += [base[j] for j in range(3) if j != k]
        out.add(canonicalize(from_columns(cols)))
    result = sorted(out)
    if len(result) != 14:
        raise AssertionError(f"vertex has {len(result)} neighbors")
    return result


def relative_index(v: VertexClass, w: VertexClass) -> int:
    """For adjacent v, w: 2 when w is (up to scaling) an index-2 sublattice
    of v ('line' side of v's link), 4 for the superlattice ('point') side."""
    t = mat_mul(inv3(v.matrix()), w.matrix())
    mv = min(x.val2() for row in t for x in row if x)
    if mv:
        factor = QuadRat(1, 1 << mv) if mv > 0 else QuadRat(1 << (-mv))
        t = mat_scale(factor, t)
    d = det3(t).val2()
    if d not in (1, 2):
        raise ValueError("vertices are not adjacent")
    return 1 << d


# -- orbits -------------------------------------------------------------------


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, i):
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i, j):
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            self.parent[rj] = ri


@dataclass
class OrbitTable:
    """Result of a bounded orbit exploration.  Counts are restricted to the
    trusted ball (explored radius minus one), because identifications can
    still arrive from outside the explored region."""

    explored_radius: int
    trusted_radius: int
    vertices: list
    distances: list
    vertex_orbit_count: int
    orbit_reps: list
    orbit_index: dict
    edge_orbit_count: int
    triangle_orbit_count: int
    quotient_edges: list
    stabilizer_orders: list | None = None

    @property
    def ball_size(self):
        return len(self.vertices)


def orbit_bfs(generators, start: VertexClass, radius: int) -> OrbitTable:
    """Explore the ball of the given radius around `start`, merge vertices
    along generator and inverse moves, and report orbit data on the trusted
    ball of radius - 1."""
    if radius < 1:
        raise ValueError("radius must be >= 1")
    index = {start: 0}
    verts = [start]
    dist = [0]
    nbr_cache = {}

    def nbrs_of(i):
        if i not in nbr_cache:
            nbr_cache[i] = neighbors(verts[i])
        return nbr_cache[i]

    frontier = [0]
    for d in range(1, radius + 1):
        new_frontier = []
        for i in frontier:
            for w in nbrs_of(i):
                if w not in index:
                    index[w] = len(verts)
                    verts.append(w)
                    dist.append(d)
                    new_frontier.append(index[w])
        frontier = new_frontier
    adj = [[index[w] for w in nbrs_of(i) if w in index]
           for i in range(len(verts))]

    moves = []
    seen_keys = set()
    for g in generators:
        for h in (g, g.inverse()):
            if h.key() in seen_keys:
                continue
            seen_keys.add(h.key())
            moves.append([index.get(act(h, v)) for v in verts])

    n = len(verts)
    uf = _UnionFind(n)
    for amap in moves:
        for i, j in enumerate(amap):
            if j is not None:
                uf.union(i, j)

    trusted = [i for i in range(n) if dist[i] <= radius - 1]
    roots = {}
    for i in trusted:
        roots.setdefault(uf.find(i), []).append(i)
    reps = []
    orbit_index = {}
    for label, (root, members) in enumerate(
            sorted(roots.items(),
                   key=lambda kv: min((dist[i], verts[i].rows) for i in kv[1]))):
        rep = min(members, key=lambda i: (dist[i], verts[i].rows))
        reps.append(verts[rep])
        for i in members:
            orbit_index[verts[i]] = label

    # edges and triangles inside the ball
    edges = sorted({(min(i, j), max(i, j))
                    for i in range(n) for j in adj[i] if i != j})
    eindex = {e: t for t, e in enumerate(edges)}
    euf = _UnionFind(len(edges))
    adjsets = [set(a) for a in adj]
    tris = sorted({tuple(sorted((i, j, k)))
                   for (i, j) in edges for k in (adjsets[i] & adjsets[j])})
    tindex = {t: s for s, t in enumerate(tris)}
    tuf = _UnionFind(len(tris))
    for amap in moves:
        for (i, j), t in eindex.items():
            a, b = amap[i], amap[j]
            if a is not None and b is not None:
                img = (min(a, b), max(a, b))
                if img in eindex:
                    euf.union(t, eindex[img])
        for tri, s in tindex.items():
            img = tuple(sorted(amap[i] for i in tri)) \
                if all(amap[i] is not None for i in tri) else None
            if img is not None and img in tindex:
                tuf.union(s, tindex[img])

    tset = set(trusted)
    edge_orbits = {euf.find(eindex[e]) for e in edges
                   if e[0] in tset and e[1] in tset}
    tri_orbits = {tuf.find(tindex[t]) for t in tris
                  if all(i in tset for i in t)}

    quotient = {}
    for label, rep in enumerate(reps):
        for j in adj[index[rep]]:
            other = orbit_index.get(verts[j])
            if other is None or other < label:
                continue
            quotient[(label, other)] = quotient.get((label, other), 0) + 1
    quotient_edges = sorted((a, b, m) for (a, b), m in quotient.items())

    return OrbitTable(
        explored_radius=radius,
        trusted_radius=radius - 1,
        vertices=verts,
        distances=dist,
        vertex_orbit_count=len(reps),
        orbit_reps=reps,
        orbit_index=orbit_index,
        edge_orbit_count=len(edge_orbits),
        triangle_orbit_count=len(tri_orbits),
        quotient_edges=quotient_edges,
    )


# -- stabilizers ----------------------------------------------------------------

_PROJ_HISTOGRAMS = {
    "L3(2)": {1: 1, 2: 21, 3: 56, 4: 42, 7: 48},
    "S4": {1: 1, 2: 9, 3: 8, 4: 6},
    "F21": {1: 1, 3: 14, 7: 6},
    "Z3": {1: 1, 3: 2},
}


@dataclass(frozen=True)
class GroupDescriptor:
    order: int
    element_order_histogram: dict
    recognized_name: str


def _recognize(histogram: dict) -> str:
    for name, h in _PROJ_HISTOGRAMS.items():
        if histogram == h:
            return name
    return "other"


_validated_groups = set()


def _as_projective_group(candidates) -> list[ProjElement]:
    group = []
    keys = set()
    for g in candidates:
        if not isinstance(g, ProjElement):
            g = ProjElement(g)
        if g.key() not in keys:
            keys.add(g.key())
            group.append(g)
    if not any(g.is_scalar() for g in group):
        raise ValueError("candidate set lacks the identity")
    fingerprint = frozenset(keys)
    if fingerprint not in _validated_groups:
        for g in group:
            for h in group:
                if (g * h).key() not in keys:
                    raise ValueError("candidate set is not closed under products")
        _validated_groups.add(fingerprint)
    return group


def stabilizer_in_finite(candidates, v: VertexClass) -> GroupDescriptor:
    """The subgroup of a given finite projective group fixing v, with its
    order histogram and recognized isomorphism type."""
    group = _as_projective_group(candidates)
    stab = [g for g in group if act(g, v) == v]
    hist = {}
    for g in stab:
        o = g.projective_order()
        hist[o] = hist.get(o, 0) + 1
    return GroupDescriptor(len(stab), hist, _recognize(hist))


def covolume(stabilizer_orders) -> Fraction:
    """Sum of 1/n over the vertex-orbit stabilizer orders."""
    orders = list(stabilizer_orders)
    if not orders:
        raise ValueError("no orbits given")
    total = Fraction(0)
    for n in orders:
        if n <= 0:
            raise ValueError("stabilizer orders must be positive")
        total += Fraction(1, n)
    return total


# -- the three S4 lattice actions ----------------------------------------------

def s4_vertex_type(s4_generators, v: VertexClass) -> str:
    """Classify an S4-fixed vertex as type '0', 'l' or 'p' by the index of
    the sublattice spanned by the fixed lattices of the three commuting
    involutions (1, 4 and 2 respectively)."""
    group = mulclose(s4_generators, limit=60)
    hist = {}
    for g in group:
        o = g.projective_order()
        hist[o] = hist.get(o, 0) + 1
    if len(group) != 24 or _recognize(hist) != "S4":
        raise ValueError("generators do not span an S4")
    for g in group:
        if act(g, v) != v:
            raise ValueError("group does not fix the vertex")
    involutions = [g for g in group if g.projective_order() == 2]
    klein = []
    for g in involutions:
        commuting = sum(1 for h in involutions if (g * h) == (h * g))
        if commuting == 5:
            klein.append(g)
    if len(klein) != 3:
        raise AssertionError("failed to locate the Klein four-subgroup")

    H = v.matrix()
    Hinv = inv3(H)
    fixed_cols = []
    for g in klein:
        sq = mat_mul(g.mat, g.mat)
        if not _is_scalar_matrix(sq):
            raise AssertionError("involution squared is not scalar")
        scale = sq[0][0] / det3(g.mat)
        m = mat_scale(scale, g.mat)  # the determinant-1 lift; m*m = 1
        if not _is_scalar_matrix(mat_mul(m, m)):
            raise AssertionError("lift does not square to a scalar")
        basis = kernel3(mat_sub(m, identity()))
        if len(basis) != 1:
            raise AssertionError("involution fixed space is not a line")
        c = mat_vec(Hinv, basis[0])
        m0 = min(x.val2() for x in c if x)
        factor = QuadRat(1, 1 << m0) if m0 > 0 else QuadRat(1 << (-m0))
        fixed_cols.append(tuple(factor * x for x in c))
    k = det3(from_columns(fixed_cols)).val2()
    try:
        return {0: "0", 1: "p", 2: "l"}[k]
    except KeyError:
        raise AssertionError(f"unexpected fixed-lattice index 2^{k}")


# -- concrete generators ---------------------------------------------------------

def beta_l() -> ProjElement:
    """The extra isometry of the unimodular lattice over Z[1/2], in ambient
    coordinates: it carries the standard frame to an orthogonal root triple
    with halved 2-adic depth."""
    il = ONE / LAM
    return ProjElement(((1, 0, 0), (0, il, il), (0, il, -il)))


def sigma() -> ProjElement:
    """Order-3 isometry of M in basis coordinates (the Galois action of the
    degree-7 cyclotomic model on the basis 1, z, z^2)."""
    return ProjElement(((1, 0, LAM), (0, 0, -1), (0, 1, -1)))


def tau() -> ProjElement:
    """Order-7 isometry of M in basis coordinates (multiplication by z in
    the cyclotomic model; z^3 = 1 - lbar z + l z^2)."""
    return ProjElement(((0, 0, 1), (1, 0, 1 + LAM), (0, 1, LAM)))


def beta_m() -> ProjElement:
    """The basis rotation e1 -> e2 -> e3 -> (l/lbar) e1; its cube is the
    scalar l/lbar."""
    q = LAM / LBAR
    return ProjElement(((0, 0, q), (1, 0, 0), (0, 1, 0)))


def alpha_m() -> ProjElement:
    """sigma tau^5 beta_m^-1 tau^-5 sigma^-1: rotates the distinguished
    triangle at the base vertex."""
    s, t, b = sigma(), tau(), beta_m()
    return s * t ** 5 * b.inverse() * t ** -5 * s.inverse()


def gamma_m() -> ProjElement:
    """alpha_m tau^3: carries the edge (l, v) to (v, p) and inverts sigma."""
    return alpha_m() * tau() ** 3


def base_vertex() -> VertexClass:
    """The class of the standard lattice (in whatever coordinates are in
    use, the identity matrix)."""
    return canonicalize(identity())


def vertex_of_lattice(lat) -> VertexClass:
    """The vertex represented by a Hermitian lattice's basis, in ambient
    coordinates."""
    return canonicalize(from_columns(lat.basis))


def reference_vertices() -> dict:
    """Seven labelled classes near the standard vertex D: the strip of
    vertices used in the two-orbit check.  D is the class of Z_2^3 and C is
    the class of the unimodular Hermitian lattice."""
    raw = {
        "A": ((2, 0, 0), (0, 1, 0), (0, 0, 1)),
        "B": ((2, 0, 0), (0, 2, 1), (0, 0, 1)),
        "C": ((2, 1, 0), (0, 1, 1), (0, 0, 1)),
        "D": ((1, 0, 0), (0, 1, 0), (0, 0, 1)),
        "E": ((2, 0, 1), (0, 2, 1), (0, 0, 1)),
        "F": ((1, 0, 0), (0, 2, 1), (0, 0, 1)),
        "G": ((1, 0, 0), (0, 2, 0), (0, 0, 2)),
    }
    return {k: canonicalize(m) for k, m in raw.items()}


def signed_perm_s4() -> list[ProjElement]:
    """Generators of the determinant-1 signed permutations: a 3-cycle and a
    quarter turn."""
    rot3 = ProjElement(((0, 0, 1), (1, 0, 0), (0, 1, 0)))
    rot4 = ProjElement(((0, -1, 0), (1, 0, 0), (0, 0, 1)))
    return [rot3, rot4]


def mulclose(generators, limit: int = 400) -> list[ProjElement]:
    """Projective closure of a finite generating set."""
    gens = [g if isinstance(g, ProjElement) else ProjElement(g)
            for g in generators]
    elements = {ProjElement(identity()).key(): ProjElement(identity())}
    frontier = list(elements.values())
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = x * g
                if y.key() not in elements:
                    if len(elements) >= limit:
                        raise ValueError("closure exceeds limit")
                    elements[y.key()] = y
                    new.append(y)
        frontier = new
    return list(elements.values())


def generating_pair(group) -> tuple[ProjElement, ProjElement]:
    """A deterministic two-element generating set of a finite projective
    group (orbit computations only need generators, not all elements)."""
    elems = [g if isinstance(g, ProjElement) else ProjElement(g) for g in group]
    target = len({g.key() for g in elems})
    first = max(elems, key=lambda g: g.projective_order())
    for h in elems:
        try:
            if len(mulclose([first, h], limit=target + 1)) == target:
                return first, h
        except ValueError:
            continue
    raise ValueError("no generating pair found")
