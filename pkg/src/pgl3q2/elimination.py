"""Symbolic verification that the triangle-rotating element is unique: cube
a matrix pencil over Q(l)[a,b], extract the scalar-matrix conditions, and
eliminate.

The pencil is pi1 + a*pi2 + b*sigma2 built from an order-3 matrix; composing
with a fixed outer factor gives a candidate rotation alpha(a, b).  Requiring
alpha^3 to be scalar yields 8 polynomial conditions.  Gaussian elimination
on the leading monomials reduces them to a univariate relation whose roots
can be checked one by one.
"""

from __future__ import annotations

from dataclasses import dataclass

from .linalg import (
    Mat,
    det3,
    identity,
    inv3,
    mat,
    mat_eq,
    mat_mul,
    mat_pow,
    mat_scale,
)
from .qlambda import ONE, QuadRat, ZERO

__all__ = [
    "BivarPoly",
    "build_projectors",
    "alpha_candidate",
    "scalar_cube_conditions",
    "eliminate_centralizing",
    "eliminate_inverting",
    "poly_gcd_univar",
    "integral_odd_det",
    "evaluate_poly_matrix",
    "CentralizingReport",
    "InvertingReport",
]

PIVOT_ORDER = ((3, 0), (2, 1), (2, 0), (1, 2), (1, 1))


class BivarPoly:
    """Sparse polynomial in a and b with Q(l) coefficients; keys are
    (deg_a, deg_b)."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for key, c in (terms or {}).items():
            c = c if isinstance(c, QuadRat) else QuadRat(c)
            if c:
                clean[key] = c
        self.terms = clean

    @classmethod
    def const(cls, c):
        return cls({(0, 0): c})

    @classmethod
    def var_a(cls):
        return cls({(1, 0): 1})

    @classmethod
    def var_b(cls):
        return cls({(0, 1): 1})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, BivarPoly):
            return self.terms == other.terms
        return NotImplemented

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, ZERO) + c
        return BivarPoly(out)

    def __sub__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, ZERO) - c
        return BivarPoly(out)

    def __neg__(self):
        return BivarPoly({k: -c for k, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (QuadRat, int)):
            c = other if isinstance(other, QuadRat) else QuadRat(other)
            return BivarPoly({k: v * c for k, v in self.terms.items()})
        out = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                k = (i1 + i2, j1 + j2)
                out[k] = out.get(k, ZERO) + c1 * c2
        return BivarPoly(out)

    __rmul__ = __mul__

    def coeff(self, i, j) -> QuadRat:
        return self.terms.get((i, j), ZERO)

    def degree_a(self) -> int:
        return max((i for i, _ in self.terms), default=-1)

    def degree_b(self) -> int:
        return max((j for _, j in self.terms), default=-1)

    def evaluate(self, a, b) -> QuadRat:
        a = a if isinstance(a, QuadRat) else QuadRat(a)
        b = b if isinstance(b, QuadRat) else QuadRat(b)
        total = ZERO
        for (i, j), c in self.terms.items():
            total = total + c * a ** i * b ** j
        return total

    def a_coefficients(self) -> dict:
        """Split into polynomials in b: {deg_a: poly in b}."""
        out = {}
        for (i, j), c in self.terms.items():
            out.setdefault(i, {})[(0, j)] = c
        return {i: BivarPoly(t) for i, t in out.items()}

    def substitute_a(self, p: "BivarPoly") -> "BivarPoly":
        """Replace a by a polynomial in b."""
        parts = self.a_coefficients()
        total = BivarPoly()
        for i, ci in parts.items():
            term = ci
            for _ in range(i):
                term = term * p
            total = total + term
        return total

    def b_coefficient_list(self) -> list:
        """Coefficients [c0, c1, ...] for a polynomial in b alone."""
        if self.degree_a() > 0:
            raise ValueError("polynomial is not univariate in b")
        n = self.degree_b()
        return [self.coeff(0, j) for j in range(n + 1)]

    def cleared(self) -> "BivarPoly":
        """Scaled by the least common positive integer multiple of the
        coefficient denominators, so all coefficients land in O."""
        from math import lcm
        dens = [c.den for c in self.terms.values()]
        if not dens:
            return self
        m = lcm(*dens)
        return self * QuadRat(m)

    def monic_b(self) -> "BivarPoly":
        coeffs = self.b_coefficient_list()
        lead = coeffs[-1]
        return self * (ONE / lead)

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for (i, j) in sorted(self.terms, reverse=True):
            c = self.terms[(i, j)]
            mono = "".join((f"a^{i}" if i > 1 else "a" * i,
                            f"b^{j}" if j > 1 else "b" * j))
            bits.append(f"({c!r}){mono}" if mono else f"({c!r})")
        return " + ".join(bits)


PolyMatrix = tuple


def _pm_const(m: Mat) -> PolyMatrix:
    return tuple(tuple(BivarPoly.const(x) for x in row) for row in m)


def _pm_add(p: PolyMatrix, q: PolyMatrix) -> PolyMatrix:
    return tuple(tuple(x + y for x, y in zip(rp, rq)) for rp, rq in zip(p, q))


def _pm_mul(p: PolyMatrix, q: PolyMatrix) -> PolyMatrix:
    return tuple(
        tuple(sum((p[i][t] * q[t][j] for t in range(3)), BivarPoly())
              for j in range(3))
        for i in range(3)
    )


def _pm_scale(poly: BivarPoly, m: Mat) -> PolyMatrix:
    return tuple(tuple(poly * BivarPoly.const(x) for x in row) for row in m)


def evaluate_poly_matrix(pm: PolyMatrix, a, b) -> Mat:
    return tuple(tuple(entry.evaluate(a, b) for entry in row) for row in pm)


def build_projectors(sigma_mat: Mat):
    """pi1 = (1 + s + s^2)/3 projecting onto the fixed line of an order-3
    matrix s, pi2 = 1 - pi1, and sigma2 = s pi2."""
    s = mat(sigma_mat)
    if not mat_eq(mat_pow(s, 3), identity()):
        raise ValueError("need an exact cube root of the identity; rescale first")
    third = QuadRat(1, 3)
    p1 = mat_scale(third, _mat_add3(identity(), s, mat_pow(s, 2)))
    p2 = _mat_sub(identity(), p1)
    s2 = mat_mul(s, p2)
    for claim, m in (("pi1 idempotent", _mat_sub(mat_mul(p1, p1), p1)),
                     ("pi2 idempotent", _mat_sub(mat_mul(p2, p2), p2)),
                     ("pi1 pi2 = 0", mat_mul(p1, p2)),
                     ("sigma2 pi1 = 0", mat_mul(s2, p1))):
        if any(x for row in m for x in row):
            raise AssertionError(f"projector identity failed: {claim}")
    return p1, p2, s2


def _mat_add3(a, b, c):
    return tuple(tuple(x + y + z for x, y, z in zip(ra, rb, rc))
                 for ra, rb, rc in zip(a, b, c))


def _mat_sub(a, b):
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def alpha_candidate(case: str, projectors, tau_mat: Mat,
                    gamma_m_mat: Mat | None = None) -> PolyMatrix:
    """The rotation candidate as a matrix over Q(l)[a,b].

    centralizing: (pi1 + a pi2 + b sigma2) tau^-3
    inverting:    gamma_m (pi1 + a pi2 + b sigma2) tau^-3
    """
    p1, p2, s2 = projectors
    pencil = _pm_add(
        _pm_const(p1),
        _pm_add(_pm_scale(BivarPoly.var_a(), p2),
                _pm_scale(BivarPoly.var_b(), s2)))
    tau_inv3 = _pm_const(mat_pow(mat(tau_mat), -3))
    if case == "centralizing":
        return _pm_mul(pencil, tau_inv3)
    if case == "inverting":
        if gamma_m_mat is None:
            raise ValueError("inverting case needs the sigma-inverting factor")
        return _pm_mul(_pm_const(mat(gamma_m_mat)), _pm_mul(pencil, tau_inv3))
    raise ValueError(f"unknown case {case!r}")


def scalar_cube_conditions(pm: PolyMatrix) -> list[BivarPoly]:
    """The 8 polynomials whose vanishing says the cube of the matrix is
    scalar: 6 off-diagonal entries plus 2 diagonal differences, cleared of
    denominators."""
    cube = _pm_mul(pm, _pm_mul(pm, pm))
    conds = []
    for i in range(3):
        for j in range(3):
            if i != j:
                conds.append(cube[i][j])
    conds.append(cube[0][0] - cube[1][1])
    conds.append(cube[1][1] - cube[2][2])
    cleared = [c.cleared() for c in conds]
    for c in cleared:
        if any(x.den != 1 for x in c.terms.values()):
            raise AssertionError("denominator clearing failed")
    return cleared


def _gauss_eliminate(conds, pivots=PIVOT_ORDER):
    """Row-reduce the conditions against the fixed pivot monomials; returns
    (rows, pivots_used).  Pivots with no available row are skipped."""
    rows = [BivarPoly(dict(c.terms)) for c in conds]
    pivot_rows = {}
    for pivot in pivots:
        idx = next((i for i, r in enumerate(rows)
                    if i not in pivot_rows.values() and r.coeff(*pivot)),
                   None)
        if idx is None:
            continue
        lead = rows[idx].coeff(*pivot)
        rows[idx] = rows[idx] * (ONE / lead)
        for i in range(len(rows)):
            if i != idx:
                c = rows[i].coeff(*pivot)
                if c:
                    rows[i] = rows[i] - rows[idx] * c
        pivot_rows[pivot] = idx
    return rows, pivot_rows


def _relation_rows(rows, pivot_rows):
    """Rows containing a only through the monomials a and a*b, i.e. of the
    shape f(b) a + g(b)."""
    out = []
    for i, r in enumerate(rows):
        if i in pivot_rows.values() or not r:
            continue
        if all((i_, j_) in ((1, 0), (1, 1)) for (i_, j_) in r.terms if i_ > 0):
            f = BivarPoly({(0, 0): r.coeff(1, 0), (0, 1): r.coeff(1, 1)})
            g = BivarPoly({(0, j): c for (i_, j), c in r.terms.items()
                           if i_ == 0})
            if f:
                out.append((f, g))
    return out


@dataclass
class CentralizingReport:
    substitution: BivarPoly       # a as a polynomial in b
    residuals: list               # the 8 conditions after substitution
    cube_relation_index: int      # residual proportional to b^3 - b
    roots: list                   # candidate b values
    satisfying: list              # roots killing every residual
    solutions: list               # (a, b) pairs over Q(l)

    def to_dict(self):
        return {
            "substitution_a_of_b": repr(self.substitution),
            "cube_relation_index": self.cube_relation_index,
            "roots": [repr(r) for r in self.roots],
            "satisfying": [repr(r) for r in self.satisfying],
            "solutions": [(repr(a), repr(b)) for a, b in self.solutions],
        }


def _reduce_univariate_system(polys):
    """Row-reduce univariate polynomials in b on the monomials b^d, ...,
    b^0 (top degree first); returns the nonzero reduced relations."""
    polys = [p for p in polys if p]
    if not polys:
        return []
    deg = max(p.degree_b() for p in polys)
    vecs = [[p.coeff(0, j) for j in range(deg + 1)] for p in polys]
    r = 0
    for col in range(deg, -1, -1):
        piv = next((i for i in range(r, len(vecs)) if vecs[i][col]), None)
        if piv is None:
            continue
        vecs[r], vecs[piv] = vecs[piv], vecs[r]
        inv = ONE / vecs[r][col]
        vecs[r] = [x * inv for x in vecs[r]]
        for i in range(len(vecs)):
            if i != r and vecs[i][col]:
                c = vecs[i][col]
                vecs[i] = [x - c * y for x, y in zip(vecs[i], vecs[r])]
        r += 1
    return [BivarPoly({(0, j): c for j, c in enumerate(v) if c})
            for v in vecs[:r]]


def eliminate_centralizing(conds) -> CentralizingReport:
    """Reduce the 8 centralizing-case conditions: solve for a as a
    polynomial in b, substitute, and row-reduce the univariate residual
    system; one reduced relation is proportional to b^3 - b, and only its
    roots 1 and -1 survive the remaining relations."""
    rows, pivot_rows = _gauss_eliminate(conds)
    relations = _relation_rows(rows, pivot_rows)
    rel = next(((f, g) for f, g in relations if f.degree_b() == 0), None)
    if rel is None:
        raise ValueError("elimination found no constant-coefficient relation for a")
    f, g = rel
    substitution = g * (-(ONE / f.coeff(0, 0)))
    residuals = _reduce_univariate_system(
        [c.substitute_a(substitution) for c in conds])

    b = BivarPoly.var_b()
    cube_poly = b * b * b - b
    idx = None
    for i, r in enumerate(residuals):
        if r.degree_b() == 3:
            lead = r.coeff(0, 3)
            if r == cube_poly * lead:
                idx = i
                break
    if idx is None:
        raise ValueError("no residual relation proportional to b^3 - b")

    roots = [QuadRat(0), QuadRat(1), QuadRat(-1)]
    satisfying = [r for r in roots
                  if all(not res.evaluate(0, r) for res in residuals)]
    solutions = [(substitution.evaluate(0, r), r) for r in satisfying]
    return CentralizingReport(substitution, residuals, idx, roots,
                              satisfying, solutions)


@dataclass
class InvertingReport:
    f: BivarPoly                  # linear coefficient of a
    g: BivarPoly                  # constant part: f(b) a + g(b) = 0
    numerators: list              # conditions with a eliminated, cleared by f^3
    a_at_b_zero: QuadRat
    gcd_poly: BivarPoly           # gcd of the b-stripped numerators
    spurious_b: QuadRat
    spurious_a: QuadRat

    def to_dict(self):
        return {
            "f": repr(self.f),
            "g": repr(self.g),
            "a_at_b_zero": repr(self.a_at_b_zero),
            "gcd": repr(self.gcd_poly),
            "spurious_b": repr(self.spurious_b),
            "spurious_a": repr(self.spurious_a),
        }


def eliminate_inverting(conds) -> InvertingReport:
    """Reduce the 8 inverting-case conditions: a relation f(b) a + g(b) = 0
    with f of degree 1 appears; eliminating a leaves polynomials in b that
    are all divisible by b (giving the b = 0 branch) and whose b-stripped
    gcd has degree 1 (the spurious branch).  The a*b monomial stays as part
    of the relation, so only the four higher monomials are pivoted."""
    rows, pivot_rows = _gauss_eliminate(conds, PIVOT_ORDER[:4])
    relations = _relation_rows(rows, pivot_rows)
    if not relations:
        raise ValueError("elimination found no relation linear in a")
    f, g = relations[0]
    if f.degree_b() != 1:
        raise ValueError(f"expected deg f = 1, got {f.degree_b()}")
    # f and g never vanish together, so dividing by f loses no solutions
    f_root = -(f.coeff(0, 0) / f.coeff(0, 1))
    if not g.evaluate(0, f_root):
        raise ValueError("f and g share a root; relation is degenerate")

    minus_g = -g
    numerators = []
    for c in conds:
        parts = c.a_coefficients()
        total = BivarPoly()
        for i in range(0, 4):
            ci = parts.get(i, BivarPoly())
            if not ci:
                continue
            term = ci
            for _ in range(i):
                term = term * minus_g
            for _ in range(3 - i):
                term = term * f
            total = total + term
        numerators.append(total)

    for n in numerators:
        if n and n.coeff(0, 0):
            raise ValueError("a numerator is not divisible by b")
    a_at_b_zero = minus_g.evaluate(0, 0) / f.evaluate(0, 0)

    stripped = []
    for n in numerators:
        if not n:
            continue
        v = min(j for (_, j) in n.terms)
        stripped.append(BivarPoly({(0, j - v): c
                                   for (_, j), c in n.terms.items()}))
    gcd_poly = stripped[0]
    for p in stripped[1:]:
        gcd_poly = poly_gcd_univar(gcd_poly, p)
    if gcd_poly.degree_b() != 1:
        raise ValueError(f"expected a degree-1 gcd, got {gcd_poly.degree_b()}")
    spurious_b = -(gcd_poly.coeff(0, 0) / gcd_poly.coeff(0, 1))
    spurious_a = minus_g.evaluate(0, spurious_b) / f.evaluate(0, spurious_b)
    return InvertingReport(f, g, numerators, a_at_b_zero, gcd_poly,
                           spurious_b, spurious_a)


def poly_gcd_univar(fp: BivarPoly, gp: BivarPoly) -> BivarPoly:
    """Monic gcd in Q(l)[b] by the Euclidean algorithm."""
    fc = fp.b_coefficient_list() if fp else []
    gc = gp.b_coefficient_list() if gp else []
    if not fc and not gc:
        raise ValueError("gcd of two zero polynomials")

    def trim(c):
        while c and not c[-1]:
            c.pop()
        return c

    def mod(num, den):
        num = num[:]
        while len(num) >= len(den):
            k = len(num) - len(den)
            q = num[-1] / den[-1]
            for t in range(len(den)):
                num[k + t] = num[k + t] - q * den[t]
            trim(num)
            if not num:
                break
        return num

    a, b = trim(fc[:]), trim(gc[:])
    while b:
        a, b = b, mod(a, b)
    lead = a[-1]
    return BivarPoly({(0, j): c / lead for j, c in enumerate(a)})


def integral_odd_det(m: Mat) -> bool:
    """True when some Q(l)* multiple of the matrix has entries in O and a
    determinant of odd norm.  This holds exactly when the valuations of the
    determinant at the two primes over 2 are triple the respective entry
    minima (odd primes can always be cleared without changing parity)."""
    m = mat(m)
    d = det3(m)
    if not d:
        return False
    v1 = min(x.val2() for row in m for x in row if x)
    v2 = min(x.conj().val2() for row in m for x in row if x)
    return d.val2() == 3 * v1 and d.conj().val2() == 3 * v2
