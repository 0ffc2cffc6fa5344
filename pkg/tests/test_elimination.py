import random
from fractions import Fraction

import pytest

from pgl3q2.building import (
    ProjElement,
    act,
    alpha_m,
    base_vertex,
    beta_l,
    gamma_m,
    projective_equal,
    sigma,
    tau,
)
from pgl3q2.elimination import (
    BivarPoly,
    alpha_candidate,
    build_projectors,
    eliminate_centralizing,
    eliminate_inverting,
    evaluate_poly_matrix,
    integral_odd_det,
    poly_gcd_univar,
    scalar_cube_conditions,
)
from pgl3q2.linalg import (
    identity,
    mat,
    mat_add,
    mat_eq,
    mat_mul,
    mat_pow,
    mat_scale,
)
from pgl3q2.qlambda import LAM, QuadInt, QuadRat


@pytest.fixture(scope="module")
def projectors():
    return build_projectors(sigma().mat)


@pytest.fixture(scope="module")
def centralizing_conditions(projectors):
    return scalar_cube_conditions(
        alpha_candidate("centralizing", projectors, tau().mat))


@pytest.fixture(scope="module")
def inverting_conditions(projectors):
    return scalar_cube_conditions(
        alpha_candidate("inverting", projectors, tau().mat, gamma_m().mat))


# -- polynomials ------------------------------------------------------------------

def test_bivar_poly_ring():
    a, b = BivarPoly.var_a(), BivarPoly.var_b()
    p = (a + b) * (a - b)
    assert p == a * a - b * b
    assert p.evaluate(3, 2) == QuadRat(5)
    assert (a * b).degree_a() == 1 and (a * b).degree_b() == 1
    q = BivarPoly({(0, 0): QuadRat(1, 3), (1, 1): QuadRat(1, 2)})
    cleared = q.cleared()
    assert all(c.den == 1 for c in cleared.terms.values())
    assert cleared == q * 6


def test_substitute_a():
    a, b = BivarPoly.var_a(), BivarPoly.var_b()
    p = a * a + b
    sub = b + BivarPoly.const(1)
    assert p.substitute_a(sub) == (b + BivarPoly.const(1)) * (b + BivarPoly.const(1)) + b


def test_poly_gcd():
    b = BivarPoly.var_b()
    one = BivarPoly.const(1)
    assert poly_gcd_univar(b * b - one, b - one) == b - one
    f = b * b + 2 * b
    assert poly_gcd_univar(f, BivarPoly()) == f * QuadRat(1, 1)  # monic multiple
    assert poly_gcd_univar(f, BivarPoly()).coeff(0, 2) == QuadRat(1)
    with pytest.raises(ValueError):
        poly_gcd_univar(BivarPoly(), BivarPoly())
    with pytest.raises(ValueError):
        (BivarPoly.var_a() * b).b_coefficient_list()


# -- projectors --------------------------------------------------------------------

def test_projectors(projectors):
    p1, p2, s2 = projectors
    assert mat_eq(mat_add(p1, p2), identity())
    assert mat_eq(mat_mul(p1, p1), p1)
    assert mat_eq(mat_mul(p2, p2), p2)
    assert all(not x for row in mat_mul(s2, p1) for x in row)


def test_projectors_reject_non_cube_root():
    with pytest.raises(ValueError):
        build_projectors(mat_scale(2, identity()))


def test_sigma_decomposes(projectors):
    # sigma = pi1 + sigma2 and sigma^-1 = pi1 - pi2 - sigma2
    p1, p2, s2 = projectors
    assert mat_eq(mat_add(p1, s2), sigma().mat)
    inv = mat_add(p1, mat_add(mat_scale(-1, p2), mat_scale(-1, s2)))
    assert projective_equal(ProjElement(inv), sigma().inverse())


# -- the candidate pencil ------------------------------------------------------------

def test_alpha_candidate_substitutions(projectors):
    t = tau().mat
    pm = alpha_candidate("centralizing", projectors, t)
    assert mat_eq(evaluate_poly_matrix(pm, 1, 0), mat_pow(t, -3))
    s = sigma()
    got_plus = ProjElement(evaluate_poly_matrix(pm, 0, 1))
    assert projective_equal(got_plus, s * tau() ** -3)
    got_minus = ProjElement(evaluate_poly_matrix(pm, -1, -1))
    assert projective_equal(got_minus, s.inverse() * tau() ** -3)
    pm_inv = alpha_candidate("inverting", projectors, t, gamma_m().mat)
    assert projective_equal(ProjElement(evaluate_poly_matrix(pm_inv, 1, 0)),
                            alpha_m())
    with pytest.raises(ValueError):
        alpha_candidate("inverting", projectors, t)
    with pytest.raises(ValueError):
        alpha_candidate("sideways", projectors, t)


def test_conditions_vanish_for_constant_sigma(projectors):
    consts = tuple(tuple(BivarPoly.const(x) for x in row) for row in sigma().mat)
    conds = scalar_cube_conditions(consts)
    assert all(not c for c in conds)


def test_conditions_for_diagonal_pencil():
    a, b = BivarPoly.var_a(), BivarPoly.var_b()
    zero = BivarPoly()
    one = BivarPoly.const(1)
    diag = ((one, zero, zero), (zero, a, zero), (zero, zero, b))
    conds = scalar_cube_conditions(diag)
    nonzero = [c for c in conds if c]
    # conditions reduce to 1 - a^3 = 0 and a^3 - b^3 = 0
    assert len(nonzero) == 2
    supports = sorted(tuple(sorted(c.terms)) for c in nonzero)
    assert supports == [((0, 0), (3, 0)), ((0, 3), (3, 0))]
    for a0, b0 in ((1, 1), (1, 2), (2, 1)):
        vals = [c.evaluate(a0, b0) for c in conds]
        if a0 ** 3 == b0 ** 3 == 1:
            assert not any(vals)
        else:
            assert any(vals)


def test_conditions_iff_cube_scalar(projectors, centralizing_conditions):
    rng = random.Random(21)
    pm = alpha_candidate("centralizing", projectors, tau().mat)
    samples = [(QuadRat(0), QuadRat(1)), (QuadRat(-1), QuadRat(-1))]
    samples += [(QuadRat(rng.randint(-3, 3), rng.randint(1, 2)),
                 QuadRat(rng.randint(-3, 3), rng.randint(1, 2)))
                for _ in range(50)]
    for a0, b0 in samples:
        m = evaluate_poly_matrix(pm, a0, b0)
        from pgl3q2.linalg import det3
        if not det3(m):
            continue
        cube = mat_pow(m, 3)
        off = [cube[i][j] for i in range(3) for j in range(3) if i != j]
        is_scalar = (not any(off)) and cube[0][0] == cube[1][1] == cube[2][2]
        vanish = all(not c.evaluate(a0, b0) for c in centralizing_conditions)
        assert vanish == is_scalar


# -- centralizing case -----------------------------------------------------------------

def test_centralizing_elimination(projectors, centralizing_conditions):
    rep = eliminate_centralizing(centralizing_conditions)
    b = BivarPoly.var_b()
    assert rep.residuals[rep.cube_relation_index] == b * b * b - b
    assert rep.roots == [QuadRat(0), QuadRat(1), QuadRat(-1)]
    assert rep.satisfying == [QuadRat(1), QuadRat(-1)]
    assert rep.solutions == [(QuadRat(0), QuadRat(1)),
                             (QuadRat(-1), QuadRat(-1))]


def test_centralizing_b_zero_fails(centralizing_conditions):
    rep = eliminate_centralizing(centralizing_conditions)
    a0 = rep.substitution.evaluate(0, 0)
    assert any(c.evaluate(a0, 0) for c in centralizing_conditions)


def test_centralizing_solutions_are_sigma_powers(projectors,
                                                 centralizing_conditions):
    rep = eliminate_centralizing(centralizing_conditions)
    p1, p2, s2 = projectors
    s = sigma()
    v = base_vertex()
    expected = {QuadRat(1): s, QuadRat(-1): s.inverse()}
    pm = alpha_candidate("centralizing", projectors, tau().mat)
    for a0, b0 in rep.solutions:
        gamma = mat_add(p1, mat_add(mat_scale(a0, p2), mat_scale(b0, s2)))
        assert projective_equal(ProjElement(gamma), expected[b0])
        alpha = ProjElement(evaluate_poly_matrix(pm, a0, b0))
        assert act(alpha, v) == v  # fixes v, so not a triangle rotation


def test_elimination_soundness(centralizing_conditions):
    rep = eliminate_centralizing(centralizing_conditions)
    for a0, b0 in rep.solutions:
        assert all(not c.evaluate(a0, b0) for c in centralizing_conditions)


def test_centralizing_completeness_mod_11(centralizing_conditions):
    # independent brute force over F_11 x F_11; 11 splits (t^2+t+2 has the
    # rational roots 6 and 4 mod 11), so reduction is a ring map and every
    # exact solution reduces to a mod-11 solution
    for root in (6, 4):
        assert (root * root + root + 2) % 11 == 0

    def red(x: QuadRat, root: int) -> int:
        num = (x.num.a + x.num.b * root) % 11
        return num * pow(x.den, -1, 11) % 11

    for root in (6, 4):
        polys = [{k: red(c, root) for k, c in cond.terms.items()}
                 for cond in centralizing_conditions]
        sols = set()
        for a0 in range(11):
            for b0 in range(11):
                ok = all(
                    sum(c * pow(a0, i, 11) * pow(b0, j, 11)
                        for (i, j), c in p.items()) % 11 == 0
                    for p in polys)
                if ok:
                    sols.add((a0, b0))
        assert sols == {(0, 1), (10, 10)}  # the images of (0,1) and (-1,-1)


# -- inverting case ----------------------------------------------------------------------

def test_inverting_elimination(projectors, inverting_conditions):
    rep = eliminate_inverting(inverting_conditions)
    assert rep.f.degree_b() == 1
    assert rep.a_at_b_zero == QuadRat(1)
    assert rep.gcd_poly.degree_b() == 1
    assert rep.spurious_b != QuadRat(0)


def test_inverting_b_zero_recovers_alpha_m(projectors, inverting_conditions):
    rep = eliminate_inverting(inverting_conditions)
    pm = alpha_candidate("inverting", projectors, tau().mat, gamma_m().mat)
    alpha0 = ProjElement(evaluate_poly_matrix(pm, rep.a_at_b_zero, 0))
    assert projective_equal(alpha0, alpha_m())


def test_inverting_spurious_branch(projectors, inverting_conditions):
    rep = eliminate_inverting(inverting_conditions)
    pm = alpha_candidate("inverting", projectors, tau().mat, gamma_m().mat)
    alpha_sp = evaluate_poly_matrix(pm, rep.spurious_a, rep.spurious_b)
    assert all(not c.evaluate(rep.spurious_a, rep.spurious_b)
               for c in inverting_conditions)
    assert integral_odd_det(alpha_sp)
    assert act(ProjElement(alpha_sp), base_vertex()) == base_vertex()


# -- integrality test ----------------------------------------------------------------------

def test_integral_odd_det():
    assert integral_odd_det(identity())
    assert integral_odd_det(mat_scale(QuadRat(1, 3), identity()))
    assert integral_odd_det(sigma().mat)
    # any scalar multiple clears: l * identity is projectively integral
    assert integral_odd_det(mat_scale(LAM, identity()))
    assert not integral_odd_det(beta_l().mat)
    assert not integral_odd_det(mat(((1, 0, 0), (0, 1, 0), (0, 0, LAM))))
    assert not integral_odd_det(mat(((0, 0, 0), (0, 0, 0), (0, 0, 0))))
