import random
from fractions import Fraction
from math import inf

import pytest

from pgl3q2.qlambda import (
    LAM,
    LBAR,
    THETA,
    PadicApprox,
    QuadInt,
    QuadRat,
    embed_2adic,
    hensel_lambda_root,
    parse_quadrat,
    render_quadrat,
    val2,
)

L = QuadInt(0, 1)
LB = QuadInt(-1, -1)
TH = QuadInt(1, 2)


def rand_qi(rng, bound=50):
    return QuadInt(rng.randint(-bound, bound), rng.randint(-bound, bound))


def rand_qr(rng, bound=30):
    return QuadRat(rand_qi(rng, bound), rng.randint(1, 12))


# -- multiplication and conjugation ----------------------------------------

def test_lambda_times_lambdabar_is_two():
    assert L * LB == QuadInt(2, 0)


def test_lambda_squared_from_minimal_polynomial():
    assert L * L == QuadInt(-2, -1)


def test_one_is_multiplicative_identity():
    rng = random.Random(1)
    one = QuadInt(1, 0)
    for _ in range(20):
        x = rand_qi(rng)
        assert one * x == x


def test_conjugation():
    assert L.conj() == LB
    assert QuadInt(3, 0).conj() == QuadInt(3, 0)
    assert TH.conj() == -TH
    rng = random.Random(2)
    for _ in range(50):
        x = rand_qi(rng)
        assert x.conj().conj() == x


def test_norms():
    assert L.norm() == 2
    assert TH.norm() == 7
    assert QuadInt(0, 0).norm() == 0
    rng = random.Random(3)
    for _ in range(50):
        x = rand_qi(rng)
        assert x.norm() >= 0
        assert (x.norm() == 0) == (not x)


def test_exact_division():
    assert LB.divides(QuadInt(2, 0)) == L
    assert LB.divides(QuadInt(1, 0)) is None
    assert TH.divides(QuadInt(7, 0)) == -TH
    with pytest.raises(ZeroDivisionError):
        QuadInt(0, 0).divides(L)
    rng = random.Random(4)
    for _ in range(100):
        d = rand_qi(rng, 10)
        q = rand_qi(rng, 10)
        if not d:
            continue
        assert d.divides(d * q) == q


def test_ring_axioms_random():
    rng = random.Random(5)
    for _ in range(1000):
        x, y, z = (rand_qi(rng) for _ in range(3))
        assert x * y == y * x
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z


def test_norm_multiplicative():
    rng = random.Random(6)
    for _ in range(1000):
        x, y = rand_qi(rng), rand_qi(rng)
        assert (x * y).norm() == x.norm() * y.norm()


# -- field of fractions ------------------------------------------------------

def test_quadrat_reduction_and_equality():
    assert QuadRat(QuadInt(2, 4), 6) == QuadRat(QuadInt(1, 2), 3)
    assert QuadRat(QuadInt(-3, 0), -6) == QuadRat(1, 2)
    assert QuadRat(Fraction(3, 4)) == QuadRat(3, 4)


def test_quadrat_field_ops():
    rng = random.Random(7)
    for _ in range(200):
        x, y = rand_qr(rng), rand_qr(rng)
        if y:
            assert (x / y) * y == x
        assert x + y - y == x
        assert x * y == y * x
    x = LAM / LBAR
    assert x * LBAR == LAM


def test_theta_squared():
    assert THETA * THETA == QuadRat(-7)
    assert LAM - LBAR == THETA


# -- 2-adic embedding --------------------------------------------------------

def test_val2_basics():
    assert val2(LAM) == 1
    assert val2(LBAR) == 0
    assert val2(QuadRat(1, 2)) == -1
    assert val2(QuadRat(0)) == inf
    assert val2(THETA) == 0
    assert val2(QuadRat(8)) == 3


def test_val2_additive_on_products():
    rng = random.Random(8)
    for _ in range(300):
        x, y = rand_qr(rng), rand_qr(rng)
        if x and y:
            assert val2(x * y) == val2(x) + val2(y)


def test_embed_lambda_small_precision():
    # independent oracle: exhaustive search for the even root of
    # t^2 + t + 2 mod 32
    roots = [t for t in range(0, 32, 2) if (t * t + t + 2) % 32 == 0]
    assert roots == [26]
    a = embed_2adic(LAM, 4)
    assert a.valuation == 1
    assert a.unit_residue % 8 == 5  # lambda/2 = 5 mod 8, lambda = 10 mod 16
    assert a.residue(4) == 26 % 16 == 10


def test_embed_lambdabar_is_unit():
    for n in (1, 4, 16, 64):
        assert embed_2adic(LBAR, n).valuation == 0


def test_embed_two():
    a = embed_2adic(QuadRat(2), 10)
    assert a.valuation == 1 and a.unit_residue == 1


def test_embed_multiplicative():
    rng = random.Random(9)
    for _ in range(200):
        x, y = rand_qr(rng), rand_qr(rng)
        n = 24
        prod = embed_2adic(x, n) * embed_2adic(y, n)
        assert embed_2adic(x * y, n).agrees_with(prod)


def test_hensel_root_stability():
    for n in range(1, 40):
        assert (hensel_lambda_root(n + 1) - hensel_lambda_root(n)) % (1 << n) == 0


def test_embed_denominators():
    a = embed_2adic(QuadRat(1, 3), 8)
    assert a.valuation == 0
    assert (3 * a.unit_residue) % 256 == 1
    b = embed_2adic(QuadRat(1, 12), 8)
    assert b.valuation == -2


def test_minimal_polynomial_in_z2():
    n = 40
    t = embed_2adic(LAM, n)
    r = (t.unit_residue << 1)
    assert (r * r + r + 2) % (1 << n) == 0


def test_padic_zero_and_errors():
    z = PadicApprox.zero(8)
    assert z.is_zero()
    assert (z * embed_2adic(LAM, 8)).is_zero()
    with pytest.raises(ValueError):
        embed_2adic(LAM, 0)
    with pytest.raises(ValueError):
        PadicApprox(0, 4, 8)  # even unit part


# -- text form ----------------------------------------------------------------

def test_render():
    assert render_quadrat(QuadRat(0)) == "0"
    assert render_quadrat(LAM) == "l"
    assert render_quadrat(-LAM) == "-l"
    assert render_quadrat(LBAR) == "-1 - l"
    assert render_quadrat(QuadRat(QuadInt(3, 2), 4)) == "3/4 + (2/4)*l"


def test_render_parse_roundtrip():
    rng = random.Random(10)
    cases = [QuadRat(0), LAM, LBAR, THETA, QuadRat(1, 2), -LAM / 2,
             QuadRat(QuadInt(-3, 5), 7)]
    cases += [rand_qr(rng) for _ in range(200)]
    for x in cases:
        assert parse_quadrat(render_quadrat(x)) == x


def test_parse_examples():
    assert parse_quadrat("1/2 + (3/2)*l") == QuadRat(QuadInt(1, 3), 2)
    assert parse_quadrat("-2 + l") == QuadRat(QuadInt(-2, 1))
    assert parse_quadrat("0") == QuadRat(0)
    with pytest.raises(ValueError):
        parse_quadrat("1 + + 2")
    with pytest.raises(ValueError):
        parse_quadrat("x")
