import random

import pytest

from kellermaps.errors import (
    BadPrime,
    NotKeller,
    PreconditionFailed,
    PrecisionTooLow,
)
from kellermaps.hensel import (
    discriminant,
    fiber_points,
    hensel_lift,
    lift_univariate_root,
    resultant,
)
from kellermaps.polynomials import MultiPoly, PolyMap
from kellermaps.rings import build_unramified, truncated_fpt, truncated_zp
from kellermaps.unimodular import random_triangular_keller


def var(ring, n, i):
    return MultiPoly.variable(ring, n, i)


def test_sqrt2_lift_mod_7_to_the_4():
    z = truncated_zp(7, 4)
    x = var(z, 1, 0)
    f = PolyMap([x * x - 2])
    result = hensel_lift(f, (3,))
    beta = result.beta[0].val
    assert (beta * beta) % 7**4 == 2
    assert beta % 7 == 3
    assert result.m == 0
    assert result.uniqueness_exponent == 1
    # independent oracle: scan the full congruence class
    sols = [v for v in range(7**4) if (v * v - 2) % 7**4 == 0 and v % 7 == 3]
    assert sols == [beta]


def test_exact_root_takes_zero_iterations():
    z = truncated_zp(7, 5)
    x = var(z, 1, 0)
    f = PolyMap([x * x - 49])
    result = hensel_lift(f, (7,))
    assert result.beta[0] == z(7)
    assert result.m == 1
    assert result.iterations == 0
    assert result.uniqueness_exponent == 2


def test_positive_m_with_iterations():
    # X^2 - 49 over Z/7^6 from alpha = 56: m = 1, F(alpha) has ord 3 = 2m+1
    z = truncated_zp(7, 6)
    x = var(z, 1, 0)
    f = PolyMap([x * x - 49])
    result = hensel_lift(f, (56,))
    beta = result.beta[0].val
    assert result.m == 1
    assert result.iterations > 0
    assert (beta * beta - 49) % 7**6 == 0
    assert beta % 7**2 == 56 % 7**2  # beta = alpha mod M^{m+1}
    # at truncation the root class is only pinned modulo M^{N-m}
    assert beta % 7**5 == 7


def test_quadratic_progress_is_strict():
    z = truncated_zp(5, 5)
    x = var(z, 1, 0)
    f = PolyMap([x * x - 6])
    result = hensel_lift(f, (1,))
    assert all(b > a for a, b in zip(result.progress, result.progress[1:]))
    assert result.beta[0].val ** 2 % 5**5 == 6


def test_equal_characteristic_lift():
    e = truncated_fpt(3, 4)
    x = var(e, 1, 0)
    t = e.uniformizer()
    # root of X^2 - (1 + T) starting from X = 1
    f = PolyMap([x * x - MultiPoly.constant(e, 1, e.one + t)])
    result = hensel_lift(f, (1,))
    beta = result.beta[0]
    assert (beta * beta) == e.one + t
    assert result.m == 0


def test_unramified_lift():
    u = build_unramified(3, 2, 3)
    x = var(u, 1, 0)
    # theta satisfies the modulus; lift a root of X^2 - theta^2 from theta
    theta = u.theta()
    f = PolyMap([x * x - MultiPoly.constant(u, 1, theta * theta)])
    result = hensel_lift(f, (theta,))
    assert result.beta[0] * result.beta[0] == theta * theta


def test_precondition_failures():
    z = truncated_zp(5, 3)
    x = var(z, 1, 0)
    f = PolyMap([x * x - 2])  # 2 is not a square mod 5
    with pytest.raises(PreconditionFailed):
        hensel_lift(f, (1,))  # F(1) = -1 is a unit: ord 0 < 1
    # det JF vanishing at working precision
    const = PolyMap([MultiPoly.constant(z, 1, 5)])
    with pytest.raises(PreconditionFailed):
        hensel_lift(const, (0,))


def test_precision_too_low():
    z = truncated_zp(7, 2)
    x = var(z, 1, 0)
    f = PolyMap([x * x - 49])
    with pytest.raises(PrecisionTooLow):
        hensel_lift(f, (7,))  # m = 1 needs precision >= 3


def test_uniqueness_by_exhaustive_scan_small_ring():
    z = truncated_zp(3, 3)
    x = var(z, 1, 0)
    f = PolyMap([x * x - 7])  # 7 = 1 mod 3; roots exist
    result = hensel_lift(f, (1,))
    beta = result.beta[0].val
    sols = [v for v in range(27) if (v * v - 7) % 27 == 0 and v % 3 == 1]
    assert sols == [beta]


def test_fiber_identity():
    z = truncated_zp(3, 2)
    pts = fiber_points(PolyMap.identity(z, 2), (0, 0))
    assert len(pts) == 1
    assert [x.val for x in pts[0]] == [0, 0]


def test_fiber_triangular_with_exhaustive_oracle():
    z = truncated_zp(3, 3)
    f = PolyMap([var(z, 2, 0) + var(z, 2, 1) ** 2, var(z, 2, 1)])
    pts = fiber_points(f, (0, 0))
    oracle = [
        (a, b)
        for a in range(27)
        for b in range(27)
        if (a + b * b) % 27 == 0 and b % 27 == 0
    ]
    assert len(pts) == len(oracle) == 1


def test_fiber_matches_residue_solution_count_random():
    rng = random.Random(40)
    z = truncated_zp(3, 3)
    for _ in range(15):
        f = random_triangular_keller(z, 2, 2, rng)
        c = tuple(z.random_element(rng) for _ in range(2))
        pts = fiber_points(f, c)
        res = f.reduce_to_residue()
        cbar = tuple(x.reduce() for x in c)
        count = 0
        for a in range(3):
            for b in range(3):
                pt = (res.ring(a), res.ring(b))
                if res.eval(pt) == cbar:
                    count += 1
        assert len(pts) == count
        for pt in pts:
            assert f.eval(pt) == c


def test_fiber_requires_keller():
    z = truncated_zp(5, 2)
    f = PolyMap([var(z, 2, i) - var(z, 2, i) ** 5 for i in range(2)])
    with pytest.raises(NotKeller):
        fiber_points(f, (0, 0))


def test_discriminant_classical_formulas():
    assert discriminant([-2, 0, 1]) == 8  # T^2 - 2
    assert discriminant([0, -1, 0, 1]) == 4  # T^3 - T: -4p^3 - 27q^2 with p=-1, q=0
    rng = random.Random(3)
    for _ in range(30):
        b, c = rng.randrange(-9, 10), rng.randrange(-9, 10)
        assert discriminant([c, b, 1]) == b * b - 4 * c
    for _ in range(30):
        p_, q_ = rng.randrange(-9, 10), rng.randrange(-9, 10)
        assert discriminant([q_, p_, 0, 1]) == -4 * p_**3 - 27 * q_**2


def test_resultant_of_coprime_linear():
    # Res(T - a, T - b) = b - a up to convention sign: vanishes iff a == b
    assert resultant([-3, 1], [-3, 1]) == 0
    assert resultant([-3, 1], [-4, 1]) != 0


def test_lift_univariate_examples():
    r = lift_univariate_root([-2, 0, 1], 7, 4)
    assert r.residue_degree == 1
    assert r.root.val % 7 == 3  # least residue root chosen
    assert (r.root * r.root - 2).is_zero

    r = lift_univariate_root([1, 0, 1], 3, 4)
    assert r.residue_degree == 2
    assert r.ring.residue_ring().element_count == 9
    v = r.root
    assert (v * v + 1).is_zero

    r = lift_univariate_root([-5, 1], 11, 3)
    assert r.root.val == 5


def test_lift_univariate_rejects_dividing_prime():
    with pytest.raises(BadPrime):
        lift_univariate_root([-2, 0, 1], 2, 4)


def test_lift_univariate_residue_root_is_simple():
    r = lift_univariate_root([1, 0, 1], 3, 3)
    k = r.ring.residue_ring()
    root_bar = r.root.reduce()
    derivative_value = root_bar + root_bar  # (T^2+1)' = 2T
    assert not derivative_value.is_zero
