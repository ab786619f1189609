"""Acceptance suite: one test per criterion, exact arithmetic throughout.

Each test prints a `criterion <n>: PASS` line on success (visible with
`pytest -s`). Criterion 2 is split: the composition clause asserts that
F o F vanishes on all 25 residue points, which exhaustive evaluation
refutes (the residue map fixes every point with all coordinates 4, since
g(g(4)) = g(0) = 4), so that test fails by design; see the analysis in the
repository notes. All other clauses of criterion 2 pass.
"""

import itertools
import random
import time

import pytest

from kellermaps.constructions import (
    char_p_counterexample,
    coordinates_of_point,
    find_d_unimodular_extension,
    g_composition_example,
    pair_transitivity,
    quasi_druzkowski_witness,
    restrict_scalars,
)
from kellermaps.errors import BadPrime
from kellermaps.hensel import fiber_points, hensel_lift, lift_univariate_root
from kellermaps.jacobian import complete_to_sl, det_scalar, is_keller, mat_vec, repeat_map
from kellermaps.polynomials import MultiPoly, PolyMap
from kellermaps.rings import build_unramified, truncated_fpt, truncated_zp
from kellermaps.unimodular import (
    VERDICT_NOT_UNIMODULAR,
    VERDICT_UNIMODULAR,
    bezout_check,
    check_unimodular,
    degree_bound_predicate,
    random_triangular_keller,
    residue_zero_count,
)


def _stamp(n, label, t0):
    print(f"criterion {n}: PASS ({label}, {time.perf_counter() - t0:.2f}s)")


def test_criterion_1_counterexample_reproduction():
    t0 = time.perf_counter()
    for p in (2, 3, 5):
        for n in (1, 2, 3):
            f = char_p_counterexample(p, n, 2)
            assert is_keller(f)
            report = check_unimodular(f)
            assert report.verdict == VERDICT_NOT_UNIMODULAR
            assert report.zero_count == p**n
    assert time.perf_counter() - t0 < 1.0
    _stamp(1, "X - X^p Keller and not unimodular with zero_count = p^n", t0)


def test_criterion_2a_g_map_keller_unimodular():
    t0 = time.perf_counter()
    f = g_composition_example(2, 2)
    assert is_keller(f)
    report = check_unimodular(f)
    assert report.verdict == VERDICT_UNIMODULAR
    assert [x.val for x in report.witness] == [0, 0]
    assert [x.val for x in report.witness_value] == [4, 4]
    # F itself is not the zero function on the residue points
    res = f.reduce_to_residue()
    k = res.ring
    zero = (k.zero, k.zero)
    assert any(
        res.eval(pt) != zero
        for pt in itertools.product(list(k.elements()), repeat=2)
    )
    assert time.perf_counter() - t0 < 1.0
    _stamp(2, "g-map Keller, unimodular, witness value (4,4) at the origin", t0)


def test_criterion_2b_g_map_composition_vanishes_everywhere():
    """F o F is claimed to be the zero function on all 25 residue points.

    Exhaustive evaluation refutes the claim: (f o f)(x) = g(g(x)) per
    coordinate, and g(g(4)) = g(0) = 4, so the composition is nonzero at
    the nine points having some coordinate equal to 4. The assertion is
    kept as specified; the failure is intentional and documented. No
    function g can satisfy both g(0) != 0 and g o g == 0: with
    a := g(0) != 0, g(a) must be 0, whence (g o g)(a) = g(0) = a != 0.
    """
    t0 = time.perf_counter()
    f = g_composition_example(2, 2)
    res = f.reduce_to_residue()
    k = res.ring
    zero = (k.zero, k.zero)
    failures = [
        tuple(x.val for x in pt)
        for pt in itertools.product(list(k.elements()), repeat=2)
        if res.eval(res.eval(pt)) != zero
    ]
    assert not failures, (
        f"F o F is nonzero at {len(failures)} of 25 residue points "
        f"(first: {failures[0]}); the composition-vanishing clause is "
        "mathematically unattainable for the stated g"
    )
    _stamp(2, "g-map composition vanishes on all 25 residue points", t0)


def test_criterion_3_q_minus_1_theorem_suite():
    t0 = time.perf_counter()
    suites = [
        (truncated_zp(3, 2), 2),
        (truncated_zp(5, 2), 4),
        (build_unramified(2, 2, 2), 3),
    ]
    rng = random.Random(1003)
    for ring, max_degree in suites:
        q = ring.q
        for _ in range(1000):
            f = random_triangular_keller(ring, 2, max_degree, rng, conjugate=rng.random() < 0.25)
            report = check_unimodular(f)
            assert report.verdict == VERDICT_UNIMODULAR
            assert report.witness is not None
            zeros = residue_zero_count(f)
            assert zeros < q**2
            assert bezout_check(f).satisfied
    elapsed = time.perf_counter() - t0
    assert elapsed < 60.0
    _stamp(3, "3000 seeded Keller maps of degree <= q-1 all unimodular", t0)


def test_criterion_4_fiber_bijection():
    t0 = time.perf_counter()
    ring = truncated_zp(3, 3)
    rng = random.Random(1004)
    for trial in range(100):
        f = random_triangular_keller(ring, 2, 2, rng)
        c = tuple(ring.random_element(rng) for _ in range(2))
        points = fiber_points(f, c)
        res = f.reduce_to_residue()
        k = res.ring
        cbar = tuple(x.reduce() for x in c)
        residue_solutions = sum(
            1
            for pt in itertools.product(list(k.elements()), repeat=2)
            if res.eval(pt) == cbar
        )
        assert len(points) == residue_solutions
        if trial < 10:
            exhaustive = sum(
                1
                for pt in itertools.product(list(ring.elements()), repeat=2)
                if f.eval(pt) == c
            )
            assert len(points) == exhaustive
    elapsed = time.perf_counter() - t0
    assert elapsed < 120.0
    _stamp(4, "fiber size = residue solutions = exhaustive count", t0)


def test_criterion_5_hensel_uniqueness_and_congruence():
    t0 = time.perf_counter()
    z = truncated_zp(7, 4)
    x = MultiPoly.variable(z, 1, 0)
    f = PolyMap([x * x - 2])
    result = hensel_lift(f, (3,))
    beta = result.beta[0].val
    assert (beta * beta) % 7**4 == 2
    assert beta % 7 == 3
    matches = [v for v in range(7**4) if v % 7 == 3 and (v * v - 2) % 7**4 == 0]
    assert matches == [beta]
    assert time.perf_counter() - t0 < 5.0
    _stamp(5, "sqrt(2) lift unique in its residue class mod 7^4", t0)


def test_criterion_6_quasi_druzkowski_witnesses():
    t0 = time.perf_counter()
    rng = random.Random(1006)
    for _ in range(200):
        n = rng.randrange(2, 5)
        b = [[rng.randrange(-9, 10) for _ in range(n)] for _ in range(n)]
        i, j = rng.sample(range(n), 2)
        style = rng.randrange(3)
        if style == 0:
            b[i] = list(b[j])
        elif style == 1:
            b[i] = [0] * n
        else:
            b[i] = [-x for x in b[j]]
        p = rng.choice([5, 7])
        w = quasi_druzkowski_witness(b, p, 2)
        assert w.combination_is_zero
        values = w.map.eval(w.point)
        assert any(v.is_unit for v in values)
    assert time.perf_counter() - t0 < 30.0
    _stamp(6, "200 singular matrices give symbolic kernels and unit witnesses", t0)


def test_criterion_7_galois_descent():
    t0 = time.perf_counter()
    ring = build_unramified(3, 2, 1)
    rng = random.Random(1007)
    all_points = list(itertools.product(list(ring.elements()), repeat=2))
    assert len(all_points) == 81  # 3^4 coordinate points
    for _ in range(50):
        f = random_triangular_keller(ring, 2, 2, rng)
        g = restrict_scalars(f)
        for pt in all_points:
            assert coordinates_of_point(f.eval(pt)) == g.eval(coordinates_of_point(pt))
        assert is_keller(g)
    assert time.perf_counter() - t0 < 30.0
    _stamp(7, "descent correspondence at all 81 points, Keller preserved", t0)


def test_criterion_8_sl_completion_and_pair_transitivity():
    t0 = time.perf_counter()
    for ring in (truncated_zp(2, 2), truncated_zp(3, 2)):
        for v in itertools.product(list(ring.elements()), repeat=2):
            if not any(x.is_unit for x in v):
                continue
            a = complete_to_sl(v)
            assert det_scalar(a) == ring.one
            e1 = [ring.one, ring.zero]
            assert mat_vec(a, e1) == tuple(v)
    rng = random.Random(1008)
    ring = truncated_zp(3, 2)
    for _ in range(100):
        n = rng.randrange(2, 4)
        c = tuple(ring.random_element(rng) for _ in range(n))
        a1 = tuple(ring.random_element(rng) for _ in range(n))
        du = _unimodular(ring, n, rng)
        dt = _unimodular(ring, n, rng)
        d = tuple(x + y for x, y in zip(c, du))
        a2 = tuple(x + y for x, y in zip(a1, dt))
        w = pair_transitivity(a1, a2, c, d)
        assert w.auto.apply(c) == a1
        assert w.auto.apply(d) == a2
    assert time.perf_counter() - t0 < 10.0
    _stamp(8, "SL completions exhaustive; 100 pair-transitivity witnesses exact", t0)


def _unimodular(ring, n, rng):
    v = [ring.random_element(rng) for _ in range(n)]
    if not any(x.is_unit for x in v):
        v[rng.randrange(n)] = ring.random_unit(rng)
    return tuple(v)


def test_criterion_9_repetition_operator():
    t0 = time.perf_counter()
    counterexample = char_p_counterexample(5, 2, 2)
    doubled = repeat_map(counterexample, 2)
    assert is_keller(doubled) == is_keller(counterexample)
    assert (
        check_unimodular(doubled).verdict == check_unimodular(counterexample).verdict
    )
    rng = random.Random(1009)
    for _ in range(20):
        ring = rng.choice([truncated_zp(3, 2), truncated_fpt(3, 2)])
        f = random_triangular_keller(ring, 2, 2, rng)
        ff = repeat_map(f, 2)
        assert is_keller(ff) == is_keller(f)
        assert check_unimodular(ff).verdict == check_unimodular(f).verdict
    assert time.perf_counter() - t0 < 30.0
    _stamp(9, "Keller and unimodularity verdicts agree between F and F^[[2]]", t0)


def test_criterion_10_degree_bound_predicate():
    t0 = time.perf_counter()
    # frozen oracle values from a 50-digit evaluation of
    # log(n log(p/3)/log 3)/log 2
    r = degree_bound_predicate(5, 82, 2)
    assert abs(r.rhs - 5.2527724697865275) < 1e-6
    assert r.holds
    r = degree_bound_predicate(5, 4, 1)
    assert abs(r.rhs - 0.8952204651684438) < 1e-6
    assert not r.holds
    assert time.perf_counter() - t0 < 1.0
    _stamp(10, "bound values match the high-precision oracle to 1e-6", t0)


def test_criterion_11_extension_finder():
    t0 = time.perf_counter()
    assert find_d_unimodular_extension(2, 1, 2).n == 1
    assert find_d_unimodular_extension(2, 3, 2).n == 2
    assert find_d_unimodular_extension(5, 4, 2).n == 1
    for p in (2, 3, 5):
        for d in range(1, 51):
            r = find_d_unimodular_extension(p, d, 1)
            assert r.residue_size > d
            assert r.certificate_holds
    assert time.perf_counter() - t0 < 5.0
    _stamp(11, "least extension exceeds d for every d <= 50, p in {2,3,5}", t0)


def test_criterion_12_univariate_lifting():
    t0 = time.perf_counter()
    r = lift_univariate_root([1, 0, 1], 3, 4)  # T^2 + 1
    assert r.residue_degree == 2
    assert (r.root * r.root + 1).is_zero

    r = lift_univariate_root([-2, 0, 1], 7, 4)  # T^2 - 2
    assert r.residue_degree == 1
    assert (r.root * r.root - 2).is_zero

    with pytest.raises(BadPrime):
        lift_univariate_root([-2, 0, 1], 2, 4)
    assert time.perf_counter() - t0 < 5.0
    _stamp(12, "degree-2 and degree-1 roots found; p | disc rejected", t0)
