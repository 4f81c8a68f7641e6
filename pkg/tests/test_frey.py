import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from freyap import arith, frey
from freyap.frey import Solution


def test_progressions_k4():
    pr = frey.enumerate_progressions(4)
    assert pr.n_quads == 3
    assert sorted(tuple(q) for q in pr.quads) == [(0, 1, 1, 2), (0, 1, 2, 3), (1, 2, 2, 3)]
    assert sorted(tuple(t) for t in pr.triples) == [(0, 1, 2), (1, 2, 3)]


def test_progressions_k5_and_lazy():
    assert frey.enumerate_progressions(5).n_quads == 7
    lazy = frey.enumerate_progressions(30, materialize=False)
    assert lazy.quads is None and lazy.n_quads == lazy.formula


def test_small_k_is_empty():
    pr = frey.enumerate_progressions(2)
    assert pr.n_quads == 0 and pr.n_triples == 0


def test_quad_count_closed_form():
    for k in range(3, 65):
        assert frey.quad_count_sum(k) == frey.quad_count_formula(k)
        assert sum(1 for _ in frey.iter_quads(k)) == frey.quad_count_formula(k)


def test_quad_members_satisfy_shape():
    for q in frey.iter_quads(12):
        assert q.i1 + q.i2 == q.j1 + q.j2
        assert 0 <= q.j1 < q.i1 <= q.i2 < q.j2 <= 11


def test_decompose_examples():
    ts = frey.decompose_terms(Solution(1, 2, 5))
    assert [t.term for t in ts] == [1, 3, 5, 7, 9]
    # smooth means every prime factor < k, so 5 and 7 are rough at k = 5
    assert [(t.smooth, t.rough) for t in ts] == [(1, 1), (3, 1), (1, 5), (1, 7), (9, 1)]
    assert all(t.smooth == t.term for t in frey.decompose_terms(Solution(1, 1, 8)))
    t0 = frey.decompose_terms(Solution(11**3, 2, 5, ell=3))[0]
    assert (t0.smooth, t0.rough, t0.rough_is_power) == (1, 1331, True)
    with pytest.raises(ValueError, match="degenerate term"):
        frey.decompose_terms(Solution(0, 1, 3))


def test_gcd_lemma_examples():
    assert frey.gcd_lemma_check(Solution(1, 6, 10))
    assert frey.gcd_lemma_check(Solution(5, 7, 50))
    with pytest.raises(ValueError, match="not coprime"):
        frey.gcd_lemma_check(Solution(2, 4, 5))


@settings(max_examples=60, deadline=None)
@given(st.integers(-10**6, 10**6), st.integers(1, 10**6), st.integers(3, 200))
def test_gcd_lemma_random(n, d, k):
    if math.gcd(n, d) != 1:
        return
    assert frey.gcd_lemma_check(Solution(n, d, k))


def test_frey_A_examples():
    a = frey.build_frey_A(Solution(1, 2, 5), (0, 1, 2))
    assert (a.g, a.a, a.b, a.c, a.disc) == (1, 1, -6, 5, 57600)
    b = frey.build_frey_A(Solution(1, 1, 5), (0, 1, 2))
    assert (b.g, b.a, b.b, b.c, b.disc) == (1, 1, -4, 3, 9216)


def test_frey_I_examples():
    c = frey.build_frey_I(Solution(1, 1, 5), (0, 1, 2, 3))
    assert (c.A, c.B, c.kappa, c.disc) == (4, 6, -2, 49152)
    e = frey.build_frey_I(Solution(3, 2, 5), (0, 1, 1, 2))
    assert (e.A, e.B, e.kappa, e.A - e.B) == (21, 25, -1, -4)


def test_frey_discriminants_agree_on_random_inputs():
    rng = random.Random(7)
    for _ in range(200):
        k = rng.randint(3, 25)
        n, d = rng.randint(-10**5, 10**5), rng.randint(1, 10**5)
        sol = Solution(n, d, k)
        if math.gcd(n, d) != 1 or 0 in sol.terms():
            continue
        for t in frey.iter_triples(k):
            fa = frey.build_frey_A(sol, t)
            assert 4 * frey.weierstrass_discriminant(*fa.model) == fa.disc == 64 * (fa.a * fa.b * fa.c) ** 2
        for q in frey.iter_quads(k):
            try:
                fi = frey.build_frey_I(sol, q)
            except ValueError:
                continue
            assert fi.A - fi.B == fi.kappa * d * d
            assert frey.weierstrass_discriminant(*fi.model) == fi.disc


def test_level_bounds_examples():
    la = frey.level_bounds_A((1, 3, 5), 10)
    assert la.odd_radical == 15 and la.divisor_bound == 2**8 * 15
    li = frey.level_bounds_I(-2, 4)
    assert li.divisor_bound == 2**7 * 3**5 * 4 * (2 * 3) ** 2


def test_level_bound_A_odd_part_squarefree():
    rng = random.Random(2)
    for _ in range(300):
        vals = [rng.randint(1, 10**6) for _ in range(3)]
        odd = arith.odd_part(frey.level_bounds_A(vals, 50).divisor_bound)
        assert arith.squarefree_kernel(odd) == odd


def test_ell_bound_examples():
    assert frey.ell_bound(5, 6) == 3
    assert frey.ell_bound(2, 11) == 5
    assert frey.ell_bound(3, 1) >= 1


def test_kraus_examples():
    h = frey.kraus_H(6)
    assert h.G == pytest.approx(9)
    assert h.F == pytest.approx(2.80, abs=0.01)
    assert h.H == pytest.approx(9)
    assert frey.kraus_H(1).G == pytest.approx(4)


def test_kraus_log_and_direct_agree():
    for n in range(1, 400):
        h = frey.kraus_H(n)
        g0 = (n + 1) / 12
        F = (math.sqrt(arith.mu_kraus(n) / 6) + 1) ** (2 * g0)
        assert h.F == pytest.approx(F, rel=1e-9)


def test_contradiction_threshold_examples():
    k = 10**8
    assert frey.contradiction_threshold(k, k, log_M0_cap=7 * math.log(2) + 1.000081 * k)
    assert not frey.contradiction_threshold(2, 1, M0_cap=10**20)
    assert frey.contradiction_threshold(2, 1, M0_cap=1)
