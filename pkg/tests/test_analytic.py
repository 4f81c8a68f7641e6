import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from freyap import analytic, arith, charlab
from freyap.charlab import QuadChar


def test_selberg_equality_case():
    x = np.array([1.0, -2.0, 3.5, 0.25])
    r = analytic.selberg_check(x, [x])
    assert r.lhs == pytest.approx(float(x @ x) ** 2, rel=1e-12)
    assert abs(r.lhs - r.rhs) <= 1e-12 * r.rhs


def test_selberg_orthonormal_is_bessel():
    x = np.arange(1.0, 7.0)
    r = analytic.selberg_check(x, np.eye(6)[:3])
    assert r.lhs == pytest.approx(1 + 4 + 9) and r.rhs == pytest.approx(float(x @ x)) and r.holds


def test_selberg_length_mismatch():
    with pytest.raises(ValueError):
        analytic.selberg_check([1.0, 2.0], [[1.0, 2.0, 3.0]])


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 12).flatmap(lambda n: st.tuples(
    arrays(np.float64, n, elements=st.floats(-100, 100)),
    arrays(np.float64, st.tuples(st.integers(1, 6), st.just(n)), elements=st.floats(-100, 100)))))
def test_selberg_random(xy):
    x, Y = xy
    assert analytic.selberg_check(x, Y).holds


def test_large_sieve_pipeline():
    chars = [QuadChar(D) for D in charlab.fundamental_discriminants(50)]
    r = analytic.large_sieve_pipeline(10**4, chars)
    assert r.norm_ok and r.selberg_ok
    assert r.offdiag_max < 10**4 / 10
    assert r.inv68_lt_varpi and not r.inv68_lt_varpi_sq


def test_large_sieve_single_character():
    r = analytic.large_sieve_pipeline(1000, [QuadChar(-4)])
    assert r.offdiag_max == 0 and r.n_chars == 1


def test_large_sieve_duplicates_rejected():
    with pytest.raises(ValueError, match="duplicate characters"):
        analytic.large_sieve_pipeline(100, [QuadChar(5), QuadChar(5)])


def test_large_sieve_rowsum_monotone():
    Ds = charlab.fundamental_discriminants(60)
    prev = 0.0
    for n in range(1, len(Ds) + 1):
        r = analytic.large_sieve_pipeline(3000, [QuadChar(D) for D in Ds[:n]])
        assert r.max_rowsum >= prev
        prev = r.max_rowsum


def test_repulsion_threshold_exact():
    N = analytic.repulsion_threshold()
    assert N == 373743
    assert 2.13 / math.log(N) >= 0.166 > 2.13 / math.log(N + 1)


def test_repulsion_examples():
    assert analytic.repulsion_chain(373744, 5).refutes
    assert not analytic.repulsion_chain(373743, 5).refutes
    assert analytic.repulsion_chain(400000, 2).log_conductors[1] == pytest.approx(math.log(1.6e11))
    ch = analytic.repulsion_chain(1000, 20)
    assert ch.recip_sum < ch.geometric_limit < ch.chain_bound
    assert ch.geometric_limit * math.log(1000) == pytest.approx(2 / 0.94)
    assert all(b > a for a, b in zip(ch.log_conductors, ch.log_conductors[1:]))


def test_condbound_examples():
    r = analytic.condbound_scan(10**4)
    assert r.argmin == 24 and r.min_ratio == pytest.approx(3 / math.log(24), abs=1e-12)
    assert not r.violations
    small = analytic.condbound_scan(23)
    assert small.min_ratio > 0.94 and small.argmin != 24


def test_valid_conductors_are_fundamental():
    sqf = analytic.squarefree_table(2000)
    Ns = set(analytic.valid_conductors(2000, sqf).tolist())
    direct = {abs(D) for D in charlab.fundamental_discriminants(2000)}
    assert Ns == direct


def test_theta_checks_small():
    r = analytic.explicit_theta_checks(10**6, ap_samples=[10**6], mertens_samples=[100])
    assert r.schoenfeld_ok
    assert r.ap_samples[0]["ratio"] == pytest.approx(1, abs=0.05)
    direct = math.prod(1 + 1 / q for q in arith.sieve_primes(100)) / math.log(100)
    assert r.mertens_samples[0]["ratio"] == pytest.approx(direct, rel=1e-12)


def test_pnt_residual_examples():
    t = analytic.pnt_residual(QuadChar(1), 10**5)
    assert t.residual == pytest.approx(arith.psi(10**5) - 10**5, abs=1e-6) and t.ratio < 0.01
    assert analytic.pnt_residual(QuadChar(-4), 10**6).ratio < 0.01
    analytic.pnt_residual(QuadChar(5), 10**3)
