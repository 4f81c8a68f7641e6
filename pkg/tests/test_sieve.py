import itertools
import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from freyap import arith, sieve
from freyap.sieve import SieveConfig


def test_index_set_examples():
    assert sieve.index_set_Ip(1, 1, 10, 3) == [2, 5, 8]
    assert sieve.index_set_Ip(2, 3, 20, 5) == [1, 6, 11, 16]
    assert sieve.index_set_Ip(1, 15, 40, 5) == []
    with pytest.raises(ValueError):
        sieve.index_set_Ip(2, 4, 10, 3)


@settings(max_examples=200, deadline=None)
@given(st.integers(-10**5, 10**5), st.integers(1, 10**5), st.integers(3, 500),
       st.sampled_from(arith.sieve_primes(600)))
def test_index_set_size(n, d, k, p):
    if math.gcd(n, d) != 1:
        return
    ip = sieve.index_set_Ip(n, d, k, p)
    if d % p == 0:
        assert ip == []
    else:
        assert abs(len(ip) - k / p) < 1


def test_index_sets_match_factorizations():
    n, d, k = 7, 3, 300
    primes = arith.sieve_primes(10 * k)
    sets = {p: set(sieve.index_set_Ip(n, d, k, p)) for p in primes}
    for i in range(k):
        fac = set(arith.factorize(n + i * d).primes)
        assert {p for p in primes if i in sets[p]} == {p for p in fac if p in sets}


def test_config_validation():
    with pytest.raises(ValueError):
        SieveConfig(100, S=(2, 3))
    with pytest.raises(ValueError):
        SieveConfig(100, S=(7, 11, 13))
    assert SieveConfig(100, S=(11, 13)).s_recip_sum() < 0.17
    with pytest.raises(ValueError):
        SieveConfig(100, t_exponent=0)
    cfg = SieveConfig(100, j_density=0.5)
    assert cfg.differs_from_defaults() and not cfg.defaults().differs_from_defaults()


def test_build_J():
    r = sieve.build_J(SieveConfig(10**4))
    assert 0 < len(r.J) < 10**4 and r.density == len(r.J) / 10**4


def test_build_J_divisible_d():
    k = 200
    d = math.prod(p for p in arith.sieve_primes(k) if p > k // 2)
    r = sieve.build_J(SieveConfig(k, n=1, d=d))
    t = next(f for f in r.families if f.name == "T")
    big = [p for p in arith.sieve_primes(k) if p > SieveConfig(k).t_low and p > k // 2]
    assert all(sieve.index_set_Ip(1, d, k, p) == [] for p in big)
    assert t.removed >= 0


def test_deletion_examples():
    d = sieve.erdos_deletion(list(range(10)), [i + 1 for i in range(10)], 10)
    assert set(d.deleted) == {2, 3, 5, 7} and d.certificate
    ones = sieve.erdos_deletion(list(range(10)), [1] * 10, 10)
    assert ones.certificate and ones.J1 == list(range(10))
    with pytest.raises(ValueError):
        sieve.erdos_deletion([0], [11], 10)


def test_deletion_certificate_random():
    rng = random.Random(9)
    for _ in range(100):
        k = rng.randint(5, 200)
        ps = arith.sieve_primes(k - 1)
        A = [math.prod(rng.choice(ps) ** rng.randint(0, 3) for _ in range(3)) for _ in range(k)]
        J = sorted(rng.sample(range(k), rng.randint(1, k)))
        d = sieve.erdos_deletion(J, A, k)
        for p, s, cap in d.valuation_rows:
            assert cap == arith.ord_p(math.factorial(k - 1), p)


@pytest.mark.parametrize("xs,expected", [({0, 1, 2}, (0, 1, 2)), ({0, 1, 3, 4}, None), ({0, 2, 4, 5}, (0, 2, 4))])
def test_find_3ap_examples(xs, expected):
    got = sieve.find_3ap(xs)
    assert (tuple(got) if got else None) == expected


def test_find_3ap_oracle_small():
    for mask in range(1 << 10):
        xs = [i for i in range(10) if mask >> i & 1]
        oracle = next(((a, b, c) for a, b, c in itertools.combinations(xs, 3) if a + c == 2 * b), None)
        got = sieve.find_3ap(xs)
        assert (got is None) == (oracle is None)


def test_roth_threshold():
    assert sieve.roth_threshold(1).loglog == pytest.approx(132 * math.log(2))
    assert sieve.roth_threshold(0.5).loglog == pytest.approx(264 * math.log(2))
    assert sieve.roth_threshold(1e-5).loglog == pytest.approx(9.15e6, rel=1e-3)
    with pytest.raises(ValueError):
        sieve.roth_threshold(0)


def test_pipeline_examples():
    r = sieve.sieve_pipeline(SieveConfig(1000))
    assert r.deletion.certificate
    assert r.triple is not None or r.failure
    ones = sieve.sieve_pipeline(SieveConfig(100), A=[1] * 100)
    assert ones.triple is not None and ones.conductor_bound == 2**8 and ones.conductor_ok


def test_maximal_B():
    k = 10**4
    cands = [((0, 1, 2), 15), ((1, 2, 3), 21), ((2, 3, 4), 6), ((3, 4, 5), 77)]
    m = sieve.maximal_B_construction(k, cands)
    assert len(m.B) == 3 and m.valid and m.maximal
    assert m.rejected[0][1] == "prime factor in the excluded window"
    same = [((i, i + 1, i + 2), 3 * (2 * i + 1)) for i in range(5)]
    same = [(t, N) for t, N in same if arith.largest_prime_factor(N) == 3] + [((9, 10, 11), 9)]
    assert len(sieve.maximal_B_construction(k, same).B) == 1


def test_C_share_bound():
    k = 10**6
    n = math.ceil(17 * math.log(k))
    assert n / (1e4 * math.log(k)) == pytest.approx(0.0017, rel=0.01)
