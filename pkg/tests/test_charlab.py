import math
import random
from fractions import Fraction

import numpy as np
import pytest

from freyap import arith, charlab
from freyap.charlab import QuadChar


def test_fundamental_discriminant_examples():
    assert charlab.fundamental_discriminant(Fraction(3, 5)).D == 60
    assert charlab.fundamental_discriminant(-1).D == -4
    assert charlab.fundamental_discriminant(Fraction(49, 4)).trivial
    with pytest.raises(ValueError):
        charlab.fundamental_discriminant(0)


def test_thirty_characters_up_to_50():
    assert len(charlab.fundamental_discriminants(50)) == 30


def _induced_by_proper_divisor(chi: QuadChar) -> bool:
    N = chi.conductor
    units = [m for m in range(1, 2 * N) if math.gcd(m, N) == 1]
    for q in arith.factorize(N).primes:
        M = N // q
        classes = {}
        if all(classes.setdefault(m % M, chi(m)) == chi(m) for m in units):
            return True
    return False


def test_constructed_characters_are_primitive():
    rng = random.Random(11)
    for _ in range(400):
        r = Fraction(rng.randint(-10**4, 10**4) or 1, rng.randint(1, 10**3))
        chi = charlab.fundamental_discriminant(r, rng.choice(charlab.OMEGAS))
        odd = chi.odd_conductor
        assert arith.squarefree_kernel(odd) == odd
        if 1 < chi.conductor <= 3000:
            assert not _induced_by_proper_divisor(chi)


def test_mu_characters_lambda_3_5():
    Ds = [c.D for c in charlab.mu_characters(Fraction(3, 5))]
    assert Ds[0] == 60 and Ds[1] == -15


def test_case_II_characters():
    c = charlab.char_from_case_II(Fraction(7, 10), Fraction(1, 10), 1)
    assert c.char.odd_conductor == 7
    cm = charlab.char_from_case_II(Fraction(1, 2), Fraction(1, 2), 1)
    assert cm.char.trivial and cm.cm
    with pytest.raises(ValueError, match="not on the descent conic"):
        charlab.char_from_case_II(1, 1, 1)


def test_case_chars_divide_level():
    rng = random.Random(4)
    for _ in range(300):
        a, b = rng.randint(1, 10**4), rng.randint(-10**4, 10**4)
        if b == 0 or a == b:
            continue
        lam = Fraction(b, a)
        for w in charlab.OMEGAS:
            chi = charlab.char_from_case_I(lam, w).char
            if w in (1, -1):
                assert charlab.odd_conductor_divides_level(chi, a, b)


def test_mu_identity_examples():
    assert charlab.mu_quadruple_identity(Fraction(3, 5), 11)
    assert charlab.mu_quadruple_identity(Fraction(3, 5), 7)
    m = [c(11) for c in charlab.mu_characters(Fraction(3, 5))]
    assert m[0] - m[1] - m[2] + m[3] == 4 * arith.kronecker(15, 11)
    with pytest.raises(ValueError):
        charlab.mu_quadruple_identity(Fraction(3, 5), 5)


def test_char_sum_examples():
    one = QuadChar(1)
    k = 5000
    assert charlab.char_sum(one, k / 2, k) == pytest.approx(arith.psi(k) - arith.psi(k / 2), rel=1e-12)
    assert charlab.char_sum(QuadChar(-4), 0, 4, "unweighted") == 0
    for D in (5, -7, 12, -40):
        chi = QuadChar(D)
        assert charlab.char_sum(chi, 0, abs(D), "unweighted") == 0


def test_weighted_sum_close_to_prime_sum():
    for k in (1000, 10**5, 10**6):
        for D in (-4, 5, 8, -3):
            chi = QuadChar(D)
            gap = abs(charlab.char_sum(chi, k / 2, k) - charlab.prime_only_sum(chi, k / 2, k))
            slack = arith.psi(k) - arith.theta(k) - arith.psi(k / 2) + arith.theta(k / 2)
            assert gap <= slack + 1e-9


def test_unweighted_sum_matches_direct():
    chi = QuadChar(-23)
    assert charlab.char_sum(chi, 17, 1234, "unweighted") == sum(chi(m) for m in range(18, 1235))


def test_product_decomposition_examples():
    d = charlab.char_product_decompose(QuadChar(-4), QuadChar(8))
    assert (d.eta.D, d.M1, d.M2) == (-8, 8, 1)
    e = charlab.char_product_decompose(QuadChar(5), QuadChar(60))
    assert (e.M1, e.M2) == (12, 5) and e.period_identity
    with pytest.raises(ValueError, match="principal product"):
        charlab.char_product_decompose(QuadChar(5), QuadChar(5))


def test_product_period_identity_random():
    Ds = charlab.fundamental_discriminants(200)
    rng = random.Random(8)
    for _ in range(200):
        a, b = rng.sample(Ds, 2)
        assert charlab.char_product_decompose(QuadChar(a), QuadChar(b)).period_identity


def test_modulus_split():
    k = 10**4
    ps = [p for p in arith.sieve_primes(40) if p > 7][:4]
    sp = charlab.smooth_modulus_factorization(math.prod(ps), 1, k)
    assert sp.valid and math.prod(sp.moduli) == math.prod(ps)
    with pytest.raises(ValueError, match="modulus not smooth enough"):
        charlab.smooth_modulus_factorization(arith.sieve_primes(3000)[-1] * 3, 1, k)
    sp2 = charlab.smooth_modulus_factorization(math.prod(ps), 13 if 13 not in ps else 7, k)
    assert 1 < sp2.moduli[-1] <= sp2.high


def test_gr_bound_examples():
    chi = QuadChar(-15)
    obs = sum(chi(m) for m in range(1, 61))
    assert charlab.gr_bound_check(15, 1, 60, obs).holds
    R = math.ceil(105**1.5)
    eta, eight = QuadChar(105), QuadChar(8)
    obs2 = sum(eta(m) * eight(m) for m in range(1, R + 1))
    assert charlab.gr_bound_check(105, 2, R, obs2).holds
    assert charlab.gr_bound_check(15, 1, 60, 0).holds
    with pytest.raises(ValueError, match="interval too short"):
        charlab.gr_bound_check(105, 1, 10, 0)


def test_moebius_unfold_examples():
    assert charlab.moebius_unfold_check(QuadChar(-4), 15, 100)
    assert charlab.moebius_unfold_check(QuadChar(-4), 1, 100)
    assert charlab.moebius_unfold_check(QuadChar(5), 6, 1000)
    with pytest.raises(ValueError):
        charlab.moebius_unfold_check(QuadChar(5), 10, 100)


def test_descent_quartic_small():
    assert charlab.descent_quartic_search(500) == [(1, 1, 1)]
