import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from freyap import arith, ecfp
from freyap.ecfp import CurveOverFp

PRIMES = arith.sieve_primes(400)[2:]


def test_trace_examples():
    t = ecfp.trace_ap(CurveOverFp.factored(7, (0, 1, -1)))
    assert (t.count, t.a_p, t.supersingular) == (8, 0, True)
    assert ecfp.trace_ap(CurveOverFp.factored(5, (0, 1, -1)))[:2] == (8, -2)
    assert ecfp.trace_ap(CurveOverFp.factored(13, (0, 1, -1)))[:2] == (8, 6)


def test_singular_curve_rejected():
    with pytest.raises(ValueError, match="singular reduction"):
        CurveOverFp.factored(7, (0, 1, 8))


def test_count_matches_group_enumeration():
    for p in (5, 7, 11, 13, 17):
        c = CurveOverFp.factored(p, (0, 1, 3))
        assert ecfp.count_points(c) == len(c.points())


def test_hasse_and_twist_sign():
    rng = random.Random(3)
    for _ in range(1000):
        p = rng.choice(PRIMES)
        try:
            c = CurveOverFp.general(p, rng.randrange(p), rng.randrange(p), rng.randrange(p))
        except ValueError:
            continue
        a = ecfp.trace_ap(c).a_p
        assert ecfp.hasse_ok(a, p)
        w = next(x for x in range(2, p) if ecfp.legendre(x, p) == -1)
        assert ecfp.trace_ap(ecfp.twist(c, w)).a_p == -a


def test_two_sylow_examples():
    assert ecfp.two_sylow_shape(ecfp.fminus1(5)).v == 3
    assert ecfp.two_sylow_shape(CurveOverFp.factored(7, (0, 1, 4))).has_z2xz4
    s = ecfp.two_sylow_shape(ecfp.fminus1(13))
    assert s.v == 3 and not s.has_z2xz8


def test_two_sylow_requires_roots():
    with pytest.raises(ValueError, match="requires full 2-torsion"):
        ecfp.two_sylow_shape(CurveOverFp.general(7, 0, 1, 0))


def test_two_sylow_matches_brute_force_group():
    for p in arith.sieve_primes(60)[1:]:
        for eta in range(2, p - 1):
            c = CurveOverFp.factored(p, (0, 1, eta))
            n1, n2 = ecfp.group_structure_2part(c)
            s = ecfp.two_sylow_shape(c)
            assert s.has_z2xz4 == (n2 >= 4)
            assert s.has_z2xz8 == (n2 >= 8)


def test_descent_examples():
    p = 13  # 5 mod 8
    c = ecfp.fminus1(p)
    assert ecfp.descent_theta(c, (0, 0)).trivial
    assert tuple(ecfp.descent_theta(c, (1, 0))) == (1, -1, -1)
    assert ecfp.descent_theta(c, None).trivial
    with pytest.raises(ValueError):
        ecfp.descent_theta(c, (2, 2))


def test_descent_kernel_is_doubling_image():
    for p in arith.sieve_primes(200)[1:]:
        c = CurveOverFp.factored(p, (0, 1, 2 if p > 3 else 1 + 1))
        pts = c.points()
        doubles = {c.double(P) for P in pts}
        for Q in pts:
            img = ecfp.descent_theta(c, Q)
            assert img[0] * img[1] * img[2] == 1
            assert img.trivial == (Q in doubles)


def test_descent_is_homomorphism():
    rng = random.Random(5)
    for _ in range(300):
        p = rng.choice(PRIMES)
        roots = rng.sample(range(p), 3)
        c = CurveOverFp.factored(p, roots)
        pts = c.points()
        P, Q = rng.choice(pts), rng.choice(pts)
        a, b, s = ecfp.descent_theta(c, P), ecfp.descent_theta(c, Q), ecfp.descent_theta(c, c.add(P, Q))
        assert tuple(x * y for x, y in zip(a, b)) == tuple(s)


@pytest.mark.parametrize("lam,expected", [
    (2, sorted([Fraction(2), Fraction(1, 2), Fraction(-1)] * 2)),
    (-1, sorted([Fraction(-1)] * 2 + [Fraction(2)] * 2 + [Fraction(1, 2)] * 2)),
])
def test_lambda_orbit_examples(lam, expected):
    assert sorted(ecfp.lambda_orbit(lam)) == expected


def test_lambda_orbit_distinct_case():
    orb = ecfp.lambda_orbit(Fraction(3, 5))
    assert len(set(orb)) == 6
    assert {Fraction(5, 3), Fraction(2, 5), Fraction(-2, 3)} <= set(orb)


@settings(max_examples=200, deadline=None)
@given(st.fractions(min_value=-50, max_value=50, max_denominator=50).filter(lambda x: x not in (0, 1)))
def test_lambda_orbit_closed(lam):
    orb = sorted(ecfp.lambda_orbit(lam))
    for mu in set(orb):
        assert sorted(ecfp.lambda_orbit(mu)) == orb


def test_lambda_orbit_degenerate():
    with pytest.raises(ValueError, match="degenerate Legendre parameter"):
        ecfp.lambda_orbit(1)


def test_j_invariant_examples():
    assert ecfp.j_from_abc(1, -2, 1) == 1728
    assert ecfp.j_from_abc(1, -6, 5) == Fraction(2**8 * 29791, 900)
    assert ecfp.j_from_abc(2, -3, 1) == Fraction(2**8 * 343, 36)
    with pytest.raises(ValueError, match="not a Frey triple"):
        ecfp.j_from_abc(1, 1, 1)


def test_j_invariant_matches_weierstrass():
    from freyap import frey
    for a, b in [(1, -4), (3, 5), (-7, 2), (11, 13)]:
        c = -a - b
        a2, a4 = c - a, -a * c
        b2, b4 = 4 * a2, 2 * a4
        c4 = b2 * b2 - 24 * b4
        disc = frey.weierstrass_discriminant(a2, a4, 0)
        assert ecfp.j_from_abc(a, b, c) == Fraction(c4**3, disc)


def test_mod4_lemma_small_primes():
    for p in (3, 7, 11):
        assert ecfp.verify_mod4_lemma(p)
    with pytest.raises(ValueError):
        ecfp.verify_mod4_lemma(5)


def test_square_lambda_gives_8_divides_count():
    for p in (7, 11, 19, 23, 31, 43):
        for lam in range(2, p):
            if ecfp.legendre(lam, p) == 1 and lam != 1:
                assert ecfp.count_points(CurveOverFp.factored(p, (0, 1, lam))) % 8 == 0


def test_fminus1_examples():
    for p in (5, 13, 29):
        assert ecfp.verify_fminus1(p)
    with pytest.raises(ValueError):
        ecfp.verify_fminus1(7)


def test_order4_examples():
    for p in (13, 29, 5):
        for t, v in ecfp.conic_points(p):
            assert ecfp.verify_order4_point(p, t, v)
    with pytest.raises(ValueError, match="not on the descent conic"):
        ecfp.verify_order4_point(13, 1, 1)


def test_polynomial_order4_y_is_off_curve():
    fails = [not ecfp.verify_polynomial_order4_y(p, t, v)
             for p in (13, 17, 29) for t, v in ecfp.conic_points(p) if t and v]
    assert all(fails)


def test_kro_scan():
    for roots in ((0, 1, 2), (0, 1, -1)):
        recs = ecfp.verify_kro_scan(roots, 3, 1000)
        assert all(r.status != "fail" for r in recs)
        assert any(r.status == "pass" for r in recs)
    assert all(r.status != "pass" for r in ecfp.verify_kro_scan((0, 1, 2), 13, 18))
