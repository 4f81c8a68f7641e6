"""Frey-Hellegouarch curves attached to k consecutive terms n, n+d, ..., n+(k-1)d.

Two families are built from a tuple (n, d, k, ell): one per 3-term
progression (i, j, 2j-i) of indices, and one per quadruple
(j1, i1, i2, j2) with i1 + i2 = j1 + j2. Every construction is a
polynomial identity in (n, d), so arbitrary coprime inputs are accepted;
only the "rough part is an ell-th power" flag tells genuine solutions apart.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, NamedTuple, Optional, Sequence

import mpmath

from freyap import arith

SCHOENFELD_THETA = 1.000081


@dataclass(frozen=True)
class Solution:
    n: int
    d: int
    k: int
    ell: int = 7

    def term(self, i: int) -> int:
        return self.n + i * self.d

    def terms(self) -> list[int]:
        return [self.n + i * self.d for i in range(self.k)]


class APTriple(NamedTuple):
    i: int
    j: int
    l: int  # noqa: E741  (= 2j - i)


class Quad(NamedTuple):
    j1: int
    i1: int
    i2: int
    j2: int


# ---------------------------------------------------------------------------
# Index sets
# ---------------------------------------------------------------------------

def iter_triples(k: int) -> Iterator[APTriple]:
    for i in range(k):
        for j in range(i + 1, k):
            if 2 * j - i > k - 1:
                break
            yield APTriple(i, j, 2 * j - i)


def iter_quads(k: int) -> Iterator[Quad]:
    for j1 in range(k):
        for j2 in range(j1 + 2, k):
            s = j1 + j2
            for i1 in range(j1 + 1, s // 2 + 1):
                yield Quad(j1, i1, s - i1, j2)


def quad_count_formula(k: int) -> Fraction:
    """k^3/12 - k^2/8 - k/12 + delta/8, delta = k mod 2."""
    return Fraction(k**3, 12) - Fraction(k**2, 8) - Fraction(k, 12) + Fraction(k % 2, 8)


def quad_count_sum(k: int) -> int:
    """sum_{j=2}^{k-1} (k - j) * floor(j/2)."""
    return sum((k - j) * (j // 2) for j in range(2, k))


def triple_count(k: int) -> int:
    return sum(max(k - 2 * e, 0) for e in range(1, k))


@dataclass
class Progressions:
    k: int
    triples: Optional[list[APTriple]]
    quads: Optional[list[Quad]]
    n_triples: int
    n_quads: int
    formula: Fraction


def enumerate_progressions(k: int, materialize: bool = True) -> Progressions:
    if k < 3:
        return Progressions(k, [], [], 0, 0, Fraction(0))
    if materialize:
        triples = list(iter_triples(k))
        quads = list(iter_quads(k))
        return Progressions(k, triples, quads, len(triples), len(quads), quad_count_formula(k))
    n_quads = sum(1 for _ in iter_quads(k))
    return Progressions(k, None, None, triple_count(k), n_quads, quad_count_formula(k))


# ---------------------------------------------------------------------------
# Terms
# ---------------------------------------------------------------------------

class TermSplit(NamedTuple):
    index: int
    term: int
    smooth: int
    rough: int
    rough_is_power: bool


def decompose_terms(sol: Solution) -> list[TermSplit]:
    """n + id = +-A_i * (rough part), with A_i supported on primes < k."""
    out = []
    for i, t in enumerate(sol.terms()):
        if t == 0:
            raise ValueError("degenerate term")
        s = arith.smooth_split(abs(t), sol.k, sol.ell)
        out.append(TermSplit(i, t, s.smooth, s.rest, s.rest_is_power))
    return out


def gcd_lemma_check(sol: Solution) -> bool:
    """gcd(n+id, n+jd) divides j - i for all 0 <= i < j < k."""
    if math.gcd(sol.n, sol.d) != 1:
        raise ValueError("not coprime")
    terms = sol.terms()
    for i in range(sol.k):
        ti = terms[i]
        for j in range(i + 1, sol.k):
            if (j - i) % math.gcd(ti, terms[j]):
                return False
    return True


# ---------------------------------------------------------------------------
# Frey curves
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FreyA:
    """Y^2 = X(X - a)(X + c) for the progression (i, j, 2j - i)."""

    triple: APTriple
    g: int
    a: int
    b: int
    c: int
    disc: int  # 64 (abc)^2

    @property
    def model(self) -> tuple[int, int, int]:
        """(a2, a4, a6) of the Weierstrass model."""
        return (self.c - self.a, -self.a * self.c, 0)

    @property
    def roots(self) -> tuple[int, int, int]:
        return (0, self.a, -self.c)


@dataclass(frozen=True)
class FreyI:
    """Y^2 = X(X^2 + 2 kappa d X + kappa A) for the quadruple (j1, i1, i2, j2)."""

    quad: Quad
    kappa: int
    A: int
    B: int
    d: int
    disc: int  # -64 kappa^3 A^2 B

    @property
    def model(self) -> tuple[int, int, int]:
        return (2 * self.kappa * self.d, self.kappa * self.A, 0)


def build_frey_A(sol: Solution, triple: Sequence[int]) -> FreyA:
    i, j, l = triple  # noqa: E741
    if l != 2 * j - i or not 0 <= i < j or l >= sol.k:
        raise ValueError(f"not a progression in [0, k): {tuple(triple)}")
    ti, tj, tl = sol.term(i), sol.term(j), sol.term(l)
    if ti * tj * tl == 0:
        raise ValueError("degenerate term")
    g = math.gcd(math.gcd(ti, 2 * tj), tl)
    a, b, c = ti // g, -2 * tj // g, tl // g
    if a + b + c != 0:
        raise ArithmeticError("a + b + c != 0")
    disc = 64 * (a * b * c) ** 2
    if disc * g**6 != 2**8 * (ti * tj * tl) ** 2:
        raise ArithmeticError("discriminant identity failed")
    return FreyA(APTriple(i, j, l), g, a, b, c, disc)


def build_frey_I(sol: Solution, quad: Sequence[int]) -> FreyI:
    j1, i1, i2, j2 = quad
    if i1 + i2 != j1 + j2 or not 0 <= j1 < i1 <= i2 < j2 <= sol.k - 1:
        raise ValueError(f"not a valid quadruple: {tuple(quad)}")
    kappa = j1 * j2 - i1 * i2
    if kappa == 0:
        raise ValueError("degenerate quadruple")
    n, d = sol.n, sol.d
    A = (n + j1 * d) * (n + j2 * d)
    B = (n + i1 * d) * (n + i2 * d)
    if A * B == 0:
        raise ValueError("degenerate term")
    if A - B != kappa * d * d:
        raise ArithmeticError("A - B != kappa d^2")
    if abs(kappa) >= sol.k**2:
        raise ArithmeticError("|kappa| >= k^2")
    return FreyI(Quad(j1, i1, i2, j2), kappa, A, B, d, -64 * kappa**3 * A * A * B)


def weierstrass_discriminant(a2: int, a4: int, a6: int) -> int:
    """Discriminant of Y^2 = X^3 + a2 X^2 + a4 X + a6 from the b-invariants."""
    b2, b4, b6 = 4 * a2, 2 * a4, 4 * a6
    b8 = 4 * a2 * a6 - a4 * a4
    return -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6


# ---------------------------------------------------------------------------
# Level bounds
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LevelBound:
    divisor_bound: int
    odd_radical: int
    two_exponent: int
    log_cap: float
    variant: str

    @property
    def cap(self) -> float:
        return math.exp(self.log_cap) if self.log_cap < 700 else math.inf


def level_bounds_A(a_values: Sequence[int], k: int) -> LevelBound:
    """M | 2^8 * rad_odd(A_i A_j A_{2j-i}); M <= 2^7 exp(1.000081 k)."""
    prod = math.prod(a_values)
    odd = arith.rad_odd(prod) if prod else 1
    return LevelBound(2**8 * odd, odd, 8, 7 * math.log(2) + SCHOENFELD_THETA * k, "A")


def level_bounds_I(kappa: int, k: int) -> LevelBound:
    """M | 2^7 3^5 kappa^2 (prod_{q <= k} q)^2; M <= 2^7 3^5 k^4 exp(2.000162 k)."""
    primorial = math.prod(arith.sieve_primes(k))
    bound = 2**7 * 3**5 * kappa * kappa * primorial**2
    log_cap = 7 * math.log(2) + 5 * math.log(3) + 4 * math.log(k) + 2 * SCHOENFELD_THETA * k
    return LevelBound(bound, arith.rad_odd(bound), arith.ord_p(bound, 2), log_cap, "I")


def level_bounds(data, a_values: Sequence[int], k: int) -> LevelBound:
    if isinstance(data, FreyA):
        return level_bounds_A(a_values, k)
    if isinstance(data, FreyI):
        return level_bounds_I(data.kappa, k)
    raise TypeError("expected FreyA or FreyI")


# ---------------------------------------------------------------------------
# Exponent bounds
# ---------------------------------------------------------------------------

def _iv_power_bound(p: int, exponent) -> mpmath.mpf:
    with mpmath.workprec(200):
        base = mpmath.iv.sqrt(mpmath.iv.mpf(p)) + 1
        val = mpmath.iv.exp(mpmath.iv.log(base) * exponent)
        return val.b


def ell_bound(p: int, M0: int) -> int:
    """floor((sqrt p + 1)^((M0 + 1)/6)), rounded outward."""
    if p < 2 or M0 < 1:
        raise ValueError("need p >= 2 and M0 >= 1")
    with mpmath.workprec(200):
        exponent = mpmath.iv.mpf(M0 + 1) / 6
        return int(mpmath.floor(_iv_power_bound(p, exponent)))


def log_ell_bound(p: int, M0: float) -> float:
    return (M0 + 1) / 6 * math.log(math.sqrt(p) + 1)


@dataclass(frozen=True)
class KrausH:
    n: int
    log_F: float
    log_G: float
    log_H: float
    F: float
    G: float
    H: float


def kraus_H(n: int) -> KrausH:
    """F, G and H = max(F, G), with the genus replaced by Martin's (n+1)/12."""
    if n <= 0:
        raise ValueError("kraus_H needs n >= 1")
    g0 = (n + 1) / 12
    log_F = 2 * g0 * math.log(math.sqrt(arith.mu_kraus(n) / 6) + 1)
    lcm4 = n * 4 // math.gcd(n, 4)
    log_G = 2 * math.log(math.sqrt(arith.mu_kraus(lcm4) / 6) + 1)
    log_H = max(log_F, log_G)

    def ex(x: float) -> float:
        return math.exp(x) if x < 709 else math.inf

    return KrausH(n, log_F, log_G, log_H, ex(log_F), ex(log_G), ex(log_H))


def contradiction_threshold(p: int, k: int, M0_cap: Optional[int] = None,
                            log_M0_cap: Optional[float] = None) -> bool:
    """True when (sqrt p + 1)^((M0_cap + 1)/6) < exp(10^k), compared in log-log space."""
    if (M0_cap is None) == (log_M0_cap is None):
        raise ValueError("give exactly one of M0_cap, log_M0_cap")
    with mpmath.workdps(40):
        if M0_cap is not None:
            log_m = mpmath.log(mpmath.mpf(M0_cap) + 1)
        else:
            # log(M0 + 1) for M0 = exp(L): L + log1p(exp(-L))
            L = mpmath.mpf(log_M0_cap)
            log_m = L + mpmath.log1p(mpmath.exp(-L))
        lhs = log_m - mpmath.log(6) + mpmath.log(mpmath.log(mpmath.sqrt(p) + 1))
        rhs = k * mpmath.log(10)
        return bool(lhs < rhs)


@dataclass
class FreyReport:
    sol: Solution
    frey_a: list[FreyA] = field(default_factory=list)
    frey_i: list[FreyI] = field(default_factory=list)
