"""Primitive quadratic Dirichlet characters and short character sums.

Characters are stored by their fundamental discriminant D and evaluated as
kronecker(D, m). The modulus |D| is the conductor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from freyap import arith

OMEGAS = (1, -1, 2, -2)


def is_fundamental(D: int) -> bool:
    if D == 1:
        return True
    if D == 0:
        return False
    if D % 4 == 1:
        return arith.squarefree_kernel(D) == D
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and arith.squarefree_kernel(m) == m
    return False


@dataclass(frozen=True)
class QuadChar:
    """m -> kronecker(D, m) for a fundamental discriminant D."""

    D: int

    def __post_init__(self):
        if not is_fundamental(self.D):
            raise ValueError(f"{self.D} is not a fundamental discriminant")

    @property
    def conductor(self) -> int:
        return abs(self.D)

    @property
    def odd_conductor(self) -> int:
        return arith.odd_part(self.conductor)

    @property
    def trivial(self) -> bool:
        return self.D == 1

    def __call__(self, m: int) -> int:
        return arith.kronecker(self.D, m)

    def table(self) -> np.ndarray:
        return _period_table(self.D)

    def values(self, ms: np.ndarray) -> np.ndarray:
        """Vectorized evaluation at non-negative integers."""
        t = self.table()
        return t[np.asarray(ms, dtype=np.int64) % len(t)]

    def interval(self, lo: int, hi: int) -> np.ndarray:
        """Values at m = lo+1 .. hi."""
        return self.values(np.arange(lo + 1, hi + 1, dtype=np.int64))


_TABLES: dict[int, np.ndarray] = {}


def _period_table(D: int) -> np.ndarray:
    t = _TABLES.get(D)
    if t is None:
        t = _fast_table(D)
        if len(_TABLES) > 256:
            _TABLES.clear()
        _TABLES[D] = t
    return t


def _fast_table(D: int) -> np.ndarray:
    """kronecker(D, m) for m in [0, |D|), built multiplicatively from prime values."""
    N = abs(D)
    if N == 1:
        return np.ones(1, dtype=np.int8)
    if N < 5000:
        return arith.kronecker_table(D)
    # completely multiplicative: fill via smallest prime factor sieve
    spf = np.zeros(N, dtype=np.int64)
    for p in arith.sieve_primes(N - 1):
        block = spf[p::p]
        block[block == 0] = p
    out = np.zeros(N, dtype=np.int8)
    out[1] = 1
    prime_val = {}
    for m in range(2, N):
        p = int(spf[m])
        v = prime_val.get(p)
        if v is None:
            v = prime_val[p] = arith.kronecker(D, p)
        out[m] = v * out[m // p]
    return out


def fundamental_discriminants(max_conductor: int) -> list[int]:
    """All D != 1 with |D| <= max_conductor, ordered by |D| then sign."""
    out = []
    for N in range(3, max_conductor + 1):
        for D in (-N, N):
            if is_fundamental(D):
                out.append(D)
    return out


def fundamental_discriminant(r, omega: int = 1) -> QuadChar:
    """Primitive character agreeing with (omega * r / p) at odd p away from the support of r."""
    r = Fraction(r)
    if r == 0:
        raise ValueError("zero has no square class")
    s = arith.squarefree_kernel(omega * r.numerator * r.denominator)
    return QuadChar(s if s % 4 == 1 else 4 * s)


# ---------------------------------------------------------------------------
# Characters attached to a Legendre parameter
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CaseChar:
    case: str
    omega: int
    char: QuadChar
    odd_conductor: int
    cm: bool = False


def _check_omega(omega: int) -> None:
    if omega not in OMEGAS:
        raise ValueError("omega must be one of +-1, +-2")


def mu_characters(lam) -> list[QuadChar]:
    """The four characters of lam, -lam, 2 lam, -2 lam."""
    lam = Fraction(lam)
    if lam in (0, 1):
        raise ValueError("degenerate Legendre parameter")
    return [fundamental_discriminant(lam, w) for w in OMEGAS]


def char_from_case_I(lam, omega: int) -> CaseChar:
    _check_omega(omega)
    chi = mu_characters(lam)[OMEGAS.index(omega)]
    return CaseChar("I", omega, chi, chi.odd_conductor)


def char_from_case_II(t, v, omega: int) -> CaseChar:
    _check_omega(omega)
    t, v = Fraction(t), Fraction(v)
    if 2 * t * t + 2 * v * v != 1:
        raise ValueError("not on the descent conic")
    if t <= 0 or v <= 0:
        raise ValueError("t and v must be positive")
    chi = fundamental_discriminant(t * v, omega)
    return CaseChar("II", omega, chi, chi.odd_conductor, cm=chi.odd_conductor == 1)


def char_from_case(case: str, omega: int, lam=None, t=None, v=None) -> CaseChar:
    if case == "I":
        return char_from_case_I(lam, omega)
    if case == "II":
        return char_from_case_II(t, v, omega)
    raise ValueError(f"unknown case {case!r}")


def odd_conductor_divides_level(chi: QuadChar, a: int, b: int) -> bool:
    """N^odd | rad_odd(a b (a - b)) for the model Y^2 = X(X - a)(X - b)."""
    return arith.rad_odd(a * b * (a - b)) % chi.odd_conductor == 0


def mu_quadruple_identity(lam, p: int) -> bool:
    """mu1 - mu2 - mu3 + mu4 at p equals 4 (lam/p) when p = 3 mod 8, else 0."""
    lam = Fraction(lam)
    if p % 2 == 0 or not arith.is_prime(p):
        raise ValueError("p must be an odd prime")
    if lam.numerator % p == 0 or lam.denominator % p == 0:
        raise ValueError(f"{p} is in the support of lambda")
    m1, m2, m3, m4 = (chi(p) for chi in mu_characters(lam))
    lhs = m1 - m2 - m3 + m4
    leg = arith.kronecker(lam.numerator * lam.denominator, p)
    return lhs == (4 * leg if p % 8 == 3 else 0)


# ---------------------------------------------------------------------------
# Sums
# ---------------------------------------------------------------------------

def mangoldt_support(lo: int, hi: int) -> tuple[np.ndarray, np.ndarray]:
    """Prime powers m in (lo, hi] and log p."""
    return arith.prime_power_support(int(math.floor(lo)) + 1, int(math.floor(hi)))


def char_sum(chi: QuadChar, lo: float, hi: float, weight: str = "lambda",
             chi2: Optional[QuadChar] = None) -> float:
    """sum over lo < m <= hi of chi(m) [chi2(m)] w(m), w = Lambda or 1."""
    lo_i, hi_i = int(math.floor(lo)), int(math.floor(hi))
    if hi_i <= lo_i:
        return 0.0
    if weight == "lambda":
        ms, logs = mangoldt_support(lo_i, hi_i)
        vals = chi.values(ms).astype(np.float64)
        if chi2 is not None:
            vals *= chi2.values(ms)
        return math.fsum(vals * logs)
    if weight != "unweighted":
        raise ValueError("weight must be 'lambda' or 'unweighted'")
    if chi2 is None:
        return float(_unweighted_sum(chi, lo_i, hi_i))
    ms = np.arange(lo_i + 1, hi_i + 1, dtype=np.int64)
    return float(np.sum(chi.values(ms).astype(np.int64) * chi2.values(ms)))


def _prefix(chi: QuadChar) -> np.ndarray:
    t = chi.table().astype(np.int64)
    return np.concatenate(([0], np.cumsum(t)))


def _unweighted_sum(chi: QuadChar, lo: int, hi: int) -> int:
    """Exact integer sum over (lo, hi] using one period of prefix sums."""
    pre = _prefix(chi)
    N = len(pre) - 1
    full = int(pre[N])

    def upto(x: int) -> int:
        # sum over 0 <= m <= x
        if x < 0:
            return 0
        q, r = divmod(x + 1, N)
        return q * full + int(pre[r])

    return upto(hi) - upto(lo)


def prime_only_sum(chi: QuadChar, lo: float, hi: float) -> float:
    ps = arith.primes_in_range(int(math.floor(lo)) + 1, int(math.floor(hi)))
    return math.fsum(chi.values(ps) * np.log(ps.astype(float)))


# ---------------------------------------------------------------------------
# Character products
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CharProductDecomp:
    eta: QuadChar
    M1: int
    M2: int
    lcm: int
    lcm_identity: bool  # M1 * M2 == lcm(N1, N2)
    period_identity: bool


def char_product_decompose(chi1: QuadChar, chi2: QuadChar) -> CharProductDecomp:
    """chi1 chi2 = eta * (principal character mod M2), eta primitive of conductor M1."""
    if chi1.D == chi2.D:
        raise ValueError("principal product")
    eta = fundamental_discriminant(chi1.D * chi2.D)
    M1 = eta.conductor
    L = math.lcm(chi1.conductor, chi2.conductor)
    # primes where the product vanishes but eta does not
    M2 = L // M1 if L % M1 == 0 else L
    for p in arith.factorize(M1).primes:
        while M2 % p == 0:
            M2 //= p
    ms = np.arange(L, dtype=np.int64)
    lhs = chi1.values(ms).astype(np.int64) * chi2.values(ms)
    coprime = np.gcd(ms, M2) == 1
    rhs = eta.values(ms).astype(np.int64) * coprime
    return CharProductDecomp(eta, M1, M2, L, M1 * M2 == L, bool(np.array_equal(lhs, rhs)))


@dataclass
class ModulusSplit:
    k: int
    M1: int
    M2: int
    moduli: list[int]
    s: int
    r: int
    low: float
    high: float
    R0: float
    r_bound: int
    conditions: dict[str, bool] = field(default_factory=dict)

    @property
    def valid(self) -> bool:
        return all(self.conditions.values())


def _group_descending(primes: Sequence[int], low: float, high: float) -> list[int]:
    """Greedy groups of descending primes, each closed once it reaches `low`."""
    groups: list[int] = []
    cur = 1
    for p in sorted(primes, reverse=True):
        if cur * p > high and cur > 1:
            groups.append(cur)
            cur = 1
        cur *= p
        if cur >= low:
            groups.append(cur)
            cur = 1
    if cur > 1:
        groups.append(cur)
    return groups


def smooth_modulus_factorization(M1: int, M2: int, k: int) -> ModulusSplit:
    """Group prime factors of M1 and M2 into moduli within [k^(7/32), k^(7/16)]."""
    low, high = k ** (7 / 32), k ** (7 / 16)
    if M1 < 8 * low:
        raise ValueError("M1 < 8 k^(7/32): short-modulus branch, use the Moebius unfolding")
    f1, f2 = arith.factorize(M1), arith.factorize(M2)
    if any(p > high for p in f1.primes + f2.primes):
        raise ValueError("modulus not smooth enough")
    odd1 = [p for p in f1.primes if p != 2]
    two1 = 2 ** f1.ord(2)
    if not odd1:
        raise ValueError("M1 has no odd part")
    g1 = _group_descending(odd1, low, high)
    if two1 > 1:
        if g1[-1] * two1 <= high and len(g1) > 1:
            g1[-1] *= two1
        else:
            g1.append(two1)
    # M2 may carry 2^e with e <= 3; keep the prime power together
    pieces2 = [p ** f2.ord(p) if p == 2 else p for p in f2.primes]
    g2 = _group_descending(pieces2, low, high) if M2 > 1 else []
    moduli = g1 + g2
    s, r = len(g1), len(moduli)
    q = moduli[0]
    others = moduli[1:]
    R0 = max(max(others, default=0), q ** 0.25) * q ** 1.25
    logM = math.log(M1 * M2)
    r_bound = math.ceil(logM / math.log(low)) + 2
    interior = [moduli[i] for i in range(s - 1)] + [moduli[i] for i in range(s, r - 1)]
    cond = {
        "a": math.prod(g1) == M1 and math.prod(g2) == M2,
        "b": M1 % q == 0 and q % 2 == 1 and math.gcd(q, math.prod(others)) == 1,
        "c": all(low <= x <= high for x in interior),
        "d": 1 < moduli[-1] <= high,
        "e": s >= 1 and (s == 1 or 1 <= moduli[s - 1] <= high),
        "r_bound": r <= r_bound,
    }
    return ModulusSplit(k, M1, M2, moduli, s, r, low, high, R0, r_bound, cond)


@dataclass(frozen=True)
class GRBound:
    q: int
    r: int
    R: int
    R0: float
    bound: float
    observed: float
    holds: bool


def gr_bound_check(q: int, r: int, R: int, observed: float,
                   other_moduli: Sequence[int] = ()) -> GRBound:
    """|sum over R consecutive m| <= 4R (tau(q)^(r^2)/q)^(2^-r), valid for R >= R0."""
    if q <= 1 or arith.squarefree_kernel(q) != q:
        raise ValueError("q must be squarefree and > 1")
    R0 = max(max(other_moduli, default=0), q ** 0.25) * q ** 1.25
    if R < R0:
        raise ValueError("interval too short for the theorem")
    tau = arith.multiplicative_stats(q).tau
    log_inner = (r * r * math.log(tau) - math.log(q)) / 2**r
    bound = 4 * R * math.exp(log_inner)
    return GRBound(q, r, R, R0, bound, observed, abs(observed) <= bound)


def moebius_unfold_check(eta: QuadChar, M2: int, k: int) -> bool:
    """sum_{k/2<m<=k, (m,M2)=1} eta(m) == sum_{d|M2} eta(d) mu(d) sum_{k/2d<n<=k/d} eta(n)."""
    if math.gcd(eta.conductor, M2) != 1:
        raise ValueError("eta conductor not coprime to M2")
    ms = np.arange(k // 2 + 1, k + 1, dtype=np.int64)
    direct = int(np.sum(eta.values(ms).astype(np.int64) * (np.gcd(ms, M2) == 1)))
    unfolded = 0
    for d in arith.divisors(M2):
        mu = arith.moebius(d)
        if mu == 0:
            continue
        # k/(2d) < n  <=>  2dn > k ;  n <= k/d  <=>  dn <= k
        unfolded += eta(d) * mu * _unweighted_sum(eta, k // (2 * d), k // d)
    return direct == unfolded


def descent_quartic_search(limit: int) -> list[tuple[int, int, int]]:
    """Coprime positive (T0, V0, U0) with T0^4 + V0^4 = 2 U0^2 and T0 <= V0 <= limit."""
    if limit > 55000:
        raise ValueError("limit must stay below 55000 (uint64 range)")
    out = []
    v = np.arange(1, limit + 1, dtype=np.uint64)
    v4 = v**4
    for t in range(1, limit + 1):
        s = np.uint64(t) ** 4 + v4[t - 1:]
        even = (s & np.uint64(1)) == 0
        half = s[even] >> np.uint64(1)
        u = np.sqrt(half.astype(np.float64)).astype(np.uint64)
        # float sqrt may be off by one at this size
        for du in (-1, 0, 1):
            uu = u + np.uint64(du) if du >= 0 else u - np.uint64(1)
            hit = np.nonzero(uu * uu == half)[0]
            for h in hit:
                vv = int(v[t - 1:][even][h])
                if math.gcd(t, vv) == 1:
                    out.append((t, vv, int(uu[h])))
    return sorted(set(out))
