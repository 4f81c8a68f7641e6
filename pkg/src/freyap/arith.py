"""Integer and multiplicative-function primitives.

Everything here works on Python ints (exact, unbounded) except the
Chebyshev-type sums, which accumulate logarithms in float64 with
compensated summation.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional, Sequence

import numpy as np

TRIAL_LIMIT = 10**6
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_RHO_SEED = 20240917


# ---------------------------------------------------------------------------
# Prime sieves
# ---------------------------------------------------------------------------

def prime_array(limit: int) -> np.ndarray:
    """Primes <= limit as an int64 array (Eratosthenes, odd-only)."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    if limit < 3:
        return np.array([2], dtype=np.int64)
    # index i stands for the odd number 2i+1
    size = (limit - 1) // 2 + 1
    odd = np.ones(size, dtype=bool)
    odd[0] = False
    for i in range(1, (math.isqrt(limit) - 1) // 2 + 1):
        if odd[i]:
            p = 2 * i + 1
            odd[p * p // 2::p] = False
    out = 2 * np.flatnonzero(odd).astype(np.int64) + 1
    return np.concatenate((np.array([2], dtype=np.int64), out))


@lru_cache(maxsize=8)
def _cached_primes(limit: int) -> np.ndarray:
    arr = prime_array(limit)
    arr.setflags(write=False)
    return arr


def sieve_primes(limit: int) -> list[int]:
    """All primes in [2, limit], ascending. Empty when limit < 2."""
    return [int(p) for p in _cached_primes(int(limit))]


def primes_in_range(lo: int, hi: int) -> np.ndarray:
    """Primes p with lo <= p <= hi (segmented against base primes <= sqrt(hi))."""
    lo = max(int(lo), 2)
    hi = int(hi)
    if hi < lo:
        return np.zeros(0, dtype=np.int64)
    if hi <= 4 * 10**6:
        primes = _cached_primes(hi)
        return primes[np.searchsorted(primes, lo):]
    base = _cached_primes(math.isqrt(hi))
    mask = np.ones(hi - lo + 1, dtype=bool)
    for p in base:
        p = int(p)
        start = max(p * p, -(-lo // p) * p)
        if start > hi:
            continue
        mask[start - lo::p] = False
    return np.flatnonzero(mask).astype(np.int64) + lo


def iter_prime_segments(lo: int, hi: int, segment: int = 1 << 22) -> Iterator[np.ndarray]:
    """Yield arrays of the primes in [lo, hi], in ascending blocks."""
    start = max(int(lo), 2)
    while start <= hi:
        stop = min(start + segment - 1, hi)
        yield primes_in_range(start, stop)
        start = stop + 1


# ---------------------------------------------------------------------------
# Primality and factorization
# ---------------------------------------------------------------------------

def is_prime(n: int) -> bool:
    """Miller-Rabin with the first 13 prime bases; deterministic below 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n: int, rng: random.Random) -> int:
    if n % 2 == 0:
        return 2
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def _split_rough(n: int, out: dict[int, int], rng: random.Random) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    r = math.isqrt(n)
    if r * r == n:
        _split_rough(r, out, rng)
        _split_rough(r, out, rng)
        return
    f = _pollard_brent(n, rng)
    _split_rough(f, out, rng)
    _split_rough(n // f, out, rng)


@dataclass(frozen=True)
class Factorization:
    """Prime factorization of |n| as ascending (prime, exponent) pairs."""

    pairs: tuple[tuple[int, int], ...]

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.pairs)

    def value(self) -> int:
        out = 1
        for p, e in self.pairs:
            out *= p**e
        return out

    def ord(self, p: int) -> int:
        for q, e in self.pairs:
            if q == p:
                return e
        return 0

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)


@lru_cache(maxsize=1 << 16)
def factorize(n: int) -> Factorization:
    """Factor |n|: trial division by primes up to 10**6, then Pollard-Brent rho."""
    n = abs(int(n))
    if n == 0:
        raise ValueError("zero has no factorization")
    found: dict[int, int] = {}
    bound = min(TRIAL_LIMIT, math.isqrt(n))
    for p in _cached_primes(TRIAL_LIMIT):
        p = int(p)
        if p > bound:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            found[p] = e
            bound = min(bound, math.isqrt(n))
        if p == 997 and n > 1 and is_prime(n):
            break
    if n > 1:
        _split_rough(n, found, random.Random(_RHO_SEED))
    return Factorization(tuple(sorted(found.items())))


@dataclass(frozen=True)
class MultiplicativeStats:
    factorization: Factorization
    largest_prime: int
    rad_odd: int
    tau: int

    def ord(self, p: int) -> int:
        return self.factorization.ord(p)


def multiplicative_stats(n: int) -> MultiplicativeStats:
    """P(n), odd radical and divisor count of n, with P(+-1) = rad_odd(+-1) = 1."""
    f = factorize(n)
    primes = f.primes
    rad_odd = 1
    tau = 1
    for p, e in f:
        if p != 2:
            rad_odd *= p
        tau *= e + 1
    return MultiplicativeStats(f, primes[-1] if primes else 1, rad_odd, tau)


def largest_prime_factor(n: int) -> int:
    return multiplicative_stats(n).largest_prime


def rad_odd(n: int) -> int:
    return multiplicative_stats(n).rad_odd


def odd_part(n: int) -> int:
    n = abs(n)
    if n == 0:
        raise ValueError("zero has no odd part")
    return n >> ((n & -n).bit_length() - 1)


def ord_p(n: int, p: int) -> int:
    """Exponent of the prime p in the nonzero integer n."""
    if n == 0:
        raise ValueError("ord_p(0) is infinite")
    n = abs(n)
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def squarefree_kernel(n: int) -> int:
    """Signed squarefree part s of n, so that n = s * (square)."""
    if n == 0:
        raise ValueError("zero has no squarefree kernel")
    s = -1 if n < 0 else 1
    for p, e in factorize(n):
        if e % 2:
            s *= p
    return s


def divisors(n: int) -> list[int]:
    out = [1]
    for p, e in factorize(n):
        out = [d * p**i for d in out for i in range(e + 1)]
    return sorted(out)


def moebius(n: int) -> int:
    f = factorize(n)
    if any(e > 1 for _, e in f):
        return 0
    return -1 if len(f) % 2 else 1


def iroot(n: int, k: int) -> tuple[int, bool]:
    """Floor of the k-th root of n >= 0, and whether it is exact."""
    if n < 0:
        raise ValueError("negative radicand")
    if n < 2:
        return n, True
    x = 1 << -(-n.bit_length() // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    return x, x**k == n


# ---------------------------------------------------------------------------
# Kronecker symbol
# ---------------------------------------------------------------------------

def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n) for arbitrary integers a, n."""
    a, n = int(a), int(n)
    if n == 0:
        return 1 if abs(a) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    v = (n & -n).bit_length() - 1
    if v:
        if a % 2 == 0:
            return 0
        n >>= v
        if v % 2 and a % 8 in (3, 5):
            result = -result
    # n is now odd and positive: Jacobi symbol
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


# ---------------------------------------------------------------------------
# von Mangoldt and Chebyshev sums
# ---------------------------------------------------------------------------

def higher_prime_powers(lo: int, hi: int) -> tuple[np.ndarray, np.ndarray]:
    """Prime powers p**r (r >= 2) in [lo, hi], sorted, with log p for each."""
    lo, hi = max(int(lo), 2), int(hi)
    ms: list[int] = []
    logs: list[float] = []
    for p in _cached_primes(math.isqrt(max(hi, 0))):
        p = int(p)
        q = p * p
        while q <= hi:
            if q >= lo:
                ms.append(q)
                logs.append(math.log(p))
            q *= p
    order = np.argsort(np.array(ms, dtype=np.int64), kind="stable")
    return np.array(ms, dtype=np.int64)[order], np.array(logs)[order]


def prime_power_support(lo: int, hi: int) -> tuple[np.ndarray, np.ndarray]:
    """All prime powers m = p**r with lo <= m <= hi, and log p for each.

    Returned sorted by m. This is the support of the von Mangoldt function.
    """
    lo = max(int(lo), 2)
    hi = int(hi)
    if hi < lo:
        return np.zeros(0, dtype=np.int64), np.zeros(0)
    primes = primes_in_range(lo, hi)
    hm, hl = higher_prime_powers(lo, hi)
    m = np.concatenate((primes, hm))
    logs = np.concatenate((np.log(primes.astype(float)), hl))
    order = np.argsort(m, kind="stable")
    return m[order], logs[order]


def mangoldt(m: int) -> float:
    """Lambda(m): log p if m = p**r, else 0."""
    if m < 2:
        return 0.0
    f = factorize(m)
    return math.log(f.pairs[0][0]) if len(f) == 1 else 0.0


class _Kahan:
    __slots__ = ("total", "comp")

    def __init__(self) -> None:
        self.total = 0.0
        self.comp = 0.0

    def add(self, x: float) -> None:
        y = x - self.comp
        t = self.total + y
        self.comp = (t - self.total) - y
        self.total = t


@dataclass
class ChebyshevSums:
    lo: int
    hi: int
    theta: float
    psi: float
    theta_ap: Optional[float] = None
    residue: Optional[tuple[int, int]] = None
    values: Optional[np.ndarray] = None  # Lambda(m) for m = lo..hi


def mangoldt_sums(lo: int, hi: int, residue: Optional[tuple[int, int]] = None,
                  with_values: bool = False,
                  segment: int = 1 << 22) -> ChebyshevSums:
    """theta, psi (and theta restricted to p = a mod m) summed over [lo, hi]."""
    if residue is not None and math.gcd(residue[0], residue[1]) != 1:
        raise ValueError("residue not coprime")
    lo, hi = int(lo), int(hi)
    if lo < 2 or hi < lo:
        raise ValueError("need 2 <= lo <= hi")
    theta, theta_ap, extra = _Kahan(), _Kahan(), _Kahan()
    for block in iter_prime_segments(lo, hi, segment):
        if not len(block):
            continue
        logs = np.log(block.astype(float))
        theta.add(math.fsum(logs))
        if residue is not None:
            a, m = residue
            theta_ap.add(math.fsum(logs[block % m == a % m]))
    hm, hl = higher_prime_powers(lo, hi)
    extra.add(math.fsum(hl))
    values = None
    if with_values:
        pp, plog = prime_power_support(lo, hi)
        values = np.zeros(hi - lo + 1)
        values[pp - lo] = plog
    return ChebyshevSums(
        lo=lo, hi=hi, theta=theta.total, psi=theta.total + extra.total,
        theta_ap=theta_ap.total if residue is not None else None,
        residue=residue, values=values)


def theta(x: float) -> float:
    x = int(math.floor(x))
    return mangoldt_sums(2, x).theta if x >= 2 else 0.0


def psi(x: float) -> float:
    x = int(math.floor(x))
    return mangoldt_sums(2, x).psi if x >= 2 else 0.0


def theta_ap(x: float, a: int, m: int) -> float:
    """theta(x; a, m); the empty range gives 0."""
    if math.gcd(a, m) != 1:
        raise ValueError("residue not coprime")
    x = int(math.floor(x))
    if x < 2:
        return 0.0
    return mangoldt_sums(2, x, residue=(a, m)).theta_ap


# ---------------------------------------------------------------------------
# Small multiplicative helpers used by the Frey constructions
# ---------------------------------------------------------------------------

def mu_kraus(n: int) -> int:
    """n * prod_{q | n} (1 + 1/q), as an exact integer."""
    if n <= 0:
        raise ValueError("mu_kraus needs n >= 1")
    out = 1
    for p, e in factorize(n):
        out *= p ** (e - 1) * (p + 1)
    return out


@dataclass(frozen=True)
class SmoothSplit:
    smooth: int
    rest: int
    rest_is_power: bool


def smooth_split(m: int, k: int, ell: int) -> SmoothSplit:
    """Split m = A * rest with A supported on primes < k."""
    if m <= 0:
        raise ValueError("smooth_split needs m >= 1")
    if k < 2 or ell < 2:
        raise ValueError("need k >= 2 and ell >= 2")
    smooth = 1
    rest = m
    for p in _cached_primes(max(k - 1, 2)):
        p = int(p)
        if p >= k:
            break
        if rest % p == 0:
            while rest % p == 0:
                rest //= p
                smooth *= p
    return SmoothSplit(smooth, rest, iroot(rest, ell)[1])


def primorial_log(k: float) -> float:
    """log of the product of primes <= k."""
    return theta(k)


def oddprod_identity_check(m: int, variant: int = 1) -> bool:
    """Check one of the two odd-product square identities for a given m >= 1."""
    if m < 1:
        raise ValueError("m must be positive")

    def odd_prod(lo: int, hi: int) -> int:
        return math.prod(2 * j + 1 for j in range(lo, hi + 1))

    if variant == 1:
        return odd_prod(-2 * m, 2 * m - 1) == odd_prod(0, 2 * m - 1) ** 2
    if variant == 2:
        h = 2 * m * m + 2 * m
        return odd_prod(-h, h) == ((2 * m + 1) * odd_prod(0, h - 1)) ** 2
    raise ValueError("variant must be 1 or 2")


def legendre_factorial_ord(n: int, p: int) -> int:
    """ord_p(n!) by Legendre's formula."""
    e, q = 0, p
    while q <= n:
        e += n // q
        q *= p
    return e


def kronecker_table(D: int, period: Optional[int] = None) -> np.ndarray:
    """kronecker(D, m) for m = 0..period-1 as int8 (period defaults to |D|)."""
    N = period or max(abs(D), 1)
    return np.array([kronecker(D, m) for m in range(N)], dtype=np.int8)


def product(xs: Sequence[int]) -> int:
    return math.prod(xs)
