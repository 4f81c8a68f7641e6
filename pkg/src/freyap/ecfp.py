"""Elliptic curves Y^2 = f(X) over prime fields.

Points are ``(x, y)`` tuples of reduced residues; ``None`` is the point at
infinity. Square classes are encoded as +1 (square) and -1 (non-square).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

import numpy as np

from freyap import arith

Point = Optional[tuple[int, int]]

_CHUNK = 1 << 20


class SingularCurveError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Field helpers
# ---------------------------------------------------------------------------

def legendre(a: int, p: int) -> int:
    """Euler's criterion: a^((p-1)/2) mod p mapped to {-1, 0, 1}."""
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def _powmod_array(base: np.ndarray, e: int, p: int) -> np.ndarray:
    # products stay below p**2, fine in int64 for p < 3e9
    out = np.ones_like(base)
    b = base % p
    while e:
        if e & 1:
            out = out * b % p
        b = b * b % p
        e >>= 1
    return out


def legendre_array(values: np.ndarray, p: int) -> np.ndarray:
    """Vectorised Euler criterion over an int64 array."""
    r = _powmod_array(values.astype(np.int64) % p, (p - 1) // 2, p)
    out = np.zeros(r.shape, dtype=np.int64)
    out[r == 1] = 1
    out[r == p - 1] = -1
    return out


def sqrt_mod(a: int, p: int) -> int:
    """Some square root of a mod the odd prime p (Tonelli-Shanks)."""
    a %= p
    if a == 0:
        return 0
    if legendre(a, p) != 1:
        raise ValueError(f"{a} is not a square mod {p}")
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while legendre(z, p) != -1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


def primitive_root(p: int) -> int:
    """Smallest generator of F_p^*, searching upward from 2."""
    if p == 2:
        return 1
    fs = arith.factorize(p - 1).primes
    g = 2
    while any(pow(g, (p - 1) // q, p) == 1 for q in fs):
        g += 1
    return g


def sqrt_minus_one(p: int) -> int:
    if p % 4 != 1:
        raise ValueError("-1 is a square only for p = 1 mod 4")
    return pow(primitive_root(p), (p - 1) // 4, p)


# ---------------------------------------------------------------------------
# Curves
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CurveOverFp:
    """Y^2 = X^3 + a2 X^2 + a4 X + a6 over F_p, optionally with its roots."""

    p: int
    a2: int
    a4: int
    a6: int
    roots: Optional[tuple[int, int, int]] = None

    def __post_init__(self):
        if self.p < 3 or self.p % 2 == 0:
            raise ValueError("p must be an odd prime")
        if self.cubic_discriminant() % self.p == 0:
            raise SingularCurveError("singular reduction")

    @classmethod
    def factored(cls, p: int, roots) -> "CurveOverFp":
        e1, e2, e3 = (int(r) % p for r in roots)
        if len({e1, e2, e3}) < 3:
            raise SingularCurveError("singular reduction")
        a2 = -(e1 + e2 + e3) % p
        a4 = (e1 * e2 + e1 * e3 + e2 * e3) % p
        a6 = -(e1 * e2 * e3) % p
        return cls(p, a2, a4, a6, (e1, e2, e3))

    @classmethod
    def general(cls, p: int, a2: int, a4: int, a6: int) -> "CurveOverFp":
        return cls(p, a2 % p, a4 % p, a6 % p)

    @classmethod
    def legendre_form(cls, p: int, lam: int) -> "CurveOverFp":
        """Y^2 = X(X-1)(X-lam)."""
        return cls.factored(p, (0, 1, lam))

    def cubic_discriminant(self) -> int:
        a, b, c = self.a2, self.a4, self.a6
        return a * a * b * b - 4 * b**3 - 4 * a**3 * c - 27 * c * c + 18 * a * b * c

    def f(self, x: int) -> int:
        return ((x + self.a2) * x * x + self.a4 * x + self.a6) % self.p

    def contains(self, P: Point) -> bool:
        if P is None:
            return True
        x, y = P
        return (y * y - self.f(x)) % self.p == 0

    def neg(self, P: Point) -> Point:
        if P is None:
            return None
        return (P[0], -P[1] % self.p)

    def add(self, P: Point, Q: Point) -> Point:
        if P is None:
            return Q
        if Q is None:
            return P
        p = self.p
        x1, y1 = P
        x2, y2 = Q
        if x1 == x2:
            if (y1 + y2) % p == 0:
                return None
            m = (3 * x1 * x1 + 2 * self.a2 * x1 + self.a4) * pow(2 * y1, -1, p) % p
        else:
            m = (y2 - y1) * pow(x2 - x1, -1, p) % p
        x3 = (m * m - self.a2 - x1 - x2) % p
        return (x3, (m * (x1 - x3) - y1) % p)

    def double(self, P: Point) -> Point:
        return self.add(P, P)

    def mul(self, n: int, P: Point) -> Point:
        if n < 0:
            return self.mul(-n, self.neg(P))
        out = None
        while n:
            if n & 1:
                out = self.add(out, P)
            P = self.add(P, P)
            n >>= 1
        return out

    def points(self) -> list[Point]:
        """All affine points plus infinity; O(p) and meant for small p."""
        p = self.p
        roots: dict[int, list[int]] = {}
        for y in range(p):
            roots.setdefault(y * y % p, []).append(y)
        out: list[Point] = [None]
        for x in range(p):
            out.extend((x, y) for y in roots.get(self.f(x), ()))
        return out


def point_order(curve: CurveOverFp, P: Point, group_order: int) -> int:
    n = group_order
    for q, _ in arith.factorize(group_order):
        while n % q == 0 and curve.mul(n // q, P) is None:
            n //= q
    return n


# ---------------------------------------------------------------------------
# Point counting
# ---------------------------------------------------------------------------

class Trace(NamedTuple):
    count: int
    a_p: int
    supersingular: bool


def count_points(curve: CurveOverFp) -> int:
    """#E(F_p) = p + 1 + sum_x (f(x)/p), by exhaustive x-enumeration."""
    p = curve.p
    total = 0
    for start in range(0, p, _CHUNK):
        x = np.arange(start, min(start + _CHUNK, p), dtype=np.int64)
        fx = ((x + curve.a2) * x % p * x % p + curve.a4 * x + curve.a6) % p
        total += int(legendre_array(fx, p).sum())
    return p + 1 + total


def trace_ap(curve: CurveOverFp) -> Trace:
    count = count_points(curve)
    a_p = curve.p + 1 - count
    if a_p * a_p > 4 * curve.p:
        raise ArithmeticError(f"Hasse bound violated: a_p={a_p}, p={curve.p}")
    return Trace(count, a_p, a_p % curve.p == 0)


# ---------------------------------------------------------------------------
# 2-descent and the 2-Sylow subgroup
# ---------------------------------------------------------------------------

class DescentImage(NamedTuple):
    theta1: int
    theta2: int
    theta3: int

    @property
    def trivial(self) -> bool:
        return self == (1, 1, 1)


def _require_roots(curve: CurveOverFp) -> tuple[int, int, int]:
    if curve.roots is None:
        raise ValueError("requires full 2-torsion")
    return curve.roots


def descent_theta(curve: CurveOverFp, Q: Point) -> DescentImage:
    """Theta(Q) = square classes of x(Q) - e_i; kernel is 2 E(F_p)."""
    roots = _require_roots(curve)
    if Q is None:
        return DescentImage(1, 1, 1)
    if not curve.contains(Q):
        raise ValueError("point not on curve")
    p = curve.p
    x = Q[0]
    vals = [legendre(x - e, p) for e in roots]
    if 0 in vals:
        # Q is the 2-torsion point at that root; the product of the
        # three classes is a square, which fixes the missing entry.
        i = vals.index(0)
        others = [v for j, v in enumerate(vals) if j != i]
        vals[i] = others[0] * others[1]
    return DescentImage(*vals)


def two_torsion_divisible(curve: CurveOverFp) -> list[bool]:
    """For each root e_i: is (e_i, 0) in 2E(F_p)? (e_i - e_j, e_i - e_k squares)."""
    roots = _require_roots(curve)
    p = curve.p
    out = []
    for i, e in enumerate(roots):
        others = [r for j, r in enumerate(roots) if j != i]
        out.append(all(legendre(e - r, p) == 1 for r in others))
    return out


def halves_of_two_torsion(curve: CurveOverFp, i: int) -> list[Point]:
    """The four Q with 2Q = (e_i, 0), assuming that point is 2-divisible."""
    roots = _require_roots(curve)
    p = curve.p
    e = roots[i]
    ej, ek = (r for j, r in enumerate(roots) if j != i)
    a = sqrt_mod(e - ej, p)
    b = sqrt_mod(e - ek, p)
    ab = a * b % p
    out = []
    for x, y in ((e + ab, ab * (a + b)), (e - ab, ab * (a - b))):
        out.append((x % p, y % p))
        out.append((x % p, -y % p))
    return out


class TwoSylowShape(NamedTuple):
    v: int
    has_z2xz4: bool
    has_z2xz8: bool


def two_sylow_shape(curve: CurveOverFp) -> TwoSylowShape:
    _require_roots(curve)
    count = count_points(curve)
    divisible = two_torsion_divisible(curve)
    z8 = False
    for i, ok in enumerate(divisible):
        if ok and any(descent_theta(curve, Q).trivial for Q in halves_of_two_torsion(curve, i)):
            z8 = True
            break
    return TwoSylowShape(arith.ord_p(count, 2), any(divisible), z8)


# ---------------------------------------------------------------------------
# Legendre parameters and j-invariants
# ---------------------------------------------------------------------------

def lambda_orbit(lam) -> list[Fraction]:
    """The six lambda-invariants of Y^2 = X(X-1)(X-lam), as a list."""
    lam = Fraction(lam)
    if lam in (0, 1):
        raise ValueError("degenerate Legendre parameter")
    return [lam, 1 / lam, 1 - lam, 1 / (1 - lam), (lam - 1) / lam, lam / (lam - 1)]


def lambda_orbit_mod(lam: int, p: int) -> list[int]:
    lam %= p
    if lam in (0, 1):
        raise ValueError("degenerate Legendre parameter")
    inv = lambda z: pow(z, -1, p)  # noqa: E731
    one = (1 - lam) % p
    return [lam, inv(lam), one, inv(one), (lam - 1) * inv(lam) % p, lam * inv(lam - 1) % p]


def lambda_from_roots(e1: int, e2: int, e3: int) -> Fraction:
    """(e3 - e1)/(e2 - e1): the Legendre parameter after moving e1 to 0, e2 to 1."""
    return Fraction(e3 - e1, e2 - e1)


def j_from_abc(a: int, b: int, c: int) -> Fraction:
    """j-invariant 2^8 (a^2 - bc)^3 / (abc)^2 of Y^2 = X(X - a)(X + c)."""
    if a + b + c != 0:
        raise ValueError("not a Frey triple")
    if a * b * c == 0:
        raise ValueError("abc must be nonzero")
    return Fraction(2**8 * (a * a - b * c) ** 3, (a * b * c) ** 2)


# ---------------------------------------------------------------------------
# Lemma verifiers
# ---------------------------------------------------------------------------

def mod4_lemma_failures(p: int) -> list[int]:
    """eta values for which Y^2 = X(X-1)(X-eta^2) lacks a Z/2 x Z/4 subgroup."""
    if p % 4 != 3:
        raise ValueError("p must be 3 mod 4")
    bad = []
    for eta in range(2, p - 1):
        curve = CurveOverFp.factored(p, (0, 1, eta * eta % p))
        if not any(two_torsion_divisible(curve)):
            bad.append(eta)
    return bad


def verify_mod4_lemma(p: int) -> bool:
    return not mod4_lemma_failures(p)


def fminus1(p: int) -> CurveOverFp:
    """Y^2 = X(X-1)(X+1)."""
    return CurveOverFp.factored(p, (0, 1, -1))


def verify_fminus1(p: int) -> bool:
    if p % 8 != 5:
        raise ValueError("p must be 5 mod 8")
    return arith.ord_p(count_points(fminus1(p)), 2) == 3


def order4_point(p: int, t: int, v: int, i: int) -> Point:
    """Half of (2 lam, 0) on Y^2 = X(X-2)(X-2 lam), lam = 2t^2, 2t^2 + 2v^2 = 1.

    x = 4ivt + 2 lam and y = 8itv (t + iv). (Halving (2 lam, 0) with
    2 lam - 0 = (2t)^2 and 2 lam - 2 = (2iv)^2.)
    """
    lam = 2 * t * t
    return ((4 * i * v * t + 2 * lam) % p, 8 * i * t * v * (t + i * v) % p)


def polynomial_order4_y(p: int, t: int, v: int, i: int) -> int:
    """Degree-6 candidate y-coordinate: (128iv^5 - 64iv^3)t - 128v^6 + 96v^4 - 16v^2."""
    return ((128 * i * v**5 - 64 * i * v**3) * t - 128 * v**6 + 96 * v**4 - 16 * v**2) % p


def _check_conic(p: int, t: int, v: int) -> int:
    if p % 4 != 1:
        raise ValueError("p must be 1 mod 4")
    t %= p
    v %= p
    if (2 * t * t + 2 * v * v - 1) % p:
        raise ValueError("not on the descent conic")
    lam = 2 * t * t % p
    if lam in (0, 1):
        raise ValueError("degenerate Legendre parameter")
    return lam


def verify_order4_point(p: int, t: int, v: int) -> bool:
    """Both choices of sqrt(-1): P lies on F'_lam and 2P = (2 lam, 0)."""
    lam = _check_conic(p, t, v)
    curve = CurveOverFp.factored(p, (0, 2, 2 * lam))
    i0 = sqrt_minus_one(p)
    for i in (i0, p - i0):
        P = order4_point(p, t % p, v % p, i)
        if not curve.contains(P) or curve.double(P) != (2 * lam % p, 0):
            return False
    return True


def verify_polynomial_order4_y(p: int, t: int, v: int) -> bool:
    """Same test with the degree-6 candidate y-coordinate, which lies off the curve (diagnostic only)."""
    lam = _check_conic(p, t, v)
    curve = CurveOverFp.factored(p, (0, 2, 2 * lam))
    i0 = sqrt_minus_one(p)
    for i in (i0, p - i0):
        x = (4 * i * v * t + 2 * lam) % p
        P = (x, polynomial_order4_y(p, t % p, v % p, i))
        if not curve.contains(P) or curve.double(P) != (2 * lam % p, 0):
            return False
    return True


def conic_points(p: int) -> list[tuple[int, int]]:
    """All (t, v) in F_p^2 with 2t^2 + 2v^2 = 1 and 2t^2 not in {0, 1}."""
    half = pow(2, -1, p)
    sq: dict[int, list[int]] = {}
    for v in range(p):
        sq.setdefault(v * v % p, []).append(v)
    out = []
    for t in range(1, p):
        for v in sq.get((half - t * t) % p, ()):
            if v and 2 * t * t % p != 1:
                out.append((t, v))
    return out


class KroRecord(NamedTuple):
    p: int
    status: str  # "pass", "fail", "bad" (bad reduction) or "ordinary"
    a_p: Optional[int]


def verify_kro_scan(roots: tuple[int, int, int], p_lo: int, p_hi: int) -> list[KroRecord]:
    """At supersingular p = 3 mod 8, every lambda-invariant is a non-square mod p."""
    e1, e2, e3 = roots
    bad_primes = set()
    for diff in (e1 - e2, e1 - e3, e2 - e3):
        if diff == 0:
            raise ValueError("roots must be distinct")
        bad_primes.update(arith.factorize(diff).primes)
    out = []
    for p in arith.primes_in_range(max(p_lo, 3), p_hi):
        p = int(p)
        if p % 8 != 3:
            continue
        if p in bad_primes:
            out.append(KroRecord(p, "bad", None))
            continue
        tr = trace_ap(CurveOverFp.factored(p, roots))
        if not tr.supersingular:
            out.append(KroRecord(p, "ordinary", tr.a_p))
            continue
        lam = (e3 - e1) * pow(e2 - e1, -1, p) % p
        ok = all(legendre(z, p) == -1 for z in lambda_orbit_mod(lam, p))
        out.append(KroRecord(p, "pass" if ok else "fail", tr.a_p))
    return out


def group_structure_2part(curve: CurveOverFp) -> tuple[int, int]:
    """(2^a, 2^b) with E(F_p)[2^inf] = Z/2^a x Z/2^b, a <= b, by brute force.

    Independent of the square-class criteria; used as a test oracle.
    """
    pts = curve.points()
    n = len(pts)
    v = arith.ord_p(n, 2)
    odd = n >> v
    two_part = {curve.mul(odd, P) for P in pts}
    exps = []
    for P in two_part:
        e, Q = 0, P
        while Q is not None:
            Q = curve.double(Q)
            e += 1
        exps.append(e)
    b = max(exps)
    a = v - b
    return 2**a, 2**b


def twist(curve: CurveOverFp, w: int) -> CurveOverFp:
    """Quadratic twist w Y^2 = f(X), written as Y^2 = X^3 + w a2 X^2 + w^2 a4 X + w^3 a6."""
    p = curve.p
    roots = None if curve.roots is None else tuple(w * r % p for r in curve.roots)
    if roots is not None:
        return CurveOverFp.factored(p, roots)
    return CurveOverFp.general(p, w * curve.a2, w * w * curve.a4, w**3 * curve.a6)


def hasse_ok(a_p: int, p: int) -> bool:
    return a_p * a_p <= 4 * p

