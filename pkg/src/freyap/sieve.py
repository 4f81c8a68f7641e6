"""Index sieve on {0, ..., k-1}: residue-class deletion, valuation deletion,
a 3-term progression finder, and the greedy maximal-set construction.

All budget constants are configurable; the defaults are the asymptotic
values, which desk-scale k cannot meet, so budget lines are reported
rather than enforced.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from freyap import arith
from freyap.frey import APTriple, Solution, decompose_terms


@dataclass(frozen=True)
class SieveConfig:
    k: int
    n: int = 1
    d: int = 1
    S: tuple[int, ...] = ()
    t_exponent: float = 7 / 16
    c1: float = 1e-4
    u_factor: float = 1e4
    smooth_cap_exp: float = 139
    conductor_cap_exp: float = 418
    s_recip_max: float = 0.17
    d_recip_min: float = 0.166
    d_recip_endgame: float = 0.1683
    j_density: float = 0.0032
    j1_density: float = 0.00319
    j2_density: float = 0.00001
    b_count_factor: float = 17
    ell: int = 7

    def __post_init__(self):
        if self.k < 3:
            raise ValueError("k must be >= 3")
        if math.gcd(self.n, self.d) != 1:
            raise ValueError("not coprime")
        for name in ("t_exponent", "c1", "u_factor", "smooth_cap_exp", "conductor_cap_exp"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        for p in self.S:
            if not (1 <= p <= self.k and arith.is_prime(p)):
                raise ValueError(f"S must hold primes in [1, k]: {p}")
        if self.s_recip_sum() >= self.s_recip_max:
            raise ValueError(f"sum over S of 1/p = {self.s_recip_sum():.4f} >= {self.s_recip_max}")

    def s_recip_sum(self) -> float:
        return math.fsum(1 / p for p in self.S)

    @property
    def t_low(self) -> float:
        return self.k ** self.t_exponent

    @property
    def u_window(self) -> tuple[float, float]:
        lk = math.log(self.k)
        return lk ** (1 - self.c1), self.u_factor * lk

    def defaults(self) -> "SieveConfig":
        keep = {f: getattr(self, f) for f in ("k", "n", "d", "S", "ell")}
        return SieveConfig(**keep)

    def differs_from_defaults(self) -> bool:
        return dataclasses.astuple(self) != dataclasses.astuple(self.defaults())


def index_set_Ip(n: int, d: int, k: int, p: int) -> list[int]:
    """{i in [0, k) : p | n + i d}, with #I_p = delta_p (k/p + theta_p), |theta_p| < 1."""
    if math.gcd(n, d) != 1:
        raise ValueError("not coprime")
    if d % p == 0:
        return []
    i0 = (-n * pow(d, -1, p)) % p
    out = list(range(i0, k, p))
    if abs(len(out) - k / p) >= 1:
        raise ArithmeticError("#I_p deviates from k/p by 1 or more")
    return out


@dataclass
class FamilyBudget:
    name: str
    primes: int
    removed: int  # sum of #I_p over the family
    recip_sum: float
    budget: float  # asymptotic upper bound for sum #I_p, in absolute terms


@dataclass
class JReport:
    J: list[int]
    families: list[FamilyBudget]
    union_removed: int
    density: float
    meets_density: bool  # #J > j_density * k
    meets_density_default: bool


def _family(name: str, primes: Sequence[int], cfg: SieveConfig, budget: float) -> tuple[FamilyBudget, set[int]]:
    removed: set[int] = set()
    total = 0
    for p in primes:
        ip = index_set_Ip(cfg.n, cfg.d, cfg.k, p)
        total += len(ip)
        removed.update(ip)
    return FamilyBudget(name, len(primes), total, math.fsum(1 / p for p in primes), budget), removed


def build_J(cfg: SieveConfig) -> JReport:
    k = cfg.k
    lk = math.log(k)
    llk = math.log(lk) if lk > 1 else float("nan")
    primes = arith.sieve_primes(k)
    T = [p for p in primes if p > cfg.t_low]
    u_lo, u_hi = cfg.u_window
    U = [p for p in primes if u_lo < p <= u_hi]
    fam_s, rs = _family("S", list(cfg.S), cfg, cfg.s_recip_max * k + 1.1 * k / lk)
    fam_t, rt = _family("T", T, cfg, math.log(16 / 7) * k)
    fam_u, ru = _family("U", U, cfg,
                        math.log(1 / (1 - cfg.c1)) * k + 5 * math.log(10) * k / llk + cfg.u_factor * lk)
    gone = rs | rt | ru
    J = [i for i in range(k) if i not in gone]
    base = cfg.defaults()
    return JReport(J, [fam_s, fam_t, fam_u], len(gone), len(J) / k,
                   len(J) > cfg.j_density * k, len(J) > base.j_density * k)


@dataclass
class Deletion:
    J1: list[int]
    deleted: dict[int, int]  # prime -> deleted index
    certificate: bool  # prod_{J1} A_i | (k-1)!
    valuation_rows: list[tuple[int, int, int]]  # (p, sum ord_p over J1, ord_p((k-1)!))


def erdos_deletion(J: Sequence[int], A: dict[int, int] | Sequence[int], k: int) -> Deletion:
    """Per prime p <= k, drop from J the index maximizing ord_p(A_i) (smallest index on ties)."""
    A_of = A if isinstance(A, dict) else dict(enumerate(A))
    for i in J:
        a = A_of[i]
        if a <= 0:
            raise ValueError("A values must be positive")
        if a > 1 and arith.largest_prime_factor(a) >= k:
            raise ValueError(f"A_{i} = {a} is not k-smooth")
    remaining = sorted(J)
    alive = set(remaining)
    deleted: dict[int, int] = {}
    primes = arith.sieve_primes(k)
    for p in primes:
        best_i, best_e = None, 0
        for i in remaining:
            if i not in alive:
                continue
            e = arith.ord_p(A_of[i], p)
            if e > best_e:
                best_i, best_e = i, e
        if best_i is not None:
            alive.discard(best_i)
            deleted[p] = best_i
    J1 = [i for i in remaining if i in alive]
    rows = []
    ok = True
    for p in primes:
        s = sum(arith.ord_p(A_of[i], p) for i in J1)
        cap = arith.legendre_factorial_ord(k - 1, p)
        rows.append((p, s, cap))
        ok &= s <= cap
    return Deletion(J1, deleted, ok, rows)


def find_3ap(indices) -> Optional[APTriple]:
    """Lexicographically first (i, j, 2j - i) inside the set, i < j."""
    xs = sorted(set(indices))
    members = set(xs)
    for a, i in enumerate(xs):
        for j in xs[a + 1:]:
            if 2 * j - i in members:
                return APTriple(i, j, 2 * j - i)
    return None


@dataclass(frozen=True)
class RothThreshold:
    delta: Fraction
    coefficient: Fraction  # loglog K0 = coefficient * log 2
    loglog: float


def roth_threshold(delta) -> RothThreshold:
    """loglog K0(delta) = 132 log 2 / delta."""
    delta = Fraction(delta)
    if not 0 < delta <= 1:
        raise ValueError("delta must lie in (0, 1]")
    coef = Fraction(132) / delta
    return RothThreshold(delta, coef, float(coef) * math.log(2))


@dataclass
class SieveReport:
    config: SieveConfig
    J: JReport
    deletion: Optional[Deletion]
    J2: list[int]
    triple: Optional[APTriple]
    A_triple: Optional[tuple[int, int, int]]
    conductor_bound: Optional[int]
    conductor_ok: Optional[bool]
    budget: dict[str, dict] = field(default_factory=dict)
    failure: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.failure is None


def _budget_line(count: int, k: int, density: float, default_density: float) -> dict:
    return {"count": count, "density": count / k, "need": density * k, "meets": count > density * k,
            "need_default": default_density * k, "meets_default": count > default_density * k}


def sieve_pipeline(cfg: SieveConfig, A: Optional[Sequence[int]] = None) -> SieveReport:
    """J -> J1 (valuation deletion) -> J2 (A_i <= k^cap) -> 3-AP -> 2^8 A_i A_j A_l < k^418."""
    k = cfg.k
    base = cfg.defaults()
    if A is None:
        A = [t.smooth for t in decompose_terms(Solution(cfg.n, cfg.d, k, cfg.ell))]
    jr = build_J(cfg)
    rep = SieveReport(cfg, jr, None, [], None, None, None, None)
    rep.budget["J"] = _budget_line(len(jr.J), k, cfg.j_density, base.j_density)
    dele = erdos_deletion(jr.J, A, k)
    rep.deletion = dele
    rep.budget["J1"] = _budget_line(len(dele.J1), k, cfg.j1_density, base.j1_density)
    if not dele.certificate:
        rep.failure = "valuation certificate failed"
        return rep
    log_cap = cfg.smooth_cap_exp * math.log(k)
    J2 = [i for i in dele.J1 if math.log(A[i]) <= log_cap]
    rep.J2 = J2
    rep.budget["J2"] = _budget_line(len(J2), k, cfg.j2_density, base.j2_density)
    tri = find_3ap(J2)
    if tri is None:
        missed = [name for name, line in rep.budget.items() if not line["meets"]]
        rep.failure = "no 3-term progression in J2" + (f"; budget short at {', '.join(missed)}" if missed else "")
        return rep
    rep.triple = tri
    rep.A_triple = (A[tri.i], A[tri.j], A[tri.l])
    bound = 2**8 * A[tri.i] * A[tri.j] * A[tri.l]
    rep.conductor_bound = bound
    rep.conductor_ok = math.log(bound) < cfg.conductor_cap_exp * math.log(k)
    if not rep.conductor_ok:
        rep.failure = "conductor bound not below k^cap"
    return rep


# ---------------------------------------------------------------------------
# Maximal set of progressions
# ---------------------------------------------------------------------------

@dataclass
class MaximalB:
    k: int
    B: list[tuple]
    C: list[tuple]
    D: list[tuple]
    rejected: list[tuple[tuple, str]]
    recip_B: float
    recip_C: float
    recip_D: float
    c_cap: float  # #B / (u_factor log k)
    branch: str
    valid: bool
    maximal: bool


def _conditions(N: int, k: int, cfg: SieveConfig) -> Optional[str]:
    P = arith.largest_prime_factor(N)
    if P > k ** cfg.t_exponent:
        return "P(N) > k^(7/16)"
    u_lo, u_hi = cfg.u_window
    # closed window so that B splits exactly into C and D
    for q in arith.factorize(N).primes:
        if u_lo <= q <= u_hi:
            return "prime factor in the excluded window"
    if math.log(N) >= cfg.conductor_cap_exp * math.log(k):
        return "N >= k^418"
    return None


def maximal_B_construction(k: int, candidates: Sequence[tuple], cfg: Optional[SieveConfig] = None) -> MaximalB:
    """Greedy maximal B under distinct P(N), P(N) <= k^(7/16), window avoidance, N < k^418.

    candidates: sequence of (triple, N) in the order they are offered.
    """
    cfg = cfg or SieveConfig(k)
    B: list[tuple] = []
    used: set[int] = set()
    rejected: list[tuple[tuple, str]] = []
    for cand in candidates:
        tri, N = cand
        if N <= 0:
            raise ValueError("conductors must be positive")
        why = _conditions(N, k, cfg)
        P = arith.largest_prime_factor(N)
        if why is None and P in used:
            why = "P(N) already used"
        if why:
            rejected.append((cand, why))
            continue
        B.append(cand)
        used.add(P)
    lk = math.log(k)
    u_lo, u_hi = cfg.u_window
    Ps = {id(c): arith.largest_prime_factor(c[1]) for c in B}
    C = [c for c in B if Ps[id(c)] > u_hi]
    D = [c for c in B if Ps[id(c)] < u_lo]
    recip = lambda xs: math.fsum(1 / Ps[id(c)] for c in xs)  # noqa: E731
    rB, rC, rD = recip(B), recip(C), recip(D)
    if len(B) > cfg.b_count_factor * lk:
        branch = "large-sieve"
    elif rB < cfg.s_recip_max:
        branch = "extend"  # sieve can add a progression, so B was not maximal in A
    else:
        branch = "repulsion"
    valid = (len({Ps[id(c)] for c in B}) == len(B)
             and all(_conditions(c[1], k, cfg) is None for c in B)
             and len(C) + len(D) == len(B))
    # no rejected candidate can join B without breaking a condition
    maximal = all(_conditions(c[1], k, cfg) is not None or arith.largest_prime_factor(c[1]) in used
                  for c, _ in rejected)
    return MaximalB(k, B, C, D, rejected, rB, rC, rD, len(B) / (cfg.u_factor * lk), branch, valid, maximal)
