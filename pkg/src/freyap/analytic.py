"""Large sieve, exceptional-zero repulsion arithmetic and explicit Chebyshev checks."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import mpmath
import numpy as np

from freyap import arith
from freyap.charlab import QuadChar, mangoldt_support

VARPI = 0.1239**2
SCHOENFELD_THETA = 1.000081
CONDBOUND_CONST = 0.94
RECIP_THRESHOLD = 0.166
CHAIN_CONST = 2.13
PLATT_BOUND = 400000
EPSILON_RR = 0.002811


# ---------------------------------------------------------------------------
# Selberg / Bombieri inequality
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SelbergResult:
    lhs: float
    rhs: float
    holds: bool


def selberg_check(x, ys, rtol: float = 1e-9) -> SelbergResult:
    """sum_i |x.y_i|^2 <= |x|^2 max_i sum_j |y_i.y_j|."""
    x = np.asarray(x, dtype=np.float64)
    Y = np.atleast_2d(np.asarray(ys, dtype=np.float64))
    if Y.shape[1] != x.shape[0]:
        raise ValueError("length mismatch")
    proj = Y @ x
    lhs = float(proj @ proj)
    gram = np.abs(Y @ Y.T)
    rhs = float(x @ x) * float(gram.sum(axis=1).max())
    return SelbergResult(lhs, rhs, lhs <= rhs + rtol * rhs)


# ---------------------------------------------------------------------------
# Large-sieve pipeline
# ---------------------------------------------------------------------------

@dataclass
class LargeSieveReport:
    k: int
    n_chars: int
    x_norm2: float
    x_norm2_cap: float  # log k * (psi(k) - psi(k/2))
    average: float  # sum |x.y|^2 / #chars
    selberg_rhs: float  # |x|^2 * max_i (1/#chars) sum_j |y_i.y_j|
    diag_max: float  # max |y.y| / #chars
    diag_cap: float  # (k+1)/2 / #chars
    offdiag_max: int
    chain_rhs: float  # |x|^2 (diag_max + offdiag_max)
    varpi_k2: float
    average_le_varpi: bool
    inv68_lt_varpi: bool
    inv68_lt_varpi_sq: bool
    max_rowsum: float
    sums: list[float] = field(default_factory=list)

    @property
    def norm_ok(self) -> bool:
        return self.x_norm2 <= self.x_norm2_cap * (1 + 1e-12)

    @property
    def selberg_ok(self) -> bool:
        return self.average <= self.selberg_rhs * (1 + 1e-9)


def large_sieve_pipeline(k: int, chars: Sequence[QuadChar]) -> LargeSieveReport:
    Ds = [c.D for c in chars]
    if len(set(Ds)) != len(Ds):
        raise ValueError("duplicate characters")
    if not chars:
        raise ValueError("need at least one character")
    lo, hi = k // 2, k
    ms = np.arange(lo + 1, hi + 1, dtype=np.int64)
    x = np.zeros(len(ms))
    pm, logs = mangoldt_support(k / 2, k)
    x[pm - (lo + 1)] = logs
    Y = np.stack([c.values(ms).astype(np.int64) for c in chars])
    gram = Y @ Y.T  # exact integers
    B = len(chars)
    proj = Y.astype(np.float64) @ x
    sq = proj * proj
    average = math.fsum(sq) / B
    x_norm2 = math.fsum(x * x)
    psi_diff = math.fsum(logs)
    absg = np.abs(gram)
    rowsum = absg.sum(axis=1) / B
    diag_max = float(np.diag(absg).max()) / B
    off = absg.copy()
    np.fill_diagonal(off, 0)
    offdiag_max = int(off.max()) if B > 1 else 0
    return LargeSieveReport(
        k=k, n_chars=B, x_norm2=x_norm2, x_norm2_cap=math.log(k) * psi_diff,
        average=average, selberg_rhs=x_norm2 * float(rowsum.max()),
        diag_max=diag_max, diag_cap=(k + 1) / 2 / B, offdiag_max=offdiag_max,
        chain_rhs=x_norm2 * (diag_max + offdiag_max), varpi_k2=VARPI * k * k,
        average_le_varpi=average <= VARPI * k * k,
        inv68_lt_varpi=1 / 68 < VARPI, inv68_lt_varpi_sq=1 / 68 < VARPI**2,
        max_rowsum=float(rowsum.max() * B), sums=[float(v) for v in proj],
    )


# ---------------------------------------------------------------------------
# Repulsion chain
# ---------------------------------------------------------------------------

@dataclass
class RepulsionChain:
    N1: int
    s: int
    log_conductors: list[float]  # exclusive lower bounds log N_j = 2^(j-1) log N1
    p_lower: list[float]  # 0.94 * 2^(j-1) * log N1
    recip_sum: float  # sum_j 1/p_lower_j
    geometric_limit: float  # 2 / (0.94 log N1)
    chain_bound: float  # 2.13 / log N1
    refutes: bool  # chain_bound < 0.166
    threshold: int
    below_platt: bool


def repulsion_threshold(const: float = CHAIN_CONST, target: float = RECIP_THRESHOLD) -> int:
    """Largest integer N with const / log N >= target."""
    with mpmath.workdps(50):
        bound = mpmath.exp(mpmath.mpf(str(const)) / mpmath.mpf(str(target)))
        N = int(mpmath.floor(bound))
        # integer boundary: log N <= const/target < log(N + 1)
        c = mpmath.mpf(str(const)) / mpmath.mpf(str(target))
        assert mpmath.log(N) <= c < mpmath.log(N + 1)
    return N


def repulsion_chain(N1: int, s: int) -> RepulsionChain:
    if N1 < 3 or s < 1:
        raise ValueError("need N1 >= 3 and s >= 1")
    L = math.log(N1)
    logs = [2 ** (j - 1) * L for j in range(1, s + 1)]
    plow = [CONDBOUND_CONST * 2 ** (j - 1) * L for j in range(1, s + 1)]
    threshold = repulsion_threshold()
    return RepulsionChain(
        N1=N1, s=s, log_conductors=logs, p_lower=plow,
        recip_sum=math.fsum(1 / p for p in plow),
        geometric_limit=2 / (CONDBOUND_CONST * L), chain_bound=CHAIN_CONST / L,
        refutes=CHAIN_CONST / L < RECIP_THRESHOLD, threshold=threshold,
        below_platt=threshold < PLATT_BOUND,
    )


# ---------------------------------------------------------------------------
# Conductor scan
# ---------------------------------------------------------------------------

def largest_prime_factor_table(limit: int) -> np.ndarray:
    """lpf[m] = largest prime factor of m for 2 <= m <= limit (lpf[0] = lpf[1] = 1)."""
    lpf = np.ones(limit + 1, dtype=np.int32)
    for p in arith.prime_array(limit):
        lpf[p::p] = p
    return lpf


def squarefree_table(limit: int) -> np.ndarray:
    sqf = np.ones(limit + 1, dtype=bool)
    sqf[0] = False
    for p in arith.prime_array(math.isqrt(limit)):
        sqf[p * p::p * p] = False
    return sqf


@dataclass
class CondboundResult:
    limit: int
    min_ratio: float
    argmin: int
    violations: list[int]
    count: int
    table: Optional[tuple[np.ndarray, np.ndarray]] = None  # (N, P(N)) of every valid conductor


def valid_conductors(limit: int, sqf: np.ndarray) -> np.ndarray:
    """|D| for all fundamental D != 1: odd squarefree >= 3, 4 * odd squarefree, 8 * odd squarefree."""
    odd = np.arange(3, limit + 1, 2, dtype=np.int64)
    parts = [odd[sqf[odd]]]
    for mult in (4, 8):
        m = np.arange(1, limit // mult + 1, 2, dtype=np.int64)
        parts.append(mult * m[sqf[m]])
    N = np.concatenate(parts)
    N.sort()
    return N


def condbound_scan(limit: int, keep_table: bool = False, bound: float = CONDBOUND_CONST) -> CondboundResult:
    if limit < 3:
        raise ValueError("limit must be >= 3")
    lpf = largest_prime_factor_table(limit)
    sqf = squarefree_table(limit)
    N = valid_conductors(limit, sqf)
    P = lpf[N].astype(np.int64)
    ratio = P / np.log(N.astype(np.float64))
    i = int(np.argmin(ratio))
    viol = N[ratio <= bound]
    return CondboundResult(limit, float(ratio[i]), int(N[i]), [int(v) for v in viol], len(N),
                           (N, P) if keep_table else None)


# ---------------------------------------------------------------------------
# Explicit Chebyshev checks
# ---------------------------------------------------------------------------

@dataclass
class ThetaReport:
    limit: int
    max_ratio: float  # max theta(p)/p over primes p <= limit
    argmax: int
    schoenfeld_ok: bool
    theta_limit: float
    ap_samples: list[dict] = field(default_factory=list)
    mertens_samples: list[dict] = field(default_factory=list)


def explicit_theta_checks(limit: int, ap_samples: Sequence[int] = (), mertens_samples: Sequence[int] = (),
                          segment: int = 1 << 22) -> ThetaReport:
    """(a) theta(x) < 1.000081 x at every prime x <= limit; (b) primes 3 mod 8 in (k/2, k];
    (c) prod_{q <= k} (1 + 1/q) against 2 log k."""
    if limit < 1000:
        raise ValueError("limit must be >= 1000")
    base = 0.0
    comp = 0.0
    log_prod = 0.0
    best, arg = 0.0, 2
    m_targets = sorted(int(k) for k in mertens_samples if k <= limit)
    m_acc: dict[int, float] = {}
    for ps in arith.iter_prime_segments(2, limit, segment):
        if len(ps) == 0:
            continue
        lg = np.log(ps.astype(np.float64))
        th = base + np.cumsum(lg)
        r = th / ps
        j = int(np.argmax(r))
        if r[j] > best:
            best, arg = float(r[j]), int(ps[j])
        # Kahan-style carry keeps the running base accurate across segments
        seg_total = math.fsum(lg)
        y = seg_total - comp
        t = base + y
        comp = (t - base) - y
        base = t
        l1p = np.log1p(1.0 / ps.astype(np.float64))
        cum = np.cumsum(l1p)
        for kk in m_targets:
            if kk not in m_acc and ps[-1] >= kk:
                idx = int(np.searchsorted(ps, kk, side="right"))
                m_acc[kk] = log_prod + (float(cum[idx - 1]) if idx else 0.0)
        log_prod += math.fsum(l1p)
    for kk in m_targets:
        m_acc.setdefault(kk, log_prod)
    rep = ThetaReport(limit, best, arg, best < SCHOENFELD_THETA, base)
    for kk in ap_samples:
        obs = arith.theta_ap(kk, 3, 8) - arith.theta_ap(kk / 2, 3, 8)
        target = (1 - 3 * EPSILON_RR) * kk / 8
        rep.ap_samples.append({"k": int(kk), "observed": obs, "target": target,
                               "ratio": obs / target, "passes": obs >= target})
    for kk in m_targets:
        lp = m_acc[kk]
        cap = math.log(2 * math.log(kk))
        rep.mertens_samples.append({"k": kk, "log_product": lp, "log_cap": cap,
                                    "ratio": math.exp(lp) / math.log(kk), "passes": lp <= cap})
    return rep


@dataclass(frozen=True)
class PNTResidual:
    D: int
    X: int
    total: float
    residual: float
    ratio: float


def pnt_residual(chi: QuadChar, X: int) -> PNTResidual:
    """sum_{m <= X} chi(m) Lambda(m) - delta_chi X, and its size relative to X."""
    if X < 100:
        raise ValueError("X must be >= 100")
    ms, logs = arith.prime_power_support(2, X)
    vals = chi.values(ms)
    total = math.fsum(vals * logs)
    res = total - (X if chi.trivial else 0)
    return PNTResidual(chi.D, X, total, res, abs(res) / X)
