"""Command-line driver: every verifier and scan, with JSON reports, CSV tables and figures.

Exit status: 0 when every hard check passes, 1 on a failed check, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import math
import os
import sys
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from freyap import analytic, arith, charlab, checks, ecfp, frey, sieve
from freyap.report import RunReport, write_csv


def _int_list(s: str) -> list[int]:
    try:
        return [int(x) for x in s.split(",") if x.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {s!r}") from e


def _fraction(s: str) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as e:
        raise argparse.ArgumentTypeError(f"expected a rational a/b: {s!r}") from e


def _fig_path(args, name: str) -> Optional[str]:
    """--fig may name a directory (one file per figure) or a single file."""
    if not args.fig:
        return None
    if os.path.isdir(args.fig) or args.fig.endswith(os.sep):
        os.makedirs(args.fig, exist_ok=True)
        return os.path.join(args.fig, f"{name}.png")
    return args.fig


def _plotting():
    from freyap import plotting

    return plotting


# ---------------------------------------------------------------------------
# lemma
# ---------------------------------------------------------------------------

def cmd_lemma(args, rep: RunReport) -> None:
    which = args.which
    if which == "mod4":
        sw = checks.sweep_mod4(args.p_max)
        rep.add("mod4 subgroup exists", sw.ok, sw.failures, 0, primes=sw.trials, curves=sw.extra["curves"])
    elif which == "fminus1":
        sw = checks.sweep_fminus1(args.p_max)
        rep.add("2^3 || #F_-1", sw.ok, sw.failures, 0, primes=sw.trials)
        traces = sw.extra["traces"]
        if args.csv:
            write_csv(args.csv, ["p", "a_p", "count"], [(p, a, p + 1 - a) for p, a in traces])
        if (path := _fig_path(args, "fminus1_traces")) and traces:
            ps, aps = zip(*traces)
            _plotting().trace_histogram(aps, ps, path, "Y^2 = X^3 - X, p = 5 mod 8")
            rep.info("figure", path)
    elif which == "order4":
        sw = checks.sweep_order4(args.trials, args.p_max, args.seed)
        rep.add("2P = (2 lam, 0) for both sqrt(-1)", sw.ok, sw.failures, 0, instances=sw.trials)
        rep.info("polynomial y-coordinate failures", sw.extra["polynomial_y_failures"],
                 note="the literal formula is not on the curve; the corrected y = 8itv(t + iv) is used")
    elif which == "kro":
        rows = []
        for roots in args.roots or [(0, 1, 2), (0, 1, -1)]:
            sw = checks.sweep_kro(tuple(roots), 3, args.p_max)
            rep.add(f"lambda non-squares at supersingular p = 3 mod 8, roots {tuple(roots)}", sw.ok,
                    sw.failures, 0, tested=sw.trials, skipped=sw.extra["skipped"])
            for r in ecfp.verify_kro_scan(tuple(roots), 3, args.p_max):
                rows.append((",".join(map(str, roots)), r.p, r.status, r.a_p))
        if args.csv:
            write_csv(args.csv, ["roots", "p", "status", "a_p"], rows)


# ---------------------------------------------------------------------------
# scan
# ---------------------------------------------------------------------------

def cmd_scan(args, rep: RunReport) -> None:
    res = analytic.condbound_scan(args.limit, keep_table=bool(args.csv or args.fig))
    rep.add("argmin P(N)/log N", res.argmin == 24 or args.limit < 24, res.argmin, 24, limit=args.limit)
    rep.add("min ratio > 0.94", res.min_ratio > analytic.CONDBOUND_CONST, res.min_ratio, 3 / math.log(24))
    rep.add("violations", not res.violations, len(res.violations), 0, conductors=res.count)
    if res.table is not None:
        N, P = res.table
        if args.csv:
            logN = np.log(N.astype(float))
            keep = P / logN < args.csv_ratio_below
            write_csv(args.csv, ["N", "P(N)", "logN", "ratio"],
                      zip(N[keep].tolist(), P[keep].tolist(), logN[keep].tolist(), (P[keep] / logN[keep]).tolist()))
        if path := _fig_path(args, "condbound"):
            _plotting().condbound_figure(N, P, path)
            rep.info("figure", path)


# ---------------------------------------------------------------------------
# frey
# ---------------------------------------------------------------------------

def cmd_frey(args, rep: RunReport) -> None:
    if args.which == "enumerate":
        pr = frey.enumerate_progressions(args.k, materialize=bool(args.csv))
        rep.add("#I matches closed form", pr.n_quads == pr.formula, pr.n_quads, pr.formula, k=args.k)
        rep.info("#A", pr.n_triples, k=args.k)
        if args.csv:
            rows = [("A", *t, "") for t in pr.triples] + [("I", *q) for q in pr.quads]
            write_csv(args.csv, ["set", "c1", "c2", "c3", "c4"], rows)
        return
    sol = frey.Solution(args.n, args.d, args.k, args.ell)
    rep.add("gcd lemma", frey.gcd_lemma_check(sol), True, True)
    terms = frey.decompose_terms(sol)
    rep.info("terms", [(t.term, t.smooth, t.rough, t.rough_is_power) for t in terms])
    if args.quad:
        fi = frey.build_frey_I(sol, args.quad)
        lb = frey.level_bounds_I(fi.kappa, sol.k)
        rep.add("A - B = kappa d^2", fi.A - fi.B == fi.kappa * sol.d**2, fi.A - fi.B, fi.kappa * sol.d**2)
        rep.add("disc = -64 kappa^3 A^2 B", frey.weierstrass_discriminant(*fi.model) == fi.disc, fi.disc,
                -64 * fi.kappa**3 * fi.A**2 * fi.B)
        rep.info("curve", {"kappa": fi.kappa, "A": fi.A, "B": fi.B, "model": fi.model})
    else:
        tri = args.triple or [0, 1]
        i, j = tri[0], tri[1]
        fa = frey.build_frey_A(sol, (i, j, 2 * j - i))
        A = [terms[x].smooth for x in fa.triple]
        lb = frey.level_bounds_A(A, sol.k)
        rep.add("a + b + c = 0", fa.a + fa.b + fa.c == 0, fa.a + fa.b + fa.c, 0)
        rep.add("disc = 64 (abc)^2", fa.disc == 64 * (fa.a * fa.b * fa.c) ** 2, fa.disc)
        rep.add("model disc * 4 = disc", 4 * frey.weierstrass_discriminant(*fa.model) == fa.disc,
                frey.weierstrass_discriminant(*fa.model))
        rep.info("curve", {"g": fa.g, "a": fa.a, "b": fa.b, "c": fa.c, "j": ecfp.j_from_abc(fa.a, fa.b, fa.c)})
    rep.info("level bound", {"divisor": lb.divisor_bound, "odd_radical": lb.odd_radical,
                             "two_exponent": lb.two_exponent, "log_cap": lb.log_cap})


# ---------------------------------------------------------------------------
# char
# ---------------------------------------------------------------------------

def cmd_char(args, rep: RunReport) -> None:
    if args.which == "sum":
        chi = charlab.QuadChar(args.disc)
        chi2 = charlab.QuadChar(args.disc2) if args.disc2 is not None else None
        w = "lambda" if args.weighted else "unweighted"
        s = charlab.char_sum(chi, args.lo, args.hi, w, chi2)
        rep.info("sum", s, disc=args.disc, disc2=args.disc2, lo=args.lo, hi=args.hi, weight=w)
        if chi2 is not None and chi2.D != chi.D:
            dec = charlab.char_product_decompose(chi, chi2)
            rep.add("product = eta * principal on a period", dec.period_identity, dec.period_identity, True,
                    eta=dec.eta.D, M1=dec.M1, M2=dec.M2)
            rep.info("M1 * M2 = lcm(N1, N2)", dec.lcm_identity)
        if path := _fig_path(args, "char_sum"):
            vals = chi.interval(int(args.lo), int(args.hi)).astype(np.int64)
            if chi2 is not None:
                vals = vals * chi2.interval(int(args.lo), int(args.hi))
            _plotting().char_partial_sums(vals, int(args.lo), path, f"D={args.disc}")
            rep.info("figure", path)
        return
    lam = args.lam
    bad, tested = [], 0
    for p in arith.sieve_primes(args.p_max)[1:]:
        if lam.numerator % p == 0 or lam.denominator % p == 0:
            continue
        tested += 1
        if not charlab.mu_quadruple_identity(lam, p):
            bad.append(p)
    rep.add("mu1 - mu2 - mu3 + mu4 identity", not bad, len(bad), 0, primes=tested, lam=lam)
    chars = charlab.mu_characters(lam)
    rep.info("characters", [c.D for c in chars])


# ---------------------------------------------------------------------------
# analytic
# ---------------------------------------------------------------------------

def cmd_analytic(args, rep: RunReport) -> None:
    w = args.which
    if w == "selberg":
        sw = checks.sweep_selberg(args.trials, args.seed)
        rep.add("Selberg inequality", sw.ok, sw.failures, 0, trials=sw.trials)
        rep.add("equality case", sw.extra["equality_rel_err"] <= 1e-12, sw.extra["equality_rel_err"], 0)
    elif w == "large-sieve":
        chars = [charlab.QuadChar(D) for D in charlab.fundamental_discriminants(args.max_cond)]
        r = analytic.large_sieve_pipeline(args.k, chars)
        rep.add("|x|^2 <= log k (psi(k) - psi(k/2))", r.norm_ok, r.x_norm2, r.x_norm2_cap)
        rep.add("Selberg bound on the average", r.selberg_ok, r.average, r.selberg_rhs)
        rep.info("average <= varpi k^2", r.average_le_varpi, note=f"varpi k^2 = {r.varpi_k2:.6g}")
        rep.info("diagonal max / #chars", r.diag_max, note=f"(k+1)/2/#chars = {r.diag_cap:.6g}")
        rep.info("off-diagonal max", r.offdiag_max)
        rep.info("1/68 < varpi", r.inv68_lt_varpi)
        rep.info("1/68 < varpi^2", r.inv68_lt_varpi_sq, note="the squared reading is false")
        if args.csv:
            write_csv(args.csv, ["D", "x_dot_y"], zip([c.D for c in chars], r.sums))
        if path := _fig_path(args, "gram"):
            ms = np.arange(args.k // 2 + 1, args.k + 1)
            Y = np.stack([c.values(ms).astype(np.int64) for c in chars])
            _plotting().gram_figure(Y @ Y.T, [c.D for c in chars], path)
            rep.info("figure", path)
    elif w == "repulsion":
        ch = analytic.repulsion_chain(args.n1, args.s)
        rep.add("threshold N1 <= 373743", ch.threshold == 373743, ch.threshold, 373743)
        rep.add("threshold below 400000", ch.below_platt, ch.threshold, analytic.PLATT_BOUND)
        rep.info("chain bound 2.13/log N1", ch.chain_bound, N1=args.n1)
        rep.info("finite sum of 1/P lower bounds", ch.recip_sum, s=args.s)
        rep.add("geometric limit <= 2.13/log N1", ch.geometric_limit <= ch.chain_bound, ch.geometric_limit,
                ch.chain_bound)
        rep.info("refutes 0.166", ch.refutes)
        rep.info("threshold with 2/0.94", analytic.repulsion_threshold(2 / analytic.CONDBOUND_CONST))
        if path := _fig_path(args, "repulsion"):
            xs = np.logspace(1, 7, 400)
            _plotting().repulsion_figure(xs, analytic.CHAIN_CONST / np.log(xs), analytic.RECIP_THRESHOLD,
                                         ch.threshold, path)
            rep.info("figure", path)
    elif w == "theta":
        ap = [s for s in args.samples if s <= args.limit]
        r = analytic.explicit_theta_checks(args.limit, ap_samples=ap, mertens_samples=args.samples)
        rep.add("theta(x) < 1.000081 x", r.schoenfeld_ok, r.max_ratio, analytic.SCHOENFELD_THETA,
                limit=args.limit, argmax=r.argmax)
        for row in r.ap_samples:
            rep.info(f"theta(k;3,8) - theta(k/2;3,8) vs (1-3eps)k/8 at k={row['k']}", row["ratio"],
                     note="asserted only for k >= 2e10")
        for row in r.mertens_samples:
            ok = row["passes"] if row["k"] >= 10**8 else None
            rep.add(f"prod (1+1/q) <= 2 log k at k={row['k']}", ok, row["ratio"], 2)
        if args.csv or args.fig:
            ps = arith.prime_array(min(args.limit, 10**7))
            th = np.cumsum(np.log(ps.astype(float)))
            ratio = th / ps
            if args.csv:
                step = max(1, len(ps) // 100000)
                write_csv(args.csv, ["p", "theta", "ratio"], zip(ps[::step].tolist(), th[::step].tolist(),
                                                                  ratio[::step].tolist()))
            if path := _fig_path(args, "theta"):
                _plotting().theta_figure(ps, ratio, path)
                rep.info("figure", path)


# ---------------------------------------------------------------------------
# sieve
# ---------------------------------------------------------------------------

_OVERRIDABLE = {f for f in sieve.SieveConfig.__dataclass_fields__ if f not in ("k", "n", "d", "S")}


def _parse_overrides(items: Sequence[str]) -> dict:
    out = {}
    for it in items:
        key, _, val = it.partition("=")
        key = key.strip().replace("-", "_")
        if key not in _OVERRIDABLE or not val:
            raise argparse.ArgumentTypeError(f"bad override {it!r}; allowed: {sorted(_OVERRIDABLE)}")
        out[key] = int(val) if key == "ell" else float(Fraction(val))
    return out


def cmd_sieve(args, rep: RunReport) -> None:
    if args.which == "run":
        over = {} if args.defaults else _parse_overrides(args.overrides or [])
        cfg = sieve.SieveConfig(args.k, args.n, args.d, tuple(args.s_primes or ()), **over)
        r = sieve.sieve_pipeline(cfg)
        for fam in r.J.families:
            rep.info(f"family {fam.name}", {"primes": fam.primes, "removed": fam.removed,
                                            "recip_sum": fam.recip_sum, "budget": fam.budget})
        for name, line in r.budget.items():
            rep.info(f"#{name}", line["count"], note=f"need > {line['need']:.4g} (default {line['need_default']:.4g})")
        rep.add("valuation certificate", r.deletion.certificate if r.deletion else False, True, True)
        rep.info("triple", r.triple)
        if r.triple is not None:
            rep.info("conductor bound below k^cap", r.conductor_ok)
        rep.info("diagnosis", r.failure or "ok")
        if args.csv:
            sJ, sJ1, sJ2 = set(r.J.J), set(r.deletion.J1), set(r.J2)
            write_csv(args.csv, ["index", "in_J", "in_J1", "in_J2"],
                      [(i, i in sJ, i in sJ1, i in sJ2) for i in range(args.k)])
        if path := _fig_path(args, "sieve"):
            counts = {name: line["count"] for name, line in r.budget.items()}
            _plotting().sieve_figure(counts, {name: line["need"] for name, line in r.budget.items()}, path)
            rep.info("figure", path)
        return
    cands = []
    with open(args.candidates, newline="") as fh:
        for row in csv.DictReader(fh):
            cands.append(((int(row["i"]), int(row["j"]), int(row["l"])), int(row["N"])))
    m = sieve.maximal_B_construction(args.k, cands)
    rep.add("B satisfies all conditions", m.valid, m.valid, True)
    rep.add("B is maximal", m.maximal, m.maximal, True)
    rep.info("sizes", {"B": len(m.B), "C": len(m.C), "D": len(m.D), "rejected": len(m.rejected)})
    rep.info("reciprocal sums", {"B": m.recip_B, "C": m.recip_C, "D": m.recip_D, "C_cap": m.c_cap})
    rep.info("branch", m.branch)


# ---------------------------------------------------------------------------
# verify all
# ---------------------------------------------------------------------------

PROFILES = {
    "quick": dict(k_max=30, mod4=300, fm1=3000, order4=500, frey=50, mu=200, moebius=100, selberg=2000,
                  gr=10, roth_bits=12, cond=10**5, theta=10**6, pnt=10**5, descent=500, kro=500),
    "full": dict(k_max=64, mod4=2003, fm1=50000, order4=10**4, frey=1000, mu=1000, moebius=1000,
                 selberg=10**5, gr=100, roth_bits=16, cond=10**7, theta=10**8, pnt=10**7, descent=10**4, kro=1000),
}


def cmd_verify(args, rep: RunReport) -> None:
    P = PROFILES[args.profile]
    seed = args.seed
    sweeps: dict[str, Callable[[], checks.Sweep]] = {
        "quad count": lambda: checks.sweep_progressions(P["k_max"]),
        "mod4 subgroup": lambda: checks.sweep_mod4(P["mod4"]),
        "2^3 || #F_-1": lambda: checks.sweep_fminus1(P["fm1"]),
        "order-4 point": lambda: checks.sweep_order4(P["order4"], 10**4, seed),
        "kro (0,1,2)": lambda: checks.sweep_kro((0, 1, 2), 3, P["kro"]),
        "frey identities": lambda: checks.sweep_frey(P["frey"], seed=seed),
        "mu identity": lambda: checks.sweep_mu_identity(P["mu"], seed=seed),
        "moebius unfolding": lambda: checks.sweep_moebius(P["moebius"], seed=seed),
        "selberg": lambda: checks.sweep_selberg(P["selberg"], seed),
        "graham-ringrose": lambda: checks.sweep_gr(P["gr"], seed=seed),
        "3-AP finder oracle": lambda: checks.sweep_roth_oracle(P["roth_bits"]),
        "pnt residual": lambda: checks.sweep_pnt(P["pnt"]),
    }
    for name, fn in sweeps.items():
        sw = fn()
        rep.add(name, sw.ok, sw.failures, 0, trials=sw.trials)
    cb = analytic.condbound_scan(P["cond"])
    rep.add("conductor scan argmin", cb.argmin == 24 and not cb.violations, cb.argmin, 24, limit=P["cond"])
    th = analytic.explicit_theta_checks(P["theta"])
    rep.add("theta(x) < 1.000081 x", th.schoenfeld_ok, th.max_ratio, analytic.SCHOENFELD_THETA, limit=P["theta"])
    sols = charlab.descent_quartic_search(P["descent"])
    rep.add("T^4 + V^4 = 2U^2 coprime solutions", sols == [(1, 1, 1)], sols, [(1, 1, 1)], limit=P["descent"])
    rep.add("repulsion threshold", analytic.repulsion_threshold() == 373743, analytic.repulsion_threshold(), 373743)
    r = sieve.sieve_pipeline(sieve.SieveConfig(1000))
    rep.add("sieve valuation certificate", r.deletion.certificate, True, True)
    rep.info("sieve diagnosis", r.failure or "ok")
    rep.info("1/68 < varpi", 1 / 68 < analytic.VARPI)
    rep.info("1/68 < varpi^2", 1 / 68 < analytic.VARPI**2)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the JSON report here instead of stdout")
    common.add_argument("--csv", help="write the scan table as CSV")
    common.add_argument("--fig", help="render figures to this file or directory")
    common.add_argument("--defaults", action="store_true", help="pin every threshold to its default")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--quiet", action="store_true", help="suppress the text summary on stderr")

    ap = argparse.ArgumentParser(prog="freyap", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="group", required=True)

    lemma = sub.add_parser("lemma", help="curve lemmas over prime fields")
    lsub = lemma.add_subparsers(dest="which", required=True)
    for name in ("mod4", "fminus1", "order4", "kro"):
        p = lsub.add_parser(name, parents=[common])
        p.add_argument("--p-max", type=int, required=True)
        if name == "order4":
            p.add_argument("--trials", type=int, default=10**4)
        if name == "kro":
            p.add_argument("--roots", type=_int_list, action="append", help="e1,e2,e3 (repeatable)")

    scan = sub.add_parser("scan", help="range scans")
    ssub = scan.add_subparsers(dest="which", required=True)
    p = ssub.add_parser("condbound", parents=[common])
    p.add_argument("--limit", type=int, required=True)
    p.add_argument("--csv-ratio-below", type=float, default=math.inf, help="only write rows under this ratio")

    fr = sub.add_parser("frey", help="Frey curve constructions")
    fsub = fr.add_subparsers(dest="which", required=True)
    p = fsub.add_parser("build", parents=[common])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--ell", type=int, default=7)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--triple", type=_int_list, help="i,j")
    g.add_argument("--quad", type=_int_list, help="j1,i1,i2,j2")
    p = fsub.add_parser("enumerate", parents=[common])
    p.add_argument("--k", type=int, required=True)

    ch = sub.add_parser("char", help="quadratic characters")
    csub = ch.add_subparsers(dest="which", required=True)
    p = csub.add_parser("sum", parents=[common])
    p.add_argument("--disc", type=int, required=True)
    p.add_argument("--disc2", type=int)
    p.add_argument("--lo", type=float, required=True)
    p.add_argument("--hi", type=float, required=True)
    p.add_argument("--weighted", action="store_true", help="weight by the von Mangoldt function")
    p = csub.add_parser("mu-identity", parents=[common])
    p.add_argument("--lambda", dest="lam", type=_fraction, required=True)
    p.add_argument("--p-max", type=int, required=True)

    an = sub.add_parser("analytic", help="large sieve, repulsion, Chebyshev bounds")
    asub = an.add_subparsers(dest="which", required=True)
    p = asub.add_parser("selberg", parents=[common])
    p.add_argument("--trials", type=int, default=10**4)
    p = asub.add_parser("large-sieve", parents=[common])
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--max-cond", type=int, default=50)
    p = asub.add_parser("repulsion", parents=[common])
    p.add_argument("--n1", type=int, required=True)
    p.add_argument("--s", type=int, default=20)
    p = asub.add_parser("theta", parents=[common])
    p.add_argument("--limit", type=int, required=True)
    p.add_argument("--samples", type=_int_list, default=[100, 10**4, 10**6])

    sv = sub.add_parser("sieve", help="index sieve and maximal set")
    vsub = sv.add_subparsers(dest="which", required=True)
    p = vsub.add_parser("run", parents=[common])
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--s-primes", type=_int_list)
    p.add_argument("--overrides", nargs="*", metavar="KEY=VALUE")
    p = vsub.add_parser("maximal-b", parents=[common])
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--candidates", required=True, help="CSV with columns i,j,l,N")

    vf = sub.add_parser("verify", help="run every module's checks")
    vfsub = vf.add_subparsers(dest="which", required=True)
    p = vfsub.add_parser("all", parents=[common])
    p.add_argument("--profile", choices=sorted(PROFILES), default="quick")
    return ap


HANDLERS = {"lemma": cmd_lemma, "scan": cmd_scan, "frey": cmd_frey, "char": cmd_char,
            "analytic": cmd_analytic, "sieve": cmd_sieve, "verify": cmd_verify}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config = {k: v for k, v in vars(args).items() if k not in ("out", "quiet")}
    rep = RunReport(f"{args.group} {args.which}", config)
    try:
        HANDLERS[args.group](args, rep)
    except (ValueError, ArithmeticError, argparse.ArgumentTypeError, OSError, KeyError) as e:
        parser.error(f"{args.group} {args.which}: {e}")
    rep.finish()
    text = rep.to_json()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    if not args.quiet:
        print(rep.summary(), file=sys.stderr)
    return rep.exit_code


if __name__ == "__main__":
    sys.exit(main())
