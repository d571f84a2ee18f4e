"""Command-line experiment runner: every library check as a subcommand with
config files and byte-stable JSON/CSV artifacts.

Subcommands: primes, charsum, gauss, identity-check, wd-audit, dual-check,
exc-primes, sieve-run, count.  Exit codes: 0 all checks pass, 1 a
mathematical check failed, 2 usage or config error, 3 enumeration budget
exceeded (the required budget is printed).
"""

import argparse
import itertools
import json
import sys

from . import charsums as cs
from . import geometry as geo
from . import identities as ids
from . import polyring as pr
from . import reports as rp
from . import sieve as sv
from .charsums import Budget, BudgetExceeded


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--config", help="JSON config file")
    shared.add_argument("--q", type=int, help="field size (prime power)")
    shared.add_argument("--n", type=int, help="projective dimension")
    shared.add_argument("--ell", type=int, help="cover degree (prime)")
    shared.add_argument("--b", type=int, help="box degree bound")
    shared.add_argument("--delta", help="sieving degree or 'auto'")
    shared.add_argument("--budget", type=int,
                        help=f"max innermost evaluations "
                             f"(default {rp.DEFAULT_BUDGET})")
    shared.add_argument("--workers", type=int,
                        help="worker processes (sieve-run; default 1)")
    shared.add_argument("--out", default="artifacts",
                        help="artifact directory (default artifacts/)")
    shared.add_argument("--form", help="inline form JSON (overrides config)")

    parser = argparse.ArgumentParser(
        prog="cycsieve",
        description="exact desk-scale checks for the geometric sieve on "
                    "prime-degree cyclic covers over F_q(T)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("primes", parents=[shared],
                       help="enumerate monic irreducibles of one degree and "
                            "check the prime-count bound")
    p.set_defaults(func=cmd_primes)

    p = sub.add_parser("charsum", parents=[shared],
                       help="one mixed character sum S_G(w, chi), exact")
    p.add_argument("--pi", default="T", help="prime modulus (poly text)")
    p.add_argument("--chi", type=int, default=1, help="character index")
    p.add_argument("--w", help="covector, semicolon-joined poly texts")
    p.set_defaults(func=cmd_charsum)

    p = sub.add_parser("gauss", parents=[shared],
                       help="Gauss sums mod one prime; exact |tau|^2 = Q")
    p.add_argument("--pi", default="T", help="prime modulus (poly text)")
    p.set_defaults(func=cmd_gauss)

    p = sub.add_parser("identity-check", parents=[shared],
                       help="run the exact identity suite on the config")
    p.set_defaults(func=cmd_identity_check)

    p = sub.add_parser("wd-audit", parents=[shared],
                       help="audit |S_G(w, chi)| against the case bounds "
                            "for every w mod the given primes")
    p.add_argument("--pi", action="append",
                   help="prime modulus; repeatable (default: first linear "
                        "and first quadratic prime)")
    p.set_defaults(func=cmd_wd_audit)

    p = sub.add_parser("dual-check", parents=[shared],
                       help="dual membership: closed form against tangency "
                            "witness search, all w mod one prime")
    p.add_argument("--pi", default="T", help="prime modulus (poly text)")
    p.add_argument("--search-bound", type=int, default=1,
                   help="extension degree for the witness search")
    p.set_defaults(func=cmd_dual_check)

    p = sub.add_parser("exc-primes", parents=[shared],
                       help="scan for primes of bad reduction")
    p.add_argument("--delta-max", type=int, help="scan bound")
    p.set_defaults(func=cmd_exc_primes)

    p = sub.add_parser("sieve-run", parents=[shared],
                       help="both sieve inequalities on the configured "
                            "instance; JSON + CSV artifacts")
    p.set_defaults(func=cmd_sieve_run)

    p = sub.add_parser("count", parents=[shared],
                       help="brute-force M_n(F;b) with dual solvability "
                            "routes")
    p.set_defaults(func=cmd_count)
    return parser


def _overrides(args) -> dict:
    over = {"q": args.q, "n": args.n, "ell": args.ell, "b": args.b,
            "delta": args.delta, "budget": args.budget}
    if args.form:
        over["form"] = json.loads(args.form)
    return over


def _config(args) -> dict:
    raw = rp.load_config(args.config) if args.config else {}
    return rp.resolve_config(raw, _overrides(args))


def _emit(args, name: str, report: dict) -> None:
    path = rp.write_artifact(args.out, name, rp.json_text(report))
    print(f"wrote {path}")


# ---------------------------------------------------------------------------
# commands


def cmd_primes(args) -> int:
    if args.q is None or args.delta in (None, "auto"):
        raise ValueError("primes needs --q and an integer --delta")
    q, delta = args.q, int(args.delta)
    k = rp.field_from_q(q)
    names = [pr.format_poly(k, f) for f in pr.irreducibles(k, delta)]
    pnt = sv.verify_prime_count(q, delta)
    for name in names:
        print(name)
    print(f"prime-count bound (q={q}, delta={delta}): count={pnt['count']} "
          f"{'pass' if pnt['pass'] else 'FAIL'}")
    _emit(args, "primes.json", {
        "config": {"q": q, "delta": delta},
        "primes": names,
        "pnt": pnt,
    })
    return 0 if pnt["pass"] else 1


def cmd_charsum(args) -> int:
    cfg = _config(args)
    k = pr.make_field(cfg["p"], cfg["e"])
    form = geo.form_from_json(k, cfg["form"])
    pi = pr.parse_poly(k, args.pi)
    ctx = cs.CharSumContext(k, pi, cfg["ell"], form,
                            budget=Budget(cfg["budget"]))
    if args.w:
        w = tuple(ctx.kpi.reduce_poly(pr.parse_poly(k, t))
                  for t in args.w.split(";"))
    else:
        w = (ctx.kpi.zero,) * ctx.nvars
    S = ctx.char_sum(w, args.chi)
    abs_s = ctx.ring.abs_embed(S)
    trivial = ctx.trivial_bound()
    ok = abs_s <= trivial * (1 + 1e-9)
    as_int = ctx.ring.as_int(S)
    print(f"S = {as_int if as_int is not None else ctx.ring.serialize(S)}")
    print(f"|S| = {abs_s:.12g}  (trivial bound {trivial} "
          f"{'pass' if ok else 'FAIL'})")
    _emit(args, "charsum.json", {
        "config": cfg,
        "pi": pr.format_poly(k, pi),
        "chi_index": args.chi,
        "w": cs.format_covector(ctx.kpi, w),
        "exact": ctx.ring.serialize(S),
        "as_int": as_int,
        "abs": abs_s,
        "trivial_bound": trivial,
        "pass": ok,
    })
    return 0 if ok else 1


def cmd_gauss(args) -> int:
    if args.q is None or args.ell is None:
        raise ValueError("gauss needs --q and --ell")
    k = rp.field_from_q(args.q)
    pi = pr.parse_poly(k, args.pi)
    row = ids.verify_gauss_magnitude(k, pi, args.ell)
    for i, value in enumerate(row["lhs"], start=1):
        print(f"chi_{i}: tau * conj(tau) = {value} "
              f"(expected {row['rhs'][i - 1]})")
    print("gauss magnitude: " + ("pass" if row["equal"] else "FAIL"))
    _emit(args, "gauss.json", {"config": {"q": args.q, "ell": args.ell},
                               **row})
    return 0 if row["equal"] else 1


def run_identity_suite(cfg: dict) -> dict:
    """The exact identity battery on a configured instance: root-count and
    Gauss-magnitude for every prime of degree <= 2, a count-mod battery over
    composite and prime-power moduli, completions over distinct prime pairs,
    and the unramified two-prime expansion on the instance's own sieving
    primes."""
    k = pr.make_field(cfg["p"], cfg["e"])
    form = geo.form_from_json(k, cfg["form"])
    ell, arity = cfg["ell"], cfg["n"] + 1
    budget = Budget(cfg["budget"])
    rows = []

    lin = pr.irreducibles(k, 1)
    quad = pr.irreducibles(k, 2)
    for piv in lin + quad:
        rows.append(ids.verify_root_count(k, piv, ell))
        rows.append(ids.verify_gauss_magnitude(k, piv, ell))

    moduli = [
        pr.mul(k, lin[0], lin[1]),
        pr.mul(k, lin[0], lin[0]),
        pr.mul(k, pr.mul(k, lin[0], lin[0]), lin[1]),
        quad[0],
        pr.mul(k, quad[0], lin[1]),
    ]
    targets = [
        tuple(() for _ in range(arity)),
        tuple((k.one,) if i % 2 == 0 else () for i in range(arity)),
        tuple(lin[1] for _ in range(arity)),
    ]
    for u in moduli:
        for b in range(1, pr.degree(u)):
            for a in targets:
                rows.append(ids.verify_count_mod(k, u, a, b))

    chi2 = ell - 1
    pairs = [(lin[0], lin[1]), (lin[1], lin[0]), (lin[0], lin[2]),
             (lin[1], lin[2]), (lin[2], lin[0])]
    for pi1, pi2 in pairs:
        rows.append(ids.verify_completion(k, pi1, pi2, ell, 1, chi2, form,
                                          1, budget=budget))
    if k.size == 3:
        # mixed-degree pair; kept to the smallest field where the full
        # residue sums stay desk-sized
        for b in (1, 2):
            rows.append(ids.verify_completion(k, lin[0], quad[0], ell, 1,
                                              chi2, form, b, budget=budget))

    _, _, params, sset = rp.build_instance(cfg)
    if len(sset) >= 2:
        rows.append(ids.verify_unramified_expansion(
            k, sset.primes[0], sset.primes[1], ell, form, params.b,
            budget=budget))

    all_pass = all(r["equal"] and r.get("zero_portion_vanishes", True)
                   and r.get("pointwise_fiber_identity", True)
                   for r in rows)
    return {"config": cfg, "rows": rows, "all_pass": all_pass}


def cmd_identity_check(args) -> int:
    cfg = _config(args)
    suite = run_identity_suite(cfg)
    counts = {}
    for row in suite["rows"]:
        counts[row["id"]] = counts.get(row["id"], 0) + 1
        if not row["equal"]:
            print(f"FAIL {row['id']}: {row['params']}")
    for name in sorted(counts):
        print(f"{name}: {counts[name]} instances")
    print("identity suite: " + ("pass" if suite["all_pass"] else "FAIL"))
    _emit(args, "identity_check.json", suite)
    return 0 if suite["all_pass"] else 1


def _dual_spec(k, cfg):
    return geo.form_from_json(k, cfg["dual"]) if cfg.get("dual") else "auto"


def cmd_wd_audit(args) -> int:
    cfg = _config(args)
    k = pr.make_field(cfg["p"], cfg["e"])
    form = geo.form_from_json(k, cfg["form"])
    pi_texts = args.pi or None
    if pi_texts:
        pis = [pr.parse_poly(k, text) for text in pi_texts]
    else:
        pis = [pr.irreducibles(k, 1)[0], pr.irreducibles(k, 2)[0]]
    budget = Budget(cfg["budget"])
    dual = _dual_spec(k, cfg)
    audits = []
    all_rows = []
    ok = True
    for pi in pis:
        audit = cs.wd_audit(k, pi, cfg["ell"], form, dual=dual,
                            budget=budget)
        summary = audit["summary"]
        audits.append({"pi": pr.format_poly(k, pi), "summary": summary})
        all_rows.extend(audit["rows"])
        ok = ok and summary["all_pass"]
        print(f"pi={pr.format_poly(k, pi)}: rows={summary['rows']} "
              f"cases={summary['cases']} "
              f"max_ratio_iii={summary['max_ratio_iii']} "
              f"{'pass' if summary['all_pass'] else 'FAIL'}")
    _emit(args, "wd_audit.json",
          {"config": cfg, "audits": audits, "rows": all_rows,
           "all_pass": ok})
    path = rp.write_artifact(args.out, "wd_audit.csv",
                             rp.csv_text(rp.WD_CSV_COLUMNS, all_rows))
    print(f"wrote {path}")
    return 0 if ok else 1


def cmd_dual_check(args) -> int:
    cfg = _config(args)
    k = pr.make_field(cfg["p"], cfg["e"])
    form = geo.form_from_json(k, cfg["form"])
    pi = pr.parse_poly(k, args.pi)
    kpi = pr.residue_field(k, pi)
    dual = _dual_spec(k, cfg)
    rows = []
    agree_all = True
    for idx in itertools.product(range(kpi.size), repeat=form.n + 1):
        w = tuple(kpi.from_index(i) for i in idx)
        if all(kpi.is_zero(x) for x in w):
            continue
        closed = geo.dual_membership(form, pi, w, dual=dual)
        witness = geo.dual_membership(form, pi, w, dual="tangency",
                                      search_bound=args.search_bound)
        agree = (closed is True) == (witness is True)
        agree_all = agree_all and agree
        rows.append({
            "w": cs.format_covector(kpi, w),
            "closed_form": closed,
            "tangency_witness": witness is True,
            "agree": agree,
        })
    print(f"pi={pr.format_poly(k, pi)}: {len(rows)} covectors, "
          f"{'all agree' if agree_all else 'DISAGREEMENT'}")
    _emit(args, "dual_check.json",
          {"config": cfg, "pi": pr.format_poly(k, pi),
           "search_bound": args.search_bound, "rows": rows,
           "all_agree": agree_all})
    return 0 if agree_all else 1


def cmd_exc_primes(args) -> int:
    cfg = _config(args)
    k = pr.make_field(cfg["p"], cfg["e"])
    form = geo.form_from_json(k, cfg["form"])
    delta_max = args.delta_max or cfg["delta_max"]
    report = geo.compute_exceptional_primes(form, delta_max,
                                            dual=_dual_spec(k, cfg),
                                            search_bound=cfg["search_bound"])
    for entry in report["entries"]:
        print(f"{entry['pi']}: tags={entry['tags']} "
              f"unknown={entry['unknown']}")
    print(f"scanned {report['scanned']} primes up to degree {delta_max}; "
          f"{len(report['exceptional'])} exceptional")
    _emit(args, "exc_primes.json", {"config": cfg, **report})
    return 0


def cmd_sieve_run(args) -> int:
    cfg = _config(args)
    workers = args.workers or 1
    result = rp.run_sieve(cfg, workers=workers)
    rep = result["sieve"]
    print(f"q={rep['q']} delta={rep['delta']} b={rep['b']} "
          f"|P|={len(rep['primes'])} |A|={rep['A']}")
    print(f"M={rep['M']}  rhs={rep['rhs']}  main={rep['main_term']} "
          f"ram={rep['ramified_term']} unram={rep['unramified_term']}")
    print(f"argmin alpha={result['general']['argmin_alpha']}")
    print("sieve inequalities: " + ("pass" if result["pass"] else "FAIL"))
    _emit(args, "sieve_report.json", result)
    path = rp.write_artifact(
        args.out, "sieve_report.csv",
        rp.csv_text(rp.SIEVE_CSV_COLUMNS, [rp.sieve_csv_row(result)]))
    print(f"wrote {path}")
    return 0 if result["pass"] else 1


def cmd_count(args) -> int:
    cfg = _config(args)
    k = pr.make_field(cfg["p"], cfg["e"])
    form = geo.form_from_json(k, cfg["form"])
    M = sv.brute_force_count(k, cfg["ell"], form, cfg["b"],
                             budget=Budget(cfg["budget"]))
    trivial = cfg["q"] ** (cfg["b"] * (cfg["n"] + 1))
    ok = M <= trivial
    print(f"M_{cfg['n']}(F; {cfg['b']}) = {M}  (box {trivial} "
          f"{'pass' if ok else 'FAIL'})")
    _emit(args, "count.json", {
        "config": cfg,
        "M": M,
        "trivial_bound": trivial,
        "pass": ok,
    })
    return 0 if ok else 1


# ---------------------------------------------------------------------------


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"budget exceeded: needs {exc.needed}, limit {exc.limit}; "
              f"raise --budget to proceed", file=sys.stderr)
        return 3
    except ArithmeticError as exc:
        print(f"mathematical check failed: {exc}", file=sys.stderr)
        return 1
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
