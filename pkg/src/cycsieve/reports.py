"""Experiment configs and reproducible artifacts: config loading/validation
with CLI overrides, byte-stable JSON and CSV emission (sorted keys, exact
integers, magnitudes at 12 significant digits), and the worker-parallel
sieve runner whose artifacts are byte-identical for every worker count
(fixed chunk fan-out, exact integer partials, ordered merge).
"""

import csv
import io
import json
import multiprocessing
import os
from fractions import Fraction

from . import geometry as geo
from . import polyring as pr
from . import sieve as sv
from .charsums import Budget
from .ffield import is_prime_int

DEFAULT_BUDGET = 10 ** 8
CHUNKS = 32  # box fan-out; fixed so results never depend on worker count


# ---------------------------------------------------------------------------
# configuration


def factor_prime_power(q: int) -> tuple:
    """(p, e) with q = p^e, or ValueError."""
    if q < 2:
        raise ValueError(f"field size {q} is not a prime power")
    p = 2
    while p * p <= q:
        if q % p == 0:
            e = 0
            rest = q
            while rest % p == 0:
                rest //= p
                e += 1
            if rest != 1:
                raise ValueError(f"field size {q} is not a prime power")
            return p, e
        p += 1
    return q, 1


def field_from_q(q: int):
    p, e = factor_prime_power(q)
    return pr.make_field(p, e)


def load_config(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def resolve_config(raw: dict, overrides: dict | None = None) -> dict:
    """Merge CLI overrides over the raw config, fill defaults, validate the
    arithmetic consistency (ell | q-1, ell | m, char not dividing m), and
    resolve delta = "auto".  Returns the fully resolved config embedded in
    every artifact."""
    cfg = dict(raw)
    live = {k: v for k, v in (overrides or {}).items() if v is not None}
    if "q" in live:
        cfg.pop("p", None)
        cfg.pop("e", None)
    cfg.update(live)

    if "q" in cfg and "p" not in cfg:
        cfg["p"], cfg["e"] = factor_prime_power(int(cfg["q"]))
    if "p" not in cfg:
        raise ValueError("config needs a field: p (and optional e) or q")
    p = int(cfg["p"])
    e = int(cfg.get("e", 1))
    if "q" in cfg and p ** e != int(cfg["q"]):
        raise ValueError(f"q = {cfg['q']} does not match p^e = {p}^{e}")
    if not is_prime_int(p):
        raise ValueError(f"characteristic {p} is not prime")
    if e < 1:
        raise ValueError("extension degree must be positive")
    q = p ** e

    for key in ("n", "ell", "b"):
        if key not in cfg:
            raise ValueError(f"config needs {key}")
    n, ell, b = int(cfg["n"]), int(cfg["ell"]), int(cfg["b"])
    if "form" not in cfg:
        raise ValueError("config needs a form")
    k = pr.make_field(p, e)
    form = geo.form_from_json(k, cfg["form"])
    if form.n != n:
        raise ValueError("form arity does not match n")
    m = form.m

    if not is_prime_int(ell):
        raise ValueError("ell must be prime")
    if (q - 1) % ell:
        raise ValueError(f"ell = {ell} does not divide q - 1 = {q - 1}")
    if m % ell:
        raise ValueError(f"ell = {ell} does not divide the degree m = {m}")
    if m % p == 0:
        raise ValueError(f"characteristic {p} divides the degree m = {m}")

    delta = cfg.get("delta", "auto")
    if delta in ("auto", None):
        delta = sv.choose_delta(n, b)
    delta = int(delta)

    dual = cfg.get("dual")
    if dual is not None:
        geo.form_from_json(k, dual)  # parse now so errors are config errors

    return {
        "p": p,
        "e": e,
        "q": q,
        "n": n,
        "ell": ell,
        "m": m,
        "b": b,
        "delta": delta,
        "delta_max": int(cfg.get("delta_max", delta)),
        "search_bound": int(cfg.get("search_bound", 4)),
        "budget": int(cfg.get("budget", DEFAULT_BUDGET)),
        "form": geo.form_to_json(form),
        "dual": dual,
    }


def build_instance(config: dict):
    """(k, form, params, sieving set) for a resolved config; the bad primes
    are rescanned up to delta_max and excluded."""
    k = pr.make_field(config["p"], config["e"])
    form = geo.form_from_json(k, config["form"])
    dual = config.get("dual")
    dual_spec = geo.form_from_json(k, dual) if dual else "auto"
    exc = sv.exceptional_primes_of(form, config["delta_max"],
                                   dual=dual_spec,
                                   search_bound=config["search_bound"])
    sset = sv.build_sieving_set(k, config["delta"], exc)
    params = sv.SieveParams(k=k, n=config["n"], ell=config["ell"], form=form,
                            b=config["b"], delta=config["delta"],
                            delta_max=config["delta_max"])
    return k, form, params, sset


# ---------------------------------------------------------------------------
# byte-stable serialization


def normalize(obj):
    """JSON-normal form: Fractions become exact integers or "num/den"
    strings, floats are rounded to 12 significant digits, tuples become
    lists.  normalize is idempotent, so parsing an emitted artifact gives
    back exactly the normalized report."""
    if isinstance(obj, Fraction):
        if obj.denominator == 1:
            return int(obj)
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, float):
        return float(f"{obj:.12g}")
    if isinstance(obj, int):
        return obj
    if isinstance(obj, (list, tuple)):
        return [normalize(v) for v in obj]
    if isinstance(obj, dict):
        return {str(key): normalize(value) for key, value in obj.items()}
    return str(obj)


def json_text(obj) -> str:
    return json.dumps(normalize(obj), sort_keys=True, indent=2) + "\n"


def cell_text(value) -> str:
    """One CSV cell: exact integers, 12-significant-digit magnitudes,
    lowercase booleans, exact fractions as num/den."""
    value = normalize(value)
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.12g}"
    if isinstance(value, list):
        return ";".join(cell_text(v) for v in value)
    return str(value)


def csv_text(columns, rows) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([cell_text(row.get(c)) for c in columns])
    return out.getvalue()


def write_artifact(out_dir: str, name: str, text: str) -> str:
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, name)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return path


WD_CSV_COLUMNS = ["q", "Delta", "pi", "ell", "chi_index", "w", "case",
                  "abs_S", "bound", "ratio", "pass"]

SIEVE_CSV_COLUMNS = ["q", "delta", "n", "ell", "m", "b", "A",
                     "trivial_bound", "M", "main_term", "ramified_term",
                     "unramified_term", "rhs", "primes", "argmin_alpha",
                     "inequality_pass", "count_within_box",
                     "psi_square_identity", "ramified_majorization",
                     "pair_symmetric", "general_all_pass"]


# ---------------------------------------------------------------------------
# the parallel sieve runner


def _chunk_job(spec):
    p, e, form_json, ell, b, prime_texts, start, stop = spec
    k = pr.make_field(p, e)
    form = geo.form_from_json(k, form_json)
    primes = tuple(pr.parse_poly(k, text) for text in prime_texts)
    return sv.accumulate_chunk(k, form, ell, b, primes, start, stop)


def parallel_accumulator(config: dict, params: sv.SieveParams,
                         sset: sv.SievingSet, workers: int = 1,
                         budget: Budget | None = None,
                         chunks: int = CHUNKS) -> dict:
    """The full-box accumulator via a fixed number of index chunks, merged
    in chunk order; the result is the same exact integers for any worker
    count (and identical to the single-pass accumulator)."""
    if budget is not None:
        budget.charge(params.box_size)
    size = params.box_size
    edges = [size * i // chunks for i in range(chunks + 1)]
    prime_texts = tuple(pr.format_poly(params.k, p) for p in sset.primes)
    base = (config["p"], config["e"], config["form"], params.ell, params.b,
            prime_texts)
    specs = [base + (lo, hi) for lo, hi in zip(edges, edges[1:]) if lo < hi]
    if workers <= 1:
        parts = [_chunk_job(spec) for spec in specs]
    else:
        method = ("fork" if "fork" in multiprocessing.get_all_start_methods()
                  else "spawn")
        with multiprocessing.get_context(method).Pool(workers) as pool:
            parts = pool.map(_chunk_job, specs)
    return sv.merge_accumulators(parts)


def run_sieve(config: dict, workers: int = 1,
              alpha_grid=(1, 2, 3, 4)) -> dict:
    """Both sieve inequalities on the configured instance; one box pass."""
    _, _, params, sset = build_instance(config)
    budget = Budget(config["budget"])
    acc = parallel_accumulator(config, params, sset, workers=workers,
                               budget=budget)
    report = sv.sieve_terms(params, sset, acc=acc)
    general = sv.sieve_inequality_general(params, sset,
                                          alpha_grid=alpha_grid, acc=acc)
    passed = (report["inequality_pass"] and report["count_within_box"]
              and report["psi_square_identity"]
              and report["ramified_majorization"]
              and report["pair_symmetric"] and general["all_pass"])
    return {
        "config": config,
        "sieve": report,
        "general": general,
        "excluded": [pr.format_poly(params.k, p) for p in sset.excluded],
        "pass": passed,
    }


def sieve_csv_row(result: dict) -> dict:
    row = dict(result["sieve"])
    row["argmin_alpha"] = result["general"]["argmin_alpha"]
    row["general_all_pass"] = result["general"]["all_pass"]
    return row
