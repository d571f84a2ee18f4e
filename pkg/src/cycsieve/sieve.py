"""The geometric sieve at desk scale: the box A = {deg x < b}, fiber counts
of the cyclic cover y^ell = F(x) at sieving primes, ramified sets, the three
sieve terms, both sieve-inequality formulations with the c_{i,j}(alpha)
expansion, parameter selection Delta(n, b) and the minimal admissible b, and
the brute-force count M_n(F; b) of points with a global ell-th root.

All terms are exact: counts are integers, normalized terms are Fractions,
and every inequality is checked as a comparison of rationals.  Global
solvability of y^ell = F(x) is decided by two independent routes per point
(membership in a precomputed set of ell-th powers, versus the factorization
criterion: every irreducible multiplicity divisible by ell and the leading
coefficient an ell-th power in F_q); a disagreement raises instead of
returning a number.

The single pass over the box is organized as a chunked accumulator
(accumulate_chunk / merge_accumulators over contiguous index ranges) so
callers can fan the enumeration out to workers and still merge to the same
exact integers in the same order.
"""

from dataclasses import dataclass
from fractions import Fraction

from . import geometry as geo
from . import polyring as pr
from .characters import char_sum_root_count, check_ell, residue_data
from .charsums import Budget
from .ffield import is_prime_int
from .identities import box


# ---------------------------------------------------------------------------
# parameters


@dataclass(frozen=True)
class SieveParams:
    """Validated sieve input: the cover y^ell = F over F_q[T], the box bound
    b, the sieving degree delta, and the scan bound for bad primes."""

    k: object
    n: int
    ell: int
    form: geo.MultiForm
    b: int
    delta: int
    delta_max: int = 0

    def __post_init__(self):
        k, form = self.k, self.form
        if self.n < 2:
            raise ValueError("need n >= 2 (the degree constraints on b are "
                             "unsatisfiable for n = 1)")
        if form.n != self.n:
            raise ValueError("form arity does not match n")
        if not form.terms:
            raise ValueError("the zero form has no cover to sieve")
        if not is_prime_int(self.ell):
            raise ValueError("ell must be prime")
        if form.m % self.ell or (k.size - 1) % self.ell:
            raise ValueError("need ell | gcd(m, q - 1)")
        if form.m % k.char == 0:
            raise ValueError("the characteristic must not divide m")
        check_ell(k, self.ell)
        if self.delta < 1:
            raise ValueError("delta must be positive")
        if not self.delta < self.b < 2 * self.delta:
            raise ValueError("need delta < b < 2*delta")
        if self.delta_max and self.delta_max < self.delta:
            raise ValueError("delta_max must cover the sieving degree")

    @property
    def q(self) -> int:
        return self.k.size

    @property
    def box_size(self) -> int:
        return self.q ** (self.b * (self.n + 1))


def choose_delta(n: int, b: int) -> int:
    """The sieving degree floor(n*b/(n+1)); n = 1 is rejected because
    delta < b < 2*delta can then never hold."""
    if n < 2:
        raise ValueError("need n >= 2")
    return n * b // (n + 1)


def min_b(n: int, q: int, p_exc_size: int, cap: int = 10000) -> int:
    """The least b whose delta = choose_delta(n, b) satisfies all the
    admissibility constraints: delta != 0; |P_exc| <= q^delta/(4*delta);
    4(b+1) <= q^(delta/2); and delta < b < 2*delta.  The root-free
    equivalents 4*delta*|P_exc| <= q^delta and (4(b+1))^2 <= q^delta are
    tested so everything stays in integers."""
    if n < 2:
        raise ValueError("need n >= 2")
    for b in range(1, cap + 1):
        delta = choose_delta(n, b)
        if delta == 0:
            continue
        qd = q ** delta
        if 4 * delta * p_exc_size > qd:
            continue
        if (4 * (b + 1)) ** 2 > qd:
            continue
        if not delta < b < 2 * delta:
            continue
        return b
    raise ArithmeticError(f"no admissible b below {cap}")


def verify_card_p(q: int, delta: int, p_exc_size: int) -> dict:
    """|P| >= q^delta / (2*delta) with |P| the count of monic irreducibles
    of degree delta minus the excluded primes (exact rationals)."""
    total = pr.count_irreducibles_formula(q, delta)
    count = total - p_exc_size
    required = Fraction(q ** delta, 2 * delta)
    return {
        "delta": delta,
        "count": count,
        "required": required,
        "pass": Fraction(count) >= required,
    }


def verify_prime_count(q: int, delta: int) -> dict:
    """|#{monic irreducible pi : deg pi = delta} - q^delta/delta| <=
    q^(delta/2)/delta + q^(delta/3), checked after scaling by delta against
    integer floors of the roots (a stricter test than the statement, so a
    pass is conclusive)."""
    count = pr.count_irreducibles_formula(q, delta)
    lhs = abs(count * delta - q ** delta)
    half = _integer_root(q ** delta, 2)
    third = _integer_root(q ** delta, 3)
    rhs_floor = half + delta * third
    return {
        "delta": delta,
        "count": count,
        "pass": lhs <= rhs_floor,
    }


def _integer_root(x: int, r: int) -> int:
    lo, hi = 0, 1
    while hi ** r <= x:
        hi *= 2
    while lo + 1 < hi:
        mid = (lo + hi) // 2
        if mid ** r <= x:
            lo = mid
        else:
            hi = mid
    return lo


# ---------------------------------------------------------------------------
# sieving set


@dataclass(frozen=True)
class SievingSet:
    """Monic irreducibles of degree exactly delta, bad primes excluded."""

    primes: tuple
    delta: int
    excluded: tuple

    def __len__(self):
        return len(self.primes)


def exceptional_primes_of(form: geo.MultiForm, delta_max: int,
                          dual: str = "auto", search_bound: int = 4) -> list:
    """The bad primes of the form up to degree delta_max, as polynomials."""
    report = geo.compute_exceptional_primes(form, delta_max, dual=dual,
                                            search_bound=search_bound)
    return [pr.parse_poly(form.k, text) for text in report["exceptional"]]


def build_sieving_set(k, delta: int, exceptional=()) -> SievingSet:
    excluded = {pr.monic(k, f)[1] for f in exceptional}
    primes = tuple(f for f in pr.irreducibles(k, delta) if f not in excluded)
    return SievingSet(primes=primes, delta=delta,
                      excluded=tuple(sorted(excluded)))


# ---------------------------------------------------------------------------
# fibers and ramification


def fiber_count(k, pi, ell: int, form: geo.MultiForm, x) -> int:
    """#{y in k_pi : y^ell = F(x) mod pi}, via the residue root table and,
    independently, via the character-sum expression; the two must agree."""
    data = residue_data(k, pi, ell)
    g = geo.eval_form_at_polys(form, x)
    by_table = data.root_count[data.index_of_poly(g)]
    by_chars = char_sum_root_count(k, g, pi, ell)
    if by_table != by_chars:
        raise ArithmeticError(
            f"fiber routes disagree at {x}: table {by_table}, "
            f"characters {by_chars}")
    return by_table


def psi_value(k, pi, ell: int, form: geo.MultiForm, x) -> int:
    """Psi = |fiber| - 1, the quantity the sieve terms are built from."""
    return fiber_count(k, pi, ell, form, x) - 1


def ramified_set(k, sset: SievingSet, form: geo.MultiForm, x) -> tuple:
    """The sieving primes dividing F(x) (all of them when F(x) = 0)."""
    g = geo.eval_form_at_polys(form, x)
    if not g:
        return tuple(sset.primes)
    return tuple(p for p in sset.primes if not pr.poly_mod(k, g, p))


# ---------------------------------------------------------------------------
# global solvability of y^ell = F(x) and the count M_n(F; b)


def _ell_th_power_set(k, ell: int, max_deg: int) -> set:
    """{y^ell : y in F_q[T], deg y <= max_deg} as a set of polynomials."""
    out = set()
    for i in range(k.size ** (max_deg + 1)):
        y = pr.poly_from_index(k, i, max_deg + 1)
        p = (k.one,)
        for _ in range(ell):
            p = pr.mul(k, p, y)
        out.add(p)
    return out


def _solvable_by_factoring(k, ell: int, g) -> bool:
    if not g:
        return True
    lc, factors = pr.factor(k, g)
    if any(e % ell for _, e in factors):
        return False
    return k.power(lc, (k.size - 1) // ell) == k.one


def _value_power_set(k, ell: int, form: geo.MultiForm, b: int) -> set:
    """Ell-th powers up to the largest degree F can reach on the box."""
    max_val_deg = form.deg_T() + form.m * (b - 1)
    return _ell_th_power_set(k, ell, max(max_val_deg, 0) // ell)


def _globally_solvable(k, ell: int, g, powers: set) -> bool:
    by_set = g in powers if g else True
    by_factor = _solvable_by_factoring(k, ell, g)
    if by_set != by_factor:
        raise ArithmeticError(
            f"solvability routes disagree at value {g}: "
            f"power-set {by_set}, factorization {by_factor}")
    return by_set


def brute_force_count(k, ell: int, form: geo.MultiForm, b: int,
                      budget: Budget | None = None) -> int:
    """M_n(F; b): the number of x in the box {deg x < b} such that
    y^ell = F(x) has a solution y in F_q[T], each point decided by the two
    independent solvability routes."""
    arity = form.n + 1
    if budget is not None:
        budget.charge(k.size ** (b * arity))
    powers = _value_power_set(k, ell, form, b)
    count = 0
    for x in box(k, b, arity):
        if _globally_solvable(k, ell, geo.eval_form_at_polys(form, x),
                              powers):
            count += 1
    return count


# ---------------------------------------------------------------------------
# the chunked box pass


def accumulate_chunk(k, form: geo.MultiForm, ell: int, b: int, primes,
                     start: int, stop: int,
                     budget: Budget | None = None) -> dict:
    """One pass over box indices [start, stop): every integer the sieve
    terms need, as exact partial sums.

    Returned counters (P = len(primes)):
      - ram_sum: #{(x, pi) : pi | F(x)}
      - psi_square_ok: Psi^2 = (ell-1) + (ell-2) Psi at every unramified pair
      - M: points with a globally solvable y^ell = F(x) (dual routes)
      - S: P*P nested lists, S[i1][i2][i][j] = sum over x unramified at both
        primes of fiber_1^i * fiber_2^j for i, j in {0, 1, 2}
      - sum_u2, sum_us, sum_s2: moments of (u, s) where u = #unramified
        primes at x and s = sum of Psi(ell-1-Psi) over them, so that
        I_alpha(x) = alpha*u + s for every alpha.
    """
    if budget is not None:
        budget.charge(stop - start)
    arity = form.n + 1
    P = len(primes)
    datas = [residue_data(k, p, ell) for p in primes]
    powers = _value_power_set(k, ell, form, b)

    ram_sum = 0
    psi_square_ok = True
    M = 0
    S = [[[[0] * 3 for _ in range(3)] for _ in range(P)] for _ in range(P)]
    sum_u2 = sum_us = sum_s2 = 0

    for idx in range(start, stop):
        x = tuple(pr.poly_from_index(k, c, b)
                  for c in _digits(idx, k.size ** b, arity))
        g = geo.eval_form_at_polys(form, x)
        if _globally_solvable(k, ell, g, powers):
            M += 1
        unram = []
        fibers = []
        u = 0
        s = 0
        for p, data in zip(primes, datas):
            fiber = data.root_count[data.index_of_poly(g)]
            is_unram = bool(pr.poly_mod(k, g, p)) if g else False
            unram.append(is_unram)
            fibers.append(fiber)
            if is_unram:
                psi = fiber - 1
                if psi * psi != (ell - 1) + (ell - 2) * psi:
                    psi_square_ok = False
                u += 1
                s += psi * (ell - 1 - psi)
            else:
                ram_sum += 1
        sum_u2 += u * u
        sum_us += u * s
        sum_s2 += s * s
        live = [i for i in range(P) if unram[i]]
        for i1 in live:
            f1 = fibers[i1]
            pow1 = (1, f1, f1 * f1)
            for i2 in live:
                f2 = fibers[i2]
                pow2 = (1, f2, f2 * f2)
                cell = S[i1][i2]
                for i in range(3):
                    row = cell[i]
                    a = pow1[i]
                    for j in range(3):
                        row[j] += a * pow2[j]
    return {
        "ram_sum": ram_sum,
        "psi_square_ok": psi_square_ok,
        "M": M,
        "S": S,
        "sum_u2": sum_u2,
        "sum_us": sum_us,
        "sum_s2": sum_s2,
    }


def _digits(idx: int, base: int, arity: int) -> tuple:
    out = []
    for _ in range(arity):
        out.append(idx % base)
        idx //= base
    return tuple(out)


def merge_accumulators(parts) -> dict:
    """Sum chunk accumulators (in the given order); all entries exact."""
    parts = list(parts)
    if not parts:
        raise ValueError("nothing to merge")
    total = parts[0]
    P = len(total["S"])
    for part in parts[1:]:
        if len(part["S"]) != P:
            raise ValueError("accumulators disagree on the sieving set size")
        total = {
            "ram_sum": total["ram_sum"] + part["ram_sum"],
            "psi_square_ok": total["psi_square_ok"] and part["psi_square_ok"],
            "M": total["M"] + part["M"],
            "S": [[[[total["S"][a][b2][i][j] + part["S"][a][b2][i][j]
                     for j in range(3)] for i in range(3)]
                   for b2 in range(P)] for a in range(P)],
            "sum_u2": total["sum_u2"] + part["sum_u2"],
            "sum_us": total["sum_us"] + part["sum_us"],
            "sum_s2": total["sum_s2"] + part["sum_s2"],
        }
    return total


def box_accumulator(params: SieveParams, sset: SievingSet,
                    budget: Budget | None = None) -> dict:
    """The full-box accumulator in a single chunk."""
    return accumulate_chunk(params.k, params.form, params.ell, params.b,
                            sset.primes, 0, params.box_size, budget=budget)


# ---------------------------------------------------------------------------
# sieve terms (the prime-degree cyclic-cover inequality)


def _pair_psi_sum(S, i1: int, i2: int) -> int:
    """Sum over x unramified at both primes of Psi_1 * Psi_2, from the
    moment table: (f1-1)(f2-1) = S11 - S10 - S01 + S00."""
    cell = S[i1][i2]
    return cell[1][1] - cell[1][0] - cell[0][1] + cell[0][0]


def sieve_terms(params: SieveParams, sset: SievingSet,
                budget: Budget | None = None, acc: dict | None = None) -> dict:
    """All terms of the prime-degree cyclic-cover sieve inequality, exactly:

        M <= (ell-1)^2 |A| / |P|  +  (2/|P|) sum_x |V_P^ram(x)|
             + max over distinct prime pairs |sum_x' Psi_1 Psi_2|

    with x' running over the box points unramified at both primes.  Also
    re-checks Psi^2 = (ell-1) + (ell-2) Psi at every unramified pair, the
    coarse majorization of the ramified count, and the symmetry of the pair
    sums under exchanging the primes."""
    if len(sset) < 2:
        raise ValueError("need at least two sieving primes for the pair max")
    k, form, ell = params.k, params.form, params.ell
    P = len(sset)
    A = params.box_size
    if acc is None:
        acc = box_accumulator(params, sset, budget=budget)

    pair_sums = {(i1, i2): _pair_psi_sum(acc["S"], i1, i2)
                 for i1 in range(P) for i2 in range(P) if i1 != i2}
    unram_max = max(abs(v) for v in pair_sums.values())

    main = Fraction((ell - 1) ** 2 * A, P)
    ram_term = Fraction(2 * acc["ram_sum"], P)
    rhs = main + ram_term + unram_max

    ram_bound = (A * (form.deg_T() + form.m * params.b)
                 + P * form.m * params.q ** (params.b * params.n))

    pair_symmetric = all(pair_sums[(i, j)] == pair_sums[(j, i)]
                         for (i, j) in pair_sums)

    return {
        "q": params.q,
        "n": params.n,
        "ell": ell,
        "m": form.m,
        "b": params.b,
        "delta": params.delta,
        "primes": [pr.format_poly(k, p) for p in sset.primes],
        "A": A,
        "trivial_bound": params.q ** (params.b * (params.n + 1)),
        "M": acc["M"],
        "main_term": main,
        "ramified_term": ram_term,
        "unramified_term": unram_max,
        "rhs": rhs,
        "inequality_pass": Fraction(acc["M"]) <= rhs,
        "count_within_box": acc["M"] <= A,
        "psi_square_identity": acc["psi_square_ok"],
        "ramified_majorization": acc["ram_sum"] <= ram_bound,
        "pair_symmetric": pair_symmetric,
    }


# ---------------------------------------------------------------------------
# the general inequality with the c_{i,j}(alpha) expansion


def c_coefficients(alpha, ell: int) -> dict:
    """The coefficient table of the expansion of I_alpha(x)^2 in fiber-size
    powers, for a cover of degree ell: the per-prime contribution of an
    unramified prime with fiber size N is (alpha-ell) + (1+ell)N - N^2, and
    c_{i,j} is the coefficient of N_1^i N_2^j in the product of two such."""
    a = alpha - ell
    d = 1 + ell
    return {
        (0, 0): a * a,
        (1, 0): a * d,
        (0, 1): a * d,
        (1, 1): d * d,
        (2, 0): -a,
        (0, 2): -a,
        (2, 1): -d,
        (1, 2): -d,
        (2, 2): 1,
    }


def sieve_inequality_general(params: SieveParams, sset: SievingSet,
                             alpha_grid=(1, 2, 3, 4),
                             budget: Budget | None = None,
                             acc: dict | None = None) -> dict:
    """For each alpha >= 1 in the grid: sum_x I_alpha(x)^2 from the (u, s)
    moments; the same integer recomputed through the c_{i,j}(alpha)
    expansion over all ordered prime pairs (exact equality reported); and
    both right-hand sides of the general sieve inequality — the direct one
    with sum_x I_alpha^2 and the dominating one with per-pair absolute
    values — checked against M."""
    for alpha in alpha_grid:
        if alpha < 1:
            raise ValueError("alpha must be at least 1")
    P = len(sset)
    if P < 1:
        raise ValueError("empty sieving set")
    if acc is None:
        acc = box_accumulator(params, sset, budget=budget)
    ell = params.ell
    M, ram_sum = acc["M"], acc["ram_sum"]

    rows = []
    for alpha in alpha_grid:
        sum_I2 = (alpha * alpha * acc["sum_u2"] + 2 * alpha * acc["sum_us"]
                  + acc["sum_s2"])
        coeffs = c_coefficients(alpha, ell)
        expansion = 0
        abs_pair_total = 0
        for i1 in range(P):
            for i2 in range(P):
                cell = acc["S"][i1][i2]
                inner = sum(c * cell[i][j] for (i, j), c in coeffs.items())
                expansion += inner
                abs_pair_total += abs(inner)
        rhs1 = Fraction(2 * ram_sum, P) + Fraction(sum_I2, P * P)
        rhs2 = Fraction(2 * ram_sum, P) + Fraction(abs_pair_total, P * P)
        rows.append({
            "alpha": alpha,
            "sum_I2": sum_I2,
            "c_expansion": expansion,
            "expansion_equal": sum_I2 == expansion,
            "rhs_direct": rhs1,
            "rhs_absolute": rhs2,
            "rhs_dominates": rhs1 <= rhs2,
            "pass_direct": Fraction(M) <= rhs1,
            "pass_absolute": Fraction(M) <= rhs2,
        })

    argmin = min(rows, key=lambda r: r["sum_I2"])["alpha"]
    return {
        "M": M,
        "ram_sum": ram_sum,
        "rows": rows,
        "argmin_alpha": argmin,
        "all_pass": all(r["pass_direct"] and r["pass_absolute"]
                        and r["expansion_equal"] and r["rhs_dominates"]
                        for r in rows),
    }
