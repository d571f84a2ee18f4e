"""Bit-exact verification of the character identities that convert incomplete
sieve sums over boxes {deg x < b} into complete character sums modulo primes.

Each verifier returns a report dict {"id", "params", "lhs", "rhs", "equal",
...extras}.  Both sides are computed by genuinely different routes (direct
enumeration versus character machinery), all accumulation is exact (integers
and cyclotomic-integer values), and q-power prefactors with negative exponent
are applied as exact divisions whose divisibility is asserted — a division
failure raises instead of rounding, because it signals an arithmetic or
convention bug, not a numerical issue.

The verified identities:

- root-count: #{y mod pi : y^ell = a} equals the sum of chi(a) over all
  characters of order dividing ell, for every residue a.
- gauss-magnitude: tau(chi) * conj(tau(chi)) == q^deg(pi) exactly for every
  non-principal chi (the Riemann hypothesis for Gauss sums).
- count-mod: the box-and-congruence count equals its additive-character
  expansion with modulus u (u may be composite and non-monic).
- completion: sum over a box of chi_pi(G(x)) chi_pi'(G(x)) equals the dual
  short sum of products S_G(pibar' x, chi_pi) S_G(pibar x, chi_pi') scaled by
  an exact q-power, where pibar, pibar' are the CRT inverses.
- unramified-expansion: the two-prime sieve term with fiber counts
  (|fiber| - 1)(|fiber| - 1) restricted to F(x) not divisible by pi1*pi2
  equals the complete-sum expansion over non-principal character pairs;
  additionally the discarded F(x) == 0 portion is verified to vanish and the
  pointwise fiber identity |fiber| - 1 = sum of non-principal chi(F(x)) is
  checked at every point of the box.
"""

import itertools

from . import geometry as geo
from . import polyring as pr
from .characters import (
    MultChar,
    count_ell_roots,
    char_sum_root_count,
    gauss_sum,
    psi_exponent,
    residue_data,
)
from .charsums import Budget, CharSumContext
from .cyclotomic import cyc_ring


def box(k, bound: int, arity: int):
    """All tuples in O_K^arity with every coordinate of degree < bound,
    coordinates enumerated by ascending index (deterministic order)."""
    coords = [pr.poly_from_index(k, i, bound) for i in range(k.size ** max(bound, 0))]
    return itertools.product(coords, repeat=arity)


def dot(k, xs, ys):
    total = ()
    for x, y in zip(xs, ys):
        total = pr.add(k, total, pr.mul(k, x, y))
    return total


def _require_distinct_primes(k, pi1, pi2):
    if pr.degree(pi1) < 1 or pr.degree(pi2) < 1:
        raise ValueError("moduli must be non-constant primes")
    if pr.monic(k, pi1)[1] == pr.monic(k, pi2)[1]:
        raise ValueError("the two primes must be distinct")


# ---------------------------------------------------------------------------
# root counts and Gauss magnitudes


def verify_root_count(k, pi, ell: int) -> dict:
    """For every residue a mod pi: #{y : y^ell = a} (direct enumeration)
    versus the sum of chi(a) over all characters of order dividing ell."""
    Q = k.size ** pr.degree(pi)
    d = pr.degree(pi)
    lhs = []
    rhs = []
    for idx in range(Q):
        a = pr.poly_from_index(k, idx, d)
        lhs.append(count_ell_roots(k, a, pi, ell))
        rhs.append(char_sum_root_count(k, a, pi, ell))
    return {
        "id": "root-count",
        "params": {"q": k.size, "pi": pr.format_poly(k, pi), "ell": ell},
        "lhs": lhs,
        "rhs": rhs,
        "equal": lhs == rhs,
    }


def verify_gauss_magnitude(k, pi, ell: int) -> dict:
    """tau(chi) * conj(tau(chi)) == q^deg(pi), exactly, for every
    non-principal character modulo pi of order dividing ell."""
    data = residue_data(k, pi, ell)
    ring = data.ring
    Q = k.size ** pr.degree(pi)
    expect = ring.from_int(Q)
    lhs = []
    for index in range(1, ell):
        tau = gauss_sum(MultChar(data, index))
        lhs.append(ring.mul(tau, ring.conj(tau)))
    return {
        "id": "gauss-magnitude",
        "params": {"q": k.size, "pi": pr.format_poly(k, pi), "ell": ell},
        "lhs": [ring.as_int(v) for v in lhs],
        "rhs": [Q] * (ell - 1),
        "equal": all(v == expect for v in lhs),
    }


# ---------------------------------------------------------------------------
# congruence detection in a box


def verify_count_mod(k, u, a, b: int) -> dict:
    """#{x in O_K^(n+1) : deg x < b, x == a mod u} counted directly, against
    q^((n+1)(b - deg u)) * sum over {deg x < deg u - b} of psi(-x.a/u).

    The modulus u may be composite and non-monic; needs 0 < b < deg u."""
    d = pr.degree(u)
    if not 0 < b < d:
        raise ValueError("need 0 < b < deg u")
    arity = len(a)

    lhs = 0
    for xs in box(k, b, arity):
        if all(not pr.poly_mod(k, pr.sub(k, x, ai), u) for x, ai in zip(xs, a)):
            lhs += 1

    # zeta_2 = -1, so the ambient ring is plain Z[zeta_p]
    ring = cyc_ring(k.char, 2)
    counts: dict = {}
    for xs in box(k, d - b, arity):
        e = psi_exponent(k, pr.neg(k, dot(k, xs, a)), u)
        key = (e, 0)
        counts[key] = counts.get(key, 0) + 1
    total = ring.from_exponent_counts(counts)
    quotient = ring.div_int(total, k.size ** (arity * (d - b)))
    rhs = ring.as_int(quotient)
    if rhs is None:
        raise ArithmeticError("additive-character side is not a rational integer")
    return {
        "id": "count-mod",
        "params": {
            "q": k.size,
            "u": pr.format_poly(k, u),
            "a": [pr.format_poly(k, ai) for ai in a],
            "b": b,
        },
        "lhs": lhs,
        "rhs": rhs,
        "equal": lhs == rhs,
    }


# ---------------------------------------------------------------------------
# completion of a two-prime incomplete sum


def _cached_char_sum(ctx, cache, w, chi_index):
    key = (w, chi_index)
    got = cache.get(key)
    if got is None:
        got = ctx.char_sum(w, chi_index)
        cache[key] = got
    return got


def verify_completion(k, pi, pi2, ell: int, chi_index: int, chi2_index: int,
                      form: geo.MultiForm, b: int,
                      budget: Budget | None = None) -> dict:
    """Sum over {deg x < b} of chi_pi(G(x)) chi_pi'(G(x)) against
    q^((n+1)(b - deg(pi pi'))) * sum over the complementary box of
    S_G(pibar' x, chi_pi) S_G(pibar x, chi_pi'), all exact."""
    _require_distinct_primes(k, pi, pi2)
    if not (0 < chi_index < ell and 0 < chi2_index < ell):
        raise ValueError("both characters must be non-principal")
    D = pr.degree(pi) + pr.degree(pi2)
    if not 0 < b < D:
        raise ValueError("need 0 < b < deg(pi * pi2)")
    arity = form.n + 1

    data1 = residue_data(k, pi, ell)
    data2 = residue_data(k, pi2, ell)
    chi1 = MultChar(data1, chi_index)
    chi2 = MultChar(data2, chi2_index)
    ring = data1.ring

    counts: dict = {}
    for xs in box(k, b, arity):
        v = geo.eval_form_at_polys(form, xs)
        e1 = chi1.exponent_at(data1.index_of_poly(v))
        if e1 is None:
            continue
        e2 = chi2.exponent_at(data2.index_of_poly(v))
        if e2 is None:
            continue
        key = (0, (e1 + e2) % ell)
        counts[key] = counts.get(key, 0) + 1
    lhs = ring.from_exponent_counts(counts)

    # pibar with pi * pibar == 1 (mod pi2), and the other way around
    pibar = pr.invert_mod(k, pi, pi2)
    pibar2 = pr.invert_mod(k, pi2, pi)
    ctx1 = CharSumContext(k, pi, ell, form, budget=budget)
    ctx2 = CharSumContext(k, pi2, ell, form, budget=budget)
    cache1: dict = {}
    cache2: dict = {}
    total = ring.zero
    for xs in box(k, D - b, arity):
        w1 = tuple(ctx1.data.reduce(pr.mul(k, pibar2, x)) for x in xs)
        w2 = tuple(ctx2.data.reduce(pr.mul(k, pibar, x)) for x in xs)
        s1 = _cached_char_sum(ctx1, cache1, w1, chi_index)
        s2 = _cached_char_sum(ctx2, cache2, w2, chi2_index)
        total = ring.add(total, ring.mul(s1, s2))
    rhs = ring.div_int(total, k.size ** (arity * (D - b)))

    return {
        "id": "completion",
        "params": {
            "q": k.size,
            "ell": ell,
            "pi": pr.format_poly(k, pi),
            "pi2": pr.format_poly(k, pi2),
            "chi_index": chi_index,
            "chi2_index": chi2_index,
            "b": b,
        },
        "lhs": lhs,
        "rhs": rhs,
        "equal": lhs == rhs,
    }


# ---------------------------------------------------------------------------
# the full unramified sieve term


def verify_unramified_expansion(k, pi1, pi2, ell: int, form: geo.MultiForm,
                                b: int, budget: Budget | None = None) -> dict:
    """The two-prime unramified sieve term, three ways.

    Route A (integers): sum over {deg x < b, F(x) not divisible by pi1*pi2}
    of (#fiber_1 - 1)(#fiber_2 - 1) with fibers counted by enumeration.

    Route B (characters): q^((n+1)(b - deg(pi1 pi2))) times the sum over
    non-principal pairs (chi_1, chi_2) and the complementary box of
    S_F(pibar_2 x, chi_1) S_F(pibar_1 x, chi_2), divided exactly.

    Extra checks: the discarded
    {F(x) == 0 mod pi1*pi2} portion of the character-product sum vanishes,
    and the pointwise identity #fiber - 1 = sum of non-principal chi(F(x))
    holds at every x in the box.
    """
    _require_distinct_primes(k, pi1, pi2)
    D = pr.degree(pi1) + pr.degree(pi2)
    if not 0 < b < D:
        raise ValueError("need 0 < b < deg(pi1 * pi2)")
    arity = form.n + 1

    data1 = residue_data(k, pi1, ell)
    data2 = residue_data(k, pi2, ell)
    ring = data1.ring
    chis1 = [MultChar(data1, i) for i in range(1, ell)]
    chis2 = [MultChar(data2, i) for i in range(1, ell)]

    def nonprincipal_sum(data, chis, idx):
        total = ring.zero
        for chi in chis:
            e = chi.exponent_at(idx)
            if e is not None:
                total = ring.add(total, ring.monomial(0, e))
        return total

    lhs = 0
    zero_portion = ring.zero
    pointwise_ok = True
    for xs in box(k, b, arity):
        v = geo.eval_form_at_polys(form, xs)
        idx1 = data1.index_of_poly(v)
        idx2 = data2.index_of_poly(v)
        n1 = data1.root_count[idx1]
        n2 = data2.root_count[idx2]
        s1 = nonprincipal_sum(data1, chis1, idx1)
        s2 = nonprincipal_sum(data2, chis2, idx2)
        if ring.as_int(s1) != n1 - 1 or ring.as_int(s2) != n2 - 1:
            pointwise_ok = False
        divisible1 = not pr.poly_mod(k, v, pi1)
        divisible2 = not pr.poly_mod(k, v, pi2)
        if divisible1 and divisible2:
            zero_portion = ring.add(zero_portion, ring.mul(s1, s2))
        else:
            lhs += (n1 - 1) * (n2 - 1)

    pibar1 = pr.invert_mod(k, pi1, pi2)
    pibar2 = pr.invert_mod(k, pi2, pi1)
    ctx1 = CharSumContext(k, pi1, ell, form, budget=budget)
    ctx2 = CharSumContext(k, pi2, ell, form, budget=budget)
    total = ring.zero
    cache1: dict = {}
    cache2: dict = {}
    for i1 in range(1, ell):
        for i2 in range(1, ell):
            for xs in box(k, D - b, arity):
                w1 = tuple(ctx1.data.reduce(pr.mul(k, pibar2, x)) for x in xs)
                w2 = tuple(ctx2.data.reduce(pr.mul(k, pibar1, x)) for x in xs)
                s1 = _cached_char_sum(ctx1, cache1, w1, i1)
                s2 = _cached_char_sum(ctx2, cache2, w2, i2)
                total = ring.add(total, ring.mul(s1, s2))
    quotient = ring.div_int(total, k.size ** (arity * (D - b)))
    rhs = ring.as_int(quotient)
    if rhs is None:
        raise ArithmeticError("character side is not a rational integer")

    return {
        "id": "unramified-expansion",
        "params": {
            "q": k.size,
            "ell": ell,
            "pi1": pr.format_poly(k, pi1),
            "pi2": pr.format_poly(k, pi2),
            "b": b,
            "m": form.m,
            "n": form.n,
        },
        "lhs": lhs,
        "rhs": rhs,
        "equal": lhs == rhs,
        "zero_portion_vanishes": ring.is_zero(zero_portion),
        "pointwise_fiber_identity": pointwise_ok,
    }
