"""Mixed character sums over residue fields and their bound audits.

The central object is

    S_G(w, chi) = sum over a in k_pi^(n+1) of chi(G(a)) * psi_infty(-w.a / pi)

for a form G reduced mod a monic prime pi, a multiplicative character chi of
order dividing ell, and a covector w in k_pi^(n+1).  Values are exact
elements of Z[zeta_p, zeta_ell]: the kernel accumulates integer exponent
counters over index tables and canonicalizes once per sum.

On top of the kernel:
  * the square-root cancellation audit: every |S_G(w, chi)| is compared with
    the proved bound for its case -- w = 0 ("i"), w on the dual variety
    ("ii"), w off the dual variety ("iii"; here the normalized ratio
    |S| / q^((n+1) Delta / 2) is also logged, since no explicit constant is
    asserted for this case),
  * the slicing identity (S_G(0, chi) decomposed along first-nonzero-
    coordinate strata) with the per-slice multiplicative-sum bound
    (d-1) * |field|^(r/2) for Deligne slices,
  * the Gauss-sum completion of S_G(w, chi) for w != 0, exact on both
    sides, with the per-beta additive-sum bound (d-1)^r * |field|^(r/2).

Every loop that runs over a full k_pi^(n+1) charges an evaluation budget, so
callers can refuse oversized requests up front.
"""

from __future__ import annotations

import itertools

from . import geometry as geo
from . import polyring as pr
from .characters import MultChar, gauss_sum, residue_data
from .cyclotomic import CycRing
from .ffield import FieldTables

_TABLES_CACHE: dict = {}


def field_tables(field) -> FieldTables:
    got = _TABLES_CACHE.get(field)
    if got is None:
        got = FieldTables(field)
        _TABLES_CACHE[field] = got
    return got


# ---------------------------------------------------------------------------
# evaluation budget


class BudgetExceeded(RuntimeError):
    """Raised before starting work that would overrun the evaluation budget."""

    def __init__(self, needed: int, limit: int):
        super().__init__(
            f"evaluation budget exceeded: need >= {needed} innermost "
            f"evaluations, limit is {limit}")
        self.needed = needed
        self.limit = limit


class Budget:
    """Counts innermost evaluations; charge() raises before overrunning."""

    def __init__(self, limit: int | None = None):
        if limit is not None and limit < 0:
            raise ValueError("budget limit must be nonnegative")
        self.limit = limit
        self.spent = 0

    def charge(self, n: int):
        if self.limit is not None and self.spent + n > self.limit:
            raise BudgetExceeded(self.spent + n, self.limit)
        self.spent += n


# ---------------------------------------------------------------------------
# the kernel


class CharSumContext:
    """Per-(pi, ell, form) tables for bulk evaluation of S_G(w, chi).

    G is the reduction of the given form mod pi; monomials whose coefficient
    vanished are simply absent (the sum is still over the stated form's
    reduction, whatever its shape).
    """

    def __init__(self, k, pi, ell: int, form: geo.MultiForm,
                 budget: Budget | None = None):
        if form.k != k:
            raise ValueError("form is defined over a different field")
        self.k = k
        self.pi = pi
        self.ell = ell
        self.form = form
        self.nvars = form.n + 1
        self.m = form.m
        self.budget = budget
        self.data = residue_data(k, pi, ell)
        self.kpi = self.data.kpi
        self.ring: CycRing = self.data.ring
        self.tables = field_tables(self.kpi)
        self.Q = self.kpi.size
        self.idx_zero = self.tables.index[self.kpi.zero]
        terms = {}
        for exps, coeff in form.terms.items():
            r = self.data.reduce(coeff)
            if not self.kpi.is_zero(r):
                terms[exps] = r
        self.reduced_terms = terms
        self._monomials = [
            (self.tables.index[c], exps) for exps, c in terms.items()
        ]
        self._coords = None
        self._g_vals = None

    # -- shared precomputation ------------------------------------------------

    def coords(self):
        """All of k_pi^(n+1) as tuples of element indices, fixed order."""
        if self._coords is None:
            self._coords = list(
                itertools.product(range(self.Q), repeat=self.nvars))
        return self._coords

    def g_values(self):
        """G(a) as an element index, aligned with coords()."""
        if self._g_vals is None:
            if self.budget is not None:
                self.budget.charge(self.Q ** self.nvars)
            Q, mul, add = self.Q, self.tables.mul, self.tables.add
            maxe = max((max(exps) for _, exps in self._monomials), default=0)
            idx_one = self.tables.index[self.kpi.one]
            powt = []
            for x in range(Q):
                row = [idx_one]
                for _ in range(maxe):
                    row.append(mul[row[-1] * Q + x])
                powt.append(row)
            vals = []
            for a in self.coords():
                acc = self.idx_zero
                for cidx, exps in self._monomials:
                    t = cidx
                    for i, e in enumerate(exps):
                        if e:
                            t = mul[t * Q + powt[a[i]][e]]
                    acc = add[acc * Q + t]
                vals.append(acc)
            self._g_vals = vals
        return self._g_vals

    def chi_exponents(self, chi_index: int):
        """Per residue index: the zeta_ell exponent of chi_index at that
        residue, or None where the character vanishes."""
        chi = MultChar(self.data, chi_index)
        return [chi.exponent_at(r) for r in range(self.Q)]

    def _w_indices(self, w):
        if len(w) != self.nvars:
            raise ValueError(
                f"w needs {self.nvars} coordinates, got {len(w)}")
        return [self.tables.index[x] for x in w]

    # -- sums -------------------------------------------------------------

    def char_sum(self, w, chi_index: int):
        """S_G(w, chi_index) as an exact cyclotomic value."""
        widx = self._w_indices(w)
        if self.budget is not None:
            self.budget.charge(self.Q ** self.nvars)
        Q, mul, add = self.Q, self.tables.mul, self.tables.add
        mw = [self.tables.neg[i] for i in widx]
        psi = self.data.psi_exp
        jtab = self.chi_exponents(chi_index)
        counts: dict = {}
        if all(i == self.idx_zero for i in mw):
            for gv in self.g_values():
                j = jtab[gv]
                if j is None:
                    continue
                key = (0, j)
                counts[key] = counts.get(key, 0) + 1
        else:
            live = [i for i in range(self.nvars) if mw[i] != self.idx_zero]
            for a, gv in zip(self.coords(), self.g_values()):
                j = jtab[gv]
                if j is None:
                    continue
                dot = self.idx_zero
                for i in live:
                    dot = add[dot * Q + mul[mw[i] * Q + a[i]]]
                key = (psi[dot], j)
                counts[key] = counts.get(key, 0) + 1
        return self.ring.from_exponent_counts(counts)

    def char_sum_bruteforce(self, w, chi_index: int):
        """Independent slow route: evaluate chi and psi_infty term by term
        through the generic field/character code (no index tables)."""
        widx = self._w_indices(w)
        kpi, ring = self.kpi, self.ring
        chi = MultChar(self.data, chi_index)
        total = ring.zero
        for a in itertools.product(kpi.elements(), repeat=self.nvars):
            g = geo.eval_terms(kpi, self.reduced_terms, a)
            e = chi.exponent_at(kpi.index(g))
            if e is None:
                continue
            dot = kpi.zero
            for wi, ai in zip(w, a):
                dot = kpi.add(dot, kpi.mul(wi, ai))
            pe = self.data.psi_exp[kpi.index(kpi.neg(dot))]
            total = ring.add(total, ring.monomial(pe, e))
        return total

    def trivial_bound(self) -> int:
        return self.Q ** self.nvars


def mixed_char_sum(k, pi, ell: int, form: geo.MultiForm, w, chi_index: int,
                   budget: Budget | None = None):
    """One-shot S_G(w, chi); w is a tuple of k_pi elements."""
    return CharSumContext(k, pi, ell, form, budget=budget).char_sum(w, chi_index)


# ---------------------------------------------------------------------------
# square-root cancellation audit


def wd_case_bounds(q: int, delta: int, n: int, m: int):
    """(case-i bound, case-ii bound, normalizer for case iii) as floats."""
    Q = float(q**delta)
    half_codim = Q ** ((n + 2) / 2.0)
    bound_i = n * (m - 1) * half_codim + Q
    bound_ii = (m - 1) ** (n + 1) * half_codim
    normalizer_iii = Q ** ((n + 1) / 2.0)
    return bound_i, bound_ii, normalizer_iii


def wd_classify(form: geo.MultiForm, pi, w, dual="auto",
                search_bound: int = 1) -> str:
    """Case of w: "i" (w = 0), "ii" (w on the dual variety), "iii" (w off
    it), or "unknown" (the dual route could not decide)."""
    kpi = pr.residue_field(form.k, pi)
    if all(kpi.is_zero(x) for x in w):
        return "i"
    member = geo.dual_membership(form, pi, w, dual=dual,
                                 search_bound=search_bound)
    if member is True:
        return "ii"
    if member is False:
        return "iii"
    return "unknown"


def estimate_wd_audit_cost(q: int, delta: int, n: int, num_chis: int) -> int:
    """Innermost evaluations for a full audit: one char sum per (w, chi)."""
    Q = q**delta
    return num_chis * Q ** (2 * (n + 1))


def wd_audit(k, pi, ell: int, form: geo.MultiForm, chi_indices=None,
             dual="auto", ws=None, budget: Budget | None = None,
             tol: float = 1e-9) -> dict:
    """Audit |S_G(w, chi)| against the per-case bounds.

    Defaults: every non-principal chi of order dividing ell and every
    w in k_pi^(n+1).  Returns {"rows": [...], "summary": {...}}; each row
    carries q, Delta, pi, ell, chi_index, w, case, abs_S, bound, ratio,
    pass.  For case "iii" (and "unknown") the ratio column is
    |S| / q^((n+1) Delta / 2); for cases "i"/"ii" it is |S| / bound.
    """
    ctx = CharSumContext(k, pi, ell, form, budget=budget)
    kpi, ring = ctx.kpi, ctx.ring
    n, m = form.n, form.m
    delta = pr.degree(pi)
    bound_i, bound_ii, norm_iii = wd_case_bounds(k.size, delta, n, m)

    # membership test for w != 0, precomputed once
    if dual in ("auto", "quadric") and m == 2:
        A = geo.quadric_matrix_poly(form)
        if kpi.is_zero(kpi.reduce_poly(geo.poly_mat_det(k, A))):
            raise ValueError(
                "quadric degenerates mod pi (exceptional prime); "
                "audit cases are undefined")
        _, dual_terms, _ = geo.reduce_form(geo.quadric_dual_form(form), pi)

        def classify(w):
            return "ii" if kpi.is_zero(geo.eval_terms(kpi, dual_terms, w)) \
                else "iii"
    elif isinstance(dual, geo.MultiForm):
        _, dual_terms, _ = geo.reduce_form(dual, pi)
        if not dual_terms:
            raise ValueError("supplied dual form vanishes mod pi")

        def classify(w):
            return "ii" if kpi.is_zero(geo.eval_terms(kpi, dual_terms, w)) \
                else "iii"
    else:

        def classify(w):
            return wd_classify(form, pi, w, dual=dual)

    if chi_indices is None:
        chi_indices = range(1, ell)
    if ws is None:
        ws = [tuple(kpi.from_index(i) for i in a)
              for a in itertools.product(range(ctx.Q), repeat=ctx.nvars)]

    rows = []
    cases = {"i": 0, "ii": 0, "iii": 0, "unknown": 0}
    max_ratio_iii = None
    all_pass = True
    pi_text = pr.format_poly(k, pi)
    for chi_index in chi_indices:
        if not 0 < chi_index < ell:
            raise ValueError("audit characters must be non-principal")
        for w in ws:
            S = ctx.char_sum(w, chi_index)
            abs_s = ring.abs_embed(S)
            if all(kpi.is_zero(x) for x in w):
                case = "i"
            else:
                case = classify(w)
            cases[case] += 1
            if case == "i":
                bound, ratio = bound_i, abs_s / bound_i
            elif case == "ii":
                bound, ratio = bound_ii, abs_s / bound_ii
            else:
                bound, ratio = bound_ii, abs_s / norm_iii
                if max_ratio_iii is None or ratio > max_ratio_iii:
                    max_ratio_iii = ratio
            ok = abs_s <= bound * (1 + tol)
            all_pass = all_pass and ok
            rows.append({
                "q": k.size,
                "Delta": delta,
                "pi": pi_text,
                "ell": ell,
                "chi_index": chi_index,
                "w": format_covector(kpi, w),
                "case": case,
                "abs_S": abs_s,
                "bound": bound,
                "ratio": ratio,
                "pass": ok,
            })
    return {
        "rows": rows,
        "summary": {
            "rows": len(rows),
            "cases": cases,
            "all_pass": all_pass,
            "max_ratio_iii": max_ratio_iii,
            "trivial_bound": ctx.trivial_bound(),
        },
    }


def format_covector(kpi, w) -> str:
    """Canonical lifts of the coordinates, semicolon-joined."""
    k = kpi.base
    return ";".join(pr.format_poly(k, pr.normalize(k, x)) for x in w)


# ---------------------------------------------------------------------------
# slicing identity and the per-slice multiplicative bound


def slicing_identity(k, pi, ell: int, form: geo.MultiForm, chi_index: int,
                     budget: Budget | None = None,
                     search_bound: int = 2) -> dict:
    """S_G(0, chi) = sum_j [sum_{u != 0} chi(u)^m] * sum_b chi(g_j(b)).

    Stratify k_pi^(n+1) by the first nonzero coordinate j; on that stratum
    factor out chi(a_j)^m, leaving the dehomogenized slice g_j of
    G_{ {j..n} } at X_j = 1 in the variables j+1..n.  Both routes are exact
    cyclotomic values; "equal" compares them bit for bit.
    """
    ctx = CharSumContext(k, pi, ell, form, budget=budget)
    kpi, ring = ctx.kpi, ctx.ring
    nvars = ctx.nvars
    chi = MultChar(ctx.data, chi_index)

    lhs = ctx.char_sum((kpi.zero,) * nvars, chi_index)

    # sum over units of chi(u)^m
    unit_counts: dict = {}
    for r in range(1, ctx.Q):
        e = chi.exponent_at(r)
        key = (0, (e * form.m) % ell)
        unit_counts[key] = unit_counts.get(key, 0) + 1
    unit_factor = ring.from_exponent_counts(unit_counts)

    rhs = ring.zero
    slices = []
    for j in range(nvars):
        S_j = set(range(j, nvars))
        g, checks = geo.slice_and_check(kpi, ctx.reduced_terms, nvars,
                                        form.m, S_j, j,
                                        search_bound=search_bound)
        r_vars = nvars - 1 - j
        counts: dict = {}
        total_points = 0
        for b in itertools.product(kpi.elements(), repeat=r_vars):
            total_points += 1
            e = chi.exponent_at(kpi.index(geo.eval_terms(kpi, g, b)))
            if e is not None:
                key = (0, e)
                counts[key] = counts.get(key, 0) + 1
        if budget is not None:
            budget.charge(total_points)
        affine_sum = ring.from_exponent_counts(counts)
        slices.append({"j": j, "r": r_vars, "sum": affine_sum,
                       "checks": checks})
        rhs = ring.add(rhs, ring.mul(unit_factor, affine_sum))
    # the a = 0 point contributes chi(G(0)) = chi(0) exactly
    zero_term = ring.zero if not chi.principal else ring.one
    rhs = ring.add(rhs, zero_term)

    return {
        "id": "slicing",
        "params": {
            "q": k.size, "pi": pr.format_poly(k, pi), "ell": ell,
            "chi_index": chi_index, "n": form.n, "m": form.m,
        },
        "lhs": lhs,
        "rhs": rhs,
        "equal": lhs == rhs,
        "unit_factor": unit_factor,
        "slices": slices,
    }


def katz_slice_audit(k, pi, ell: int, form: geo.MultiForm, chi_index: int,
                     budget: Budget | None = None, tol: float = 1e-9,
                     search_bound: int = 2) -> dict:
    """Per-slice audit: |sum_b chi(g_j(b))| <= (m - 1) * Q^(r/2) whenever the
    slice is a certified Deligne polynomial (degree preserved, coprime to the
    characteristic, smooth top form); otherwise the row is marked
    not-applicable instead of pass/fail.  Also reports whether the slicing
    identity held exactly.
    """
    if not 0 < chi_index < ell:
        raise ValueError("the slice audit needs a non-principal character")
    res = slicing_identity(k, pi, ell, form, chi_index, budget=budget,
                           search_bound=search_bound)
    ring = residue_data(k, pi, ell).ring
    Q = k.size ** pr.degree(pi)
    rows = []
    all_pass = True
    for item in res["slices"]:
        checks = item["checks"]
        top_smooth = checks["top_form_smooth"]
        deligne = (
            checks["degree_preserved"]
            and checks["top_form_matches"]
            and form.m % k.char != 0
            and (top_smooth is None or top_smooth.status == "smooth")
        )
        abs_s = ring.abs_embed(item["sum"])
        bound = (form.m - 1) * Q ** (item["r"] / 2.0)
        row = {
            "j": item["j"],
            "r": item["r"],
            "abs_sum": abs_s,
            "bound": bound,
            "deligne": deligne,
            "pass": (abs_s <= bound * (1 + tol)) if deligne else None,
        }
        if deligne and not row["pass"]:
            all_pass = False
        rows.append(row)
    return {
        "identity_equal": res["equal"],
        "rows": rows,
        "all_pass": all_pass and res["equal"],
    }


# ---------------------------------------------------------------------------
# Gauss-sum completion (w != 0)


def gauss_twist_identity(k, pi, ell: int, form: geo.MultiForm, w,
                         chi_index: int, budget: Budget | None = None,
                         tol: float = 1e-9, search_bound: int = 2) -> dict:
    """Complete S_G(w, chi) through Gauss sums, exactly, for w != 0.

    With tau(chi) = sum_alpha chi(alpha) psi(alpha/pi) and
    T_beta = sum_a psi((beta G(a) - w.a)/pi), checks both

        S_G(w, chi) * tau(conj chi)  ==  sum_{beta != 0} conj(chi)(beta) T_beta
        S_G(w, chi) * chi(-1) * q^Delta  ==  tau(chi) * (same right side)

    as exact cyclotomic values, and audits every |T_beta| against the
    additive-sum bound (m - 1)^(n+1) * Q^((n+1)/2) (applicable when the
    reduced form is smooth: beta G is then a Deligne polynomial).
    """
    if not 0 < chi_index < ell:
        raise ValueError("completion needs a non-principal character")
    ctx = CharSumContext(k, pi, ell, form, budget=budget)
    kpi, ring, tables = ctx.kpi, ctx.ring, ctx.tables
    Q, nvars = ctx.Q, ctx.nvars
    widx = ctx._w_indices(w)
    if all(i == ctx.idx_zero for i in widx):
        raise ValueError("completion requires w != 0")

    S = ctx.char_sum(w, chi_index)
    conj_index = (ell - chi_index) % ell
    tau_chi = gauss_sum(MultChar(ctx.data, chi_index))
    tau_conj = gauss_sum(MultChar(ctx.data, conj_index))

    if budget is not None:
        budget.charge((Q - 1) * Q**nvars)
    mul, add = tables.mul, tables.add
    mw = [tables.neg[i] for i in widx]
    psi = ctx.data.psi_exp
    chi_exp = ctx.data.chi_exp
    g_vals = ctx.g_values()
    coords = ctx.coords()
    dots = []
    for a in coords:
        dot = ctx.idx_zero
        for i in range(nvars):
            if mw[i] != ctx.idx_zero:
                dot = add[dot * Q + mul[mw[i] * Q + a[i]]]
        dots.append(dot)

    bound_beta = (form.m - 1) ** nvars * Q ** (nvars / 2.0)
    smooth = geo.projective_singularity(kpi, ctx.reduced_terms, nvars,
                                        search_bound=search_bound) \
        if ctx.reduced_terms else geo.Verdict("singular")
    deligne_applicable = smooth.status == "smooth"

    rhs_counts: dict = {}
    beta_rows = []
    betas_pass = True
    for b_idx in range(Q):
        if b_idx == ctx.idx_zero:
            continue
        jb = (conj_index * chi_exp[b_idx]) % ell
        inner: dict = {}
        for gv, dot in zip(g_vals, dots):
            pe = psi[add[mul[b_idx * Q + gv] * Q + dot]]
            inner[pe] = inner.get(pe, 0) + 1
        t_beta = ring.from_exponent_counts({(pe, 0): c for pe, c in inner.items()})
        abs_t = ring.abs_embed(t_beta)
        ok = abs_t <= bound_beta * (1 + tol)
        if deligne_applicable and not ok:
            betas_pass = False
        beta_rows.append({
            "beta": pr.format_poly(k, pr.normalize(k, kpi.from_index(b_idx))),
            "abs": abs_t,
            "bound": bound_beta,
            "pass": ok if deligne_applicable else None,
        })
        for pe, c in inner.items():
            key = (pe, jb)
            rhs_counts[key] = rhs_counts.get(key, 0) + c
    rhs = ring.from_exponent_counts(rhs_counts)

    lhs1 = ring.mul(S, tau_conj)
    chi_minus1 = ring.monomial(
        0, (chi_index * chi_exp[tables.index[kpi.neg(kpi.one)]]) % ell)
    lhs2 = ring.mul(ring.mul(S, chi_minus1), ring.from_int(Q))
    rhs2 = ring.mul(tau_chi, rhs)

    completion_exact = lhs1 == rhs
    normalized_exact = lhs2 == rhs2
    return {
        "id": "gauss-twist",
        "params": {
            "q": k.size, "pi": pr.format_poly(k, pi), "ell": ell,
            "chi_index": chi_index, "w": format_covector(kpi, w),
        },
        "lhs": lhs1,
        "rhs": rhs,
        "equal": completion_exact and normalized_exact,
        "completion_exact": completion_exact,
        "normalized_exact": normalized_exact,
        "deligne_applicable": deligne_applicable,
        "beta_rows": beta_rows,
        "all_pass": completion_exact and normalized_exact and betas_pass,
    }
