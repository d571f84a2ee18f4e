"""Geometry tests: forms, regularity verdicts, slices, duality, the
exceptional-prime scan, and the Schwartz-Zippel audit.

Closed-form verdicts are cross-checked against independent brute-force
enumeration oracles written inline here.
"""

import itertools
import random

import pytest

from cycsieve import geometry as geo
from cycsieve import polyring as pr
from cycsieve.ffield import GF
from cycsieve.polyring import RationalFunctionField

K3 = GF(3)
K5 = GF(5)
K7 = GF(7)


def P(k, text):
    return pr.parse_poly(k, text)


def const_form(k, n, m, coeff_map):
    """Form whose coefficients are the given integers (as constants)."""
    return geo.MultiForm(k, n, m, {e: (k.from_int(c),) for e, c in coeff_map.items()})


def field_terms(field, coeff_map):
    """Terms over a field with integer coefficients."""
    out = {}
    for exps, c in coeff_map.items():
        v = field.from_int(c)
        if not field.is_zero(v):
            out[exps] = v
    return out


def diag3(k):
    return const_form(k, 2, 2, {(2, 0, 0): 1, (0, 2, 0): 1, (0, 0, 2): 1})


# ---------------------------------------------------------------------------
# MultiForm construction, JSON, evaluation


class TestMultiForm:
    def test_validation(self):
        with pytest.raises(ValueError):
            geo.MultiForm(K3, 2, 2, {(2, 0): ((1,))})  # wrong arity
        with pytest.raises(ValueError):
            geo.MultiForm(K3, 2, 2, {(1, 0, 0): (1,)})  # not homogeneous
        with pytest.raises(ValueError):
            geo.MultiForm(K3, 2, 0, {})
        with pytest.raises(ValueError):
            geo.MultiForm(K3, 2, 2, {(1, 1, -2): (1,)})

    def test_zero_coefficients_dropped(self):
        f = geo.MultiForm(K3, 2, 2, {(2, 0, 0): (1,), (0, 2, 0): ()})
        assert list(f.terms) == [(2, 0, 0)]

    def test_json_round_trip(self):
        obj = {
            "n": 2,
            "m": 2,
            "terms": [
                {"exps": [2, 0, 0], "coeff": "1"},
                {"exps": [0, 2, 0], "coeff": "1"},
                {"exps": [0, 0, 2], "coeff": "1"},
            ],
        }
        f = geo.form_from_json(K3, obj)
        assert f == diag3(K3)
        assert geo.form_to_json(f) == obj

    def test_json_rejections(self):
        with pytest.raises(ValueError):
            geo.form_from_json(K3, {"n": 2, "terms": []})
        with pytest.raises(ValueError):
            geo.form_from_json(
                K3,
                {"n": 2, "m": 2, "terms": [
                    {"exps": [2, 0, 0], "coeff": "1"},
                    {"exps": [2, 0, 0], "coeff": "2"},
                ]},
            )

    def test_deg_T(self):
        assert diag3(K3).deg_T() == 0
        f = geo.MultiForm(
            K3, 2, 2,
            {(2, 0, 0): P(K3, "T"), (0, 2, 0): (K3.one,), (0, 0, 2): (K3.one,)})
        assert f.deg_T() == 1

    def test_eval_at_polys(self):
        f = diag3(K3)
        xs = (P(K3, "T"), P(K3, "1+T"), P(K3, "2"))
        # T^2 + (1+T)^2 + 4 = 2T^2 + 2T + 5 = 2T^2 + 2T + 2 over F_3
        assert geo.eval_form_at_polys(f, xs) == P(K3, "2+2*T+2*T^2")
        with pytest.raises(ValueError):
            geo.eval_form_at_polys(f, xs[:2])

    def test_is_diagonal(self):
        assert diag3(K3).is_diagonal()
        f = const_form(K3, 2, 2, {(1, 1, 0): 1, (0, 0, 2): 1})
        assert not f.is_diagonal()


class TestReduceForm:
    def test_degree_drop(self):
        f = geo.MultiForm(
            K3, 2, 2,
            {(2, 0, 0): P(K3, "T"), (0, 2, 0): (K3.one,), (0, 0, 2): (K3.one,)})
        kpi, terms, dropped = geo.reduce_form(f, P(K3, "T"))
        assert dropped == [(2, 0, 0)]
        assert set(terms) == {(0, 2, 0), (0, 0, 2)}
        assert all(c == kpi.one for c in terms.values())
        _, terms1, dropped1 = geo.reduce_form(f, P(K3, "1+T"))
        assert dropped1 == [] and len(terms1) == 3

    def test_fraction_field_lift(self):
        K, terms = geo.form_over_fraction_field(diag3(K3))
        assert isinstance(K, RationalFunctionField)
        assert all(c == K.one for c in terms.values())


# ---------------------------------------------------------------------------
# exact linear algebra


def leibniz_det3(field, m):
    """Independent 3x3 determinant via the Leibniz formula."""
    out = field.zero
    for perm, sign in [((0, 1, 2), 1), ((1, 2, 0), 1), ((2, 0, 1), 1),
                       ((0, 2, 1), -1), ((2, 1, 0), -1), ((1, 0, 2), -1)]:
        t = field.one
        for r, c in enumerate(perm):
            t = field.mul(t, m[r][c])
        out = field.add(out, t) if sign == 1 else field.sub(out, t)
    return out


class TestLinearAlgebra:
    def test_det_matches_leibniz(self):
        rng = random.Random(11)
        for _ in range(40):
            m = [[K7.from_int(rng.randrange(7)) for _ in range(3)] for _ in range(3)]
            assert geo.mat_det(K7, m) == leibniz_det3(K7, m)

    def test_kernel_vector(self):
        ident = [[K7.one if i == j else K7.zero for j in range(3)] for i in range(3)]
        assert geo.mat_kernel_vector(K7, ident) is None
        rng = random.Random(12)
        found = 0
        for _ in range(200):
            m = [[K7.from_int(rng.randrange(7)) for _ in range(3)] for _ in range(3)]
            v = geo.mat_kernel_vector(K7, m)
            if geo.mat_det(K7, m) == K7.zero:
                assert v is not None and any(not K7.is_zero(x) for x in v)
                for row in m:
                    s = K7.zero
                    for a, b in zip(row, v):
                        s = K7.add(s, K7.mul(a, b))
                    assert K7.is_zero(s)
                found += 1
            else:
                assert v is None
        assert found > 0

    def test_solve_linear(self):
        rng = random.Random(13)
        for _ in range(60):
            m = [[K5.from_int(rng.randrange(5)) for _ in range(3)] for _ in range(3)]
            x = [K5.from_int(rng.randrange(5)) for _ in range(3)]
            rhs = [K5.zero] * 3
            for r in range(3):
                for c in range(3):
                    rhs[r] = K5.add(rhs[r], K5.mul(m[r][c], x[c]))
            sol = geo.solve_linear(K5, m, rhs)
            assert sol is not None
            for r in range(3):
                s = K5.zero
                for c in range(3):
                    s = K5.add(s, K5.mul(m[r][c], sol[c]))
                assert s == rhs[r]
        # inconsistent: 0 * x = 1
        assert geo.solve_linear(K5, [[K5.zero]], [K5.one]) is None

    def test_adjugate_identity(self):
        rng = random.Random(14)
        for _ in range(25):
            m = [[K7.from_int(rng.randrange(7)) for _ in range(3)] for _ in range(3)]
            adj = geo.mat_adjugate(K7, m)
            det = geo.mat_det(K7, m)
            for i in range(3):
                for j in range(3):
                    s = K7.zero
                    for t in range(3):
                        s = K7.add(s, K7.mul(m[i][t], adj[t][j]))
                    assert s == (det if i == j else K7.zero)

    def test_poly_matrix_det_and_adjugate(self):
        t, t1 = P(K3, "T"), P(K3, "1+T")
        m = [[t, ()], [(), t1]]
        assert geo.poly_mat_det(K3, m) == P(K3, "T+T^2")
        rng = random.Random(15)
        for _ in range(15):
            m = [[pr.poly_from_index(K3, rng.randrange(27), 3) for _ in range(3)]
                 for _ in range(3)]
            det = geo.poly_mat_det(K3, m)
            adj = geo.poly_mat_adjugate(K3, m)
            for i in range(3):
                for j in range(3):
                    s = ()
                    for k_ in range(3):
                        s = pr.add(K3, s, pr.mul(K3, m[i][k_], adj[k_][j]))
                    assert s == (det if i == j else ())


# ---------------------------------------------------------------------------
# Dwork regularity


def brute_irregular_witness(field, terms, nvars):
    """Inline oracle: first projective point over the field itself that
    solves the full system, or None."""
    for point in geo.projective_points(field, nvars):
        if geo.dwork_system_holds(field, terms, nvars, point):
            return point
    return None


class TestDworkRegularity:
    def test_diagonal_regular(self):
        for k in (K3, K7):
            terms = field_terms(k, {(2, 0, 0): 1, (0, 2, 0): 1, (0, 0, 2): 1})
            assert geo.is_dwork_regular(k, terms, 3, 2).status == "regular"

    def test_missing_variable_all_strategies(self):
        terms = field_terms(K3, {(2, 0, 0): 1, (0, 2, 0): 1})
        expected = (K3.zero, K3.zero, K3.one)
        for strategy in ("auto", "diagonal", "quadric", "search"):
            v = geo.is_dwork_regular(K3, terms, 3, 2, strategy=strategy)
            assert v.status == "irregular"
            assert v.ext_degree == 1
            assert v.witness == expected

    def test_char_divides_degree_rejected(self):
        terms = field_terms(K3, {(3, 0, 0): 1, (0, 3, 0): 1, (0, 0, 3): 1})
        with pytest.raises(ValueError):
            geo.is_dwork_regular(K3, terms, 3, 3)

    def test_nondiagonal_quadric(self):
        coeffs = {(2, 0, 0): 1, (0, 2, 0): 1, (0, 0, 2): 1, (1, 1, 0): 1}
        # Over F_3 the {0,1} principal minor is singular: witness (1,1,0).
        v3 = geo.is_dwork_regular(K3, field_terms(K3, coeffs), 3, 2)
        assert v3.status == "irregular"
        assert v3.witness == (K3.one, K3.one, K3.zero)
        # Over F_7 all principal minors are nonsingular.
        v7 = geo.is_dwork_regular(K7, field_terms(K7, coeffs), 3, 2)
        assert v7.status == "regular"
        assert brute_irregular_witness(K7, field_terms(K7, coeffs), 3) is None

    def test_zero_form_irregular(self):
        v = geo.is_dwork_regular(K3, {}, 3, 2)
        assert v.status == "irregular" and v.witness == (K3.one, K3.zero, K3.zero)

    def test_search_strategy_unknown_on_regular(self):
        terms = field_terms(K3, {(2, 0, 0): 1, (0, 2, 0): 1, (0, 0, 2): 1})
        v = geo.is_dwork_regular(K3, terms, 3, 2, strategy="search", search_bound=2)
        assert v.status == "unknown" and v.search_bound == 2

    def test_quadric_vs_search_oracle(self):
        rng = random.Random(16)
        for k in (K3, K5):
            for _ in range(40):
                coeffs = {}
                for exps in [(2, 0, 0), (0, 2, 0), (0, 0, 2),
                             (1, 1, 0), (1, 0, 1), (0, 1, 1)]:
                    coeffs[exps] = rng.randrange(k.size)
                terms = field_terms(k, coeffs)
                if not terms:
                    continue
                verdict = geo.is_dwork_regular(k, terms, 3, 2, strategy="quadric")
                witness = brute_irregular_witness(k, terms, 3)
                # For quadrics the principal-minor criterion places any
                # witness over the base field, so these must agree exactly.
                assert (verdict.status == "irregular") == (witness is not None)

    def test_fraction_field_regularity(self):
        f = geo.MultiForm(
            K3, 2, 2,
            {(2, 0, 0): P(K3, "T"), (0, 2, 0): (K3.one,), (0, 0, 2): (K3.one,)})
        K, terms = geo.form_over_fraction_field(f)
        assert geo.is_dwork_regular(K, terms, 3, 2).status == "regular"
        # (X_0 + T X_1)^2 + X_2^2 is irregular over F_3(T): the {0,1} minor
        # is identically singular, kernel direction (-T, 1).
        g = geo.MultiForm(
            K3, 2, 2,
            {(2, 0, 0): (K3.one,), (1, 1, 0): P(K3, "2*T"),
             (0, 2, 0): P(K3, "T^2"), (0, 0, 2): (K3.one,)})
        Kg, gterms = geo.form_over_fraction_field(g)
        v = geo.is_dwork_regular(Kg, gterms, 3, 2)
        assert v.status == "irregular" and v.ext_degree == 1
        assert geo.dwork_system_holds(Kg, gterms, 3, v.witness)
        assert geo.proportional(
            Kg, v.witness, (Kg.from_poly(P(K3, "2*T")), Kg.one, Kg.zero))

    def test_auto_without_closed_form_over_K(self):
        f = geo.MultiForm(
            K3, 2, 4, {(3, 1, 0): (K3.one,), (0, 2, 2): (K3.one,)})
        K, terms = geo.form_over_fraction_field(f)
        with pytest.raises(ValueError):
            geo.is_dwork_regular(K, terms, 3, 4)

    def test_resultant_strategy_not_provided(self):
        terms = field_terms(K3, {(2, 0, 0): 1, (0, 2, 0): 1, (0, 0, 2): 1})
        with pytest.raises(NotImplementedError):
            geo.is_dwork_regular(K3, terms, 3, 2, strategy="resultant")


class TestProjectivePoints:
    def test_counts_and_distinctness(self):
        pts3 = list(geo.projective_points(K3, 3))
        assert len(pts3) == 13  # 9 + 3 + 1
        K9 = pr.make_field(3, 2)
        assert len(list(geo.projective_points(K9, 2))) == 10
        for u, w in itertools.combinations(pts3, 2):
            assert not geo.proportional(K3, u, w)


# ---------------------------------------------------------------------------
# smoothness verdicts


class TestSingularity:
    def test_projective_quadrics(self):
        smooth = field_terms(K3, {(2, 0, 0): 1, (0, 2, 0): 1, (0, 0, 2): 1})
        assert geo.projective_singularity(K3, smooth, 3).status == "smooth"
        cone = field_terms(K3, {(2, 0, 0): 1, (0, 2, 0): 1})
        v = geo.projective_singularity(K3, cone, 3)
        assert v.status == "singular" and v.witness == (K3.zero, K3.zero, K3.one)

    def test_projective_cubics(self):
        fermat = field_terms(K5, {(3, 0, 0): 1, (0, 3, 0): 1, (0, 0, 3): 1})
        # the diagonal closed form certifies smoothness; a search cannot
        assert geo.projective_singularity(K5, fermat, 3).status == "smooth"
        v = geo.projective_singularity(K5, fermat, 3, strategy="search",
                                       search_bound=2)
        assert v.status == "unknown" and v.search_bound == 2
        cone = field_terms(K5, {(3, 0, 0): 1, (0, 3, 0): 1})
        w = geo.projective_singularity(K5, cone, 3, search_bound=2)
        assert w.status == "singular"
        assert w.witness == (K5.zero, K5.zero, K5.one) and w.ext_degree == 1
        # nondiagonal cubic with a rational singular point, found by search
        nodal = field_terms(K5, {(1, 1, 1): 1, (3, 0, 0): 1})
        u = geo.projective_singularity(K5, nodal, 3, search_bound=1)
        assert u.status == "singular"
        assert u.witness == (K5.zero, K5.one, K5.zero)

    def test_affine_fixtures(self):
        # x^2 + y^2 + 1 = 0 over F_3: gradient vanishes only at the origin,
        # where the value is 1.
        g = field_terms(K3, {(2, 0): 1, (0, 2): 1, (0, 0): 1})
        assert geo.affine_singularity(K3, g, 2).status == "smooth"
        cone = field_terms(K3, {(2, 0): 1, (0, 2): 1})
        v = geo.affine_singularity(K3, cone, 2)
        assert v.status == "singular" and v.witness == (K3.zero, K3.zero)
        parabola = field_terms(K3, {(2, 0): 1, (0, 1): 1})
        assert geo.affine_singularity(K3, parabola, 2).status == "smooth"
        double_line = field_terms(K3, {(2, 0): 1, (1, 1): 2, (0, 2): 1})
        assert geo.affine_singularity(K3, double_line, 2).status == "singular"

    def test_affine_pure_powers(self):
        smooth = field_terms(K5, {(3, 0): 1, (0, 3): 1, (0, 0): 1})
        assert geo.affine_singularity(K5, smooth, 2).status == "smooth"
        cone = field_terms(K5, {(3, 0): 1, (0, 3): 1})
        v = geo.affine_singularity(K5, cone, 2)
        assert v.status == "singular" and v.witness == (K5.zero, K5.zero)
        # a linear monomial keeps the gradient from vanishing anywhere
        line = field_terms(K5, {(3, 0): 1, (0, 1): 1})
        assert geo.affine_singularity(K5, line, 2).status == "smooth"
        # char | exponent disables the closed form; search still decides
        frob = field_terms(K5, {(5, 0): 1, (0, 3): 1})
        w = geo.affine_singularity(K5, frob, 2, search_bound=1)
        assert w.status == "singular" and w.witness == (K5.zero, K5.zero)

    def test_affine_closed_form_vs_search(self):
        rng = random.Random(17)
        exps_pool = [(2, 0), (1, 1), (0, 2), (1, 0), (0, 1), (0, 0)]
        for _ in range(40):
            terms = field_terms(
                K3, {e: rng.randrange(3) for e in exps_pool})
            closed = geo.affine_singularity(K3, terms, 2, strategy="quadratic")
            searched = geo.affine_singularity(K3, terms, 2, strategy="search",
                                              search_bound=1)
            # Critical points of a quadratic solve a linear system over the
            # base field, so a base-field search decides it completely.
            if closed.status == "singular":
                assert searched.status == "singular"
            else:
                assert searched.status == "unknown"


# ---------------------------------------------------------------------------
# slices


class TestSlice:
    def test_dehomogenize_diagonal(self):
        terms = field_terms(K3, {(2, 0, 0): 1, (0, 2, 0): 1, (0, 0, 2): 1})
        g, checks = geo.slice_and_check(K3, terms, 3, 2, {0, 1, 2}, 2)
        assert g == field_terms(K3, {(2, 0): 1, (0, 2): 1, (0, 0): 1})
        assert checks["degree_preserved"]
        assert checks["top_form_matches"]
        assert checks["top_form_smooth"].status == "smooth"
        assert checks["affine_smooth"].status == "smooth"

    def test_sub_slice(self):
        terms = field_terms(K3, {(2, 0, 0): 1, (0, 2, 0): 1, (0, 0, 2): 1})
        g, checks = geo.slice_and_check(K3, terms, 3, 2, {1, 2}, 1)
        assert g == field_terms(K3, {(2,): 1, (0,): 1})
        assert checks["degree_preserved"] and checks["top_form_matches"]
        assert checks["top_form_smooth"].status == "smooth"
        assert checks["affine_smooth"].status == "smooth"

    def test_residue_field_slice(self):
        kpi = pr.residue_field(K3, P(K3, "1+T^2"))
        terms = field_terms(kpi, {(2, 0, 0): 1, (0, 2, 0): 1, (0, 0, 2): 1})
        g, checks = geo.slice_and_check(kpi, terms, 3, 2, {0, 1, 2}, 0)
        assert checks["degree_preserved"] and checks["top_form_matches"]
        assert checks["affine_smooth"].status == "smooth"

    def test_degenerate_slice(self):
        terms = field_terms(K3, {(2, 0): 1, (1, 1): 1})
        g, checks = geo.slice_and_check(K3, terms, 2, 2, {0, 1}, 0)
        assert g == field_terms(K3, {(0,): 1, (1,): 1})
        assert not checks["degree_preserved"]

    def test_bad_inputs(self):
        terms = field_terms(K3, {(2, 0): 1, (0, 2): 1})
        with pytest.raises(ValueError):
            geo.slice_and_check(K3, terms, 2, 2, {0, 1}, 2)
        with pytest.raises(ValueError):
            geo.slice_and_check(K3, terms, 2, 2, {0, 5}, 0)


# ---------------------------------------------------------------------------
# duality


def t_quadric(k):
    """X_0^2 + X_1^2 + X_2^2 + T X_0 X_1; degenerates exactly where
    1 - T^2 vanishes (T = 1 and T = -1 over F_3)."""
    return geo.MultiForm(
        k, 2, 2,
        {(2, 0, 0): (k.one,), (0, 2, 0): (k.one,), (0, 0, 2): (k.one,),
         (1, 1, 0): P(k, "T")})


class TestDuality:
    def test_dual_degree_formula(self):
        assert geo.dual_degree(2, 2) == 2
        assert geo.dual_degree(3, 2) == 6
        assert geo.dual_degree(2, 5) == 2

    def test_diagonal_dual(self):
        f = diag3(K3)
        dual = geo.quadric_dual_form(f)
        assert dual == f  # adj(I) = I
        assert dual.m == 2 == geo.dual_degree(f.m, f.n)

    def test_double_dual_is_det_times_form(self):
        f = t_quadric(K3)
        det = geo.poly_mat_det(K3, geo.quadric_matrix_poly(f))
        double = geo.quadric_dual_form(geo.quadric_dual_form(f))
        assert set(double.terms) == set(f.terms)
        for exps, coeff in f.terms.items():
            assert double.terms[exps] == pr.mul(K3, det, coeff)

    def test_membership_matches_tangency_mod_T(self):
        f = diag3(K3)
        pi = P(K3, "T")
        kpi = pr.residue_field(K3, pi)
        members = 0
        for w in geo.projective_points(kpi, 3):
            via_dual = geo.dual_membership(f, pi, w, dual="quadric")
            via_tangency = geo.dual_membership(f, pi, w, dual="tangency",
                                               search_bound=1)
            assert via_dual == (via_tangency is True)
            members += via_dual
        # a smooth conic over F_q has exactly q + 1 rational points
        assert members == 4

    def test_membership_matches_tangency_mod_degree_two(self):
        f = t_quadric(K3)
        pi = P(K3, "1+T^2")
        kpi = pr.residue_field(K3, pi)
        members = 0
        for w in geo.projective_points(kpi, 3):
            via_dual = geo.dual_membership(f, pi, w, dual="quadric")
            via_tangency = geo.dual_membership(f, pi, w, dual="tangency",
                                               search_bound=1)
            assert via_dual == (via_tangency is True)
            members += via_dual
        assert members == 10  # q + 1 over F_9

    def test_user_supplied_dual_agrees(self):
        f = diag3(K3)
        pi = P(K3, "T")
        kpi = pr.residue_field(K3, pi)
        user = geo.quadric_dual_form(f)
        for w in geo.projective_points(kpi, 3):
            assert (geo.dual_membership(f, pi, w, dual=user)
                    == geo.dual_membership(f, pi, w, dual="quadric"))

    def test_degenerate_prime_rejected(self):
        f = t_quadric(K3)
        kpi = pr.residue_field(K3, P(K3, "1+T"))
        w = (kpi.one, kpi.one, kpi.one)
        with pytest.raises(ValueError):
            geo.dual_membership(f, P(K3, "1+T"), w, dual="quadric")

    def test_w_validation(self):
        f = diag3(K3)
        pi = P(K3, "T")
        kpi = pr.residue_field(K3, pi)
        with pytest.raises(ValueError):
            geo.dual_membership(f, pi, (kpi.one, kpi.one), dual="quadric")
        with pytest.raises(ValueError):
            geo.dual_membership(f, pi, (kpi.zero,) * 3, dual="quadric")


# ---------------------------------------------------------------------------
# exceptional primes


class TestExceptionalPrimes:
    def test_clean_diagonal(self):
        report = geo.compute_exceptional_primes(diag3(K3), 2)
        assert report["exceptional"] == []
        assert report["entries"] == []
        assert report["scanned"] == 3 + 3  # monic irreducibles of degree 1, 2

    def test_t_coefficient_flags_T(self):
        f = geo.MultiForm(
            K3, 2, 2,
            {(2, 0, 0): P(K3, "T"), (0, 2, 0): (K3.one,), (0, 0, 2): (K3.one,)})
        report = geo.compute_exceptional_primes(f, 2)
        assert report["exceptional"] == ["T"]
        entry = report["entries"][0]
        assert entry["pi"] == "T"
        assert set(entry["tags"]) == {"degree-drop", "smoothness-fail",
                                      "dwork-fail"}

    def test_degenerating_quadric(self):
        report = geo.compute_exceptional_primes(t_quadric(K3), 2)
        # T: the X_0 X_1 coefficient vanishes (model degenerates);
        # T +/- 1: the quadric matrix determinant 1 - T^2 vanishes.
        assert report["exceptional"] == ["T", "1+T", "2+T"]
        by_pi = {e["pi"]: e for e in report["entries"]}
        assert by_pi["T"]["tags"] == ["degree-drop"]
        for pi in ("1+T", "2+T"):
            assert "smoothness-fail" in by_pi[pi]["tags"]
            assert "dwork-fail" in by_pi[pi]["tags"]
            assert "dual-mismatch" not in by_pi[pi]["tags"]

    def test_wrong_user_dual_trips_mismatch(self):
        f = const_form(K5, 2, 3, {(3, 0, 0): 1, (0, 3, 0): 1, (0, 0, 3): 1})
        wrong = const_form(K5, 2, 2, {(2, 0, 0): 1, (0, 2, 0): 1, (0, 0, 2): 1})
        report = geo.compute_exceptional_primes(f, 1, dual=wrong, search_bound=1)
        entry = next(e for e in report["entries"] if e["pi"] == "T")
        assert entry["tags"] == ["dual-mismatch"]


# ---------------------------------------------------------------------------
# Schwartz-Zippel audit


class TestSchwartzZippel:
    def test_frozen_example(self):
        # X_0 X_1 - X_2^2 over F_3: 9 zeros against the bound 2 * 3^2 = 18.
        terms = field_terms(K3, {(1, 1, 0): 1, (0, 0, 2): 2})
        report = geo.schwartz_zippel_audit(K3, terms, 3)
        assert report == {"degree": 2, "sample_size": 3, "zeros": 9,
                          "bound": 18, "pass": True}

    def test_zero_polynomial_rejected(self):
        with pytest.raises(ValueError):
            geo.schwartz_zippel_audit(K3, {}, 3)

    def test_subsample(self):
        terms = field_terms(K7, {(1, 0): 1, (0, 1): 6})  # x - y
        report = geo.schwartz_zippel_audit(K7, terms, 2,
                                           sample=[K7.from_int(i) for i in range(4)])
        assert report["zeros"] == 4 and report["bound"] == 4 and report["pass"]


# ---------------------------------------------------------------------------
# the fraction field itself


class TestRationalFunctionField:
    def test_normalization(self):
        K = RationalFunctionField(K3)
        a = K.normalize(P(K3, "2+2*T"), P(K3, "2*T+2*T^2"))  # (2T+2)/(2T^2+2T) = 1/T
        assert a == ((K3.one,), P(K3, "T"))

    def test_field_axioms_random(self):
        K = RationalFunctionField(K3)
        rng = random.Random(18)

        def rand_elem():
            num = pr.poly_from_index(K3, rng.randrange(27), 3)
            den = ()
            while not den:
                den = pr.poly_from_index(K3, rng.randrange(27), 3)
            return K.normalize(num, den)

        for _ in range(40):
            a, b, c = rand_elem(), rand_elem(), rand_elem()
            assert K.add(K.add(a, b), c) == K.add(a, K.add(b, c))
            assert K.mul(K.mul(a, b), c) == K.mul(a, K.mul(b, c))
            assert K.mul(a, K.add(b, c)) == K.add(K.mul(a, b), K.mul(a, c))
            assert K.sub(a, a) == K.zero
            if not K.is_zero(a):
                assert K.mul(a, K.inv(a)) == K.one
                assert K.power(a, 3) == K.mul(a, K.mul(a, a))
        with pytest.raises(ZeroDivisionError):
            K.inv(K.zero)
