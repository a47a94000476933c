import json

import pytest

from jetcalc import (
    AuxClaim,
    Bundle,
    CDiffOperator,
    SymmetryClaim,
    VectorOperator,
    aux_residual,
    evaluate_claim_file,
    graded_additivity_check,
    linearize,
    nonhomogeneous_diagonal_pair,
    random_vector_operator,
    symmetry_residual,
)


class TestSymmetryResidual:
    def test_operator_is_its_own_symmetry(self, plane_bundle):
        f = random_vector_operator(plane_bundle, 8)
        zero = VectorOperator.zero(plane_bundle)
        res = symmetry_residual(SymmetryClaim(f, f, zero))
        assert res.holds
        assert res.context["module_form"].is_zero()

    def test_translation_symmetry(self, scalar_bundle):
        b = scalar_bundle
        f = VectorOperator([b.jet(0, (2,))])
        h = VectorOperator([b.jet(0, (1,))])
        res = symmetry_residual(SymmetryClaim(f, h, VectorOperator.zero(b)))
        assert res.holds

    def test_diagonal_pair_fails_with_zero_witness(self):
        ex = nonhomogeneous_diagonal_pair()
        zero = VectorOperator.zero(ex.f.bundle)
        res = symmetry_residual(SymmetryClaim(ex.f, ex.g, zero))
        assert not res.holds
        assert res.value == ex.full_bracket

    def test_both_forms_agree_always(self, plane_bundle):
        for seed in range(10):
            f = random_vector_operator(plane_bundle, seed)
            h = random_vector_operator(plane_bundle, seed + 31)
            theta = random_vector_operator(plane_bundle, seed + 62)
            res = symmetry_residual(SymmetryClaim(f, h, theta))
            assert res.context["forms_agree"]
            assert res.value == res.context["module_form"]


class TestAuxResidual:
    def test_zero_mu_reduces_to_symmetry(self, plane_bundle):
        # with mu = 0 and lambda = theta the aux residual is the symmetry residual
        for seed in range(10):
            f = random_vector_operator(plane_bundle, seed)
            g = random_vector_operator(plane_bundle, seed + 13)
            theta = random_vector_operator(plane_bundle, seed + 26)
            zero = VectorOperator.zero(plane_bundle)
            a = aux_residual(AuxClaim(f, g, theta, zero))
            s = symmetry_residual(SymmetryClaim(f, g, theta))
            assert a.value == s.value

    def test_self_pair(self, scalar_bundle):
        b = scalar_bundle
        f = VectorOperator([b.jet(0, (1,)) ** 2])
        zero = VectorOperator.zero(b)
        res = aux_residual(AuxClaim(f, f, zero, zero))
        assert res.holds

    def test_scalar_order_report(self, scalar_bundle):
        from fractions import Fraction

        b = scalar_bundle
        f = VectorOperator([b.jet(0, (2,)) + b.fiber_var(0) ** 2])
        g = VectorOperator([b.fiber_var(0)])
        mu = VectorOperator([(b.fiber_var(0) ** 2).scale(Fraction(1, 2))])
        res = aux_residual(AuxClaim(f, g, VectorOperator.zero(b), mu))
        assert res.holds
        assert res.context["order_f"] == 2
        assert res.context["order_mu"] == 0
        assert res.context["scalar_order_ok"] is True

    def test_vector_case_has_no_order_rule(self, plane_bundle):
        f = random_vector_operator(plane_bundle, 3)
        g = random_vector_operator(plane_bundle, 4)
        zero = VectorOperator.zero(plane_bundle)
        res = aux_residual(AuxClaim(f, g, zero, zero))
        assert res.context["scalar_order_ok"] is None


class TestGradedAdditivity:
    def test_vanishes_on_random_inputs(self, plane_bundle):
        for seed in range(10):
            f = random_vector_operator(plane_bundle, seed)
            h1 = random_vector_operator(plane_bundle, seed + 5)
            t1 = random_vector_operator(plane_bundle, seed + 10)
            h2 = random_vector_operator(plane_bundle, seed + 15)
            t2 = random_vector_operator(plane_bundle, seed + 20)
            assert graded_additivity_check(f, h1, t1, h2, t2).holds

    def test_degenerate_second_pair(self, plane_bundle):
        f = random_vector_operator(plane_bundle, 1)
        h = random_vector_operator(plane_bundle, 2)
        t = random_vector_operator(plane_bundle, 3)
        zero = VectorOperator.zero(plane_bundle)
        assert graded_additivity_check(f, h, t, zero, zero).holds


class TestDiagonalPair:
    def test_exact_brackets(self):
        ex = nonhomogeneous_diagonal_pair()
        b = ex.f.bundle
        minus_one_one = VectorOperator([b.const(-1), b.const(1)])
        assert ex.full_bracket == minus_one_one
        assert ex.full_bracket_coord == minus_one_one
        assert ex.linear_part_bracket.is_zero()

    def test_full_bracket_is_constant(self):
        ex = nonhomogeneous_diagonal_pair()
        assert ex.full_bracket.order == 0
        for comp in ex.full_bracket.components:
            assert comp.is_constant()

    def test_displayed_linearization(self):
        # diag(D_x^2 - D_y, D_x D_y + 1): the free terms drop out
        ex = nonhomogeneous_diagonal_pair()
        b = ex.f.bundle
        one = b.one()
        expected = CDiffOperator(
            b,
            2,
            2,
            {
                (0, 0): {(2, 0): one, (0, 1): -one},
                (1, 1): {(1, 1): one, (0, 0): one},
            },
        )
        assert linearize(ex.f) == expected

    def test_strip_free_terms(self):
        ex = nonhomogeneous_diagonal_pair()
        stripped = ex.f.strip_free_terms()
        b = ex.f.bundle
        assert stripped == VectorOperator(
            [b.jet(0, (2, 0)) - b.jet(0, (0, 1)), b.jet(1, (1, 1)) + b.fiber_var(1)]
        )


class TestClaimFiles:
    def test_shipped_claims_all_match(self, fixtures_dir):
        report = evaluate_claim_file(fixtures_dir / "claims.json")
        assert report["all_match"]
        names = {c["name"] for c in report["claims"]}
        assert "diagonal-pair-free-terms" in names

    def test_kind_filter(self, fixtures_dir):
        sym = evaluate_claim_file(fixtures_dir / "claims.json", kind="symmetry")
        aux = evaluate_claim_file(fixtures_dir / "claims.json", kind="aux")
        assert all(c["kind"] == "symmetry" for c in sym["claims"])
        assert all(c["kind"] == "aux" for c in aux["claims"])
        assert sym["claims"] and aux["claims"]

    def test_mismatch_detected(self, tmp_path):
        bad = {
            "claims": [
                {
                    "name": "wrong-expectation",
                    "kind": "symmetry",
                    "signature": {"base": ["x"], "fiber": ["u"], "params": []},
                    "f": ["u_x^2"],
                    "h": ["u"],
                    "theta": ["0"],
                    "expect": "zero",
                }
            ]
        }
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(bad))
        report = evaluate_claim_file(path)
        assert not report["all_match"]

    def test_bad_kind_rejected(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(
            json.dumps(
                {
                    "claims": [
                        {
                            "kind": "nope",
                            "signature": {"base": ["x"], "fiber": ["u"], "params": []},
                            "expect": "zero",
                        }
                    ]
                }
            )
        )
        with pytest.raises(ValueError):
            evaluate_claim_file(path)
