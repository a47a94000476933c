from fractions import Fraction

import pytest

from jetcalc import Bundle, VectorOperator
from jetcalc.dsl import DslError, parse, parse_expression, print_session

INTRO = """base x;
fiber u;
param c;
op F = [u_x^2];
op G = [u_x + c*x];
"""


class TestParse:
    def test_intro_session(self):
        session = parse(INTRO)
        b = session.bundle
        assert b == Bundle(("x",), ("u",), ("c",))
        p = b.jet(0, (1,))
        assert session.operators["F"] == VectorOperator([p * p])
        assert session.operators["G"] == VectorOperator([p + b.param("c") * b.base_var(0)])

    def test_jet_suffix_and_explicit_index_agree(self):
        session = parse("base x y; fiber u; op A = [u_xxy]; op B = [u[2,1]];")
        assert session.operators["A"] == session.operators["B"]

    def test_suffix_order_is_immaterial(self):
        session = parse("base x y; fiber u; op A = [u_xyx]; op B = [u_xxy];")
        assert session.operators["A"] == session.operators["B"]

    def test_vector_components(self):
        session = parse("base x y; fiber u v; op F = [u_xx - u_y - 1, v_xy + v];")
        f = session.operators["F"]
        b = session.bundle
        assert f == VectorOperator(
            [b.jet(0, (2, 0)) - b.jet(0, (0, 1)) - 1, b.jet(1, (1, 1)) + b.fiber_var(1)]
        )

    def test_rational_literals(self):
        session = parse("base x; fiber u; op F = [3/2*u - 1/3];")
        b = session.bundle
        assert session.operators["F"] == VectorOperator(
            [b.fiber_var(0).scale(Fraction(3, 2)) - Fraction(1, 3)]
        )

    def test_precedence_and_unary_minus(self):
        session = parse("base x; fiber u; op F = [-u_x^2 + 2*u*(u - 1)];")
        b = session.bundle
        p, u = b.jet(0, (1,)), b.fiber_var(0)
        assert session.operators["F"] == VectorOperator([-(p**2) + 2 * u * (u - 1)])

    def test_parameters_used_in_expressions(self):
        session = parse("base x; fiber u; param a b; op F = [a*u + b];")
        b = session.bundle
        assert session.operators["F"] == VectorOperator(
            [b.param("a") * b.fiber_var(0) + b.param("b")]
        )


class TestErrors:
    def test_unbalanced_bracket(self):
        with pytest.raises(DslError) as err:
            parse("base x; fiber u; op F = [u_x")
        assert "end of input" in str(err.value)

    def test_undeclared_symbol_position(self):
        with pytest.raises(DslError) as err:
            parse("base x; fiber u; op F = [v];")
        assert err.value.line == 1
        assert err.value.col == 26
        assert "undeclared" in str(err.value)

    def test_duplicate_name(self):
        with pytest.raises(DslError) as err:
            parse("base x; fiber x; op F = [x];")
        assert "duplicate" in str(err.value)

    def test_duplicate_operator_name(self):
        with pytest.raises(DslError):
            parse("base x; fiber u; op F = [u]; op F = [u];")

    def test_reserved_word(self):
        with pytest.raises(DslError):
            parse("base op; fiber u; op F = [u];")

    def test_declaration_after_operator(self):
        with pytest.raises(DslError) as err:
            parse("base x; fiber u; op F = [u]; param c;")
        assert "precede" in str(err.value)

    def test_missing_fiber(self):
        with pytest.raises(DslError):
            parse("base x; op F = [1];")

    def test_unknown_suffix_letter(self):
        with pytest.raises(DslError) as err:
            parse("base x; fiber u; op F = [u_t];")
        assert "jet suffix" in str(err.value)

    def test_wrong_multi_index_arity(self):
        with pytest.raises(DslError) as err:
            parse("base x y; fiber u; op F = [u[1]];")
        assert "2 entries" in str(err.value)

    def test_zero_denominator(self):
        with pytest.raises(DslError):
            parse("base x; fiber u; op F = [1/0];")

    def test_unexpected_character(self):
        with pytest.raises(DslError) as err:
            parse("base x; fiber u; op F = [u ? 1];")
        assert err.value.line == 1

    def test_names_with_underscores_rejected(self):
        with pytest.raises(DslError):
            parse("base x; fiber u; param c_0; op F = [u];")


class TestRoundTrip:
    def test_intro_roundtrip(self):
        session = parse(INTRO)
        assert parse(print_session(session)) == session

    def test_roundtrip_is_idempotent(self):
        session = parse(INTRO)
        once = print_session(session)
        twice = print_session(parse(once))
        assert once == twice

    def test_two_variable_roundtrip(self):
        src = "base x y; fiber u v; param a; op F = [u_xx - a*v_y + 1/2, v[1,1]*u];"
        session = parse(src)
        assert parse(print_session(session)) == session

    def test_expression_parser(self, scalar_bundle):
        e = parse_expression("u_x^2 - c*u + 2", scalar_bundle)
        b = scalar_bundle
        assert e == b.jet(0, (1,)) ** 2 - b.param("c") * b.fiber_var(0) + 2
        with pytest.raises(DslError):
            parse_expression("u_x^2 extra", scalar_bundle)
