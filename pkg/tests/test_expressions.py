"""
Tests for the expression parser, canonicalizer and printer.
"""

from fractions import Fraction

import pytest

from errors import DivisionByZeroLiteral, ExpressionSyntaxError, ZeroDenominator
from expressions import (
    ExprAst,
    NodeKind,
    canonical_text,
    integer,
    parse_expression,
    parse_operator,
    parse_rational,
    parse_rational_q,
    parse_rational_t,
    serialize,
    var_t,
    var_x,
)
from ore import OreOperator
from rational import RatFuncT


class TestParser:
    """Test syntax trees produced by the parser."""

    def test_quotient_of_sum(self):
        """Test 1/(x-t) parses to quotient(1, sum(x, negation(t)))."""
        expected = ExprAst(
            NodeKind.QUOTIENT,
            (integer(1), ExprAst(NodeKind.SUM, (var_x(), ExprAst(NodeKind.NEGATION, (var_t(),))))),
        )
        assert parse_expression("1/(x-t)") == expected

    def test_negative_exponent(self):
        """Test x^-2 parses to power(x, -2)."""
        assert parse_expression("x^-2") == ExprAst(NodeKind.POWER, (var_x(),), value=-2)

    def test_left_associative_terms(self):
        """Test a/b*c groups as (a/b)*c."""
        ast = parse_expression("1/2*x")
        assert ast.kind is NodeKind.PRODUCT
        assert ast.children[0].kind is NodeKind.QUOTIENT

    def test_whitespace_insignificant(self):
        """Test spacing does not change the tree."""
        assert parse_expression(" ( x + t ) ^ 2 ") == parse_expression("(x+t)^2")

    def test_unexpected_character_offset(self):
        """Test syntax errors report the byte offset."""
        with pytest.raises(ExpressionSyntaxError) as info:
            parse_expression("x + y")
        assert info.value.offset == 4

    def test_offset_counts_bytes(self):
        """Test offsets are byte offsets of the UTF-8 text."""
        with pytest.raises(ExpressionSyntaxError) as info:
            parse_expression("x + é")
        assert info.value.offset == 4

    @pytest.mark.parametrize("text", ["\u0663", "x + \u0663", "\uff11*t"])
    def test_non_ascii_digits(self, text):
        """Test only ASCII digits form integer literals."""
        with pytest.raises(ExpressionSyntaxError):
            parse_expression(text)

    @pytest.mark.parametrize("text", ["", "x +", "(x", "x t", "2x", "x^t", "x)"])
    def test_malformed(self, text):
        """Test malformed text is rejected."""
        with pytest.raises(ExpressionSyntaxError):
            parse_expression(text)

    def test_dt_outside_operator_text(self):
        """Test Dt is only allowed in operator text."""
        with pytest.raises(ExpressionSyntaxError, match="Dt"):
            parse_expression("Dt*x")

    def test_division_by_literal_zero(self):
        """Test x/0 fails at parse time with the offset of the zero."""
        with pytest.raises(DivisionByZeroLiteral) as info:
            parse_expression("x/0")
        assert info.value.offset == 2

    def test_zero_to_negative_power(self):
        """Test 0^-1 fails at parse time."""
        with pytest.raises(DivisionByZeroLiteral):
            parse_expression("0^-1")


class TestCanonicalization:
    """Test evaluation to reduced rational functions."""

    def test_simplifying_zero_denominator(self):
        """Test a denominator that simplifies to zero."""
        with pytest.raises(ZeroDenominator):
            parse_rational("1/(x - x)")

    def test_equivalent_texts(self):
        """Test different spellings give equal values."""
        assert parse_rational("1/(x-t)") == parse_rational("(x - t)^-1")
        assert parse_rational("--x") == parse_rational("x")

    def test_rational_t_rejects_x(self):
        """Test x is rejected where Q(t) is expected."""
        with pytest.raises(ExpressionSyntaxError, match="x is not allowed"):
            parse_rational_t("t + x")
        assert parse_rational_t("t^2/t") == RatFuncT.t()

    def test_rational_q(self):
        """Test constants parse to Fractions and variables are rejected."""
        assert parse_rational_q("-3/4") == Fraction(-3, 4)
        with pytest.raises(ExpressionSyntaxError):
            parse_rational_q("t")


class TestSerialize:
    """Test the canonical printer."""

    @pytest.mark.parametrize(
        "text, expected",
        [
            ("2/(x-t)", "2/(x - t)"),
            ("t^2/(x^2 - t*x)", "t^2/(x^2 - t*x)"),
            ("-1/(x-t)", "-1/(x - t)"),
            ("x/2", "1/2*x"),
            ("x - x", "0"),
            ("1/(t*x)", "1/(t*x)"),
            ("(x + 1)/x^2", "(x + 1)/x^2"),
            ("3*t^2*x - x + 5", "3*t^2*x - x + 5"),
        ],
    )
    def test_canonical_text(self, text, expected):
        """Test known canonical strings."""
        assert canonical_text(text) == expected

    @pytest.mark.parametrize(
        "text",
        ["1/(x-t)", "-t/(x - t)^2 + x^3/7", "(t^2 + 1)/(x^2 - t)", "-2*t*x/(3*t + 1)", "x - 1/2"],
    )
    def test_serialize_parse_identity(self, text):
        """Test parse(serialize(v)) = v and the text is a fixed point."""
        value = parse_rational(text)
        printed = serialize(value)
        assert parse_rational(printed) == value
        assert canonical_text(printed) == printed

    def test_fraction(self):
        """Test rationals print as p/q."""
        assert serialize(Fraction(-3, 4)) == "-3/4"
        assert serialize(Fraction(6, 3)) == "2"

    def test_operator(self):
        """Test operators print with descending powers of Dt."""
        t = RatFuncT.t()
        assert serialize(OreOperator([-2 / t, 1])) == "Dt^1 - (2/t)*Dt^0"
        assert serialize(OreOperator([t, 0, 1])) == "Dt^2 + t*Dt^0"
        assert serialize(OreOperator.zero()) == "0"
        assert serialize(OreOperator.one()) == "Dt^0"

    def test_unsupported_type(self):
        """Test serialize refuses unknown types."""
        with pytest.raises(TypeError):
            serialize(object())


class TestParseOperator:
    """Test operator text."""

    def test_round_trip(self):
        """Test printed operators parse back to themselves."""
        t = RatFuncT.t()
        for op in (OreOperator([-2 / t, 1]), OreOperator([t, 0, t * t - 1]), OreOperator.one()):
            assert parse_operator(serialize(op)) == op

    def test_plain_dt(self):
        """Test Dt without exponent and implicit unit coefficient."""
        assert parse_operator("Dt") == OreOperator.dt()
        assert parse_operator("Dt^2 - Dt") == OreOperator([0, -1, 1])

    def test_zero(self):
        """Test the zero operator."""
        assert parse_operator("0").is_zero

    def test_x_rejected(self):
        """Test x cannot appear in operator coefficients."""
        with pytest.raises(ExpressionSyntaxError, match="x is not allowed"):
            parse_operator("x*Dt^1")

    def test_divide_by_dt(self):
        """Test division by Dt is rejected."""
        with pytest.raises(ExpressionSyntaxError):
            parse_operator("1/Dt")
