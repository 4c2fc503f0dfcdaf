import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fraccore.errors import DomainError
from fraccore.expr import MAX_DEPTH, ExprSyntaxError, eval_expression, parse_expression


@pytest.mark.parametrize(
    "text, tree",
    [
        ("sin(x)+x^2", "(add (sin x) (pow x 2))"),
        ("2*-x", "(mul 2 (neg x))"),
        ("-x^2", "(neg (pow x 2))"),
        ("2^3^2", "(pow 2 (pow 3 2))"),
        ("1-2-3", "(sub (sub 1 2) 3)"),
        ("8/4/2", "(div (div 8 4) 2)"),
        ("2^-x", "(pow 2 (neg x))"),
        ("pow(x, 0.5) * (1 + x)", "(mul (pow x 0.5) (add 1 x))"),
        ("1.5e-3 + .5", "(add 0.0015 0.5)"),
    ],
)
def test_parse_trees(text, tree):
    assert parse_expression(text).sexpr() == tree


@pytest.mark.parametrize(
    "text, offset, expected",
    [
        ("sin(x", 5, '")"'),
        ("x +", 3, "a number"),
        ("2 $ x", 2, "a number"),
        ("x x", 2, "an operator or end of input"),
        ("foo(x)", 0, "one of"),
        ("pow(x)", 5, '","'),
        ("sin(x, 2)", 5, '")"'),
        ("", 0, "a number"),
        ("(x", 2, '")"'),
    ],
)
def test_syntax_errors(text, offset, expected):
    with pytest.raises(ExprSyntaxError) as info:
        parse_expression(text)
    assert info.value.offset == offset
    assert expected in info.value.expected
    assert f"offset {offset}" in str(info.value)


def test_evaluation_examples():
    assert eval_expression(parse_expression("x^2 + 1"), 2.0) == 5.0
    assert eval_expression(parse_expression("exp(x)"), 1.0) == pytest.approx(2.7182818, abs=1e-7)
    assert eval_expression(parse_expression("abs(x) + sqrt(4)"), -3.0) == 5.0
    assert eval_expression(parse_expression("(-2)^3"), 0.0) == -8.0
    xs = np.linspace(0.1, 2.0, 7)
    np.testing.assert_allclose(parse_expression("ln(x)*cos(x)")(xs), np.log(xs) * np.cos(xs), rtol=1e-15)


@pytest.mark.parametrize(
    "text, x, sub",
    [
        ("1 + ln(x)", 0.0, "ln(x)"),
        ("sqrt(x - 1)", 0.5, "sqrt(x - 1)"),
        ("3 / (x - 2)", 2.0, "3 / (x - 2)"),
        ("x^0.5", -1.0, "x^0.5"),
        ("exp(x)", 1000.0, "exp(x)"),
        ("0^-1", 0.0, "0^-1"),
    ],
)
def test_domain_errors_name_the_subexpression(text, x, sub):
    with pytest.raises(DomainError) as info:
        eval_expression(parse_expression(text), x)
    assert str(info.value).startswith(f"{sub}:")


def test_array_domain_error_reports_the_node():
    with pytest.raises(DomainError, match="x=0.0"):
        eval_expression(parse_expression("ln(x)"), np.array([1.0, 0.5, 0.0]))


def test_depth_limit_and_long_inputs():
    with pytest.raises(ExprSyntaxError):
        parse_expression("(" * (MAX_DEPTH + 1) + "x" + ")" * (MAX_DEPTH + 1))
    with pytest.raises(ExprSyntaxError):
        parse_expression("-" * 100_000 + "x")
    with pytest.raises(ExprSyntaxError):
        parse_expression("sin(" * 50_000)
    long_sum = "+".join(["x"] * 50_000)
    assert eval_expression(parse_expression(long_sum), 2.0) == 100_000.0


@settings(max_examples=300)
@given(st.text(alphabet="x0123456789.+-*/^(),eE sincoexplnqrtabw", max_size=60))
def test_parser_never_crashes(text):
    try:
        e = parse_expression(text)
    except ExprSyntaxError as exc:
        assert 0 <= exc.offset <= len(text)
        return
    try:
        v = eval_expression(e, 0.7)
    except DomainError:
        return
    assert math.isfinite(v)


_atoms = st.sampled_from(["x", "2", "0.5", "3"])


def _combine(children):
    return st.one_of(
        st.tuples(children, st.sampled_from("+-*"), children).map(lambda t: f"({t[0]}{t[1]}{t[2]})"),
        st.tuples(st.sampled_from(["sin", "cos", "abs"]), children).map(lambda t: f"{t[0]}({t[1]})"),
        children.map(lambda c: f"-{c}"),
    )


@settings(max_examples=200)
@given(st.recursive(_atoms, _combine, max_leaves=15), st.floats(-3, 3))
def test_matches_python_semantics(text, x):
    ref = eval(text.replace("sin", "math.sin").replace("cos", "math.cos"), {"math": math, "x": x, "abs": abs})
    assert eval_expression(parse_expression(text), x) == pytest.approx(ref, rel=1e-12, abs=1e-12)
