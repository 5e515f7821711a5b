import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from miniqmod.cli.corpus import CORPUS, program_source
from miniqmod.frontend import (EvalError, LexError, ParseError, ast, eval_classical, format_program,
                               parse, parse_expr, tokenize)


def kinds(src):
    return [(t.kind, t.text) for t in tokenize(src)][:-1]


def test_tokenize_keywords_and_punctuation():
    assert kinds("qfunc main()") == [("kw", "qfunc"), ("ident", "main"), ("op", "("), ("op", ")")]


def test_tokenize_number_is_exact():
    (tok, _eof) = tokenize("0.8125")
    assert tok.kind == "number" and tok.value == Fraction(13, 16)


def test_tokenize_reports_position_of_bad_character():
    with pytest.raises(LexError) as err:
        tokenize("x |= 3 @")
    assert (err.value.span.line, err.value.span.col) == (1, 8)


def test_comments_are_skipped_and_spans_kept():
    toks = tokenize("// note\n  x ^= 1;")
    assert [t.text for t in toks[:-1]] == ["x", "^=", "1", ";"]
    assert (toks[0].span.line, toks[0].span.col) == (2, 3)


def test_parse_bell_program():
    prog = parse(program_source("bell"))
    funcs = prog.functions
    assert set(funcs) == {"bell", "main"}
    (qba,) = funcs["bell"].params
    assert isinstance(qba.type, ast.QArrayType) and isinstance(qba.type.element, ast.QBitType)
    assert qba.type.length == ast.Num(Fraction(2)) and not qba.is_output
    (res,) = funcs["main"].params
    assert res.is_output and isinstance(res.type, ast.QArrayType)


def test_parse_digital_assignment_tree():
    prog = parse("qfunc main(res: output qnum) { res |= 0.25*a*b + 1.5; }")
    (stmt,) = prog.functions["main"].body
    assert isinstance(stmt, ast.Assign) and stmt.op == "|="
    a, b = ast.Name("a"), ast.Name("b")
    want = ast.BinOp("add", ast.BinOp("mul", ast.BinOp("mul", ast.Num(Fraction(1, 4)), a), b),
                     ast.Num(Fraction(3, 2)))
    assert stmt.value == want


def test_parse_phase_statement():
    prog = parse("qfunc f(x: qnum) { phase(x**2, pi/4); }")
    (stmt,) = prog.functions["f"].body
    assert isinstance(stmt, ast.Phase)
    assert stmt.expr == ast.BinOp("pow", ast.Name("x"), ast.Num(Fraction(2)))
    assert stmt.angle == ast.BinOp("div", ast.Name("pi"), ast.Num(Fraction(4)))


@pytest.mark.parametrize("src,expected", [
    ("-a ** 2", "(-a) ** 2"),
    ("a + b * c", "a + (b * c)"),
    ("a << 1 + b", "a << (1 + b)"),
    ("a < b & c < d", "(a < b) & (c < d)"),
    ("a & b ^ c | d", "((a & b) ^ c) | d"),
    ("a or b and c", "a or (b and c)"),
])
def test_operator_precedence(src, expected):
    assert parse_expr(src) == parse_expr(expected)


def test_parse_error_names_expected_and_found():
    with pytest.raises(ParseError) as err:
        parse("qfunc main(x: output qbit) { allocate(x) }")
    assert err.value.expected and "}" in err.value.found
    assert err.value.span.line == 1


@pytest.mark.parametrize("src,value", [("2+3", 5), ("7 - 2*3", 1), ("2**3", 8), ("1/4", Fraction(1, 4))])
def test_eval_classical_exact(src, value):
    assert eval_classical(parse_expr(src), {}) == value


def test_eval_classical_pi_is_double():
    assert float(eval_classical(parse_expr("pi/4"), {})) == math.pi / 4


def test_eval_classical_array_index():
    coefs = [0.5, 0.9798, 0.25]
    assert eval_classical(parse_expr("a_coefs[1]"), {"a_coefs": coefs}) == Fraction(0.9798)


def test_eval_classical_unbound_name():
    with pytest.raises(EvalError):
        eval_classical(parse_expr("q + 1"), {})


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_corpus_round_trip(name):
    prog = parse(program_source(name))
    again = parse(format_program(prog))
    assert again == prog


@given(st.binary(max_size=200))
def test_parsing_is_total_on_bytes(data):
    try:
        parse(data)
    except (LexError, ParseError):
        pass


@given(st.text(alphabet="qfunc main(){}[]:;,.|^+=-*<>&~ xyz0123456789\n", max_size=120))
def test_parsing_is_total_on_token_soup(text):
    try:
        parse(text)
    except (LexError, ParseError):
        pass
