from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st
import pytest

from arcsine.dsl import (
    BinOp,
    Call,
    IdentityAST,
    Neg,
    Num,
    Pi2,
    Sum,
    Var,
    evaluate,
    evaluate_identity,
    load_identity_file,
    parse,
    parse_expr,
    parse_identity_lines,
    render,
    render_expr,
    tokenize,
    verify_ast,
)
from arcsine.exactnum import QPi2
from arcsine.identities import IDENTITIES, get_identity, verify_range
from arcsine.signals import (
    DslError,
    DslSyntaxError,
    EvaluationError,
    LexicalError,
    UnboundVariableError,
    UnknownFunctionError,
)


def registry_spec(label: str):
    if "[" in label:
        identity, form = label[:-1].split("[")
        return get_identity(identity, form)
    return get_identity(label)


def value(text: str, n: int = 0) -> QPi2:
    return evaluate(parse_expr(text), {"n": n})


@pytest.mark.parametrize("text,expected", [
    ("2^2*3", 12),
    ("-2^2", -4),
    ("2^3^2", 512),
    ("2-3-4", -5),
    ("12/4/3", 1),
    ("(1+2)*3", 9),
    ("2^-1", Fraction(1, 2)),
    ("-(-3)", 3),
    ("3*-2", -6),
])
def test_precedence(text, expected):
    assert value(text) == QPi2(expected)


def test_functions_and_sums():
    assert value("sum(k=1..n, k)", 10) == QPi2(55)
    assert value("sum(k=3..1, k)", 0) == QPi2(0)
    assert value("binom(2*n, n)", 3) == QPi2(20)
    assert value("fact(5) + dfact(7) + catalan(4)") == QPi2(120 + 105 + 14)
    assert value("trigamma_half(1)") == QPi2(-4, Fraction(1, 2))
    assert value("pi2 - 2*trigamma_half(n+1)", 0) == QPi2(8)
    assert value("pi2/pi2") == QPi2(1)


def test_documented_examples():
    thm21 = parse("sum(k=0..n, binom(2*k,k)/(2*k+1) * binom(2*(n-k), n-k)) == 16^n / ((2*n+1) * binom(2*n,n))")

    assert evaluate_identity(thm21, 1) == (QPi2(Fraction(8, 3)), QPi2(Fraction(8, 3)))
    assert verify_ast(thm21, 0, 50).passed
    assert verify_ast(parse("binom(2*n,n) == (n+1) * catalan(n)"), 0, 50).passed
    assert verify_ast(parse("sum(k=0..n, binom(2*k,k)*catalan(n-k)) == binom(2*(n+1),n+1)/2"), 0, 50).passed
    assert render(parse("1+2*3 == 7")) == "1 + 2*3 == 7"

    perturbed = verify_ast(parse(
        "sum(k=0..n, binom(2*k,k)/(2*k+1) * binom(2*(n-k), n-k)) == 16^n / ((2*n+2) * binom(2*n,n))"
    ), 0, 5)
    assert perturbed.first_failure.n == 0
    assert (perturbed.first_failure.lhs, perturbed.first_failure.rhs) == ("1", "1/2")

    with pytest.raises(UnboundVariableError):
        parse("sum(k=0..n, x) == 0")


def test_sum_variable_shadows_n():
    assert value("sum(n=0..2, n) + n", 10) == QPi2(13)


def test_tokens_carry_positions():
    tokens = tokenize("n +\n  binom(1, 2)")

    assert [(t.kind, t.text, t.line, t.column) for t in tokens[:3]] == [
        ("ident", "n", 1, 1),
        ("op", "+", 1, 3),
        ("ident", "binom", 2, 3),
    ]
    assert tokens[-1].kind == "eof"


def test_positions_are_ignored_by_equality():
    assert parse("n == 1") == parse("  n   ==   1 # padded")
    assert Num(3, (1, 1)) == Num(3, (9, 9))


@pytest.mark.parametrize("text,error,line,column", [
    ("1 $ 2 == 3", LexicalError, 1, 3),
    ("1 + == 2", DslSyntaxError, 1, 5),
    ("foo(1) == 1", UnknownFunctionError, 1, 1),
    ("n == m", UnboundVariableError, 1, 6),
    ("sum(k=0..n, k) == k", UnboundVariableError, 1, 19),
    ("binom(1) == 1", DslSyntaxError, 1, 1),
    ("binom == 1", DslSyntaxError, 1, 1),
    ("sum(binom=0..1, 1) == 1", DslSyntaxError, 1, 5),
    ("n + 1", DslSyntaxError, 1, 6),
    ("n == 1 == 1", DslSyntaxError, 1, 8),
    ("(n == n", DslSyntaxError, 1, 4),
    ("n +\n  foo(2) == 1", UnknownFunctionError, 2, 3),
])
def test_positioned_errors(text, error, line, column):
    with pytest.raises(error) as info:
        parse(text)

    assert (info.value.line, info.value.column) == (line, column)
    assert str(info.value).startswith(f"line {line}, column {column}: ")


def test_deep_nesting_is_a_syntax_error():
    with pytest.raises(DslSyntaxError):
        parse("(" * 150 + "1" + ")" * 150 + " == 1")


def test_evaluation_errors_are_positioned():
    with pytest.raises(EvaluationError) as info:
        evaluate_identity(parse("1 == 1/(n-2)"), 2)

    assert info.value.column == 7
    assert "division by zero" in str(info.value)

    with pytest.raises(EvaluationError):
        value("pi2*pi2")
    with pytest.raises(EvaluationError):
        value("fact(n-3)", 0)
    with pytest.raises(EvaluationError):
        value("2^(1/2)")
    with pytest.raises(EvaluationError):
        value("binom(n/2, 1)", 1)


@pytest.mark.parametrize("text", [
    "pi2^2",
    "pi2^-1",
    "(9^99999)^99999",
    "2^200000",
    "fact(5000)",
    "sum(k=0..20000, k)",
])
def test_evaluation_limits(text):
    with pytest.raises(EvaluationError):
        value(text)


def test_powers_of_pi2_within_degree():
    assert value("pi2^0") == QPi2(1)
    assert value("(3*pi2)^1") == QPi2(0, 3)
    assert value("(-1)^99999") == QPi2(-1)


def test_verify_ast_reports_evaluation_failures():
    report = verify_ast(parse("1/(n-2) == 1/(n-2)"), 0, 5, name="pole")

    assert report.identity == "pole"
    assert report.first_failure.n == 2
    assert "division by zero" in report.first_failure.error


def test_verify_ast_passes_and_refutes():
    assert verify_ast(parse("sum(k=0..n, binom(n,k)) == 2^n"), 0, 40).passed

    report = verify_ast(parse("sum(k=0..n, k) == n^2"), 0, 10)
    assert report.first_failure.n == 2
    assert (report.first_failure.lhs, report.first_failure.rhs) == ("3", "4")


def test_identity_lines():
    entries = parse_identity_lines("a: n == n\n# comment\n\nb: 1 == 2  # trailing\nn^0 == 1\n")

    assert [(e.name, e.line) for e in entries] == [("a", 1), ("b", 4), ("line5", 5)]


def test_identity_line_errors_point_into_the_file():
    with pytest.raises(UnknownFunctionError) as info:
        parse_identity_lines("x: 1 == 1\n\ny: 1 == foo(2)")

    assert (info.value.line, info.value.column) == (3, 9)


def test_invalid_utf8_is_a_lexical_error(tmp_path):
    path = tmp_path / "latin1.txt"
    path.write_bytes(b"a: n == n\nb: n\xe9 == n\n")

    with pytest.raises(LexicalError) as info:
        load_identity_file(str(path))

    assert (info.value.line, info.value.column) == (2, 5)
    assert "0xe9" in str(info.value)


def test_corpus_labels_match_registry(corpus):
    labels = {spec.label for spec in IDENTITIES.values()}

    assert len(corpus) == 22
    assert {entry.name for entry in corpus} == labels


def test_corpus_round_trip(corpus):
    for entry in corpus:
        text = render(entry.ast)
        assert parse(text) == entry.ast
        assert render(parse(text)) == text


def _oracle_equivalence(corpus, n_hi):
    for entry in corpus:
        spec = registry_spec(entry.name)
        for n in range(n_hi + 1):
            lhs, rhs = evaluate_identity(entry.ast, n)
            assert (lhs, rhs) == (spec.lhs(n), spec.rhs(n)), f"{entry.name} at n={n}"


def test_corpus_matches_checkers(corpus):
    _oracle_equivalence(corpus, 30)


@pytest.mark.slow
def test_corpus_matches_checkers_to_one_hundred(corpus):
    _oracle_equivalence(corpus, 100)


def test_corpus_verdicts_match_checkers(corpus):
    for entry in corpus:
        dsl = verify_ast(entry.ast, 0, 25, name=entry.name)
        checker = registry_spec(entry.name)
        native = verify_range(checker, 0, 25)
        assert dsl.model_dump(include={"status", "first_failure"}) == native.model_dump(include={"status", "first_failure"})


# random trees over the grammar, for the render/parse round trip
def trees():
    leaves = st.one_of(
        st.integers(min_value=0, max_value=99).map(Num),
        st.just(Var("n")),
        st.just(Pi2()),
    )

    def extend(children):
        return st.one_of(
            children.map(Neg),
            st.builds(BinOp, st.sampled_from(["+", "-", "*", "/", "^"]), children, children),
            st.builds(lambda a, b: Call("binom", (a, b)), children, children),
            st.builds(lambda a: Call("fact", (a,)), children),
            st.builds(lambda lo, hi: Sum("k", lo, hi, BinOp("*", Var("k"), Var("n"))), children, children),
        )

    return st.recursive(leaves, extend, max_leaves=12)


@given(trees(), trees())
def test_random_round_trip(lhs, rhs):
    ast = IdentityAST(lhs, rhs)

    assert parse(render(ast)) == ast


@given(trees())
def test_random_expression_round_trip(node):
    assert parse_expr(render_expr(node)) == node


def reference_value(node) -> Fraction:
    if isinstance(node, Num):
        return Fraction(node.value)
    if isinstance(node, Neg):
        return -reference_value(node.operand)

    left, right = reference_value(node.left), reference_value(node.right)
    return {"+": left + right, "-": left - right, "*": left * right}[node.op]


arithmetic = st.recursive(
    st.integers(min_value=0, max_value=20).map(Num),
    lambda children: st.one_of(
        children.map(Neg),
        st.builds(BinOp, st.sampled_from(["+", "-", "*"]), children, children),
    ),
    max_leaves=10,
)


@given(arithmetic)
def test_evaluation_matches_reference(node):
    assert evaluate(parse_expr(render_expr(node)), {"n": 0}) == QPi2(reference_value(node))


grammar_text = st.text(alphabet="n k0123456789+-*/^()=.,#$ \n" + "binomsumfactpi2", max_size=60)


@given(grammar_text)
def test_malformed_input_never_crashes(text):
    try:
        ast = parse(text)
    except DslError as err:
        assert err.line >= 1 and err.column >= 1
    else:
        assert isinstance(ast, IdentityAST)


@given(grammar_text)
def test_evaluation_never_crashes(text):
    try:
        ast = parse(text)
    except DslError:
        return

    try:
        evaluate_identity(ast, 3)
    except EvaluationError as err:
        assert err.line >= 1
