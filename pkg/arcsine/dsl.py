"""A small language for binomial-sum identities in one free variable n.

    identity  = expr "==" expr ;
    expr      = term { ("+"|"-") term } ;
    term      = factor { ("*"|"/") factor } ;
    factor    = ["-"] power ;
    power     = atom [ "^" factor ] ;
    atom      = integer | ident | "pi2" | "(" expr ")" | call ;
    call      = ("binom"|"fact"|"dfact"|"catalan"|"trigamma_half") "(" expr {"," expr} ")"
              | "sum" "(" ident "=" expr ".." expr "," expr ")" ;

Comments run from "#" to the end of the line. Values are exact QPi2 numbers;
trigamma_half(m) is psi'(m + 1/2).
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional, Union
import logging
import os
import re

from .exactnum import (
    QPi2,
    binomial,
    catalan,
    double_factorial,
    factorial,
    trigamma_half_integer,
)
from .identities import run_sweep
from .models.reports import VerifyReport
from .signals import (
    ArcsineError,
    DslSyntaxError,
    EvaluationError,
    LexicalError,
    UnboundVariableError,
    UnknownFunctionError,
)

logger = logging.getLogger(__name__)

FREE_VARIABLE = "n"
FUNCTIONS: dict[str, int] = {
    "binom": 2,
    "fact": 1,
    "dfact": 1,
    "catalan": 1,
    "trigamma_half": 1,
}
RESERVED = set(FUNCTIONS) | {"sum", "pi2"}

MAX_DEPTH = 100
MAX_EXPONENT = 100_000
MAX_ARGUMENT = 2_000
MAX_SUM_TERMS = 10_000
MAX_POWER_BITS = 1 << 22

Position = tuple[int, int]


# ---------------------------------------------------------------- tokens

@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<int>[0-9]+)
  | (?P<ident>[A-Za-z][A-Za-z0-9_]*)
  | (?P<op>==|\.\.|[-+*/^(),=])
""", re.VERBOSE)


def tokenize(text: str, line: int = 1, column: int = 1) -> list[Token]:
    tokens = []
    pos = 0
    cur_line, cur_col = line, column

    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)

        if match is None:
            raise LexicalError(f"unexpected character {text[pos]!r}", cur_line, cur_col, text[pos])

        kind = match.lastgroup
        value = match.group()

        if kind not in ("ws", "comment"):
            tokens.append(Token(kind, value, cur_line, cur_col))

        for char in value:
            if char == "\n":
                cur_line += 1
                cur_col = 1
            else:
                cur_col += 1

        pos = match.end()

    tokens.append(Token("eof", "", cur_line, cur_col))
    return tokens


# ---------------------------------------------------------------- tree

# Positions are excluded from equality: trees compare structurally.

@dataclass(frozen=True)
class Num:
    value: int
    pos: Position = field(default=(0, 0), compare=False)

@dataclass(frozen=True)
class Var:
    name: str
    pos: Position = field(default=(0, 0), compare=False)

@dataclass(frozen=True)
class Pi2:
    pos: Position = field(default=(0, 0), compare=False)

@dataclass(frozen=True)
class Neg:
    operand: "Node"
    pos: Position = field(default=(0, 0), compare=False)

@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"
    pos: Position = field(default=(0, 0), compare=False)

@dataclass(frozen=True)
class Call:
    name: str
    args: tuple["Node", ...]
    pos: Position = field(default=(0, 0), compare=False)

@dataclass(frozen=True)
class Sum:
    var: str
    lo: "Node"
    hi: "Node"
    body: "Node"
    pos: Position = field(default=(0, 0), compare=False)

Node = Union[Num, Var, Pi2, Neg, BinOp, Call, Sum]

@dataclass(frozen=True)
class IdentityAST:
    lhs: Node
    rhs: Node


# ---------------------------------------------------------------- parser

class Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.index = 0
        self.scope: list[str] = [FREE_VARIABLE]
        self.depth = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def advance(self) -> Token:
        token = self.current
        if token.kind != "eof":
            self.index += 1
        return token

    def error(self, message: str, token: Optional[Token] = None) -> DslSyntaxError:
        token = token or self.current
        return DslSyntaxError(message, token.line, token.column, token.text)

    def at(self, text: str) -> bool:
        return self.current.kind == "op" and self.current.text == text

    def expect(self, text: str) -> Token:
        if not self.at(text):
            found = self.current.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        return self.advance()

    def expect_end(self) -> None:
        if self.current.kind != "eof":
            raise self.error(f"unexpected {self.current.text!r} after a complete expression")

    def identity(self) -> IdentityAST:
        lhs = self.expr()
        self.expect("==")
        rhs = self.expr()
        self.expect_end()
        return IdentityAST(lhs, rhs)

    def expr(self) -> Node:
        self.depth += 1
        if self.depth > MAX_DEPTH:
            raise self.error("expression nested too deeply")

        node = self.term()
        while self.at("+") or self.at("-"):
            op = self.advance()
            node = BinOp(op.text, node, self.term(), (op.line, op.column))

        self.depth -= 1
        return node

    def term(self) -> Node:
        node = self.factor()
        while self.at("*") or self.at("/"):
            op = self.advance()
            node = BinOp(op.text, node, self.factor(), (op.line, op.column))
        return node

    def factor(self) -> Node:
        if self.at("-"):
            op = self.advance()
            self.depth += 1
            if self.depth > MAX_DEPTH:
                raise self.error("expression nested too deeply")
            node = Neg(self.power(), (op.line, op.column))
            self.depth -= 1
            return node
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        if self.at("^"):
            op = self.advance()
            self.depth += 1
            if self.depth > MAX_DEPTH:
                raise self.error("expression nested too deeply")
            node = BinOp("^", base, self.factor(), (op.line, op.column))
            self.depth -= 1
            return node
        return base

    def atom(self) -> Node:
        token = self.current
        pos = (token.line, token.column)

        if token.kind == "int":
            self.advance()
            return Num(int(token.text), pos)

        if self.at("("):
            self.advance()
            node = self.expr()
            self.expect(")")
            return node

        if token.kind != "ident":
            found = token.text or "end of input"
            raise self.error(f"expected a number, name or '(', found {found!r}")

        self.advance()
        name = token.text

        if name == "pi2":
            return Pi2(pos)

        if self.at("("):
            if name == "sum":
                return self.sum_call(pos)
            if name not in FUNCTIONS:
                raise UnknownFunctionError(f"unknown function {name!r}", token.line, token.column, name)
            return self.call(name, token)

        if name in RESERVED:
            raise self.error(f"{name!r} must be called with arguments", token)

        if name not in self.scope:
            raise UnboundVariableError(f"unbound variable {name!r}", token.line, token.column, name)

        return Var(name, pos)

    def call(self, name: str, token: Token) -> Call:
        self.expect("(")
        args = [self.expr()]
        while self.at(","):
            self.advance()
            args.append(self.expr())
        self.expect(")")

        if len(args) != FUNCTIONS[name]:
            raise self.error(f"{name} takes {FUNCTIONS[name]} argument(s), got {len(args)}", token)

        return Call(name, tuple(args), (token.line, token.column))

    def sum_call(self, pos: Position) -> Sum:
        self.expect("(")
        var_token = self.current

        if var_token.kind != "ident":
            raise self.error("expected the summation variable")
        if var_token.text in RESERVED:
            raise self.error(f"{var_token.text!r} cannot be a summation variable", var_token)

        self.advance()
        self.expect("=")
        lo = self.expr()
        self.expect("..")
        hi = self.expr()
        self.expect(",")

        self.scope.append(var_token.text)
        body = self.expr()
        self.scope.pop()

        self.expect(")")
        return Sum(var_token.text, lo, hi, body, pos)


def parse(text: str, line: int = 1, column: int = 1) -> IdentityAST:
    return Parser(tokenize(text, line, column)).identity()


def parse_expr(text: str, line: int = 1, column: int = 1) -> Node:
    parser = Parser(tokenize(text, line, column))
    node = parser.expr()
    parser.expect_end()
    return node


# ---------------------------------------------------------------- render

_PRECEDENCE = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 4}


def _precedence(node: Node) -> int:
    if isinstance(node, BinOp):
        return _PRECEDENCE[node.op]
    if isinstance(node, Neg):
        return 3
    return 5


def _wrap(node: Node, parens: bool) -> str:
    text = render_expr(node)
    return f"({text})" if parens else text


def render_expr(node: Node) -> str:
    if isinstance(node, Num):
        return str(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Pi2):
        return "pi2"
    if isinstance(node, Neg):
        return "-" + _wrap(node.operand, _precedence(node.operand) < 4)
    if isinstance(node, Call):
        return f"{node.name}({', '.join(render_expr(arg) for arg in node.args)})"
    if isinstance(node, Sum):
        return f"sum({node.var}={render_expr(node.lo)}..{render_expr(node.hi)}, {render_expr(node.body)})"

    if node.op == "^":
        base = _wrap(node.left, _precedence(node.left) < 5)
        exponent = _wrap(node.right, _precedence(node.right) < 3)
        return f"{base}^{exponent}"

    level = _PRECEDENCE[node.op]
    left = _wrap(node.left, _precedence(node.left) < level)
    right = _wrap(node.right, _precedence(node.right) <= level)
    joiner = f" {node.op} " if level == 1 else node.op
    return f"{left}{joiner}{right}"


def render(ast: IdentityAST) -> str:
    return f"{render_expr(ast.lhs)} == {render_expr(ast.rhs)}"


# ---------------------------------------------------------------- evaluate

def _fail(node: Node, message: str) -> EvaluationError:
    line, column = node.pos
    return EvaluationError(f"{message} in {render_expr(node)!r}", line, column, render_expr(node))


def _as_int(node: Node, value: QPi2, what: str) -> int:
    if not value.is_rational or value.r.denominator != 1:
        raise _fail(node, f"{what} must be an integer, got {value}")
    return value.r.numerator


def _power(node: BinOp, base: QPi2, exponent: int) -> QPi2:
    if abs(exponent) > MAX_EXPONENT:
        raise _fail(node, f"exponent {exponent} is too large")

    if base.is_rational:
        if exponent < 0 and base.r == 0:
            raise _fail(node, "zero raised to a negative power")

        bits = max(base.r.numerator.bit_length(), base.r.denominator.bit_length())
        if bits > 1 and abs(exponent) * bits > MAX_POWER_BITS:
            raise _fail(node, f"power with about {abs(exponent) * bits} bits is too large")

        return QPi2(base.r ** exponent)

    # a pi^2 term squared needs pi^4
    if exponent == 0:
        return QPi2(1)
    if exponent == 1:
        return base
    raise _fail(node, f"power {exponent} of a pi^2 term is not representable")


def _divide(node: BinOp, left: QPi2, right: QPi2) -> QPi2:
    if right.is_rational:
        if right.r == 0:
            raise _fail(node, "division by zero")
        return left.scale(1 / right.r)

    # (a*pi^2) / (b*pi^2) is the only quotient by a pi^2 term that stays in QPi2
    if right.r == 0 and left.r == 0:
        return QPi2(left.p / right.p)

    raise _fail(node, "division by a pi^2 term is not representable")


def _call(node: Call, args: list[int]) -> QPi2:
    for value in args:
        if abs(value) > MAX_ARGUMENT:
            raise _fail(node, f"argument {value} is too large")

    if node.name == "binom":
        return QPi2(binomial(args[0], args[1]))
    if node.name == "fact":
        return QPi2(factorial(args[0]))
    if node.name == "dfact":
        return QPi2(double_factorial(args[0]))
    if node.name == "catalan":
        return QPi2(catalan(args[0]))
    return trigamma_half_integer(args[0])


def evaluate(node: Node, env: dict[str, int]) -> QPi2:
    try:
        return _evaluate(node, env)
    except RecursionError:
        raise _fail(node, "expression nested too deeply")


def _evaluate(node: Node, env: dict[str, int]) -> QPi2:
    if isinstance(node, Num):
        return QPi2(node.value)

    if isinstance(node, Var):
        if node.name not in env:
            raise _fail(node, f"unbound variable {node.name!r}")
        return QPi2(env[node.name])

    if isinstance(node, Pi2):
        return QPi2(0, 1)

    if isinstance(node, Neg):
        return -_evaluate(node.operand, env)

    if isinstance(node, Call):
        args = [_as_int(arg, _evaluate(arg, env), f"argument of {node.name}") for arg in node.args]
        try:
            return _call(node, args)
        except EvaluationError:
            raise
        except ArcsineError as err:
            raise _fail(node, str(err))

    if isinstance(node, Sum):
        lo = _as_int(node.lo, _evaluate(node.lo, env), "sum bound")
        hi = _as_int(node.hi, _evaluate(node.hi, env), "sum bound")
        if hi - lo >= MAX_SUM_TERMS:
            raise _fail(node, f"sum over {hi - lo + 1} terms is too long")
        total = QPi2(0)
        for k in range(lo, hi + 1):
            total = total + _evaluate(node.body, {**env, node.var: k})
        return total

    left = _evaluate(node.left, env)
    right = _evaluate(node.right, env)

    if node.op == "+":
        return left + right
    if node.op == "-":
        return left - right
    if node.op == "/":
        return _divide(node, left, right)
    if node.op == "^":
        return _power(node, left, _as_int(node.right, right, "exponent"))

    try:
        return left * right
    except ArcsineError as err:
        raise _fail(node, str(err))


def evaluate_identity(ast: IdentityAST, n: int) -> tuple[QPi2, QPi2]:
    env = {FREE_VARIABLE: n}
    return evaluate(ast.lhs, env), evaluate(ast.rhs, env)


def verify_ast(
    ast: IdentityAST,
    n_lo: int,
    n_hi: int,
    name: str = "dsl",
    keep_going: bool = False,
    jobs: int = 1,
) -> VerifyReport:
    """Sweep a parsed identity; evaluation errors become failures at the offending n."""
    return run_sweep(
        name,
        None,
        lambda n: evaluate_identity(ast, n),
        n_lo,
        n_hi,
        keep_going=keep_going,
        jobs=jobs,
        catch=(EvaluationError,),
    )


# ---------------------------------------------------------------- files

class NamedIdentity(NamedTuple):
    name: str
    ast: IdentityAST
    line: int


_NAME_RE = re.compile(r"^(\s*)([A-Za-z][\w.\[\]-]*)\s*:")


def parse_identity_lines(text: str) -> list[NamedIdentity]:
    """One identity per line with an optional 'name:' prefix; blank and comment lines skipped."""
    entries = []

    for number, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue

        name = f"line{number}"
        column = 1
        match = _NAME_RE.match(body)

        if match is not None:
            name = match.group(2)
            column = match.end() + 1
            body = body[match.end():]

        entries.append(NamedIdentity(name, parse(body, number, column), number))

    logger.info(f"Parsed {len(entries)} identities")
    return entries


def load_identity_file(path: str) -> list[NamedIdentity]:
    with open(path, "rb") as fp:
        data = fp.read()

    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as err:
        before = data[:err.start]
        line_start = before.rfind(b"\n") + 1
        column = len(before[line_start:].decode("utf-8", errors="replace")) + 1
        raise LexicalError(
            f"{path}: invalid UTF-8 byte 0x{data[err.start]:02x}",
            before.count(b"\n") + 1,
            column,
        ) from err

    return parse_identity_lines(text)


BUILTIN_CORPUS = os.path.join(os.path.dirname(__file__), "data", "builtin_identities.txt")


def builtin_corpus() -> list[NamedIdentity]:
    """Every built-in identity that the language can express, keyed by its report label."""
    return load_identity_file(BUILTIN_CORPUS)
