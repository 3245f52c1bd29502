"""A small language for one-forms: ``a* d(a)``, ``(b b*)^2 b delta(b*)``, ``(3*q^2+1)/2 * a d(a*)``.

Atoms are numbers, ``q``, the generators ``a a* b b*``, ``d(...)``/``delta(...)``
and parenthesized subexpressions; juxtaposition and ``*`` multiply, ``/``
divides by scalars, ``^`` takes integer powers.  Parsing gives an AST; lowering
evaluates it to a presentation sum x d(y) and the corresponding OneForm.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .oneform import OneForm
from .pbw import AlgebraElement, gen, multiply
from .qfield import ParseError, QScalar, qpow

__all__ = [
    "ParseError",
    "Num",
    "QVar",
    "Gen",
    "Pow",
    "Mul",
    "Div",
    "Add",
    "Neg",
    "Diff",
    "parse",
    "to_text",
    "lower",
    "Lowered",
    "parse_form",
]


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class QVar:
    pass


@dataclass(frozen=True)
class Gen:
    name: str


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exp: int


@dataclass(frozen=True)
class Mul:
    factors: tuple["Node", ...]


@dataclass(frozen=True)
class Div:
    num: "Node"
    den: "Node"


@dataclass(frozen=True)
class Add:
    terms: tuple[tuple[int, "Node"], ...]  # (sign, node)


@dataclass(frozen=True)
class Neg:
    arg: "Node"


@dataclass(frozen=True)
class Diff:
    kind: str  # 'd' or 'delta'
    arg: "Node"


Node = Union[Num, QVar, Gen, Pow, Mul, Div, Add, Neg, Diff]

# "a*" directly followed by the star is the adjoint; multiplication after a
# generator needs whitespace: "a * b".
_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<delta>delta|δ)(?=\s*\()|(?P<d>d)(?=\s*\()|(?P<gen>[ab])(?P<star>[*∗])?"
    r"|(?P<q>q)|(?P<op>[-−+*/^()]))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos:].lstrip()[:1]!r}", pos)
        start = m.start(m.lastgroup) if m.lastgroup else pos
        if m.group("num"):
            toks.append(("num", m.group("num"), start))
        elif m.group("delta"):
            toks.append(("diff", "delta", start))
        elif m.group("d"):
            toks.append(("diff", "d", start))
        elif m.group("gen"):
            name = m.group("gen") + ("*" if m.group("star") else "")
            toks.append(("gen", name, m.start("gen")))
        elif m.group("q"):
            toks.append(("q", "q", start))
        else:
            op = m.group("op").replace("−", "-")
            toks.append(("op", op, m.start("op")))
        pos = m.end()
    toks.append(("eof", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, op: str):
        kind, tok, pos = self.take()
        if (kind, tok) != ("op", op):
            raise ParseError(f"expected {op!r}, found {tok or 'end of input'!r}", pos)

    def expr(self) -> Node:
        terms = []
        sign = 1
        kind, tok, _ = self.peek()
        if (kind, tok) in (("op", "-"), ("op", "+")):
            self.take()
            sign = -1 if tok == "-" else 1
        terms.append((sign, self.term()))
        while True:
            kind, tok, _ = self.peek()
            if kind == "op" and tok in "+-":
                self.take()
                terms.append((-1 if tok == "-" else 1, self.term()))
            else:
                break
        if len(terms) == 1 and terms[0][0] == 1:
            return terms[0][1]
        if len(terms) == 1:
            return Neg(terms[0][1])
        return Add(tuple(terms))

    def term(self) -> Node:
        factors = [self.power()]
        while True:
            kind, tok, _ = self.peek()
            if (kind, tok) == ("op", "*"):
                self.take()
                factors.append(self.power())
            elif (kind, tok) == ("op", "/"):
                self.take()
                num = factors[0] if len(factors) == 1 else Mul(tuple(factors))
                factors = [Div(num, self.power())]
            elif kind in ("num", "gen", "q", "diff") or (kind, tok) == ("op", "("):
                factors.append(self.power())
            else:
                break
        return factors[0] if len(factors) == 1 else Mul(tuple(factors))

    def power(self) -> Node:
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            sign = 1
            if self.peek()[:2] == ("op", "-"):
                self.take()
                sign = -1
            kind, tok, pos = self.take()
            if kind != "num":
                raise ParseError("expected an integer exponent", pos)
            return Pow(base, sign * int(tok))
        return base

    def atom(self) -> Node:
        kind, tok, pos = self.take()
        if kind == "num":
            return Num(int(tok))
        if kind == "q":
            return QVar()
        if kind == "gen":
            return Gen(tok)
        if kind == "diff":
            self.expect("(")
            inner = self.expr()
            self.expect(")")
            return Diff(tok, inner)
        if (kind, tok) == ("op", "("):
            inner = self.expr()
            self.expect(")")
            return inner
        raise ParseError(f"unexpected {tok or 'end of input'!r}", pos)


def parse(text: str) -> Node:
    p = _Parser(text)
    node = p.expr()
    kind, tok, pos = p.peek()
    if kind != "eof":
        raise ParseError(f"trailing input {tok!r}", pos)
    _check_nesting(node, False)
    return node


def _check_nesting(node: Node, inside: bool) -> None:
    if isinstance(node, Diff):
        if inside:
            raise ParseError("nested differential: d(...) inside d(...) is a two-form", 0)
        _check_nesting(node.arg, True)
    elif isinstance(node, (Pow, Neg)):
        _check_nesting(node.base if isinstance(node, Pow) else node.arg, inside)
    elif isinstance(node, Mul):
        for f in node.factors:
            _check_nesting(f, inside)
    elif isinstance(node, Div):
        _check_nesting(node.num, inside)
        _check_nesting(node.den, inside)
    elif isinstance(node, Add):
        for _, t in node.terms:
            _check_nesting(t, inside)


def to_text(node: Node) -> str:
    """Print an AST so that ``parse(to_text(n)) == n``."""
    if isinstance(node, Num):
        return str(node.value)
    if isinstance(node, QVar):
        return "q"
    if isinstance(node, Gen):
        return node.name
    if isinstance(node, Pow):
        return f"{_wrap(node.base, atomic=True)}^{node.exp}"
    if isinstance(node, Mul):
        return " * ".join(_wrap(f, atomic=False, in_mul=True) for f in node.factors)
    if isinstance(node, Div):
        return f"{_wrap(node.num, atomic=False, in_div=True)} / {_wrap(node.den, atomic=True)}"
    if isinstance(node, Neg):
        return f"-{_wrap(node.arg, atomic=False, in_mul=True)}"
    if isinstance(node, Add):
        parts = []
        for k, (sign, t) in enumerate(node.terms):
            s = _wrap(t, atomic=False, in_add=True)
            parts.append(("- " if sign < 0 else "") + s if k == 0 else ("- " if sign < 0 else "+ ") + s)
        return " ".join(parts)
    if isinstance(node, Diff):
        return f"{node.kind}({to_text(node.arg)})"
    raise TypeError(f"not an AST node: {node!r}")


def _wrap(node: Node, atomic: bool, in_mul=False, in_div=False, in_add=False) -> str:
    s = to_text(node)
    simple = isinstance(node, (Num, QVar, Gen, Diff))
    if atomic and not simple:
        return f"({s})"
    if in_mul and isinstance(node, (Mul, Add, Neg, Div)):
        return f"({s})"
    if in_div and isinstance(node, (Add, Neg, Mul)):
        return f"({s})"
    if in_add and isinstance(node, (Add, Neg)):
        return f"({s})"
    return s


# -- lowering ---------------------------------------------------------------


class _Form:
    """Presentation sum x d(y), kept as a list of pairs."""

    def __init__(self, pairs, kind):
        self.pairs = list(pairs)
        self.kind = kind


def _scalar(x) -> QScalar | None:
    if isinstance(x, QScalar):
        return x
    if isinstance(x, AlgebraElement) and set(x.terms) <= {(0, 0, 0)}:
        return x.terms.get((0, 0, 0), QScalar(0))
    return None


def _as_alg(x) -> AlgebraElement:
    return AlgebraElement.scalar(x) if isinstance(x, QScalar) else x


def _mul(x, y):
    if isinstance(x, _Form) and isinstance(y, _Form):
        raise ParseError("product of two one-forms is a two-form; expected a one-form", 0)
    if isinstance(x, _Form):
        z = _as_alg(y)
        pairs = []
        for a, b in x.pairs:
            pairs.append((a, multiply(b, z)))
            pairs.append((-multiply(a, b), z))
        return _Form(pairs, x.kind)
    if isinstance(y, _Form):
        z = _as_alg(x)
        return _Form([(multiply(z, a), b) for a, b in y.pairs], y.kind)
    if isinstance(x, QScalar) and isinstance(y, QScalar):
        return x * y
    return multiply(_as_alg(x), _as_alg(y))


def _add(x, y, sign):
    if isinstance(x, _Form) != isinstance(y, _Form):
        other = y if isinstance(x, _Form) else x
        if _scalar(other) is not None and _scalar(other).is_zero():
            return x if isinstance(x, _Form) else _neg(y) if sign < 0 else y
        raise ParseError("cannot add a one-form and a function", 0)
    if isinstance(x, _Form):
        if x.kind != y.kind and x.pairs and y.pairs:
            raise ParseError("cannot mix d(...) and delta(...) in one expression", 0)
        ys = y.pairs if sign > 0 else [(-a, b) for a, b in y.pairs]
        return _Form(x.pairs + ys, x.kind or y.kind)
    if isinstance(x, QScalar) and isinstance(y, QScalar):
        return x + y if sign > 0 else x - y
    return _as_alg(x) + _as_alg(y) if sign > 0 else _as_alg(x) - _as_alg(y)


def _neg(x):
    if isinstance(x, _Form):
        return _Form([(-a, b) for a, b in x.pairs], x.kind)
    return -x if isinstance(x, QScalar) else -x


def _eval(node: Node):
    if isinstance(node, Num):
        return QScalar(node.value)
    if isinstance(node, QVar):
        return qpow(1)
    if isinstance(node, Gen):
        return gen(node.name)
    if isinstance(node, Pow):
        base = _eval(node.base)
        if isinstance(base, _Form):
            raise ParseError("powers of one-forms are not one-forms", 0)
        s = _scalar(base)
        if s is not None:
            return s**node.exp
        if node.exp < 0:
            raise ParseError("negative powers of generators are not defined", 0)
        out = AlgebraElement.scalar(1)
        for _ in range(node.exp):
            out = multiply(out, base)
        return out
    if isinstance(node, Mul):
        acc = _eval(node.factors[0])
        for f in node.factors[1:]:
            acc = _mul(acc, _eval(f))
        return acc
    if isinstance(node, Div):
        den = _scalar(_eval(node.den))
        if den is None:
            raise ParseError("can only divide by scalars", 0)
        if den.is_zero():
            raise ParseError("division by zero", 0)
        return _mul(_eval(node.num), 1 / den)
    if isinstance(node, Neg):
        return _neg(_eval(node.arg))
    if isinstance(node, Add):
        sign0, t0 = node.terms[0]
        acc = _eval(t0)
        if sign0 < 0:
            acc = _neg(acc)
        for sign, t in node.terms[1:]:
            acc = _add(acc, _eval(t), sign)
        return acc
    if isinstance(node, Diff):
        inner = _eval(node.arg)
        if isinstance(inner, _Form):
            raise ParseError("nested differential", 0)
        return _Form([(AlgebraElement.scalar(1), _as_alg(inner))], node.kind)
    raise TypeError(f"not an AST node: {node!r}")


@dataclass(frozen=True)
class Lowered:
    form: OneForm
    presentation: tuple[tuple[AlgebraElement, AlgebraElement], ...]
    kind: str  # 'd' or 'delta'


def lower(node: Node) -> Lowered:
    val = _eval(node)
    if not isinstance(val, _Form):
        raise ParseError("expression is a function (zero-form), not a one-form", 0)
    pairs = tuple((x, y) for x, y in val.pairs if x.terms and any(k != (0, 0, 0) for k in y.terms))
    return Lowered(OneForm.from_pairs(pairs), pairs, val.kind or "d")


def parse_form(text: str) -> Lowered:
    return lower(parse(text))
