# core/grammar.py
"""
Gramática de entrada dos polinômios.

    expression := term (('+'|'-') term)*
    term       := coeff | coeff '*' monomial | monomial
    monomial   := var ('^' nat)? ('*' var ('^' nat)?)*
    var        := 'X0' | 'X1' | 'X2'
    coeff      := integer | integer '/' positive-integer

Aceitamos também parênteses, sinal inicial e produtos quaisquer de fatores
(superconjunto da gramática acima). Espaços são ignorados. O produto é sempre
explícito ("2*X0", nunca "2X0") e não há variável t: uma família F(t) é a lista
dos seus coeficientes.
"""
from __future__ import annotations

from functools import lru_cache
from typing import List, Sequence

from pyparsing import (
    Forward,
    Literal,
    Optional,
    ParseBaseException,
    ParseFatalException,
    ParserElement,
    Regex,
    Suppress,
    Word,
    ZeroOrMore,
    nums,
)
from sympy import Poly, QQ, Rational

from core.polyring import GENS, HPoly, NonHomogeneousError, Point, as_point


class PolySyntaxError(ValueError):
    """Erro de sintaxe; `position` é o índice (0-based) no texto."""

    def __init__(self, message: str, position: int, text: str):
        self.position = position
        self.text = text
        self.reason = message
        super().__init__(f"erro de sintaxe na posição {position}: {message}")


def _const(value) -> Poly:
    return Poly(value, *GENS, domain=QQ)


def _on_coeff(s, loc, toks):
    num, _, den = toks[0].partition("/")
    if den and int(den) == 0:
        raise ParseFatalException(s, loc, "denominador nulo")
    return _const(Rational(int(num), int(den) if den else 1))


def _on_var(s, loc, toks):
    return Poly(GENS[int(toks[0][1])], *GENS, domain=QQ)


def _on_power(s, loc, toks):
    base = toks[0]
    if len(toks) == 1:
        return base
    return base ** int(toks[1])


def _on_unary(s, loc, toks):
    *signs, value = list(toks)
    return -value if signs.count("-") % 2 else value


def _on_product(s, loc, toks):
    items = list(toks)
    acc = items[0]
    for value in items[1:]:
        acc = acc * value
    return acc


def _on_sum(s, loc, toks):
    items = list(toks)
    acc = items[0]
    for op, value in zip(items[1::2], items[2::2]):
        acc = acc + value if op == "+" else acc - value
    return acc


@lru_cache(maxsize=1)
def make_grammar() -> ParserElement:
    plus = Literal("+")
    minus = Literal("-")
    lparen = Suppress("(")
    rparen = Suppress(")")

    coeff = Regex(r"\d+(?:\s*/\s*\d+)?").set_parse_action(
        lambda s, loc, toks: _on_coeff(s, loc, ["".join(toks[0].split())])
    )
    var = Regex(r"X[012]").set_parse_action(_on_var)
    nat = Word(nums)

    expr = Forward()
    primary = coeff | var | (lparen + expr + rparen)
    power = (primary + Optional(Suppress("^") + nat)).set_parse_action(_on_power)
    unary = (ZeroOrMore(plus | minus) + power).set_parse_action(_on_unary)
    product = (unary + ZeroOrMore(Suppress("*") + unary)).set_parse_action(_on_product)
    expr <<= (product + ZeroOrMore((plus | minus) + product)).set_parse_action(_on_sum)
    return expr


def parse_poly(text: str) -> HPoly:
    if not text or not text.strip():
        raise PolySyntaxError("expressão vazia", 0, text or "")
    try:
        poly = make_grammar().parse_string(text, parse_all=True)[0]
    except ParseBaseException as exc:
        raise PolySyntaxError(str(exc.msg), exc.loc, text) from None
    if not poly.is_zero:
        degrees = sorted({sum(m) for m in poly.monoms()})
        if len(degrees) > 1:
            raise NonHomogeneousError((degrees[0], degrees[1]))
    return HPoly(poly)


def parse_polys(texts: Sequence[str]) -> List[HPoly]:
    return [parse_poly(t) for t in texts]


def parse_rational(value) -> Rational:
    if isinstance(value, int):
        return Rational(value)
    num, _, den = str(value).strip().partition("/")
    try:
        return Rational(int(num), int(den) if den else 1)
    except (ValueError, ZeroDivisionError):
        raise PolySyntaxError(f"racional inválido: {value!r}", 0, str(value)) from None


def parse_point(values: Sequence) -> Point:
    return as_point([parse_rational(v) for v in values])
