# core/polyring.py
"""
Polinômios homogêneos em X0, X1, X2 com coeficientes racionais exatos.

O núcleo aritmético é o `Poly` do sympy sobre QQ; aqui ficam só as regras do
domínio: homogeneidade, normalização (primeiro coeficiente lexicográfico = 1),
resultante em X2 (projeção a partir de (0:0:1)) e mudanças de coordenadas.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple, Union

from sympy import Matrix, Poly, QQ, Rational, symbols
from sympy.polys.polyerrors import ExactQuotientFailed

X0, X1, X2 = symbols("X0 X1 X2")
GENS = (X0, X1, X2)
BINARY_GENS = (X0, X1)
VAR_NAMES = ("X0", "X1", "X2")

Exps = Tuple[int, ...]
Scalar = Union[int, Rational]
Point = Tuple[Rational, Rational, Rational]


# ---------------------------------------------------------------------------
# Erros
# ---------------------------------------------------------------------------

class NonHomogeneousError(ValueError):
    """Entrada não homogênea; guarda dois graus de termos em conflito."""

    def __init__(self, degrees: Tuple[int, int]):
        self.degrees = degrees
        super().__init__(f"polinômio não homogêneo (graus {degrees[0]} e {degrees[1]})")


class DegenerateProjection(Exception):
    """O centro de projeção (0:0:1) está sobre uma das curvas; o chamador sorteia outra mudança."""

    def __init__(self, message: str, details: Optional[dict] = None):
        super().__init__(message)
        self.details = details or {}


class InexactDivision(ArithmeticError):
    """Divisão exata falhou; `order` é a primeira ordem em t que falhou (quando houver)."""

    def __init__(self, message: str, order: Optional[int] = None, details: Optional[dict] = None):
        super().__init__(message)
        self.order = order
        self.details = details or {}


# ---------------------------------------------------------------------------
# Formatação
# ---------------------------------------------------------------------------

def format_rational(c: Scalar) -> str:
    c = Rational(c)
    return f"{c.p}" if c.q == 1 else f"{c.p}/{c.q}"


def _format_monomial(exps: Exps, names: Sequence[str]) -> str:
    parts = []
    for name, a in zip(names, exps):
        if a == 1:
            parts.append(name)
        elif a > 1:
            parts.append(f"{name}^{a}")
    return "*".join(parts)


def _format_terms(items: Iterable[Tuple[Exps, Rational]], names: Sequence[str]) -> str:
    out = ""
    for exps, c in sorted(items, reverse=True):
        c = Rational(c)
        mono = _format_monomial(exps, names)
        a = abs(c)
        if not mono:
            body = format_rational(a)
        elif a == 1:
            body = mono
        else:
            body = f"{format_rational(a)}*{mono}"
        if not out:
            out = f"-{body}" if c < 0 else body
        else:
            out += f" - {body}" if c < 0 else f" + {body}"
    return out or "0"


# ---------------------------------------------------------------------------
# HPoly
# ---------------------------------------------------------------------------

class HPoly:
    """Polinômio homogêneo em (X0, X1, X2); o zero tem grau 0 por convenção."""

    __slots__ = ("_poly", "_degree")

    def __init__(self, poly: Poly):
        if poly.gens != GENS or poly.domain != QQ:
            poly = Poly(poly.as_expr(), *GENS, domain=QQ)
        if poly.is_zero:
            degree = 0
        else:
            degrees = sorted({sum(m) for m in poly.monoms()})
            if len(degrees) > 1:
                raise NonHomogeneousError((degrees[0], degrees[1]))
            degree = degrees[0]
        self._poly = poly
        self._degree = degree

    # -- construtores -------------------------------------------------------
    @classmethod
    def from_terms(cls, terms: Mapping[Exps, Scalar]) -> "HPoly":
        rep = {tuple(k): Rational(v) for k, v in terms.items() if v != 0}
        if not rep:
            return cls.zero()
        return cls(Poly.from_dict(rep, *GENS, domain=QQ))

    @classmethod
    def from_expr(cls, expr) -> "HPoly":
        return cls(Poly(expr, *GENS, domain=QQ))

    @classmethod
    def zero(cls) -> "HPoly":
        return cls(Poly(0, *GENS, domain=QQ))

    @classmethod
    def const(cls, c: Scalar) -> "HPoly":
        return cls(Poly(Rational(c), *GENS, domain=QQ))

    @classmethod
    def one(cls) -> "HPoly":
        return cls.const(1)

    @classmethod
    def var(cls, i: int) -> "HPoly":
        return cls(Poly(GENS[i], *GENS, domain=QQ))

    @classmethod
    def linear(cls, coeffs: Sequence[Scalar]) -> "HPoly":
        return cls.from_terms({tuple(int(i == j) for j in range(3)): c for i, c in enumerate(coeffs)})

    # -- acesso -------------------------------------------------------------
    @property
    def poly(self) -> Poly:
        return self._poly

    @property
    def degree(self) -> int:
        return self._degree

    @property
    def is_zero(self) -> bool:
        return self._poly.is_zero

    @property
    def is_constant(self) -> bool:
        return self._degree == 0

    def as_expr(self):
        return self._poly.as_expr()

    def terms(self) -> Dict[Exps, Rational]:
        return {m: Rational(c) for m, c in self._poly.as_dict().items()}

    def coeff(self, exps: Exps) -> Rational:
        return self.terms().get(tuple(exps), Rational(0))

    def pure_x2_coeff(self) -> Rational:
        return self.coeff((0, 0, self._degree))

    # -- aritmética ---------------------------------------------------------
    @staticmethod
    def _coerce(other) -> Optional["HPoly"]:
        if isinstance(other, HPoly):
            return other
        if isinstance(other, (int, Rational)):
            return HPoly.const(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if other.is_zero:
            return self
        if self.is_zero:
            return other
        if other._degree != self._degree:
            raise ValueError(f"soma de polinômios de graus distintos ({self._degree} e {other._degree})")
        return HPoly(self._poly + other._poly)

    __radd__ = __add__

    def __neg__(self) -> "HPoly":
        return HPoly(-self._poly)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return HPoly(self._poly * other._poly)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "HPoly":
        if k < 0:
            raise ValueError("expoente negativo")
        return HPoly(self._poly ** k)

    def diff(self, i: int) -> "HPoly":
        return HPoly(self._poly.diff(GENS[i]))

    def gradient(self) -> Tuple["HPoly", "HPoly", "HPoly"]:
        return (self.diff(0), self.diff(1), self.diff(2))

    def exquo(self, other: "HPoly") -> "HPoly":
        if other.is_zero:
            raise ZeroDivisionError("divisão por zero")
        try:
            return HPoly(self._poly.exquo(other._poly))
        except ExactQuotientFailed:
            raise InexactDivision(f"{other} não divide {self}") from None

    def evaluate(self, point: Sequence[Scalar]) -> Rational:
        pt = [Rational(x) for x in point]
        total = Rational(0)
        for (a0, a1, a2), c in self.terms().items():
            total += c * pt[0] ** a0 * pt[1] ** a1 * pt[2] ** a2
        return total

    def normalized(self) -> "HPoly":
        if self.is_zero:
            return self
        return HPoly(self._poly.monic())

    def apply_coord_change(self, M: "CoordChange") -> "HPoly":
        return apply_coord_change(self, M)

    # -- comparação ---------------------------------------------------------
    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._degree == other._degree and self._poly == other._poly

    def __hash__(self) -> int:
        return hash((self._degree, frozenset(self._poly.as_dict().items())))

    def __str__(self) -> str:
        return _format_terms(self.terms().items(), VAR_NAMES)

    def __repr__(self) -> str:
        return f"HPoly({self})"


# ---------------------------------------------------------------------------
# BinaryForm
# ---------------------------------------------------------------------------

class BinaryForm:
    """Forma binária em (X0, X1); carrega ciclos de dimensão zero projetados."""

    __slots__ = ("_poly", "_degree")

    def __init__(self, poly: Poly, degree: Optional[int] = None):
        if poly.gens != BINARY_GENS or poly.domain != QQ:
            poly = Poly(poly.as_expr(), *BINARY_GENS, domain=QQ)
        if poly.is_zero:
            self._degree = degree or 0
        else:
            degrees = sorted({sum(m) for m in poly.monoms()})
            if len(degrees) > 1:
                raise NonHomogeneousError((degrees[0], degrees[1]))
            self._degree = degrees[0]
        self._poly = poly

    @classmethod
    def from_terms(cls, terms: Mapping[Exps, Scalar], degree: Optional[int] = None) -> "BinaryForm":
        rep = {tuple(k): Rational(v) for k, v in terms.items() if v != 0}
        if not rep:
            return cls.zero(degree or 0)
        return cls(Poly.from_dict(rep, *BINARY_GENS, domain=QQ))

    @classmethod
    def zero(cls, degree: int = 0) -> "BinaryForm":
        return cls(Poly(0, *BINARY_GENS, domain=QQ), degree)

    @classmethod
    def one(cls) -> "BinaryForm":
        return cls(Poly(1, *BINARY_GENS, domain=QQ))

    @property
    def degree(self) -> int:
        return self._degree

    @property
    def is_zero(self) -> bool:
        return self._poly.is_zero

    @property
    def poly(self) -> Poly:
        return self._poly

    def coefficients(self) -> list:
        """Coeficientes indexados pelo expoente de X0."""
        d = self._poly.as_dict()
        return [Rational(d.get((k, self._degree - k), 0)) for k in range(self._degree + 1)]

    @staticmethod
    def _coerce(other) -> Optional["BinaryForm"]:
        if isinstance(other, BinaryForm):
            return other
        if isinstance(other, (int, Rational)):
            return BinaryForm(Poly(Rational(other), *BINARY_GENS, domain=QQ))
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if other.is_zero:
            return self
        if self.is_zero:
            return other
        if other._degree != self._degree:
            raise ValueError("soma de formas de graus distintos")
        return BinaryForm(self._poly + other._poly)

    __radd__ = __add__

    def __neg__(self) -> "BinaryForm":
        return BinaryForm(-self._poly, self._degree)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.is_zero or other.is_zero:
            return BinaryForm.zero(self._degree + other._degree)
        return BinaryForm(self._poly * other._poly)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "BinaryForm":
        if k < 0:
            raise ValueError("expoente negativo")
        if k == 0:
            return BinaryForm.one()
        return BinaryForm(self._poly ** k, self._degree * k)

    def exquo(self, other: "BinaryForm") -> "BinaryForm":
        if other.is_zero:
            raise ZeroDivisionError("divisão por forma nula")
        if self.is_zero:
            return BinaryForm.zero(max(self._degree - other._degree, 0))
        try:
            return BinaryForm(self._poly.exquo(other._poly))
        except ExactQuotientFailed:
            raise InexactDivision("divisão de formas binárias não exata") from None

    def normalized(self) -> "BinaryForm":
        if self.is_zero:
            return self
        return BinaryForm(self._poly.monic())

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._poly == other._poly and (not self.is_zero or self._degree == other._degree)

    def __hash__(self) -> int:
        return hash((self._degree, frozenset(self._poly.as_dict().items())))

    def __str__(self) -> str:
        return _format_terms(
            ((m, Rational(c)) for m, c in self._poly.as_dict().items()), VAR_NAMES[:2]
        )

    def __repr__(self) -> str:
        return f"BinaryForm({self})"


# ---------------------------------------------------------------------------
# Mudanças de coordenadas
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoordChange:
    matrix: Tuple[Tuple[Rational, ...], ...]
    inverse: Tuple[Tuple[Rational, ...], ...]

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Scalar]]) -> "CoordChange":
        m = Matrix([[Rational(x) for x in row] for row in rows])
        if m.shape != (3, 3):
            raise ValueError("mudança de coordenadas precisa ser 3x3")
        if m.det() == 0:
            raise ValueError("matriz singular")
        inv = m.inv()
        return cls(
            tuple(tuple(Rational(m[i, j]) for j in range(3)) for i in range(3)),
            tuple(tuple(Rational(inv[i, j]) for j in range(3)) for i in range(3)),
        )

    @classmethod
    def identity(cls) -> "CoordChange":
        return cls.from_rows([[1, 0, 0], [0, 1, 0], [0, 0, 1]])

    def inverted(self) -> "CoordChange":
        return CoordChange(self.inverse, self.matrix)

    def pull_point(self, point: Sequence[Scalar]) -> Point:
        """Coordenadas novas de um ponto antigo: se Q(X) = P(MX), P(y) = 0 sse Q(M⁻¹y) = 0."""
        y = [Rational(c) for c in point]
        return tuple(sum(self.inverse[i][j] * y[j] for j in range(3)) for i in range(3))

    def to_report(self) -> list:
        return [[format_rational(x) for x in row] for row in self.matrix]


def apply_coord_change(P: HPoly, M: CoordChange) -> HPoly:
    """P(M·X): substitui X_i por Σ_j M[i][j]·X_j."""
    if P.is_constant:
        return P
    sub = {GENS[i]: sum(M.matrix[i][j] * GENS[j] for j in range(3)) for i in range(3)}
    return HPoly(Poly(P.as_expr().xreplace(sub), *GENS, domain=QQ))


def random_coord_change(seed: int, bound: int) -> CoordChange:
    if bound < 1:
        raise ValueError("bound deve ser >= 1")
    rng = random.Random(seed)
    while True:
        rows = [[rng.randint(-bound, bound) for _ in range(3)] for _ in range(3)]
        if Matrix(rows).det() != 0:
            return CoordChange.from_rows(rows)


def random_linear_form(rng: random.Random, bound: int = 3) -> HPoly:
    while True:
        coeffs = [rng.randint(-bound, bound) for _ in range(3)]
        if any(coeffs):
            return HPoly.linear(coeffs)


def as_point(coords: Sequence[Scalar]) -> Point:
    pt = tuple(Rational(c) for c in coords)
    if len(pt) != 3 or not any(pt):
        raise ValueError("ponto projetivo precisa de 3 coordenadas não todas nulas")
    return pt


def format_point(point: Sequence[Scalar]) -> str:
    return "(" + ":".join(format_rational(c) for c in point) + ")"


# ---------------------------------------------------------------------------
# gcd, divisibilidade, resultante
# ---------------------------------------------------------------------------

def gcd(P: HPoly, Q: HPoly) -> HPoly:
    if P.is_zero and Q.is_zero:
        raise ValueError("gcd(0, 0) indefinido")
    if Q.is_zero:
        return P.normalized()
    if P.is_zero:
        return Q.normalized()
    return HPoly(P.poly.gcd(Q.poly)).normalized()


def gcd_many(*polys: HPoly) -> HPoly:
    nonzero = [P for P in polys if not P.is_zero]
    if not nonzero:
        raise ValueError("gcd de polinômios todos nulos")
    g = nonzero[0].normalized()
    for P in nonzero[1:]:
        if g.is_constant:
            break
        g = gcd(g, P)
    return g


def coprime(P: HPoly, Q: HPoly) -> bool:
    return gcd(P, Q).is_constant


def divides(P: HPoly, Q: HPoly) -> Optional[HPoly]:
    """Quociente exato Q/P, ou None."""
    if P.is_zero:
        raise ValueError("divisor nulo")
    try:
        return Q.exquo(P)
    except InexactDivision:
        return None


def is_squarefree(P: HPoly) -> bool:
    # fator repetido E² | P  ⇔  E divide P e todas as derivadas parciais
    if P.is_zero:
        raise ValueError("polinômio nulo")
    if P.is_constant:
        return True
    return gcd_many(P, *P.gradient()).is_constant


def content_in(P: HPoly, i: int) -> HPoly:
    """Conteúdo de P visto como polinômio em X_i sobre Q[demais variáveis]."""
    groups: Dict[int, Dict[Exps, Rational]] = {}
    for exps, c in P.terms().items():
        groups.setdefault(exps[i], {})[exps] = c
    return gcd_many(*(HPoly.from_terms(g) for g in groups.values()))


def resultant_x2(P: HPoly, Q: HPoly, strict: bool = True) -> BinaryForm:
    """
    Resultante de Sylvester de P e Q como polinômios em X2 sobre Q[X0, X1].

    Com strict=True ambos precisam ter termo X2-puro (não se anulam em (0:0:1));
    com strict=False só Q é verificado: a forma resultante muda apenas por escalar.
    """
    if P.is_zero or Q.is_zero:
        raise ValueError("resultante com polinômio nulo")
    for name, A in (("P", P), ("Q", Q)) if strict else (("Q", Q),):
        if A.pure_x2_coeff() == 0:
            raise DegenerateProjection(
                f"{name} se anula no centro de projeção (0:0:1)", {"poly": str(A)}
            )
    p = Poly(P.as_expr(), X2, X0, X1, domain=QQ)
    q = Poly(Q.as_expr(), X2, X0, X1, domain=QQ)
    dp, dq = p.degree(X2), q.degree(X2)
    if dp <= 0 or dq <= 0:
        # um dos lados não depende de X2: Res = (esse lado)^(grau do outro)
        base, k = (P, dq) if dp <= 0 else (Q, dp)
        res = Poly(base.as_expr() ** max(k, 0), *BINARY_GENS, domain=QQ)
    else:
        res = Poly(p.resultant(q).as_expr(), *BINARY_GENS, domain=QQ)
    if res.is_zero:
        raise ValueError(f"resultante nula: {P} e {Q} têm fator comum")
    return BinaryForm(res)
