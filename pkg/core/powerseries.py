# core/powerseries.py
"""
Séries truncadas em t com coeficientes homogêneos (famílias de curvas e de
sistemas lineares) e séries de formas binárias (formas de Chow sobre Q[[t]]).

Toda série guarda a ordem N até a qual é confiável; operações mistas usam o
mínimo das ordens.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Union

from sympy import Rational

from core.linalg import coefficient_vector, monomials, nullspace, polys_rank
from core.polyring import BinaryForm, CoordChange, HPoly, InexactDivision


@dataclass(frozen=True)
class AtLeast:
    """Valuação desconhecida: todos os coeficientes guardados são nulos."""

    order: int

    def __str__(self) -> str:
        return f"≥ {self.order}"


Valuation = Union[int, AtLeast]


class TruncationExhausted(Exception):
    def __init__(self, message: str, order: int, details: Optional[dict] = None):
        super().__init__(message)
        self.order = order
        self.details = details or {}


class _Series:
    """Base comum: coeficientes c_0..c_{N-1} de um tipo com + - * e exquo."""

    __slots__ = ("order", "coeffs", "degree")
    coeff_type = None

    def __init__(self, coeffs: Sequence, order: int, degree: Optional[int] = None):
        if order < 1:
            raise TruncationExhausted("ordem de truncamento esgotada", order=order)
        cs = list(coeffs)[:order]
        nonzero = [c for c in cs if not c.is_zero]
        if degree is None:
            degree = nonzero[0].degree if nonzero else 0
        for c in nonzero:
            if c.degree != degree:
                raise ValueError(f"coeficiente de grau {c.degree} numa série de grau {degree}")
        zero = self._zero_coeff(degree)
        cs = [zero if c.is_zero else c for c in cs] + [zero] * (order - len(cs))
        self.order = order
        self.coeffs = tuple(cs)
        self.degree = degree

    @classmethod
    def _zero_coeff(cls, degree: int):
        raise NotImplementedError

    def _new(self, coeffs, order, degree=None):
        return type(self)(coeffs, order, degree)

    @classmethod
    def constant(cls, c, order: int):
        return cls([c], order, c.degree if not c.is_zero else None)

    @classmethod
    def from_polys(cls, coeffs: Sequence, order: Optional[int] = None):
        return cls(coeffs, order or max(len(coeffs), 1))

    # -- acesso -------------------------------------------------------------
    def __getitem__(self, i: int):
        return self.coeffs[i]

    def __len__(self) -> int:
        return self.order

    @property
    def is_zero(self) -> bool:
        return all(c.is_zero for c in self.coeffs)

    def at_zero(self):
        return self.coeffs[0]

    def t_valuation(self) -> Valuation:
        for i, c in enumerate(self.coeffs):
            if not c.is_zero:
                return i
        return AtLeast(self.order)

    def truncate(self, order: int):
        return self._new(self.coeffs[:order], min(order, self.order), self.degree)

    def with_order(self, order: int):
        """Trunca ou completa com zeros (famílias polinomiais em t)."""
        return self._new(self.coeffs[:order], order, self.degree)

    def shift(self, k: int):
        """Divide por t^k; os k primeiros coeficientes precisam ser nulos."""
        for i in range(min(k, self.order)):
            if not self.coeffs[i].is_zero:
                raise InexactDivision(f"série não divisível por t^{k}", order=i)
        if k >= self.order:
            raise TruncationExhausted(f"divisão por t^{k} esgota a ordem {self.order}", order=self.order)
        return self._new(self.coeffs[k:], self.order - k, self.degree)

    def times_t(self, k: int):
        """Multiplica por t^k; a ordem confiável sobe k."""
        zero = self._zero_coeff(self.degree)
        return self._new([zero] * k + list(self.coeffs), self.order + k, self.degree)

    # -- aritmética ---------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, type(self)):
            return other
        if isinstance(other, self.coeff_type):
            return self.constant(other, self.order)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        order = min(self.order, other.order)
        if other.is_zero:
            return self.truncate(order)
        if self.is_zero:
            return other.truncate(order)
        return self._new([a + b for a, b in zip(self.coeffs[:order], other.coeffs[:order])], order)

    __radd__ = __add__

    def __neg__(self):
        return self._new([-c for c in self.coeffs], self.order, self.degree)

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
        if isinstance(other, (int, Rational)):
            return self._new([c * other for c in self.coeffs], self.order, self.degree)
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        order = min(self.order, other.order)
        degree = self.degree + other.degree
        zero = self._zero_coeff(degree)
        out = []
        for k in range(order):
            acc = None
            for i in range(k + 1):
                a, b = self.coeffs[i], other.coeffs[k - i]
                if a.is_zero or b.is_zero:
                    continue
                acc = a * b if acc is None else acc + a * b
            out.append(zero if acc is None else acc)
        return self._new(out, order, degree)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("expoente negativo")
        result = self.constant(self.coeff_type.one(), self.order)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, type(self)):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.order, self.coeffs))

    def __repr__(self) -> str:
        parts = [f"({c})·t^{i}" for i, c in enumerate(self.coeffs) if not c.is_zero]
        body = " + ".join(parts) or "0"
        return f"{type(self).__name__}({body} + O(t^{self.order}))"


class HSeries(_Series):
    """F(t) = Σ F_i t^i truncada; todos os F_i homogêneos do mesmo grau."""

    coeff_type = HPoly

    @classmethod
    def _zero_coeff(cls, degree: int):
        return HPoly.zero()

    def __mul__(self, other):
        if isinstance(other, HPoly):
            return self._new([c * other for c in self.coeffs], self.order, self.degree + other.degree)
        return super().__mul__(other)

    __rmul__ = __mul__

    def diff(self, i: int) -> "HSeries":
        return HSeries([c.diff(i) for c in self.coeffs], self.order, max(self.degree - 1, 0))

    def apply_coord_change(self, M: CoordChange) -> "HSeries":
        return HSeries([c.apply_coord_change(M) for c in self.coeffs], self.order, self.degree)

    def tail(self) -> "HSeries":
        """(F(t) - F(0))/t."""
        if self.order < 2:
            raise TruncationExhausted("série sem termo de ordem 1", order=self.order)
        return HSeries(self.coeffs[1:], self.order - 1, self.degree)

    def to_strings(self) -> List[str]:
        return [str(c) for c in self.coeffs]


class FormSeries(_Series):
    """Σ Q_i t^i com Q_i formas binárias de um mesmo grau."""

    coeff_type = BinaryForm

    @classmethod
    def _zero_coeff(cls, degree: int):
        return BinaryForm.zero(degree)


def series_mul(A: HSeries, B: HSeries) -> HSeries:
    return A * B


def t_valuation(A: _Series) -> Valuation:
    return A.t_valuation()


def divide_by_series(A, B):
    """
    Q com B·Q = A até a ordem comum, por divisão exata ordem a ordem.
    Aceita HSeries/FormSeries ou um coeficiente isolado como divisor.
    """
    if not isinstance(B, _Series):
        B = type(A).constant(B, A.order)
    if type(A) is not type(B):
        raise TypeError("séries de tipos distintos")
    order = min(A.order, B.order)
    A, B = A.truncate(order), B.truncate(order)
    vB = B.t_valuation()
    if isinstance(vB, AtLeast):
        raise InexactDivision("divisão por série nula", order=0)
    if vB:
        A, B = A.shift(vB), B.shift(vB)
        order -= vB
    b0 = B[0]
    degree = A.degree - B.degree
    quotient: list = []
    for k in range(order):
        r = A[k]
        for j in range(1, k + 1):
            if not B[j].is_zero and not quotient[k - j].is_zero:
                r = r - B[j] * quotient[k - j]
        try:
            quotient.append(r.exquo(b0))
        except InexactDivision:
            raise InexactDivision(f"divisão inexata na ordem {k + vB}", order=k + vB) from None
    if all(q.is_zero for q in quotient):
        degree = max(degree, 0)
    return type(A)(quotient, order, degree)


# ---------------------------------------------------------------------------
# Famílias de sistemas lineares
# ---------------------------------------------------------------------------

class VFamily:
    """Base saturada de V(t): coeficientes constantes linearmente independentes."""

    __slots__ = ("degree", "order", "basis")

    def __init__(self, basis: Sequence[HSeries]):
        basis = tuple(basis)
        if not basis:
            raise ValueError("família vazia")
        degrees = {b.degree for b in basis}
        if len(degrees) != 1:
            raise ValueError("elementos da base com graus distintos")
        if polys_rank([b[0] for b in basis]) != len(basis):
            raise ValueError("coeficientes constantes dependentes: base não saturada")
        self.degree = degrees.pop()
        self.order = min(b.order for b in basis)
        self.basis = basis

    @classmethod
    def constant(cls, polys: Sequence[HPoly], order: int) -> "VFamily":
        return cls([HSeries.constant(P, order) for P in polys])

    @property
    def r(self) -> int:
        return len(self.basis) - 1

    def at_zero(self):
        return tuple(b[0] for b in self.basis)

    def with_order(self, order: int) -> "VFamily":
        return VFamily([b.with_order(order) for b in self.basis])

    def apply_coord_change(self, M: CoordChange) -> "VFamily":
        return VFamily([b.apply_coord_change(M) for b in self.basis])


def saturate_basis(raw: Sequence[HSeries]) -> VFamily:
    cols = list(raw)
    if not cols:
        raise ValueError("família vazia")
    degree = cols[0].degree
    if any(c.degree != degree and not c.is_zero for c in cols):
        raise ValueError("elementos da base com graus distintos")
    monos = monomials(degree)
    budget = sum(c.order for c in cols) + 1
    for _ in range(budget):
        for c in cols:
            if isinstance(c.t_valuation(), AtLeast):
                raise TruncationExhausted("coluna nula até a ordem guardada", order=c.order)
        vectors = [coefficient_vector(c[0], monos) for c in cols]
        # relações λ com Σ λ_k v_k = 0: núcleo da matriz cujas colunas são os v_k
        rows = [[v[i] for v in vectors] for i in range(len(monos))]
        kernel = nullspace(rows, len(cols))
        if not kernel:
            return VFamily(cols)
        lam = kernel[0]
        j = max(k for k, x in enumerate(lam) if x != 0)
        combo = None
        for k, x in enumerate(lam):
            if x == 0:
                continue
            term = cols[k] * x
            combo = term if combo is None else combo + term
        if isinstance(combo.t_valuation(), AtLeast):
            raise TruncationExhausted(
                "combinação nula até a ordem guardada: entrada dependente", order=combo.order
            )
        cols[j] = combo.shift(1)
    raise TruncationExhausted("saturação não estabilizou", order=min(c.order for c in cols))
