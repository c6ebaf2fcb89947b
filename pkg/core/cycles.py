# core/cycles.py
"""
Ciclos de dimensão zero formais: combinações Q-lineares de termos de
interseção [P·Q] e de ramificação R_P(V).

A igualdade de ciclos é decidida por projeção: cada termo vira uma forma
binária (resultante em X2 após uma mudança de coordenadas aleatória) e
comparamos as formas normalizadas.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import reduce
from math import comb, gcd as int_gcd, lcm
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from sympy import Rational

from core.foliation import finite_by_wronskian, jacobi_derivation, wronskian
from core.logs import get_logger, log_event
from core.polyring import (
    BinaryForm,
    CoordChange,
    DegenerateProjection,
    HPoly,
    Point,
    coprime,
    format_point,
    format_rational,
    is_squarefree,
    random_coord_change,
    random_linear_form,
    resultant_x2,
)
from core.validators import HypothesisViolation, InfiniteRamification

logger = get_logger("ramlim.ciclos")


# ---------------------------------------------------------------------------
# Termos
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Intersection:
    """[P·Q] com gcd(P, Q) = 1; P e Q guardados normalizados e em ordem canônica."""

    P: HPoly
    Q: HPoly

    kind = "intersection"

    @classmethod
    def of(cls, P: HPoly, Q: HPoly) -> "Intersection":
        if P.is_constant or Q.is_constant:
            raise ValueError("interseção com curva vazia")
        if not coprime(P, Q):
            raise HypothesisViolation(
                "gcd_intersection", f"{P} e {Q} têm fator comum", {"P": str(P), "Q": str(Q)}
            )
        P, Q = sorted((P.normalized(), Q.normalized()), key=str)
        return cls(P, Q)

    @property
    def degree(self) -> int:
        return self.P.degree * self.Q.degree

    def sort_key(self) -> tuple:
        return (0, str(self.P), str(self.Q))

    def to_report(self) -> dict:
        return {"kind": self.kind, "P": str(self.P), "Q": str(self.Q)}

    def render(self) -> str:
        point = linear_meet(self.P, self.Q)
        if point is not None:
            return format_point(point)
        return f"[{self.P} · {self.Q}]"


@dataclass(frozen=True)
class RamTerm:
    """R_P(V): P livre de quadrados e V não degenerado em cada componente."""

    P: HPoly
    basis: Tuple[HPoly, ...]

    kind = "ramification"

    @classmethod
    def of(cls, P: HPoly, basis: Sequence[HPoly]) -> "RamTerm":
        basis = tuple(basis)
        if P.is_constant:
            raise ValueError("ramificação numa curva vazia")
        if not is_squarefree(P):
            raise InfiniteRamification("not_square_free", f"{P} não é livre de quadrados", {"P": str(P)})
        if not finite_by_wronskian(P, basis):
            raise InfiniteRamification(
                "degenerate_system",
                f"o sistema é degenerado em alguma componente de {P}",
                {"P": str(P), "V": [str(b) for b in basis]},
            )
        return cls(P.normalized(), basis)

    @property
    def r(self) -> int:
        return len(self.basis) - 1

    @property
    def d(self) -> int:
        return self.basis[0].degree

    @property
    def degree(self) -> int:
        p = self.P.degree
        return p * (self.r + 1) * self.d + comb(self.r + 1, 2) * p * (p - 3)

    def sort_key(self) -> tuple:
        return (1, str(self.P), tuple(str(b) for b in self.basis))

    def to_report(self) -> dict:
        return {"kind": self.kind, "P": str(self.P), "V": [str(b) for b in self.basis]}

    def render(self) -> str:
        return f"R_{{{self.P}}}(V)"


Term = Union[Intersection, RamTerm]


def linear_meet(P: HPoly, Q: HPoly) -> Optional[Point]:
    """Ponto comum de duas retas, com coordenadas inteiras primitivas."""
    if P.degree != 1 or Q.degree != 1:
        return None
    a = [P.coeff(tuple(int(i == j) for j in range(3))) for i in range(3)]
    b = [Q.coeff(tuple(int(i == j) for j in range(3))) for i in range(3)]
    x = [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
    den = reduce(lcm, (Rational(c).q for c in x), 1)
    ints = [int(c * den) for c in x]
    g = reduce(int_gcd, ints, 0) or 1
    ints = [c // g for c in ints]
    lead = next(c for c in ints if c != 0)
    if lead < 0:
        ints = [-c for c in ints]
    return tuple(Rational(c) for c in ints)


# ---------------------------------------------------------------------------
# CycleExpr
# ---------------------------------------------------------------------------

class CycleExpr:
    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[Tuple[Rational, Term]] = ()):
        self.terms: Tuple[Tuple[Rational, Term], ...] = tuple((Rational(m), t) for m, t in terms)

    @classmethod
    def zero(cls) -> "CycleExpr":
        return cls()

    @classmethod
    def intersection(cls, P: HPoly, Q: HPoly, mult=1) -> "CycleExpr":
        """m·[P·Q]; vazio quando uma das curvas é constante."""
        if P.is_constant or Q.is_constant or mult == 0:
            return cls()
        return cls([(Rational(mult), Intersection.of(P, Q))])

    @classmethod
    def ramification(cls, P: HPoly, basis: Sequence[HPoly], mult=1) -> "CycleExpr":
        if P.is_constant or mult == 0:
            return cls()
        return cls([(Rational(mult), RamTerm.of(P, basis))])

    def canonical(self) -> "CycleExpr":
        merged: dict = {}
        for m, t in self.terms:
            merged[t] = merged.get(t, Rational(0)) + m
        items = [(m, t) for t, m in merged.items() if m != 0]
        items.sort(key=lambda mt: mt[1].sort_key())
        return CycleExpr(items)

    def __add__(self, other: "CycleExpr") -> "CycleExpr":
        if not isinstance(other, CycleExpr):
            return NotImplemented
        return CycleExpr(self.terms + other.terms).canonical()

    def __neg__(self) -> "CycleExpr":
        return CycleExpr((-m, t) for m, t in self.terms)

    def __sub__(self, other: "CycleExpr") -> "CycleExpr":
        if not isinstance(other, CycleExpr):
            return NotImplemented
        return self + (-other)

    def __mul__(self, c) -> "CycleExpr":
        if not isinstance(c, (int, Rational)):
            return NotImplemented
        return CycleExpr((m * c, t) for m, t in self.terms).canonical()

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, CycleExpr):
            return NotImplemented
        return self.canonical().terms == other.canonical().terms

    def __hash__(self) -> int:
        return hash(self.canonical().terms)

    def __len__(self) -> int:
        return len(self.terms)

    def ramification_curves(self) -> List[HPoly]:
        return [t.P for _, t in self.terms if isinstance(t, RamTerm)]

    def degree(self) -> Rational:
        return cycle_degree(self)

    def to_report(self) -> dict:
        c = self.canonical()
        return {
            "terms": [{"mult": format_rational(m), **t.to_report()} for m, t in c.terms],
            "degree": format_rational(cycle_degree(c)),
        }

    def render(self) -> str:
        out = ""
        for m, t in self.canonical().terms:
            a = abs(m)
            body = t.render() if a == 1 else f"{format_rational(a)}·{t.render()}"
            if not out:
                out = f"-{body}" if m < 0 else body
            else:
                out += f" - {body}" if m < 0 else f" + {body}"
        return out or "0"

    def __repr__(self) -> str:
        return f"CycleExpr({self.render()})"


def cycle_degree(C: CycleExpr) -> Rational:
    return sum((m * t.degree for m, t in C.terms), Rational(0))


# ---------------------------------------------------------------------------
# Formas de Chow
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ChowForm:
    """`form` representa a potência e-ésima da projeção do ciclo."""

    form: BinaryForm
    e: int = 1

    def __post_init__(self):
        if self.e < 1:
            raise ValueError("e precisa ser positivo")
        object.__setattr__(self, "form", self.form.normalized())

    @property
    def degree(self) -> int:
        return self.form.degree

    def to_report(self) -> dict:
        return {"form": str(self.form), "e": self.e}


def chow_equal(A: ChowForm, B: ChowForm) -> bool:
    L = lcm(A.e, B.e)
    return (A.form ** (L // A.e)).normalized() == (B.form ** (L // B.e)).normalized()


def random_aux_form(seed: int, avoid: Sequence[HPoly], bound: int = 3) -> HPoly:
    rng = random.Random(seed)
    curves = [P for P in avoid if not P.is_constant]
    for _ in range(1000):
        Q = random_linear_form(rng, bound)
        if all(coprime(Q, P) for P in curves):
            return Q
    raise ValueError("não foi possível sortear forma auxiliar prima às curvas")


def _term_form(term: Term, M: CoordChange, auxQ: HPoly) -> BinaryForm:
    if isinstance(term, Intersection):
        return resultant_x2(term.P.apply_coord_change(M), term.Q.apply_coord_change(M))
    P = term.P.apply_coord_change(M)
    basis = [b.apply_coord_change(M) for b in term.basis]
    Q = auxQ.apply_coord_change(M)
    # (W_{∂_{P,Q}}(V)·P) = R_P(V) + C(r+1, 2)·(Q·P)
    W = wronskian(jacobi_derivation(P, Q), basis)
    numerator = resultant_x2(W, P, strict=False)
    denominator = resultant_x2(Q, P, strict=False) ** comb(term.r + 1, 2)
    return numerator.exquo(denominator)


def realize_chow(C: CycleExpr, M: CoordChange, auxQ: Optional[HPoly] = None, seed: int = 0) -> ChowForm:
    C = C.canonical()
    curves = C.ramification_curves()
    if auxQ is None:
        auxQ = random_aux_form(seed, curves)
    elif any(not coprime(auxQ, P) for P in curves):
        raise ValueError("forma auxiliar não é prima às curvas de ramificação")
    e = reduce(lcm, (m.q for m, _ in C.terms), 1)
    num = BinaryForm.one()
    den = BinaryForm.one()
    for m, term in C.terms:
        k = int(m * e)
        form = _term_form(term, M, auxQ)
        if k > 0:
            num = num * form ** k
        else:
            den = den * form ** (-k)
    return ChowForm(num.exquo(den), e)


def trial_seed(seed: int, trial: int, attempt: int) -> int:
    return seed * 1_000_003 + trial * 1_009 + attempt


def cycles_equal(
    C1: CycleExpr,
    C2: CycleExpr,
    trials: int = 3,
    seed: int = 0,
    bound: int = 3,
    retries: int = 10,
) -> bool:
    if trials < 1:
        raise ValueError("trials >= 1")
    if cycle_degree(C1) != cycle_degree(C2):
        return False
    avoid = C1.ramification_curves() + C2.ramification_curves()
    for trial in range(trials):
        for attempt in range(retries):
            s = trial_seed(seed, trial, attempt)
            M = random_coord_change(s, bound)
            auxQ = random_aux_form(s, avoid, bound)
            try:
                A = realize_chow(C1, M, auxQ)
                B = realize_chow(C2, M, auxQ)
            except DegenerateProjection as exc:
                log_event(logger, "projecao_degenerada", trial=trial, attempt=attempt, **exc.details)
                continue
            if not chow_equal(A, B):
                return False
            break
        else:
            raise DegenerateProjection("orçamento de re-sorteios esgotado", {"trial": trial})
    return True
