# core/ramification.py
"""
Ciclos de ramificação de sistemas lineares sobre curvas planas fixas,
feixes de retas por um ponto e a fatia da curva dual pela reta dual R^∨.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import reduce
from math import comb, lcm
from typing import List, Optional, Sequence, Tuple

from sympy import Rational

from core.cycles import ChowForm, CycleExpr, Intersection, RamTerm, chow_equal, cycle_degree, realize_chow
from core.foliation import finite_by_wronskian, jacobi_derivation, wronskian
from core.linalg import coefficient_vector, monomials, nullspace, polys_rank
from core.logs import get_logger, log_event
from core.polyring import (
    CoordChange,
    HPoly,
    Point,
    as_point,
    divides,
    format_point,
    format_rational,
    is_squarefree,
    resultant_x2,
)
from core.validators import HypothesisViolation, InfiniteRamification

logger = get_logger("ramlim.ramificacao")


class PencilExhausted(HypothesisViolation):
    pass


@dataclass(frozen=True)
class LinearSystem:
    basis: Tuple[HPoly, ...]

    def __post_init__(self):
        basis = tuple(self.basis)
        if not basis:
            raise ValueError("sistema linear vazio")
        if len({b.degree for b in basis}) != 1 or any(b.is_zero for b in basis):
            raise ValueError("base com graus distintos ou elemento nulo")
        if polys_rank(basis) != len(basis):
            raise ValueError("base linearmente dependente sobre Q")
        object.__setattr__(self, "basis", basis)

    @property
    def r(self) -> int:
        return len(self.basis) - 1

    @property
    def d(self) -> int:
        return self.basis[0].degree

    def apply_coord_change(self, M: CoordChange) -> "LinearSystem":
        return LinearSystem(tuple(b.apply_coord_change(M) for b in self.basis))

    def to_strings(self) -> List[str]:
        return [str(b) for b in self.basis]


def _divisible_member(Q: HPoly, V: LinearSystem) -> bool:
    """Existe c ≠ 0 com Σ c_k V_k = Q·G? (sistema linear em c e nos coeficientes de G)."""
    dg = V.d - Q.degree
    if dg < 0:
        return False
    monos = monomials(V.d)
    cols = [coefficient_vector(b, monos) for b in V.basis]
    for mono in monomials(dg):
        shifted = Q * HPoly.from_terms({mono: 1})
        cols.append([-x for x in coefficient_vector(shifted, monos)])
    rows = [[col[i] for col in cols] for i in range(len(monos))]
    # V independente: todo vetor não nulo do núcleo tem c ≠ 0
    return bool(nullspace(rows, len(cols)))


def is_finite_ramification(P: HPoly, V: LinearSystem, factors: Sequence[HPoly] = ()) -> bool:
    if P.is_constant:
        raise ValueError("P precisa ser não constante")
    if not is_squarefree(P):
        return False
    for Q in (P, *factors):
        if not Q.is_constant and _divisible_member(Q, V):
            return False
    return finite_by_wronskian(P, V.basis)


def ramification_cycle(P: HPoly, V: LinearSystem) -> CycleExpr:
    if not is_squarefree(P):
        raise InfiniteRamification("not_square_free", f"{P} não é livre de quadrados", {"P": str(P)})
    if not is_finite_ramification(P, V):
        raise InfiniteRamification(
            "degenerate_system", f"o sistema é degenerado em alguma componente de {P}", {"P": str(P)}
        )
    return CycleExpr.ramification(P, V.basis)


def random_point(seed: int, avoid: Sequence[HPoly] = (), bound: int = 5) -> Point:
    rng = random.Random(seed)
    curves = [P for P in avoid if not P.is_constant]
    for _ in range(1000):
        pt = [rng.randint(-bound, bound) for _ in range(3)]
        if not any(pt):
            continue
        if all(P.evaluate(pt) != 0 for P in curves):
            return as_point(pt)
    raise PencilExhausted("pencil_exhausted", "nenhum ponto fora das curvas foi sorteado")


def _primitive_form(vec: Sequence[Rational]) -> HPoly:
    den = reduce(lcm, (Rational(c).q for c in vec), 1)
    return HPoly.linear([c * den for c in vec])


def linear_forms_through(R: Sequence) -> Tuple[HPoly, HPoly]:
    """Duas retas independentes por R, com coeficientes inteiros."""
    R = as_point(R)
    L1, L2 = (_primitive_form(v) for v in nullspace([list(R)], 3))
    return L1, L2


def pencil_through_point(
    R: Sequence, avoid: Sequence[HPoly] = (), seed: int = 0, max_attempts: int = 50
) -> LinearSystem:
    R = as_point(R)
    L1, L2 = linear_forms_through(R)
    curves = [P for P in avoid if not P.is_constant]
    rng = random.Random(seed)
    for attempt in range(max_attempts):
        # primeira tentativa usa a base do núcleo como está
        if attempt == 0:
            a, b, c, d = 1, 0, 0, 1
        else:
            a, b, c, d = (rng.randint(-2, 2) for _ in range(4))
            if a * d - b * c == 0:
                continue
        basis = (L1 * a + L2 * b, L1 * c + L2 * d)
        if any(divides(L, P) is not None for L in basis for P in curves):
            log_event(logger, "feixe_rejeitado", attempt=attempt, point=format_point(R))
            continue
        return LinearSystem(basis)
    raise PencilExhausted(
        "pencil_exhausted",
        "não há base do feixe cujos membros evitem as curvas dadas",
        {"point": format_point(R)},
    )


def ramification_identity(P: HPoly, V: LinearSystem, Q: HPoly, M: CoordChange) -> bool:
    """Res(W_{∂_{P,Q}}(V), P) = Chow(R_P(V))·Res(Q, P)^{C(r+1,2)} como formas normalizadas."""
    Pm, Qm = P.apply_coord_change(M), Q.apply_coord_change(M)
    Vm = V.apply_coord_change(M)
    left = resultant_x2(wronskian(jacobi_derivation(Pm, Qm), Vm.basis), Pm, strict=False)
    ram = realize_chow(CycleExpr.ramification(P, V.basis), M, Q)
    right = ram.form * resultant_x2(Qm, Pm, strict=False) ** comb(V.r + 1, 2)
    return chow_equal(ChowForm(left), ChowForm(right))


# ---------------------------------------------------------------------------
# Fatia dual
# ---------------------------------------------------------------------------

@dataclass
class DualSliceReport:
    """C^∨ ∩ R^∨ = Σ n_P (RP)^∨: componentes duais com multiplicidade mais o ciclo de pontos."""

    limit_cycle: CycleExpr
    component_duals: List[Tuple[HPoly, int]]
    pencil_point: Point
    point_cycle: CycleExpr = field(default_factory=CycleExpr)

    def dual_degree(self) -> Rational:
        return cycle_degree(self.limit_cycle)

    def render(self) -> str:
        parts = []
        for curve, mult in self.component_duals:
            body = f"({curve})^∨"
            parts.append(body if mult == 1 else f"{mult}·{body}")
        for m, t in self.point_cycle.terms:
            body = f"{t.render()}^∨"
            a = abs(m)
            body = body if a == 1 else f"{format_rational(a)}·{body}"
            parts.append(f"-{body}" if m < 0 else body)
        text = " + ".join(parts).replace("+ -", "- ") or "0"
        return f"lim dual = {text}"

    def to_report(self) -> dict:
        return {
            "pencil_point": format_point(self.pencil_point),
            "component_duals": [{"curve": str(c), "mult": m} for c, m in self.component_duals],
            "point_cycle": self.point_cycle.to_report(),
            "dual_degree": format_rational(self.dual_degree()),
        }


def dual_slice(
    limit_cycle: CycleExpr,
    components: Optional[Sequence[Tuple[HPoly, int]]] = None,
    R: Optional[Sequence] = None,
) -> DualSliceReport:
    C = limit_cycle.canonical()
    points = CycleExpr((m, t) for m, t in C.terms if isinstance(t, Intersection))
    if components is None:
        # retas não têm curva dual: o termo de ramificação delas tem grau 0
        components = [(t.P, int(m)) for m, t in C.terms if isinstance(t, RamTerm) and t.degree != 0]
    return DualSliceReport(
        limit_cycle=C,
        component_duals=[(P, int(m)) for P, m in components],
        pencil_point=as_point(R) if R is not None else (Rational(0), Rational(0), Rational(1)),
        point_cycle=points,
    )
