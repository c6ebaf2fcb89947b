# core/zeuthen.py
"""
Famílias de Zeuthen F(t) = E²A + F1·t + F2·t² + ...

Para cada componente E_j de E: discriminantes Δ_{k,j}, tipo n_j, a fórmula
fechada do limite e a adaptação (p = 2) usada para conferi-la.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import List, Optional, Tuple

from sympy import Rational

from core.cycles import CycleExpr
from core.factorization import Factor, Factorization
from core.foliation import is_prime_to, jacobi_family, jacobi_series
from core.limits import AdaptationData, AdaptationEntry, Transcript, check_components
from core.logs import get_logger, log_event
from core.polyring import HPoly, coprime, divides, is_squarefree
from core.powerseries import HSeries, TruncationExhausted, VFamily
from core.validators import DegenerateDerivation, require

logger = get_logger("ramlim.zeuthen")


class NoTypeFound(TruncationExhausted):
    """Nenhum Δ_{k,j} escapou de E_j até a ordem disponível."""


@dataclass(frozen=True)
class ZeuthenEntry:
    """Dados de uma componente E_j: B_j = E²A/E_j², tipo n e Δ_1..Δ_n, Δ'_1..Δ'_{n-1}."""

    E: HPoly
    B: HPoly
    n: int
    deltas: Tuple[HPoly, ...]
    reduced: Tuple[HPoly, ...]

    @property
    def last(self) -> HPoly:
        return self.deltas[-1]

    def to_report(self) -> dict:
        return {
            "factor": str(self.E),
            "type": self.n,
            "B": str(self.B),
            "discriminants": [str(d) for d in self.deltas],
            "reduced": [str(d) for d in self.reduced],
        }


@dataclass(frozen=True)
class ZeuthenData:
    E: Factorization
    A: HPoly
    entries: Tuple[ZeuthenEntry, ...]

    def factorization(self) -> Factorization:
        """F(0) = ∏E_j²·A como fatoração declarada."""
        factors = [Factor(f.E, 2, f.irreducible) for f in self.E.factors]
        if not self.A.is_constant:
            factors.append(Factor(self.A, 1))
        return Factorization(tuple(factors))

    def to_report(self) -> dict:
        return {
            "E": self.E.to_report(),
            "A": str(self.A),
            "entries": [e.to_report() for e in self.entries],
        }


def validate_zeuthen_split(
    F0: HPoly, E_fac: Factorization, A: HPoly, transcript: Transcript = None
) -> Factorization:
    """F(0) = E²A com E livre de quadrados, gcd(E, A) = 1 e A reduzido."""
    require(transcript, "zeuthen_split", bool(E_fac.factors), "E sem componentes")
    for f in E_fac.factors:
        require(
            transcript,
            "zeuthen_split",
            f.e == 1,
            f"componente {f.E} de E declarada com multiplicidade {f.e}",
            factor=str(f.E),
        )
    E = E_fac.reduced()
    require(transcript, "zeuthen_split", not A.is_zero, "A nulo")
    if not A.is_constant:
        require(transcript, "zeuthen_split", is_squarefree(A), f"A = {A} não é livre de quadrados", A=str(A))
        require(transcript, "zeuthen_split", coprime(E, A), "gcd(E, A) ≠ 1", E=str(E), A=str(A))
    fac = ZeuthenData(E_fac, A, ()).factorization()
    fac.validate(F0, transcript)
    return fac


def zeuthen_discriminants(F: HSeries, E_j: HPoly, B: HPoly, max_order: int) -> ZeuthenEntry:
    """
    Δ_1 = F1 e Δ_k = B^{k-1}F_k − Σ_{i+r=k} (Δ'_i/2)(Δ'_r/2), enquanto E_j | Δ_{k-1}.
    O tipo é o primeiro k com E_j ∤ Δ_k.
    """
    limit = min(max_order, F.order)
    if limit < 2:
        raise NoTypeFound("a família não tem termo de ordem 1", order=F.order, details={"factor": str(E_j)})
    deltas: List[HPoly] = [F[1]]
    reduced: List[HPoly] = []
    quarter = Rational(1, 4)
    while True:
        k = len(deltas)
        q = divides(E_j, deltas[-1])
        if q is None:
            log_event(logger, "tipo_encontrado", factor=str(E_j), type=k)
            return ZeuthenEntry(E_j, B, k, tuple(deltas), tuple(reduced))
        reduced.append(q)
        if k + 1 >= limit:
            raise NoTypeFound(
                f"tipo de {E_j} não encontrado até a ordem {limit}: "
                "fibra genérica possivelmente não reduzida ou ordem insuficiente",
                order=limit,
                details={"factor": str(E_j), "discriminants": [str(d) for d in deltas]},
            )
        nxt = B ** k * F[k + 1]
        for i in range(1, k + 1):
            r = k + 1 - i
            prod = reduced[i - 1] * reduced[r - 1]
            if not prod.is_zero:
                nxt = nxt - prod * quarter
        deltas.append(nxt)


def _square_root_part(entry: ZeuthenEntry, m: int, order: int) -> HSeries:
    """Q = E·B^{m+1} + Σ_{i=1}^{m+1} (Δ'_i/2)·B^{m+1-i}·t^i."""
    B = entry.B
    coeffs = [entry.E * B ** (m + 1)]
    for i in range(1, m + 2):
        coeffs.append(entry.reduced[i - 1] * B ** (m + 1 - i) * Rational(1, 2))
    return HSeries(coeffs, order, coeffs[0].degree)


def zeuthen_congruence(F: HSeries, entry: ZeuthenEntry, n: int) -> bool:
    """B^{2n+1}F − Q² − B^nΔ_{n+2}t^{n+2} ≡ 0 mod t^{n+3}, para 0 ≤ n ≤ tipo − 2."""
    if not 0 <= n <= entry.n - 2:
        raise ValueError(f"n = {n} fora de 0..{entry.n - 2}")
    order = n + 3
    if F.order < order:
        raise TruncationExhausted("ordem insuficiente para a congruência", order=F.order)
    B = entry.B
    Q = _square_root_part(entry, n, order)
    degree = (2 * n + 1) * B.degree + F.degree
    tail = [HPoly.zero()] * (n + 2) + [B ** n * entry.deltas[n + 1]]
    residue = F.truncate(order) * B ** (2 * n + 1) - Q * Q - HSeries(tail, order, degree)
    return residue.is_zero


def zeuthen_profile(
    F: HSeries, E_fac: Factorization, A: HPoly, max_order: int, transcript: Transcript = None
) -> ZeuthenData:
    F0 = F[0]
    validate_zeuthen_split(F0, E_fac, A, transcript)
    E = E_fac.reduced()
    entries = []
    for f in E_fac.factors:
        B = (E ** 2 * A).exquo(f.E ** 2)
        entry = zeuthen_discriminants(F, f.E, B, max_order)
        for n in range(entry.n - 1):
            require(
                transcript,
                "zeuthen_congruence",
                zeuthen_congruence(F, entry, n),
                f"congruência falhou para {f.E}, n = {n}",
                factor=str(f.E),
                n=n,
            )
        entries.append(entry)
    return ZeuthenData(E_fac, A, tuple(entries))


def limit_zeuthen(
    F: HSeries,
    E_fac: Factorization,
    A: HPoly,
    V: VFamily,
    max_order: int = 64,
    transcript: Transcript = None,
    data: Optional[ZeuthenData] = None,
) -> CycleExpr:
    """
    2Σ R_{E_j}(V(0)) + R_A(V(0)) + b·2[E·A] + bΣ[Δ_{n_j,j}·E_j] − bΣ(n_j − 2)[B_j·E_j],
    com b = C(r+1, 2).
    """
    if data is None:
        data = zeuthen_profile(F, E_fac, A, max_order, transcript)
    V0 = V.at_zero()
    check_components([f.E for f in E_fac.factors] + [A], V0, transcript)
    b = comb(V.r + 1, 2)
    E = E_fac.reduced()
    out = CycleExpr()
    for entry in data.entries:
        out = out + CycleExpr.ramification(entry.E, V0, 2)
    out = out + CycleExpr.ramification(A, V0, 1)
    out = out + CycleExpr.intersection(E, A, 2 * b)
    for entry in data.entries:
        out = out + CycleExpr.intersection(entry.last, entry.E, b)
        out = out - CycleExpr.intersection(entry.B, entry.E, b * (entry.n - 2))
    return out


# ---------------------------------------------------------------------------
# Adaptação com p = 2
# ---------------------------------------------------------------------------

def build_zeuthen_adaptation(
    F: HSeries, entry: ZeuthenEntry, H: HPoly, transcript: Transcript = None
) -> AdaptationEntry:
    """
    Tipo 1: ∂'_j = B·∂_{B·D(t), E_j·B}, D(t) = (F(t) − F(0))/t, H_j = B³E_j, K_j = B⁵D(t).
    Tipo n ≥ 2, m = n − 2: B^{2m+1}F = Q1² + t^{m+2}Q2, ∂'_j = B^{2m+1}∂_{Q2,Q1},
    H_j = B^{2(2m+1)}Q1, K_j = B^{4(2m+1)}Q2. Em ambos ∂_j = H·∂'_j.
    """
    E, B = entry.E, entry.B
    if entry.n == 1:
        D = F.tail()
        prime = jacobi_family(D * B, E * B).scale(B)
        order = prime.order
        Hj = HSeries.constant(B ** 3 * E, order)
        Kj = D * B ** 5
    else:
        m = entry.n - 2
        k = 2 * m + 1
        Q1 = _square_root_part(entry, m, F.order)
        Q2 = (F * B ** k - Q1 * Q1).shift(m + 2)
        require(
            transcript,
            "construction_degenerate",
            divides(E, Q2[0]) is None,
            f"{E} divide Q2(0): contradiz o tipo {entry.n}",
            factor=str(E),
        )
        prime = jacobi_series(Q2, Q1).scale(B ** k)
        Hj = Q1 * B ** (2 * k)
        Kj = Q2 * B ** (4 * k)
    D0 = prime.at_zero()
    if D0.is_zero:
        raise DegenerateDerivation("zero_derivation", f"∂'_j(0) nula para {E}", {"factor": str(E)})
    require(
        transcript,
        "not_adapted",
        is_prime_to(D0, E),
        f"∂'_j(0) não está adaptada a {E}",
        factor=str(E),
    )
    return AdaptationEntry(Factor(E, 2), prime.scale(H), Hj, Kj)


def zeuthen_adaptation(
    F: HSeries,
    E_fac: Factorization,
    A: HPoly,
    V: VFamily,
    H: HPoly,
    max_order: int = 64,
    transcript: Transcript = None,
    data: Optional[ZeuthenData] = None,
) -> AdaptationData:
    """∂ = ∂_{F(t),H}, p = 2; A recebe a adaptação trivial. Ciclo auxiliar: C(r+1,2)·[H·F0]."""
    F0 = F[0]
    if data is None:
        data = zeuthen_profile(F, E_fac, A, max_order, transcript)
    require(transcript, "gcd_H_F0", coprime(H, F0), "H não é primo a F0", H=str(H))
    D = jacobi_family(F, H)
    entries = [build_zeuthen_adaptation(F, entry, H, transcript) for entry in data.entries]
    if not A.is_constant:
        one = HSeries.constant(HPoly.one(), D.order)
        entries.append(AdaptationEntry(Factor(A, 1), D, one, one))
    aux = CycleExpr.intersection(H, F0, comb(V.r + 1, 2))
    return AdaptationData(D, 2, tuple(entries), aux)


def dual_components(data: ZeuthenData) -> List[Tuple[HPoly, int]]:
    """Componentes duais do limite: E_j com multiplicidade 2, A com 1."""
    out = [(entry.E, 2) for entry in data.entries if entry.E.degree > 1]
    if data.A.degree > 1:
        out.append((data.A, 1))
    return out
