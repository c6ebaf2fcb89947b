# core/limits.py
"""
Motores de forma fechada para o ciclo limite [R_F^0(V)]:

- direção geral (gcd(F0, F1) = 1);
- direção quase geral (só os fatores múltiplos precisam ser primos a F1);
- motor de adaptações: derivações adaptadas a cada componente de F(0),
  com as instâncias das demonstrações (quase geral e Zeuthen) como construções.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import List, Optional, Sequence, Tuple

from sympy import Rational

from core.cycles import CycleExpr
from core.factorization import Factor, Factorization
from core.foliation import (
    DerivationFamily,
    is_F_derivation,
    is_prime_to,
    jacobi_family,
    poly_equiv_check_series,
    proj_equiv_check_series,
    reduced_derivation,
    wronskian,
)
from core.logs import get_logger, warn_event
from core.polyring import HPoly, coprime, gcd
from core.powerseries import HSeries, VFamily
from core.ramification import LinearSystem, is_finite_ramification
from core.validators import (
    DegenerateDerivation,
    HypothesisCheck,
    InfiniteRamification,
    record,
    require,
)

logger = get_logger("ramlim.limites")

Transcript = Optional[List[HypothesisCheck]]


def expected_degree(p: int, r: int, d: int) -> int:
    """Grau do ciclo de ramificação genérico: p(r+1)d + C(r+1,2)·p(p−3)."""
    return p * (r + 1) * d + comb(r + 1, 2) * p * (p - 3)


def first_order_term(F: HSeries) -> HPoly:
    return F[1] if F.order > 1 else HPoly.zero()


def check_components(components: Sequence[HPoly], V0: Sequence[HPoly], transcript: Transcript) -> None:
    """V(0) não degenerado em cada componente declarada."""
    system = LinearSystem(tuple(V0))
    for E in components:
        if E.is_constant:
            continue
        require(
            transcript,
            "degenerate_system",
            is_finite_ramification(E, system),
            f"V(0) é degenerado na componente {E}",
            error=InfiniteRamification,
            factor=str(E),
        )


def _closed_formula(fac: Factorization, F1: HPoly, V0: Sequence[HPoly], r: int) -> CycleExpr:
    b = comb(r + 1, 2)
    out = CycleExpr()
    fs = fac.factors
    for f in fs:
        out = out + CycleExpr.ramification(f.E, V0, f.e)
    for i, fi in enumerate(fs):
        for fj in fs[i + 1:]:
            out = out + CycleExpr.intersection(fi.E, fj.E, b * (fi.e + fj.e))
    for f in fs:
        out = out + CycleExpr.intersection(f.E, F1, b * (f.e - 1))
    return out


def limit_general_direction(
    F: HSeries, fac: Factorization, V: VFamily, transcript: Transcript = None
) -> CycleExpr:
    F0, F1 = F[0], first_order_term(F)
    fac.validate(F0, transcript)
    require(
        transcript,
        "gcd_F0_F1",
        not F1.is_zero and coprime(F0, F1),
        "gcd(F0, F1) ≠ 1",
        gcd=str(gcd(F0, F1)),
    )
    V0 = V.at_zero()
    check_components([f.E for f in fac.factors], V0, transcript)
    return _closed_formula(fac, F1, V0, V.r)


def limit_quasi_general(
    F: HSeries, fac: Factorization, V: VFamily, transcript: Transcript = None
) -> CycleExpr:
    F0, F1 = F[0], first_order_term(F)
    fac.validate(F0, transcript)
    for f in fac.factors:
        if f.e > 1:
            require(
                transcript,
                "gcd_multiple_factor_F1",
                not F1.is_zero and coprime(f.E, F1),
                f"o fator múltiplo {f.E} divide F1",
                factor=str(f.E),
            )
    V0 = V.at_zero()
    check_components([f.E for f in fac.factors], V0, transcript)
    return _closed_formula(fac, F1, V0, V.r)


# ---------------------------------------------------------------------------
# Adaptações
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AdaptationEntry:
    """Dados por componente: ∂_i adaptada a E_i, com ∂_i ≡ H_i·∂ e H_i^p ≡ K_i módulo F."""

    factor: Factor
    D: DerivationFamily
    H: HSeries
    K: HSeries


@dataclass
class AdaptationData:
    D: DerivationFamily
    p: int
    entries: Tuple[AdaptationEntry, ...]
    auxiliary: CycleExpr = field(default_factory=CycleExpr)

    def factorization(self) -> Factorization:
        return Factorization(tuple(e.factor for e in self.entries))


def validate_adaptation(
    F: HSeries,
    V: VFamily,
    ad: AdaptationData,
    depth: int = 2,
    max_shift: int = 4,
    transcript: Transcript = None,
) -> List[dict]:
    """
    Condições exatas (F-derivações, adaptação, K_i(0) primo a E_i) e as
    equivalências módulo F verificadas por truncamento; depth = 0 não verifica.
    """
    require(transcript, "not_F_derivation", is_F_derivation(ad.D, F), "∂ não é uma F(t)-derivação")
    evidence: List[dict] = []
    for entry in ad.entries:
        E = entry.factor.E
        require(
            transcript,
            "not_F_derivation",
            is_F_derivation(entry.D, F),
            f"a derivação associada a {E} não é uma F(t)-derivação",
            factor=str(E),
        )
        require(
            transcript,
            "not_adapted",
            is_prime_to(entry.D.at_zero(), E),
            f"a derivação não está adaptada a {E}",
            factor=str(E),
        )
        K0 = entry.K[0]
        require(
            transcript,
            "gcd_K_factor",
            not K0.is_zero and (K0.is_constant or coprime(K0, E)),
            f"K(0) não é primo a {E}",
            factor=str(E),
        )
        checks = (
            ("derivation_equivalence", lambda: proj_equiv_check_series(entry.D, ad.D.scale(entry.H), F, depth, max_shift)),
            ("power_equivalence", lambda: poly_equiv_check_series(entry.H ** ad.p, entry.K, F, depth, max_shift)),
        )
        for name, check in checks:
            found = check() if depth > 0 else None
            if found is not None:
                detail = f"verificada até a ordem {found.order}"
                evidence.append({"factor": str(E), "condition": name, "status": "verified", **found.to_report()})
            else:
                detail = "assumida pelo chamador"
                warn_event(logger, "equivalencia_assumida", factor=str(E), condition=name, depth=depth)
                evidence.append({"factor": str(E), "condition": name, "status": "caller-asserted"})
            record(transcript, name, True, detail)
    return evidence


def limit_adapted(
    F: HSeries,
    fac: Factorization,
    V: VFamily,
    ad: AdaptationData,
    order: Optional[int] = None,
    depth: int = 2,
    max_shift: int = 4,
    transcript: Transcript = None,
    evidence: Optional[List[dict]] = None,
) -> CycleExpr:
    """Σ e_i[W_{∂_i(0)}(V(0))·E_i] − (1/p)·C(r+1,2)·Σ e_i[K_i(0)·E_i]."""
    if order is not None:
        F = F.truncate(order)
    fac.validate(F[0], transcript)
    declared = {f.E.normalized(): f.e for f in fac.factors}
    for entry in ad.entries:
        require(
            transcript,
            "invalid_factorization",
            declared.get(entry.factor.E.normalized()) == entry.factor.e,
            f"a adaptação cita {entry.factor.E} fora da fatoração declarada",
        )
    V0 = V.at_zero()
    check_components([f.E for f in fac.factors], V0, transcript)
    found = validate_adaptation(F, V, ad, depth, max_shift, transcript)
    if evidence is not None:
        evidence.extend(found)
    b = comb(V.r + 1, 2)
    out = CycleExpr()
    for entry in ad.entries:
        E, e = entry.factor.E, entry.factor.e
        D0 = entry.D.at_zero()
        if D0.is_zero:
            raise DegenerateDerivation("zero_derivation", f"∂_i(0) nula para {E}", {"factor": str(E)})
        W = wronskian(D0, V0)
        require(
            transcript,
            "degenerate_wronskian",
            not W.is_zero and coprime(W, E),
            f"W_{{∂_i(0)}}(V(0)) é divisível por {E}",
            factor=str(E),
        )
        out = out + CycleExpr.intersection(W, E, e)
        K0 = entry.K[0]
        if not K0.is_constant:
            out = out - CycleExpr.intersection(K0, E, Rational(b * e, ad.p))
    return out


def quasi_general_adaptation(
    F: HSeries, fac: Factorization, V: VFamily, H: HPoly, transcript: Transcript = None
) -> AdaptationData:
    """
    ∂ = A2·∂_{F(t),H}; ∂_i = ∂ (e_i = 1, H_i = K_i = 1) ou ∂_3 = H·∂_2(t)
    com ∂_2 a derivação reduzida (e_i > 1, H_i = K_i = A1); p = 1.
    Ciclo auxiliar: C(r+1,2)·([A2·F1] + [H·F0]).
    """
    F0, F1 = F[0], first_order_term(F)
    fac.validate(F0, transcript)
    require(transcript, "gcd_H_F0", coprime(H, F0), "H não é primo a F0", H=str(H))
    for f in fac.factors:
        if f.e > 1:
            require(
                transcript,
                "gcd_multiple_factor_F1",
                not F1.is_zero and coprime(f.E, F1),
                f"o fator múltiplo {f.E} divide F1",
                factor=str(f.E),
            )
    A1, A2 = fac.simple_part(), fac.multiple_part()
    D = jacobi_family(F, H).scale(A2)
    order = D.order
    one = HSeries.constant(HPoly.one(), order)
    entries = []
    D3 = None
    for f in fac.factors:
        if f.e == 1:
            entries.append(AdaptationEntry(f, D, one, one))
            continue
        if D3 is None:
            D3 = reduced_derivation(F, fac).scale(H)
        a1 = HSeries.constant(A1, D3.order)
        entries.append(AdaptationEntry(f, D3, a1, a1))
    b = comb(V.r + 1, 2)
    aux = CycleExpr.intersection(A2, F1, b) + CycleExpr.intersection(H, F0, b)
    return AdaptationData(D, 1, tuple(entries), aux)


def limit_via_adaptation(
    F: HSeries,
    V: VFamily,
    ad: AdaptationData,
    depth: int = 2,
    max_shift: int = 4,
    transcript: Transcript = None,
    evidence: Optional[List[dict]] = None,
) -> CycleExpr:
    """Limite do ciclo de ramificação: limit_adapted menos o ciclo auxiliar."""
    cycle = limit_adapted(
        F, ad.factorization(), V, ad, depth=depth, max_shift=max_shift, transcript=transcript, evidence=evidence
    )
    return cycle - ad.auxiliary
