# core/factorization.py
"""
Fatorações declaradas F0 = c·∏ E_i^{e_i}.

Não fatoramos polinômios: a fatoração é entrada do usuário e aqui só é
validada (fatores livres de quadrados, dois a dois primos, produto correto).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from core.logs import get_logger, warn_event
from core.polyring import HPoly, content_in, coprime, is_squarefree
from core.validators import HypothesisCheck, InvalidFactorization, record

logger = get_logger("ramlim.fatoracao")


@dataclass(frozen=True)
class Factor:
    E: HPoly
    e: int = 1
    # None = não declarado; False = usuário avisa que é redutível sobre Q
    irreducible: Optional[bool] = None

    def to_report(self) -> dict:
        return {"factor": str(self.E), "mult": self.e}


def looks_reducible(E: HPoly) -> bool:
    """Heurística: conteúdo não trivial em alguma variável revela um fator."""
    if E.degree <= 1:
        return False
    return any(not content_in(E, i).is_constant for i in range(3))


@dataclass(frozen=True)
class Factorization:
    factors: Tuple[Factor, ...]

    @classmethod
    def of(cls, pairs: Sequence[Tuple[HPoly, int]]) -> "Factorization":
        return cls(tuple(Factor(E, e) for E, e in pairs))

    @classmethod
    def single(cls, P: HPoly) -> "Factorization":
        return cls((Factor(P, 1),))

    def product(self) -> HPoly:
        out = HPoly.one()
        for f in self.factors:
            out = out * f.E ** f.e
        return out

    def reduced(self) -> HPoly:
        """∏ E_i."""
        out = HPoly.one()
        for f in self.factors:
            out = out * f.E
        return out

    def simple_part(self) -> HPoly:
        """A1 = ∏_{e_i = 1} E_i."""
        out = HPoly.one()
        for f in self.factors:
            if f.e == 1:
                out = out * f.E
        return out

    def multiple_part(self) -> HPoly:
        """A2 = ∏_{e_i > 1} E_i."""
        out = HPoly.one()
        for f in self.factors:
            if f.e > 1:
                out = out * f.E
        return out

    def validate(self, target: HPoly, transcript: Optional[List[HypothesisCheck]] = None) -> None:
        def fail(message: str, **details) -> None:
            record(transcript, "invalid_factorization", False, message)
            raise InvalidFactorization("invalid_factorization", message, details)

        if not self.factors:
            fail("fatoração vazia")
        for f in self.factors:
            if f.e < 1:
                fail(f"multiplicidade {f.e} inválida", factor=str(f.E))
            if f.E.is_constant:
                fail("fator constante", factor=str(f.E))
            if not is_squarefree(f.E):
                fail(f"fator {f.E} não é livre de quadrados", factor=str(f.E))
        for i, a in enumerate(self.factors):
            for b in self.factors[i + 1:]:
                if not coprime(a.E, b.E):
                    fail(f"fatores {a.E} e {b.E} não são primos entre si", first=str(a.E), second=str(b.E))
        product = self.product()
        if product.degree != target.degree or product.normalized() != target.normalized():
            fail("produto dos fatores difere do polinômio alvo", product=str(product), target=str(target))
        record(transcript, "invalid_factorization", True)
        for f in self.factors:
            if f.irreducible is False or looks_reducible(f.E):
                warn_event(logger, "fator_possivelmente_redutivel", factor=str(f.E))

    def to_report(self) -> list:
        return [f.to_report() for f in self.factors]
