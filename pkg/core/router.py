# core/router.py
"""
Escolha do motor e montagem das fatorações declaradas de um job.

Ordem de decisão (quando --engine/options.engine não fixam o motor):
desdobramento E²A declarado -> zeuthen; gcd(F0, F1) = 1 -> general; senão quasi.
"""
from __future__ import annotations

from typing import Optional, Tuple

from core.factorization import Factor, Factorization
from core.grammar import parse_poly
from core.logs import get_logger, log_event
from core.polyring import HPoly, coprime, is_squarefree
from core.powerseries import HSeries
from core.schemas import JobSpec
from core.validators import HypothesisViolation, InvalidFactorization
from util.text import normalize_expression

logger = get_logger("ramlim.router")

ENGINES = ("general", "quasi", "zeuthen", "adapted")


class Router:
    def __init__(self, configs: dict):
        self.configs = configs

    # -------------------------------
    # Helpers
    # -------------------------------
    @staticmethod
    def _parse(text: str) -> HPoly:
        return parse_poly(normalize_expression(text))

    # -------------------------------
    # Público
    # -------------------------------
    def zeuthen_split(self, job: JobSpec) -> Optional[Tuple[Factorization, HPoly]]:
        if job.zeuthen is None:
            return None
        E_fac = Factorization(tuple(Factor(self._parse(e), 1) for e in job.zeuthen.E))
        return E_fac, self._parse(job.zeuthen.A)

    def factorization(self, job: JobSpec, F0: HPoly) -> Factorization:
        if job.factorization:
            return Factorization(
                tuple(Factor(self._parse(f.factor), f.mult, f.irreducible) for f in job.factorization)
            )
        split = self.zeuthen_split(job)
        if split is not None:
            E_fac, A = split
            factors = [Factor(f.E, 2) for f in E_fac.factors]
            if not A.is_constant:
                factors.append(Factor(A, 1))
            return Factorization(tuple(factors))
        # sem fatoração declarada: só aceitamos F0 reduzido, como fator único
        if is_squarefree(F0):
            return Factorization.single(F0)
        raise InvalidFactorization(
            "invalid_factorization",
            "F(0) tem fator múltiplo: declare a fatoração ('factorization' ou 'zeuthen')",
            {"F0": str(F0)},
        )

    def select_engine(self, job: JobSpec, F: HSeries, requested: Optional[str] = None) -> str:
        engine = requested or job.options.engine
        if engine is not None:
            if engine not in ENGINES:
                raise ValueError(f"motor desconhecido: {engine}")
            if engine == "zeuthen" and job.zeuthen is None:
                raise HypothesisViolation(
                    "zeuthen_split", "o motor zeuthen exige o desdobramento F(0) = E²A ('zeuthen')"
                )
            reason = "pedido"
        elif job.zeuthen is not None:
            engine, reason = "zeuthen", "desdobramento E²A declarado"
        else:
            F1 = F[1] if F.order > 1 else HPoly.zero()
            if not F1.is_zero and coprime(F[0], F1):
                engine, reason = "general", "gcd(F0, F1) = 1"
            else:
                engine, reason = "quasi", "gcd(F0, F1) ≠ 1"
        log_event(logger, "motor_escolhido", engine=engine, reason=reason, job=job.name)
        return engine
