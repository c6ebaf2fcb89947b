# core/schemas.py
from __future__ import annotations

from typing import List, Literal, Optional, Union

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    conint,
    model_validator,
)

Engine = Literal["general", "quasi", "zeuthen", "adapted"]
Command = Literal["ramification", "limit", "dual-limit", "equiv-check"]


class FactorSpec(BaseModel):
    factor: str
    mult: conint(ge=1) = 1
    # false = o usuário sabe que o fator é redutível sobre Q
    irreducible: Optional[bool] = None

    model_config = ConfigDict(extra="forbid")


class ZeuthenSplit(BaseModel):
    """F(0) = E²A: componentes de E e o polinômio A (\"1\" quando ausente)."""

    E: List[str] = Field(min_length=1)
    A: str = "1"

    model_config = ConfigDict(extra="forbid")


class SystemSpec(BaseModel):
    # Use um OU outro: base explícita OU feixe por um ponto
    basis: Optional[List[List[str]]] = Field(
        default=None, description="Base de V(t): cada elemento é a lista V_k(0), V_k(1), ..."
    )
    pencil: Optional[Union[List[str], Literal["random"]]] = None

    model_config = ConfigDict(extra="forbid")

    @model_validator(mode="before")
    @classmethod
    def _basis_shorthand(cls, data):
        # aceita "basis": ["X0", "X1"] como família constante
        if isinstance(data, dict) and isinstance(data.get("basis"), list):
            data = dict(data)
            data["basis"] = [[b] if isinstance(b, str) else b for b in data["basis"]]
        return data

    @model_validator(mode="after")
    def _check_one(self) -> "SystemSpec":
        if (self.basis is None) == (self.pencil is None):
            raise ValueError("Informe 'basis' OU 'pencil' (exatamente um).")
        if self.basis is not None and (not self.basis or any(not b for b in self.basis)):
            raise ValueError("'basis' precisa de elementos não vazios.")
        if isinstance(self.pencil, list) and len(self.pencil) != 3:
            raise ValueError("'pencil' precisa de 3 coordenadas ou \"random\".")
        return self


class JobOptions(BaseModel):
    order: Optional[conint(gt=0)] = None
    trials: Optional[conint(gt=0)] = None
    seed: Optional[int] = None
    engine: Optional[Engine] = None
    auxiliary: Optional[str] = Field(default=None, description="Forma H auxiliar das adaptações")
    verification_depth: Optional[conint(ge=0)] = None

    model_config = ConfigDict(extra="forbid")


class EquivSpec(BaseModel):
    D1: List[str] = Field(min_length=3, max_length=3)
    D2: List[str] = Field(min_length=3, max_length=3)
    F: str

    model_config = ConfigDict(extra="forbid")


class ExpectSpec(BaseModel):
    """Resultado esperado de um job do corpus."""

    degree: Optional[str] = None
    types: Optional[List[int]] = None
    exit_code: int = 0
    verdict: Optional[Literal["all-match", "mismatch", "inconclusive"]] = None
    equivalent: Optional[bool] = None

    model_config = ConfigDict(extra="forbid")


class JobSpec(BaseModel):
    """Um job = um documento JSON; polinômios como texto na gramática de entrada."""

    name: str = "job"
    description: str = ""
    command: Command = "limit"
    family: List[str] = Field(default_factory=list, description="F(0), F(1), ...")
    factorization: Optional[List[FactorSpec]] = None
    zeuthen: Optional[ZeuthenSplit] = None
    system: Optional[SystemSpec] = None
    equiv: Optional[EquivSpec] = None
    options: JobOptions = Field(default_factory=JobOptions)
    expect: Optional[ExpectSpec] = None

    model_config = ConfigDict(extra="forbid")

    @model_validator(mode="after")
    def _check_command(self) -> "JobSpec":
        if self.command == "equiv-check":
            if self.equiv is None:
                raise ValueError("equiv-check exige o bloco 'equiv'.")
            return self
        if not self.family:
            raise ValueError("'family' precisa de ao menos F(0).")
        if self.system is None:
            raise ValueError("'system' é obrigatório para este comando.")
        if self.command == "ramification" and len(self.family) != 1:
            raise ValueError("ramification recebe uma única curva em 'family'.")
        if self.command == "dual-limit" and self.system.pencil is None:
            raise ValueError("dual-limit exige um feixe ('pencil').")
        if self.zeuthen is not None and self.factorization is not None:
            raise ValueError("Informe 'factorization' OU 'zeuthen', não ambos.")
        return self


# ---------------------------------------------------------------------------
# Relatórios
# ---------------------------------------------------------------------------

class TrialReport(BaseModel):
    order_used: Optional[int] = None
    valuation: Optional[int] = None
    match: bool

    model_config = ConfigDict(extra="forbid")


class VerdictReport(BaseModel):
    verdict: Literal["all-match", "mismatch", "inconclusive"]
    trials: List[TrialReport] = Field(default_factory=list)

    model_config = ConfigDict(extra="forbid")


__all__ = [
    "FactorSpec",
    "ZeuthenSplit",
    "SystemSpec",
    "JobOptions",
    "EquivSpec",
    "ExpectSpec",
    "JobSpec",
    "TrialReport",
    "VerdictReport",
]
