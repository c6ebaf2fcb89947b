# core/validators.py
"""
Violações de hipóteses dos teoremas e o registro (transcript) das verificações.

Cada motor recebe opcionalmente uma lista `transcript` e acrescenta um
`HypothesisCheck` por condição verificada; a primeira condição falha vira
`HypothesisViolation` com um código estável em `condition`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from core.logs import get_logger, log_event

logger = get_logger("ramlim.hipoteses")


class HypothesisViolation(Exception):
    """Hipótese de um teorema não satisfeita pela entrada."""

    def __init__(self, condition: str, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.condition = condition
        self.message = message
        self.details = details or {}

    def to_report(self) -> dict:
        return {
            "condition": self.condition,
            "message": self.message,
            "details": {k: str(v) for k, v in self.details.items()},
        }


class InvalidFactorization(HypothesisViolation):
    pass


class InfiniteRamification(HypothesisViolation):
    pass


class DegenerateDerivation(HypothesisViolation):
    pass


@dataclass
class HypothesisCheck:
    condition: str
    ok: bool
    detail: str = ""
    extra: Dict[str, Any] = field(default_factory=dict)

    def to_report(self) -> dict:
        out = {"condition": self.condition, "ok": self.ok}
        if self.detail:
            out["detail"] = self.detail
        return out


def record(transcript: Optional[List[HypothesisCheck]], condition: str, ok: bool, detail: str = "") -> None:
    if transcript is not None:
        transcript.append(HypothesisCheck(condition, ok, detail))
    log_event(logger, "hipotese_ok" if ok else "hipotese_falhou", condition=condition, detail=detail)


def require(
    transcript: Optional[List[HypothesisCheck]],
    condition: str,
    ok: bool,
    message: str,
    error: type = HypothesisViolation,
    **details: Any,
) -> None:
    """Registra a verificação e levanta `error` se ela falhou."""
    record(transcript, condition, ok, "" if ok else message)
    if not ok:
        raise error(condition, message, details)
