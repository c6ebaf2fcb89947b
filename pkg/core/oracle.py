# core/oracle.py
"""
Oráculo t-ádico: calcula o ciclo limite por força bruta.

W(t) = Wronskiano de ∂_{F(t),H} em V(t); A(t) = Res(W(t), F(t)) e
B(t) = Res(H, F(t)) como séries de formas binárias; Q(t) = A(t)/B(t)^b é o
ciclo R_{F(t)}(V(t)) projetado; saturamos por t e lemos o coeficiente Q_v.

As famílias de entrada são polinomiais em t: completar com zeros até a
ordem pedida é exato.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import List, Optional

from sympy import Poly, QQ, symbols

from core.cycles import ChowForm, CycleExpr, chow_equal, random_aux_form, realize_chow, trial_seed
from core.foliation import jacobi_family, wronskian_series
from core.logs import get_logger, log_event, warn_event
from core.polyring import (
    X0,
    X1,
    X2,
    BinaryForm,
    CoordChange,
    DegenerateProjection,
    HPoly,
    InexactDivision,
    coprime,
    random_coord_change,
)
from core.powerseries import AtLeast, FormSeries, HSeries, TruncationExhausted, VFamily, divide_by_series
from core.validators import HypothesisViolation

logger = get_logger("ramlim.oraculo")

T = symbols("T")


@dataclass
class OracleResult:
    chow: ChowForm
    used_order: int
    valuation: int
    coordinate_change: CoordChange
    auxiliary: HPoly

    def to_report(self) -> dict:
        return {
            "chow": self.chow.to_report(),
            "order_used": self.used_order,
            "valuation": self.valuation,
            "coordinate_change": self.coordinate_change.to_report(),
            "auxiliary": str(self.auxiliary),
        }


def _series_expr(P: HSeries):
    return sum((c.as_expr() * T ** i for i, c in enumerate(P.coeffs) if not c.is_zero), 0)


def resultant_series(P: HSeries, F: HSeries, order: int) -> FormSeries:
    """Res_{X2}(P(t), F(t)) com t como variável extra, truncada em t^order."""
    if F[0].pure_x2_coeff() == 0:
        raise DegenerateProjection("F(0) se anula no centro de projeção (0:0:1)", {"poly": str(F[0])})
    if P.is_zero:
        raise ValueError("resultante com série nula")
    p = Poly(_series_expr(P), X2, X0, X1, T, domain=QQ)
    f = Poly(_series_expr(F), X2, X0, X1, T, domain=QQ)
    dp, df = p.degree(X2), f.degree(X2)
    if dp <= 0:
        res = Poly(p.as_expr() ** df, X0, X1, T, domain=QQ)
    else:
        res = Poly(p.resultant(f).as_expr(), X0, X1, T, domain=QQ)
    degree = P.degree * F.degree
    buckets: List[dict] = [{} for _ in range(order)]
    for (a, b, k), c in res.terms():
        if k < order:
            buckets[k][(a, b)] = c
    coeffs = [BinaryForm.from_terms(terms, degree) for terms in buckets]
    return FormSeries(coeffs, order, degree)


def oracle_limit(F: HSeries, V: VFamily, H: HPoly, M: CoordChange, order: int) -> OracleResult:
    F0 = F[0]
    if H.is_constant or not coprime(H, F0):
        raise HypothesisViolation("gcd_H_F0", "H precisa ser não constante e primo a F0", {"H": str(H)})
    Fm = F.with_order(order).apply_coord_change(M)
    Vm = V.with_order(order).apply_coord_change(M)
    Hm = H.apply_coord_change(M)
    W = wronskian_series(jacobi_family(Fm, Hm), Vm)
    A = resultant_series(W, Fm, order)
    B = resultant_series(HSeries.constant(Hm, order), Fm, order)
    Q = divide_by_series(A, B ** comb(V.r + 1, 2))
    v = Q.t_valuation()
    if isinstance(v, AtLeast):
        raise TruncationExhausted(f"quociente nulo até a ordem {order}", order=order)
    log_event(logger, "oraculo_valuacao", ordem=order, valuacao=v)
    return OracleResult(ChowForm(Q[v]), order, v, M, H)


def oracle_limit_auto(
    F: HSeries, V: VFamily, H: HPoly, M: CoordChange, order: int = 8, cap: int = 64
) -> OracleResult:
    """Dobra a ordem até a valuação aparecer ou o teto ser atingido."""
    N = min(order, cap)
    while True:
        try:
            return oracle_limit(F, V, H, M, N)
        except TruncationExhausted:
            if N >= cap:
                raise
            log_event(logger, "oraculo_ordem_dobrada", de=N, para=min(2 * N, cap))
            N = min(2 * N, cap)


# ---------------------------------------------------------------------------
# Veredito
# ---------------------------------------------------------------------------

@dataclass
class TrialRecord:
    trial: int
    match: bool
    order_used: Optional[int] = None
    valuation: Optional[int] = None
    # "match" | "mismatch" | "inconclusive"
    status: str = "match"

    def to_report(self) -> dict:
        return {"order_used": self.order_used, "valuation": self.valuation, "match": self.match}


@dataclass
class VerifyReport:
    verdict: str
    trials: List[TrialRecord] = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        return {"all-match": 0, "mismatch": 3}.get(self.verdict, 4)

    def to_report(self) -> dict:
        return {"verdict": self.verdict, "trials": [t.to_report() for t in self.trials]}


def _run_trial(
    engine_output: CycleExpr,
    F: HSeries,
    V: VFamily,
    trial: int,
    seed: int,
    order: int,
    cap: int,
    bound: int,
    aux_bound: int,
    retries: int,
) -> TrialRecord:
    curves = engine_output.ramification_curves()
    for attempt in range(retries):
        s = trial_seed(seed, trial, attempt)
        M = random_coord_change(s, bound)
        H = random_aux_form(s, [F[0]], aux_bound)
        auxQ = random_aux_form(s + 1, curves, aux_bound)
        try:
            result = oracle_limit_auto(F, V, H, M, order, cap)
            mine = realize_chow(engine_output, M, auxQ)
        except DegenerateProjection as exc:
            log_event(logger, "projecao_degenerada", trial=trial, attempt=attempt, **exc.details)
            continue
        except InexactDivision as exc:
            # ciclo não efetivo ou quociente inexato: não confere
            warn_event(logger, "divisao_inexata", trial=trial, ordem=exc.order)
            return TrialRecord(trial, False, status="mismatch")
        except TruncationExhausted as exc:
            warn_event(logger, "oraculo_inconclusivo", trial=trial, ordem=exc.order)
            return TrialRecord(trial, False, order_used=exc.order, status="inconclusive")
        ok = chow_equal(mine, result.chow)
        return TrialRecord(trial, ok, result.used_order, result.valuation, "match" if ok else "mismatch")
    warn_event(logger, "projecao_esgotada", trial=trial, retries=retries)
    return TrialRecord(trial, False, status="inconclusive")


def verify(
    engine_output: CycleExpr,
    F: HSeries,
    V: VFamily,
    trials: int = 3,
    seed: int = 0,
    order: int = 8,
    cap: int = 64,
    bound: int = 3,
    aux_bound: int = 3,
    retries: int = 10,
) -> VerifyReport:
    """Compara o ciclo do motor com o oráculo em `trials` projeções; para no primeiro desacordo."""
    records: List[TrialRecord] = []
    for trial in range(trials):
        rec = _run_trial(engine_output, F, V, trial, seed, order, cap, bound, aux_bound, retries)
        records.append(rec)
        if rec.status == "mismatch":
            break
    statuses = {r.status for r in records}
    if "mismatch" in statuses:
        verdict = "mismatch"
    elif "inconclusive" in statuses:
        verdict = "inconclusive"
    else:
        verdict = "all-match"
    log_event(logger, "veredito", verdict=verdict, trials=len(records))
    return VerifyReport(verdict, records)
