import json
import time
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

from pydantic import ValidationError

from core.cycles import CycleExpr, cycle_degree, random_aux_form, realize_chow, trial_seed
from core.factorization import Factorization
from core.foliation import Derivation, proj_equiv_check
from core.grammar import PolySyntaxError, parse_point, parse_poly
from core.limits import (
    expected_degree,
    limit_general_direction,
    limit_quasi_general,
    limit_via_adaptation,
    quasi_general_adaptation,
)
from core.logs import get_logger, job_context, log_event, new_run_id, poly_digest
from core.oracle import verify
from core.polyring import (
    DegenerateProjection,
    HPoly,
    NonHomogeneousError,
    format_point,
    format_rational,
    random_coord_change,
)
from core.powerseries import HSeries, TruncationExhausted, VFamily, saturate_basis
from core.ramification import (
    LinearSystem,
    dual_slice,
    pencil_through_point,
    random_point,
    ramification_cycle,
)
from core.router import Router
from core.schemas import JobSpec, VerdictReport
from core.validators import HypothesisCheck, HypothesisViolation
from core.zeuthen import NoTypeFound, dual_components, limit_zeuthen, zeuthen_adaptation, zeuthen_profile
from util.text import normalize_expression

logger = get_logger("ramlim.pipeline")


class JobInputError(ValueError):
    """Entrada bem formada como JSON mas inconsistente (graus, formas)."""


@dataclass
class JobOutcome:
    report: Dict[str, Any]
    text: str
    exit_code: int = 0


@dataclass
class LimitRun:
    report: Dict[str, Any]
    cycle: CycleExpr
    F: HSeries
    V: VFamily
    fac: Factorization
    data: Any = None
    R: Optional[tuple] = None


def exit_code_for(exc: BaseException) -> Optional[int]:
    if isinstance(exc, (PolySyntaxError, NonHomogeneousError, JobInputError, ValidationError, json.JSONDecodeError)):
        return 1
    if isinstance(exc, HypothesisViolation):
        return 2
    if isinstance(exc, (TruncationExhausted, DegenerateProjection)):
        return 4
    return None


def error_report(exc: BaseException) -> dict:
    out: Dict[str, Any] = {"kind": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, HypothesisViolation):
        out.update(exc.to_report())
    if isinstance(exc, PolySyntaxError):
        out["position"] = exc.position
    if isinstance(exc, TruncationExhausted):
        out["order"] = exc.order
        out["details"] = {k: v if isinstance(v, (int, list)) else str(v) for k, v in exc.details.items()}
    if isinstance(exc, DegenerateProjection):
        out["details"] = dict(exc.details)
    return out


class Pipeline:
    def __init__(self, configs: dict):
        self.configs = configs
        self.motor = configs.get("motor", {})
        self.router = Router(configs)

    # -------------------------------
    # Opções: CLI > job > app.yaml > padrão
    # -------------------------------
    def options(self, job: JobSpec, overrides: Optional[dict] = None) -> dict:
        overrides = {k: v for k, v in (overrides or {}).items() if v is not None}
        opts = job.options
        m = self.motor

        def pick(key: str, job_value, motor_key: str):
            if key in overrides:
                return overrides[key]
            if job_value is not None:
                return job_value
            return m[motor_key]

        return {
            "order": pick("order", opts.order, "ordem"),
            "cap": max(m["ordem_maxima"], pick("order", opts.order, "ordem")),
            "trials": pick("trials", opts.trials, "tentativas"),
            "seed": pick("seed", opts.seed, "semente"),
            "engine": overrides.get("engine") or opts.engine,
            "depth": pick("depth", opts.verification_depth, "profundidade_verificacao"),
            "max_shift": m["deslocamento_maximo"],
            "bound": m["limite_coordenadas"],
            "aux_bound": m["limite_auxiliar"],
            "retries": m["tentativas_projecao"],
            "verify": bool(overrides.get("verify", False)),
        }

    # -------------------------------
    # Entrada
    # -------------------------------
    @staticmethod
    def _parse(text: str) -> HPoly:
        return parse_poly(normalize_expression(text))

    def _family(self, job: JobSpec, order: int) -> HSeries:
        polys = [self._parse(s) for s in job.family]
        degrees = sorted({P.degree for P in polys if not P.is_zero})
        if len(degrees) > 1:
            raise NonHomogeneousError((degrees[0], degrees[1]))
        if polys[0].is_zero or polys[0].is_constant:
            raise JobInputError("F(0) precisa ser uma curva (não constante)")
        return HSeries(polys, max(order, len(polys)), polys[0].degree)

    def _system(
        self, job: JobSpec, avoid: List[HPoly], order: int, seed: int
    ) -> Tuple[VFamily, LinearSystem, Optional[tuple]]:
        spec = job.system
        if spec.basis is not None:
            cols = []
            for element in spec.basis:
                polys = [self._parse(s) for s in element]
                degrees = sorted({P.degree for P in polys if not P.is_zero})
                if len(degrees) > 1:
                    raise NonHomogeneousError((degrees[0], degrees[1]))
                cols.append(HSeries(polys, max(order, len(polys)), degrees[0] if degrees else 0))
            try:
                V = saturate_basis(cols) if any(len(e) > 1 for e in spec.basis) else VFamily(cols)
                system = LinearSystem(V.at_zero())
            except ValueError as exc:
                raise JobInputError(f"sistema linear inválido: {exc}") from None
            return V, system, None
        if spec.pencil == "random":
            R = random_point(seed, avoid)
        else:
            R = parse_point(spec.pencil)
            on_curve = [str(P) for P in avoid if P.evaluate(R) == 0]
            if on_curve:
                raise HypothesisViolation(
                    "point_on_curve", f"o ponto {format_point(R)} está sobre {on_curve[0]}", {"point": format_point(R)}
                )
        system = pencil_through_point(R, avoid, seed)
        return VFamily.constant(system.basis, order), system, R

    # -------------------------------
    # Público
    # -------------------------------
    def run(self, job: JobSpec, overrides: Optional[dict] = None) -> JobOutcome:
        with job_context(new_run_id(), job.name):
            t0 = time.perf_counter()
            log_event(logger, "job_inicio", command=job.command)
            try:
                outcome = self._dispatch(job, overrides)
            except Exception as exc:
                code = exit_code_for(exc)
                if code is None:
                    raise
                log_event(logger, "job_erro", kind=type(exc).__name__, exit_code=code)
                report = {"job": job.name, "command": job.command, "error": error_report(exc), "exit_code": code}
                outcome = JobOutcome(report, self._error_text(job, exc), code)
            log_event(logger, "job_fim", exit_code=outcome.exit_code, ms=int((time.perf_counter() - t0) * 1000))
        return outcome

    def _dispatch(self, job: JobSpec, overrides: Optional[dict]) -> JobOutcome:
        if job.command == "ramification":
            return self.cmd_ramification(job, overrides)
        if job.command == "equiv-check":
            return self.cmd_equiv_check(job)
        if job.command == "dual-limit":
            return self.cmd_dual_limit(job, overrides)
        return self.cmd_limit(job, overrides)

    def cmd_ramification(self, job: JobSpec, overrides: Optional[dict] = None) -> JobOutcome:
        opts = self.options(job, overrides)
        P = self._parse(job.family[0])
        if P.is_zero or P.is_constant:
            raise JobInputError("P precisa ser uma curva (não constante)")
        _, system, R = self._system(job, [P], 1, opts["seed"])
        cycle = ramification_cycle(P, system)
        chow = M = None
        for attempt in range(opts["retries"]):
            s = trial_seed(opts["seed"], 0, attempt)
            M = random_coord_change(s, opts["bound"])
            try:
                chow = realize_chow(cycle, M, random_aux_form(s, [P], opts["aux_bound"]))
                break
            except DegenerateProjection as exc:
                log_event(logger, "projecao_degenerada", attempt=attempt, **exc.details)
        if chow is None:
            raise DegenerateProjection("orçamento de re-sorteios esgotado", {"P": poly_digest(str(P))})
        report = {
            "job": job.name,
            "command": job.command,
            "inputs": {"P": str(P), "system": [str(b) for b in system.basis]},
            "cycle": cycle.to_report(),
            "degree": format_rational(cycle_degree(cycle)),
            "expected_degree": expected_degree(P.degree, system.r, system.d),
            "chow": chow.to_report(),
            "coordinate_change": M.to_report(),
            "exit_code": 0,
        }
        if R is not None:
            report["inputs"]["pencil_point"] = format_point(R)
        text = "\n".join(
            [
                f"job: {job.name}",
                f"ciclo de ramificação: {cycle.render()}",
                f"grau: {report['degree']}",
                f"forma de Chow: {chow.form}" + (f" (potência {chow.e})" if chow.e != 1 else ""),
            ]
        )
        return JobOutcome(report, text)

    def _limit(self, job: JobSpec, opts: dict) -> LimitRun:
        F = self._family(job, opts["order"])
        fac = self.router.factorization(job, F[0])
        engine = self.router.select_engine(job, F, opts["engine"])
        components = [f.E for f in fac.factors]
        V, system, R = self._system(job, components, F.order, opts["seed"])
        transcript: List[HypothesisCheck] = []
        report: Dict[str, Any] = {
            "job": job.name,
            "command": job.command,
            "engine": engine,
            "inputs": {
                "family": [str(c) for c in F.coeffs[: len(job.family)]],
                "system": [str(b) for b in system.basis],
                "order": F.order,
            },
            "factorization": fac.to_report(),
        }
        if R is not None:
            report["inputs"]["pencil_point"] = format_point(R)
        split = self.router.zeuthen_split(job)
        data = None
        if engine == "general":
            cycle = limit_general_direction(F, fac, V, transcript)
        elif engine == "quasi":
            cycle = limit_quasi_general(F, fac, V, transcript)
        elif engine == "zeuthen":
            E_fac, A = split
            data = zeuthen_profile(F, E_fac, A, opts["cap"], transcript)
            report["zeuthen"] = data.to_report()
            cycle = limit_zeuthen(F, E_fac, A, V, opts["cap"], transcript, data=data)
        else:
            H = (
                self._parse(job.options.auxiliary)
                if job.options.auxiliary
                else random_aux_form(opts["seed"], [F[0]], opts["aux_bound"])
            )
            if split is not None:
                E_fac, A = split
                data = zeuthen_profile(F, E_fac, A, opts["cap"], transcript)
                report["zeuthen"] = data.to_report()
                ad = zeuthen_adaptation(F, E_fac, A, V, H, opts["cap"], transcript, data=data)
            else:
                ad = quasi_general_adaptation(F, fac, V, H, transcript)
            evidence: List[dict] = []
            cycle = limit_via_adaptation(F, V, ad, opts["depth"], opts["max_shift"], transcript, evidence)
            report["adaptation"] = {
                "H": str(H),
                "p": ad.p,
                "auxiliary": ad.auxiliary.to_report(),
                "evidence": evidence,
            }
        report["transcript"] = [c.to_report() for c in transcript]
        report["cycle"] = cycle.to_report()
        report["degree"] = format_rational(cycle_degree(cycle))
        report["expected_degree"] = expected_degree(F[0].degree, V.r, V.degree)
        return LimitRun(report, cycle, F, V, fac, data, R)

    def _verify(self, report: dict, cycle: CycleExpr, F: HSeries, V: VFamily, opts: dict) -> int:
        vr = verify(
            cycle,
            F,
            V,
            trials=opts["trials"],
            seed=opts["seed"],
            order=opts["order"],
            cap=opts["cap"],
            bound=opts["bound"],
            aux_bound=opts["aux_bound"],
            retries=opts["retries"],
        )
        report["verification"] = VerdictReport.model_validate(vr.to_report()).model_dump()
        return vr.exit_code

    def cmd_limit(self, job: JobSpec, overrides: Optional[dict] = None) -> JobOutcome:
        opts = self.options(job, overrides)
        run = self._limit(job, opts)
        report, cycle, data = run.report, run.cycle, run.data
        code = self._verify(report, cycle, run.F, run.V, opts) if opts["verify"] else 0
        report["exit_code"] = code
        lines = [
            f"job: {job.name}",
            f"motor: {report['engine']}",
            f"ciclo limite: {cycle.render()}",
            f"grau: {report['degree']} (esperado {report['expected_degree']})",
        ]
        if data is not None:
            for entry in data.entries:
                lines.append(f"tipo de {entry.E}: {entry.n}")
        if "verification" in report:
            lines.append(f"verificação: {report['verification']['verdict']}")
        return JobOutcome(report, "\n".join(lines), code)

    def cmd_dual_limit(self, job: JobSpec, overrides: Optional[dict] = None) -> JobOutcome:
        opts = self.options(job, overrides)
        run = self._limit(job, opts)
        report = run.report
        if run.data is not None:
            components = dual_components(run.data)
        else:
            components = [(f.E, f.e) for f in run.fac.factors if f.E.degree > 1]
        dual = dual_slice(run.cycle, components, run.R)
        report["dual"] = dual.to_report()
        code = self._verify(report, run.cycle, run.F, run.V, opts) if opts["verify"] else 0
        report["exit_code"] = code
        lines = [f"job: {job.name}", dual.render(), f"grau do dual: {report['dual']['dual_degree']}"]
        if "verification" in report:
            lines.append(f"verificação: {report['verification']['verdict']}")
        return JobOutcome(report, "\n".join(lines), code)

    def cmd_equiv_check(self, job: JobSpec) -> JobOutcome:
        spec = job.equiv
        try:
            D1 = Derivation.of(*(self._parse(s) for s in spec.D1))
            D2 = Derivation.of(*(self._parse(s) for s in spec.D2))
        except ValueError as exc:
            if isinstance(exc, (PolySyntaxError, NonHomogeneousError)):
                raise
            raise JobInputError(str(exc)) from None
        F = self._parse(spec.F)
        if F.is_constant:
            raise JobInputError("F precisa ser uma curva (não constante)")
        a = proj_equiv_check(D1, D2, F)
        report = {
            "job": job.name,
            "command": job.command,
            "inputs": {"D1": D1.to_strings(), "D2": D2.to_strings(), "F": str(F)},
            "equivalent": a is not None,
            "a": format_rational(a) if a is not None else None,
            "exit_code": 0,
        }
        text = f"job: {job.name}\n" + (f"a = {format_rational(a)}" if a is not None else "não equivalentes")
        return JobOutcome(report, text)

    def _error_text(self, job: JobSpec, exc: BaseException) -> str:
        if isinstance(exc, HypothesisViolation):
            return f"job: {job.name}\nhipótese violada [{exc.condition}]: {exc.message}"
        if isinstance(exc, NoTypeFound):
            return f"job: {job.name}\n{exc}\naumente --order para continuar a busca do tipo"
        if isinstance(exc, TruncationExhausted):
            return f"job: {job.name}\n{exc}\ninconclusivo: aumente --order"
        if isinstance(exc, DegenerateProjection):
            return f"job: {job.name}\n{exc}\ninconclusivo: tente outra --seed"
        return f"job: {job.name}\nerro de entrada: {exc}"

    # -------------------------------
    # Corpus
    # -------------------------------
    def run_corpus(self, jobs: List[JobSpec], overrides: Optional[dict] = None) -> JobOutcome:
        rows = []
        worst = 0
        for job in jobs:
            outcome = self.run(job, overrides)
            problems = self._check_expect(job, outcome)
            if problems:
                worst = max(worst, outcome.exit_code or 3)
            rows.append({"job": job.name, "exit_code": outcome.exit_code, "ok": not problems, "problems": problems})
        report = {"command": "corpus", "jobs": rows, "exit_code": worst}
        lines = [f"{'ok ' if r['ok'] else 'ERR'} {r['job']} (saída {r['exit_code']})" for r in rows]
        lines.append(f"{sum(r['ok'] for r in rows)}/{len(rows)} jobs conforme o esperado")
        return JobOutcome(report, "\n".join(lines), worst)

    @staticmethod
    def _check_expect(job: JobSpec, outcome: JobOutcome) -> List[str]:
        exp = job.expect
        if exp is None:
            return [] if outcome.exit_code == 0 else [f"saída {outcome.exit_code}"]
        rep = outcome.report
        problems = []
        if outcome.exit_code != exp.exit_code:
            problems.append(f"saída {outcome.exit_code}, esperada {exp.exit_code}")
        if exp.degree is not None and rep.get("degree") != exp.degree:
            problems.append(f"grau {rep.get('degree')}, esperado {exp.degree}")
        if exp.types is not None:
            types = [e["type"] for e in rep.get("zeuthen", {}).get("entries", [])]
            if types != exp.types:
                problems.append(f"tipos {types}, esperados {exp.types}")
        if exp.verdict is not None:
            verdict = rep.get("verification", {}).get("verdict")
            if verdict != exp.verdict:
                problems.append(f"veredito {verdict}, esperado {exp.verdict}")
        if exp.equivalent is not None and rep.get("equivalent") != exp.equivalent:
            problems.append("equivalência diferente da esperada")
        return problems
