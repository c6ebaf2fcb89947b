# cli/main.py
"""
Linha de comando:

    python -m cli.main limit corpus/cubic_quasi.json --verify --json out.json
    python -m cli.main corpus --verify

Saída: 0 ok, 1 entrada, 2 hipótese, 3 desacordo com o oráculo, 4 inconclusivo.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional

from dotenv import load_dotenv
from pydantic import ValidationError

from core.config import BASE_DIR, load_all_configs
from core.logs import get_logger, log_event
from core.pipeline import JobOutcome, Pipeline, error_report
from core.schemas import JobSpec
from util.jobs_loader import load_job, load_jobs

load_dotenv(Path(BASE_DIR) / ".env")

APP_LOG = get_logger("ramlim")

COMMANDS = ("ramification", "limit", "dual-limit", "equiv-check")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ramlim", description="Limites de ciclos de ramificação e de curvas duais")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp: argparse.ArgumentParser) -> None:
        sp.add_argument("--engine", choices=["general", "quasi", "zeuthen", "adapted"])
        sp.add_argument("--order", type=int, help="ordem de truncamento inicial em t")
        sp.add_argument("--trials", type=int, help="mudanças de coordenadas na verificação")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--verify", action="store_true", help="confere o resultado com o oráculo t-ádico")
        sp.add_argument("--json", dest="json_path", metavar="PATH", help="grava o relatório JSON em PATH")

    for name in ("ramification", "limit", "dual-limit"):
        sp = sub.add_parser(name)
        sp.add_argument("job", help="arquivo JSON do job")
        common(sp)

    sp = sub.add_parser("equiv-check")
    sp.add_argument("job", nargs="?", help="arquivo JSON do job (ou use --d1/--d2/--curve)")
    sp.add_argument("--d1", nargs=3, metavar="G")
    sp.add_argument("--d2", nargs=3, metavar="G")
    sp.add_argument("--curve", metavar="F")
    sp.add_argument("--json", dest="json_path", metavar="PATH")

    sp = sub.add_parser("corpus")
    sp.add_argument("dir", nargs="?", help="diretório do corpus (padrão: caminhos.corpus)")
    common(sp)
    return p


def _overrides(args: argparse.Namespace) -> dict:
    return {
        "engine": getattr(args, "engine", None),
        "order": getattr(args, "order", None),
        "trials": getattr(args, "trials", None),
        "seed": getattr(args, "seed", None),
        "verify": getattr(args, "verify", False),
    }


def _job_for(args: argparse.Namespace) -> JobSpec:
    if args.command == "equiv-check" and args.job is None:
        if not (args.d1 and args.d2 and args.curve):
            raise ValueError("informe o job ou --d1, --d2 e --curve")
        return JobSpec.model_validate(
            {"name": "equiv-check", "command": "equiv-check", "equiv": {"D1": args.d1, "D2": args.d2, "F": args.curve}}
        )
    job = load_job(args.job)
    # o subcomando manda no comando do job
    return JobSpec.model_validate({**job.model_dump(exclude_none=True), "command": args.command})


def _emit(outcome: JobOutcome, json_path: Optional[str]) -> None:
    print(outcome.text)
    if json_path:
        with open(json_path, "w", encoding="utf-8") as f:
            f.write(json.dumps(outcome.report, sort_keys=True, indent=2, ensure_ascii=False) + "\n")


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configs = load_all_configs()
    pipeline = Pipeline(configs)
    json_path = getattr(args, "json_path", None)

    if args.command == "corpus":
        corpus_dir = args.dir or configs["dirs"]["corpus"]
        try:
            jobs = [job for _, job in load_jobs(corpus_dir)]
        except (ValidationError, json.JSONDecodeError, ValueError, OSError) as exc:
            print(f"erro ao carregar o corpus: {exc}", file=sys.stderr)
            return 1
        outcome = pipeline.run_corpus(jobs, _overrides(args))
        _emit(outcome, json_path)
        return outcome.exit_code

    try:
        job = _job_for(args)
    except (ValidationError, json.JSONDecodeError, ValueError, OSError) as exc:
        log_event(APP_LOG, "job_invalido", command=args.command, err=str(exc))
        report = {"command": args.command, "error": error_report(exc), "exit_code": 1}
        _emit(JobOutcome(report, f"erro de entrada: {exc}", 1), json_path)
        return 1

    outcome = pipeline.run(job, _overrides(args))
    _emit(outcome, json_path)
    return outcome.exit_code


if __name__ == "__main__":
    sys.exit(main())
