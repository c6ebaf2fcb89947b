import os, glob, json
from typing import Dict, List, Tuple

from core.schemas import JobSpec


def load_job(path: str) -> JobSpec:
    """Um job por arquivo JSON; erros de JSON e de schema sobem para o chamador (saída 1)."""
    with open(path, "r", encoding="utf-8") as f:
        data = json.load(f)
    if isinstance(data, dict) and "name" not in data:
        data = {**data, "name": os.path.splitext(os.path.basename(path))[0]}
    return JobSpec.model_validate(data)


def load_jobs(corpus_dir: str = "corpus") -> List[Tuple[str, JobSpec]]:
    """Carrega todos os *.json do corpus em ordem de nome de arquivo."""
    jobs: List[Tuple[str, JobSpec]] = []
    names: Dict[str, str] = {}
    for path in sorted(glob.glob(os.path.join(corpus_dir, "*.json"))):
        job = load_job(path)
        if job.name in names:
            raise ValueError(f"Job duplicado: {job.name} ({names[job.name]} e {path})")
        names[job.name] = path
        jobs.append((path, job))
    return jobs


if __name__ == "__main__":
    import argparse
    p = argparse.ArgumentParser()
    p.add_argument("--dir", default="corpus")
    args = p.parse_args()
    jobs = load_jobs(args.dir)
    print(json.dumps({"count": len(jobs), "names": [j.name for _, j in jobs]}, ensure_ascii=False, indent=2))
