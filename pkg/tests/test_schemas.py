import pytest
from pydantic import ValidationError

from core.schemas import JobSpec, SystemSpec, VerdictReport
from tests.conftest import make_job


def test_basis_shorthand_becomes_constant_family():
    spec = SystemSpec.model_validate({"basis": ["X0", "X1", ["X2", "X0"]]})
    assert spec.basis == [["X0"], ["X1"], ["X2", "X0"]]


@pytest.mark.parametrize(
    "data",
    [
        {},
        {"basis": ["X0"], "pencil": "random"},
        {"pencil": ["1", "2"]},
        {"basis": [[]]},
    ],
)
def test_system_needs_exactly_one_description(data):
    with pytest.raises(ValidationError):
        SystemSpec.model_validate(data)


def test_limit_job_defaults():
    job = make_job(family=["X0*X1", "X2^2"], system={"pencil": "random"})
    assert job.command == "limit"
    assert job.options.engine is None
    assert job.expect is None


@pytest.mark.parametrize(
    "data",
    [
        {"command": "limit", "system": {"pencil": "random"}},
        {"command": "limit", "family": ["X0*X1"]},
        {"command": "ramification", "family": ["X0*X1", "X2^2"], "system": {"pencil": "random"}},
        {"command": "dual-limit", "family": ["X0*X1"], "system": {"basis": ["X0", "X1"]}},
        {"command": "equiv-check"},
        {
            "family": ["X2^2*X0"],
            "system": {"pencil": "random"},
            "zeuthen": {"E": ["X2"], "A": "X0"},
            "factorization": [{"factor": "X2", "mult": 2}, {"factor": "X0"}],
        },
        {"family": ["X0"], "system": {"pencil": "random"}, "options": {"engine": "fast"}},
        {"family": ["X0"], "system": {"pencil": "random"}, "surprise": 1},
        {"family": ["X0"], "system": {"pencil": "random"}, "factorization": [{"factor": "X0", "mult": 0}]},
    ],
)
def test_invalid_jobs(data):
    with pytest.raises(ValidationError):
        make_job(**data)


def test_equiv_job():
    job = make_job(command="equiv-check", equiv={"D1": ["0", "X0", "X1"], "D2": ["X0", "X1", "X2"], "F": "X0"})
    assert job.family == []
    with pytest.raises(ValidationError):
        make_job(command="equiv-check", equiv={"D1": ["0", "X0"], "D2": ["X0", "X1", "X2"], "F": "X0"})


def test_zeuthen_split_default_A():
    job = make_job(family=["X2^2"], zeuthen={"E": ["X2"]}, system={"pencil": "random"})
    assert job.zeuthen.A == "1"


def test_verdict_report_schema():
    rep = VerdictReport.model_validate(
        {"verdict": "all-match", "trials": [{"order_used": 8, "valuation": 2, "match": True}]}
    )
    assert rep.trials[0].valuation == 2
    with pytest.raises(ValidationError):
        VerdictReport.model_validate({"verdict": "agree", "trials": []})


def test_corpus_jobs_validate(configs):
    from util.jobs_loader import load_jobs

    jobs = load_jobs(configs["dirs"]["corpus"])
    assert len(jobs) >= 10
    assert all(isinstance(job, JobSpec) for _, job in jobs)
