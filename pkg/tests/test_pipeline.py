import glob
import os

import pytest

from core.cycles import CycleExpr
from core.grammar import PolySyntaxError
from core.pipeline import JobInputError, Pipeline, exit_code_for, error_report
from core.polyring import DegenerateProjection
from core.powerseries import TruncationExhausted
from core.validators import HypothesisViolation
from core.zeuthen import NoTypeFound
from tests.conftest import make_job
from util.jobs_loader import load_job


def corpus_files():
    base = os.path.join(os.path.dirname(__file__), "..", "corpus")
    return sorted(glob.glob(os.path.join(base, "*.json")))


@pytest.mark.parametrize("path", corpus_files(), ids=os.path.basename)
def test_corpus_job_meets_expectation(pipeline, path):
    job = load_job(path)
    outcome = pipeline.run(job)
    assert pipeline._check_expect(job, outcome) == []
    assert outcome.report["exit_code"] == outcome.exit_code


def test_exit_code_mapping():
    assert exit_code_for(PolySyntaxError("x", 0, "")) == 1
    assert exit_code_for(JobInputError("x")) == 1
    assert exit_code_for(HypothesisViolation("c", "m")) == 2
    assert exit_code_for(NoTypeFound("m", order=4)) == 4
    assert exit_code_for(TruncationExhausted("m", order=4)) == 4
    assert exit_code_for(DegenerateProjection("m")) == 4
    assert exit_code_for(RuntimeError("m")) is None


def test_error_report_keeps_condition():
    rep = error_report(HypothesisViolation("gcd_F0_F1", "m", {"gcd": "X1"}))
    assert rep["kind"] == "HypothesisViolation"
    assert rep["condition"] == "gcd_F0_F1"
    assert rep["details"] == {"gcd": "X1"}


def test_option_precedence(pipeline):
    job = make_job(family=["X0*X1", "X2^2"], system={"pencil": "random"}, options={"order": 12, "seed": 4})
    opts = pipeline.options(job, {"seed": 9, "trials": None})
    assert opts["order"] == 12
    assert opts["seed"] == 9
    assert opts["trials"] == pipeline.motor["tentativas"]
    assert opts["cap"] == max(12, pipeline.motor["ordem_maxima"])
    assert opts["verify"] is False


def test_limit_report(pipeline):
    job = make_job(
        family=["X0*X1", "X2^2"],
        factorization=[{"factor": "X0"}, {"factor": "X1"}],
        system={"pencil": ["1", "2", "3"]},
    )
    outcome = pipeline.run(job)
    rep = outcome.report
    assert outcome.exit_code == 0
    assert rep["engine"] == "general"
    assert rep["degree"] == "2"
    assert rep["expected_degree"] == 2
    assert rep["inputs"]["pencil_point"] == "(1:2:3)"
    assert any(c["condition"] == "gcd_F0_F1" for c in rep["transcript"])
    assert "2·(0:0:1)" in outcome.text


def test_engine_override_and_adapted_report(pipeline):
    job = make_job(
        family=["X0*X1", "X2^2"],
        factorization=[{"factor": "X0"}, {"factor": "X1"}],
        system={"pencil": "random"},
        options={"auxiliary": "X0 + X1 + X2", "verification_depth": 0},
    )
    outcome = pipeline.run(job, {"engine": "adapted"})
    rep = outcome.report
    assert outcome.exit_code == 0
    assert rep["engine"] == "adapted"
    assert rep["adaptation"]["p"] == 1
    assert rep["adaptation"]["H"] == "X0 + X1 + X2"


def test_zeuthen_engine_needs_split(pipeline):
    job = make_job(family=["X0*X1", "X2^2"], system={"pencil": "random"}, options={"engine": "zeuthen"})
    outcome = pipeline.run(job)
    assert outcome.exit_code == 2
    assert outcome.report["error"]["condition"] == "zeuthen_split"


def test_multiple_factor_needs_declared_factorization(pipeline):
    job = make_job(family=["X0^2*X1", "X2^3"], system={"pencil": "random"})
    outcome = pipeline.run(job)
    assert outcome.exit_code == 2
    assert outcome.report["error"]["condition"] == "invalid_factorization"


@pytest.mark.parametrize(
    "family",
    [["X0*X1", "X2"], ["X0 +* X1"], ["1", "X0"]],
)
def test_bad_input_exits_with_one(pipeline, family):
    job = make_job(family=family, system={"pencil": "random"})
    assert pipeline.run(job).exit_code == 1


def test_pencil_point_on_curve(pipeline):
    job = make_job(family=["X0*X1", "X2^2"], factorization=[{"factor": "X0"}, {"factor": "X1"}],
                   system={"pencil": ["0", "1", "1"]})
    outcome = pipeline.run(job)
    assert outcome.exit_code == 2
    assert outcome.report["error"]["condition"] == "point_on_curve"


def test_explicit_basis_with_saturation(pipeline):
    job = make_job(
        family=["X0*X1", "X2^2"],
        factorization=[{"factor": "X0"}, {"factor": "X1"}],
        system={"basis": [["X0 + 2*X2"], ["X0 + 2*X2", "X1 - 3*X2"]]},
    )
    outcome = pipeline.run(job)
    assert outcome.exit_code == 0
    assert outcome.report["degree"] == "2"


def test_no_type_found_is_inconclusive(pipeline):
    job = make_job(family=["X2^2*X0", "X2^2*X1"], zeuthen={"E": ["X2"], "A": "X0"}, system={"pencil": "random"})
    outcome = pipeline.run(job, {"order": 6})
    assert outcome.exit_code == 4
    assert "--order" in outcome.text


def test_equiv_check(pipeline):
    job = make_job(
        command="equiv-check",
        equiv={"D1": ["0", "-6*X2", "-3*X0"], "D2": ["0", "-2*X2", "-X0"], "F": "X0*X1 - X2^2"},
    )
    outcome = pipeline.run(job)
    assert outcome.report["equivalent"] is True
    assert outcome.report["a"] == "3"


def test_equiv_check_rejects_mixed_degrees(pipeline):
    job = make_job(command="equiv-check", equiv={"D1": ["X0", "X1^2", "0"], "D2": ["X0", "X1", "X2"], "F": "X0"})
    assert pipeline.run(job).exit_code == 1


def test_dual_limit_report(pipeline):
    job = make_job(
        command="dual-limit",
        family=["X2^2*X0", "X2*X1^2", "X1^3"],
        zeuthen={"E": ["X2"], "A": "X0"},
        system={"pencil": ["1", "1", "1"]},
    )
    outcome = pipeline.run(job)
    dual = outcome.report["dual"]
    assert outcome.exit_code == 0
    assert dual["pencil_point"] == "(1:1:1)"
    assert dual["component_duals"] == []
    assert dual["dual_degree"] == "6"
    assert outcome.text.splitlines()[1].startswith("lim dual = ")


def test_corpus_exit_code_uses_worst_deviation(pipeline):
    good = make_job(name="ok", family=["X0*X1 - X2^2"], command="ramification", system={"pencil": "random"},
                    expect={"degree": "2"})
    wrong = make_job(name="wrong", family=["X0*X1 - X2^2"], command="ramification", system={"pencil": "random"},
                     expect={"degree": "3"})
    bad = make_job(name="bad", family=["X0^2"], command="ramification", system={"pencil": "random"})
    outcome = pipeline.run_corpus([good, wrong, bad])
    rows = {r["job"]: r for r in outcome.report["jobs"]}
    assert rows["ok"]["ok"] and not rows["wrong"]["ok"] and not rows["bad"]["ok"]
    assert outcome.exit_code == 3


@pytest.mark.slow
def test_limit_with_verification(pipeline):
    job = make_job(
        family=["X0*X1", "X2^2"],
        factorization=[{"factor": "X0"}, {"factor": "X1"}],
        system={"pencil": "random"},
        options={"trials": 1},
    )
    outcome = pipeline.run(job, {"verify": True})
    assert outcome.exit_code == 0
    assert outcome.report["verification"]["verdict"] == "all-match"


@pytest.mark.parametrize("curve", ["1", "X0-X0"])
def test_ramification_rejects_empty_curve(pipeline, curve):
    job = make_job(command="ramification", family=[curve], system={"pencil": "random"})
    outcome = pipeline.run(job)
    assert outcome.exit_code == 1
    assert outcome.report["error"]["kind"] == "JobInputError"


def test_projection_budget_exhausted_is_inconclusive(configs):
    no_retries = Pipeline({**configs, "motor": {**configs["motor"], "tentativas_projecao": 0}})
    job = make_job(command="ramification", family=["X0*X1 - X2^2"], system={"pencil": "random"})
    outcome = no_retries.run(job)
    assert outcome.exit_code == 4
    assert outcome.report["error"]["kind"] == "DegenerateProjection"
    assert "--seed" in outcome.text


def limit_corpus_files():
    out = []
    for path in corpus_files():
        job = load_job(path)
        if job.command in ("limit", "dual-limit") and job.expect is not None and job.expect.exit_code == 0:
            out.append(path)
    return out


@pytest.mark.slow
@pytest.mark.parametrize("path", limit_corpus_files(), ids=os.path.basename)
@pytest.mark.parametrize("delta", [1, -1])
def test_shifted_multiplicity_is_caught(pipeline, path, delta):
    job = load_job(path)
    opts = {**pipeline.options(job), "trials": 1}
    run = pipeline._limit(job, opts)
    terms = run.cycle.canonical().terms
    for i in range(len(terms)):
        shifted = CycleExpr(
            (m + delta if j == i else m, t) for j, (m, t) in enumerate(terms)
        ).canonical()
        assert pipeline._verify({}, shifted, run.F, run.V, opts) == 3, (i, delta)
