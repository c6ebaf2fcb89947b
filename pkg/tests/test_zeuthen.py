import pytest
from sympy import Rational

from core.cycles import cycle_degree, cycles_equal
from core.factorization import Factor, Factorization
from core.limits import limit_via_adaptation
from core.validators import HypothesisViolation
from core.zeuthen import (
    NoTypeFound,
    dual_components,
    limit_zeuthen,
    zeuthen_adaptation,
    zeuthen_congruence,
    zeuthen_discriminants,
    zeuthen_profile,
)
from tests.conftest import pencil, poly, series

X0, X1, X2 = poly("X0"), poly("X1"), poly("X2")
E = Factorization((Factor(X2, 1),))
H = poly("X0 + X1 + X2")

TYPE1 = ["X2^2*X0", "X1^3"]
TYPE2 = ["X2^2*X0", "X2*X1^2", "X1^3"]
TYPE3 = ["X2^2*X0", "X0*X1*X2", "1/4*X0*X1^2 + X1^2*X2", "X1^3"]


@pytest.mark.parametrize("family, n", [(TYPE1, 1), (TYPE2, 2), (TYPE3, 3)])
def test_types(family, n):
    entry = zeuthen_discriminants(series(family), X2, X0, 64)
    assert entry.n == n
    assert len(entry.deltas) == n
    assert len(entry.reduced) == n - 1


def test_discriminants_of_type_three():
    entry = zeuthen_discriminants(series(TYPE3), X2, X0, 64)
    assert entry.deltas[1] == poly("X0*X1^2*X2")
    assert entry.last == poly("X0^2*X1^3") * Rational(1, 2)
    assert entry.reduced == (poly("X0*X1"), poly("X0*X1^2"))


def test_type_two_discriminant():
    entry = zeuthen_discriminants(series(TYPE2), X2, X0, 64)
    assert entry.last == poly("X0*X1^3") - poly("X1^4") * Rational(1, 4)


@pytest.mark.parametrize("family", [TYPE2, TYPE3])
def test_square_congruences(family):
    F = series(family)
    entry = zeuthen_discriminants(F, X2, X0, 64)
    assert all(zeuthen_congruence(F, entry, n) for n in range(entry.n - 1))
    with pytest.raises(ValueError):
        zeuthen_congruence(F, entry, entry.n - 1)


def test_non_reduced_generic_fiber_has_no_type():
    F = series(["X2^2*X0", "X2^2*X1"])
    with pytest.raises(NoTypeFound) as err:
        zeuthen_discriminants(F, X2, X0, 64)
    assert err.value.order == 8


def test_type_search_stops_at_max_order():
    F = series(["X2^2*X0", "X2^2*X1"], order=32)
    with pytest.raises(NoTypeFound) as err:
        zeuthen_discriminants(F, X2, X0, 5)
    assert err.value.order == 5


@pytest.mark.parametrize("family, n", [(TYPE1, 1), (TYPE2, 2), (TYPE3, 3)])
def test_limit_degree(family, n):
    transcript = []
    cycle = limit_zeuthen(series(family), E, X0, pencil(), transcript=transcript)
    assert cycle_degree(cycle) == 6
    assert sum(c.condition == "zeuthen_congruence" for c in transcript) == max(n - 1, 0)


def test_split_validation():
    F = series(TYPE1)
    with pytest.raises(HypothesisViolation) as err:
        zeuthen_profile(F, E, X2, 64)
    assert err.value.condition == "zeuthen_split"
    with pytest.raises(HypothesisViolation):
        zeuthen_profile(F, Factorization((Factor(X2, 2),)), X0, 64)
    with pytest.raises(HypothesisViolation):
        zeuthen_profile(F, E, X1, 64)


def test_constant_A_is_allowed():
    E2 = Factorization((Factor(poly("X0*X2 - X1^2"), 1),))
    F = series(["X0^2*X2^2 - 2*X0*X1^2*X2 + X1^4", "X0^4"])
    data = zeuthen_profile(F, E2, poly("1"), 64)
    assert data.entries[0].n == 1
    assert data.factorization().factors == (Factor(poly("X0*X2 - X1^2"), 2),)
    assert dual_components(data) == [(poly("X0*X2 - X1^2"), 2)]


@pytest.mark.parametrize("family", [TYPE1, TYPE2])
def test_adaptation_agrees_with_closed_formula(family):
    F = series(family)
    V = pencil()
    data = zeuthen_profile(F, E, X0, 64)
    ad = zeuthen_adaptation(F, E, X0, V, H, data=data)
    assert ad.p == 2
    adapted = limit_via_adaptation(F, V, ad, depth=0)
    assert cycles_equal(adapted, limit_zeuthen(F, E, X0, V, data=data))


def test_report_shape():
    data = zeuthen_profile(series(TYPE2), E, X0, 64)
    rep = data.to_report()
    assert rep["A"] == "X0"
    assert rep["entries"][0]["type"] == 2
    assert rep["entries"][0]["B"] == "X0"
    assert dual_components(data) == []


def test_failed_congruence_stops_profile(monkeypatch):
    monkeypatch.setattr("core.zeuthen.zeuthen_congruence", lambda F, entry, n: False)
    transcript = []
    with pytest.raises(HypothesisViolation) as err:
        zeuthen_profile(series(TYPE2), E, X0, 64, transcript)
    assert err.value.condition == "zeuthen_congruence"
    assert err.value.details == {"factor": "X2", "n": 0}
    assert transcript[-1].condition == "zeuthen_congruence" and not transcript[-1].ok
