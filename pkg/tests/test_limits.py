import pytest

from core.cycles import CycleExpr, cycle_degree, cycles_equal
from core.factorization import Factorization
from core.limits import (
    expected_degree,
    limit_general_direction,
    limit_quasi_general,
    limit_via_adaptation,
    quasi_general_adaptation,
)
from core.powerseries import VFamily
from core.validators import HypothesisViolation, InfiniteRamification, InvalidFactorization
from tests.conftest import pencil, poly, series

X0, X1, X2 = poly("X0"), poly("X1"), poly("X2")
H = poly("X0 + X1 + X2")


def fac(*pairs):
    return Factorization.of([(poly(s), e) for s, e in pairs])


def test_expected_degree():
    assert expected_degree(2, 1, 1) == 2
    assert expected_degree(3, 1, 1) == 6
    assert expected_degree(1, 1, 1) == 0


def test_conic_to_line_pair():
    F = series(["X0*X1", "X2^2"])
    V = pencil()
    transcript = []
    cycle = limit_general_direction(F, fac(("X0", 1), ("X1", 1)), V, transcript)
    expected = (
        CycleExpr.ramification(X0, V.at_zero())
        + CycleExpr.ramification(X1, V.at_zero())
        + CycleExpr.intersection(X0, X1, 2)
    )
    assert cycle == expected
    assert cycle_degree(cycle) == 2
    assert [c.condition for c in transcript if c.ok][:2] == ["invalid_factorization", "gcd_F0_F1"]


def test_general_direction_needs_coprime_F1():
    F = series(["X0^2*X1", "X1*X2^2"])
    with pytest.raises(HypothesisViolation) as err:
        limit_general_direction(F, fac(("X0", 2), ("X1", 1)), pencil())
    assert err.value.condition == "gcd_F0_F1"


def test_constant_family_is_not_general():
    F = series(["X0^3 + X1^3 + X2^3"])
    with pytest.raises(HypothesisViolation):
        limit_general_direction(F, Factorization.single(F[0]), pencil())
    cycle = limit_quasi_general(F, Factorization.single(F[0]), pencil())
    assert cycle_degree(cycle) == 6


def test_double_line_cubic():
    F = series(["X0^2*X1", "X2^3"])
    cycle = limit_general_direction(F, fac(("X0", 2), ("X1", 1)), pencil())
    assert cycle_degree(cycle) == 6
    assert cycle == limit_quasi_general(F, fac(("X0", 2), ("X1", 1)), pencil())


def test_quasi_general_allows_simple_factor_in_F1():
    F = series(["X0^2*X1", "X1*X2^2"])
    V = pencil()
    cycle = limit_quasi_general(F, fac(("X0", 2), ("X1", 1)), V)
    expected = (
        CycleExpr.ramification(X0, V.at_zero(), 2)
        + CycleExpr.ramification(X1, V.at_zero())
        + CycleExpr.intersection(X0, X1, 3)
        + CycleExpr.intersection(X0, poly("X1*X2^2"))
    )
    assert cycle == expected
    assert cycle_degree(cycle) == 6


def test_quasi_general_rejects_multiple_factor_in_F1():
    F = series(["X0^2*X1", "X0*X2^2"])
    transcript = []
    with pytest.raises(HypothesisViolation) as err:
        limit_quasi_general(F, fac(("X0", 2), ("X1", 1)), pencil(), transcript)
    assert err.value.condition == "gcd_multiple_factor_F1"
    assert transcript[-1].ok is False


def test_wrong_factorization():
    F = series(["X0^2*X1", "X2^3"])
    with pytest.raises(InvalidFactorization):
        limit_quasi_general(F, fac(("X0", 1), ("X1", 1)), pencil())


def test_degenerate_system_on_component():
    F = series(["X0*X1", "X2^2"])
    V = VFamily.constant([X0, X1], 8)
    with pytest.raises(InfiniteRamification) as err:
        limit_general_direction(F, fac(("X0", 1), ("X1", 1)), V)
    assert err.value.condition == "degenerate_system"


def test_adaptation_agrees_on_conic():
    F = series(["X0*X1", "X2^2"], order=6)
    f = fac(("X0", 1), ("X1", 1))
    V = pencil(order=6)
    ad = quasi_general_adaptation(F, f, V, H)
    assert ad.p == 1
    evidence = []
    adapted = limit_via_adaptation(F, V, ad, depth=1, max_shift=1, evidence=evidence)
    assert {e["status"] for e in evidence} == {"verified"}
    assert cycles_equal(adapted, limit_general_direction(F, f, V))


def test_adaptation_agrees_on_double_line():
    F = series(["X0^2*X1", "X2^3"], order=6)
    f = fac(("X0", 2), ("X1", 1))
    V = pencil(order=6)
    ad = quasi_general_adaptation(F, f, V, H)
    evidence = []
    adapted = limit_via_adaptation(F, V, ad, depth=0, evidence=evidence)
    assert {e["status"] for e in evidence} == {"caller-asserted"}
    assert cycles_equal(adapted, limit_quasi_general(F, f, V))


def test_adaptation_needs_H_prime_to_F0():
    F = series(["X0*X1", "X2^2"])
    with pytest.raises(HypothesisViolation) as err:
        quasi_general_adaptation(F, fac(("X0", 1), ("X1", 1)), pencil(), X0)
    assert err.value.condition == "gcd_H_F0"
