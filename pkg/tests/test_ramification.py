import pytest
from sympy import Rational

from core.cycles import CycleExpr, cycle_degree
from core.limits import expected_degree
from core.polyring import CoordChange
from core.ramification import (
    LinearSystem,
    PencilExhausted,
    dual_slice,
    is_finite_ramification,
    linear_forms_through,
    pencil_through_point,
    ramification_cycle,
    ramification_identity,
    random_point,
)
from core.validators import InfiniteRamification
from tests.conftest import poly

CONIC = poly("X0*X1 - X2^2")
NODAL = poly("X1^2*X2 - X0^3 - X0^2*X2")
PENCIL = LinearSystem((poly("X0 + 2*X2"), poly("X1 - 3*X2")))
SHEAR = CoordChange.from_rows([[1, 0, 1], [0, 1, 2], [0, 0, 1]])


def test_linear_system_validation():
    with pytest.raises(ValueError):
        LinearSystem(())
    with pytest.raises(ValueError):
        LinearSystem((poly("X0"), poly("X1^2")))
    with pytest.raises(ValueError):
        LinearSystem((poly("X0"), poly("3*X0")))
    assert PENCIL.r == 1 and PENCIL.d == 1


@pytest.mark.parametrize("P, degree", [(CONIC, 2), (NODAL, 6), (poly("X0*X1*X2"), 6)])
def test_ramification_degree_matches_formula(P, degree):
    cycle = ramification_cycle(P, PENCIL)
    assert cycle_degree(cycle) == degree == expected_degree(P.degree, PENCIL.r, PENCIL.d)


def test_ramification_of_nets_of_conics():
    net = LinearSystem((poly("X0^2"), poly("X1^2"), poly("X2^2")))
    assert cycle_degree(ramification_cycle(CONIC, net)) == expected_degree(2, 2, 2) == 6


def test_double_curve_is_infinite():
    with pytest.raises(InfiniteRamification) as err:
        ramification_cycle(poly("X0^2"), PENCIL)
    assert err.value.condition == "not_square_free"


def test_pencil_containing_component_is_degenerate():
    V = LinearSystem((poly("X0"), poly("X1")))
    assert not is_finite_ramification(poly("X0*(X0 + X1 + X2)"), V)
    with pytest.raises(InfiniteRamification) as err:
        ramification_cycle(poly("X0*(X0 + X1 + X2)"), V)
    assert err.value.condition == "degenerate_system"


def test_pencil_through_point_contains_point():
    R = (1, 2, 3)
    V = pencil_through_point(R, [CONIC])
    assert all(L.evaluate(R) == 0 for L in V.basis)
    assert V.r == 1 and V.d == 1


@pytest.mark.parametrize("R", [(1, 2, 3), (0, 0, 1), (Rational(1, 2), -1, 0)])
def test_linear_forms_through_point(R):
    L1, L2 = linear_forms_through(R)
    assert L1.evaluate(R) == 0 and L2.evaluate(R) == 0
    assert L1.normalized() != L2.normalized()
    assert all(c.q == 1 for L in (L1, L2) for c in L.terms().values())


def test_pencil_members_avoid_line_components():
    # pela origem (0:0:1) a base do núcleo contém X0; a reta X0 é componente
    V = pencil_through_point((0, 0, 1), [poly("X0*X2 + X1^2"), poly("X0")], seed=3)
    assert all(L.normalized() != poly("X0") for L in V.basis)


def test_pencil_exhausted_for_lines_through_point():
    # toda combinação com coeficientes em [-2, 2] de X0 e X1 é uma das retas evitadas
    lines = ["X0", "X1", "X0 + X1", "X0 - X1", "X0 + 2*X1", "X0 - 2*X1", "2*X0 + X1", "2*X0 - X1"]
    with pytest.raises(PencilExhausted):
        pencil_through_point((0, 0, 1), [poly(s) for s in lines], max_attempts=8)


def test_random_point_avoids_curves():
    R = random_point(0, [CONIC, NODAL])
    assert CONIC.evaluate(R) != 0 and NODAL.evaluate(R) != 0
    assert random_point(0, [CONIC]) == random_point(0, [CONIC])


@pytest.mark.parametrize("P", [CONIC, NODAL])
@pytest.mark.parametrize("Q", ["X0 + X1 + X2", "X0 + 2*X1 - X2", "3*X0 - X1 + 2*X2"])
def test_ramification_identity_holds(P, Q):
    assert ramification_identity(P, PENCIL, poly(Q), SHEAR)


def test_dual_slice_of_conic_limit():
    limit = CycleExpr.intersection(poly("X0"), poly("X1"), 2)
    report = dual_slice(limit, [], (1, 2, 3))
    assert report.dual_degree() == 2
    assert report.render() == "lim dual = 2·(0:0:1)^∨"
    assert report.to_report()["pencil_point"] == "(1:2:3)"


def test_dual_slice_keeps_curved_components():
    limit = CycleExpr.ramification(CONIC, PENCIL.basis, 2) + CycleExpr.intersection(poly("X0"), poly("X1"))
    report = dual_slice(limit)
    assert report.component_duals == [(CONIC.normalized(), 2)]
    assert report.dual_degree() == Rational(5)
    assert report.render().startswith("lim dual = 2·(X0*X1 - X2^2)^∨")
