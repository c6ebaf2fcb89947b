import pytest

from core.factorization import Factor, Factorization, looks_reducible
from core.validators import InvalidFactorization
from tests.conftest import poly


def fac(*pairs):
    return Factorization.of([(poly(s), e) for s, e in pairs])


def test_parts():
    f = fac(("X0", 2), ("X1", 1), ("X2", 3))
    assert f.product() == poly("X0^2*X1*X2^3")
    assert f.reduced() == poly("X0*X1*X2")
    assert f.simple_part() == poly("X1")
    assert f.multiple_part() == poly("X0*X2")


def test_validate_accepts_scalar_multiple():
    transcript = []
    fac(("X0", 2), ("X1", 1)).validate(poly("-3*X0^2*X1"), transcript)
    assert transcript[-1].condition == "invalid_factorization"
    assert transcript[-1].ok


@pytest.mark.parametrize(
    "pairs, target",
    [
        ((("X0", 2),), "X0^2*X1"),
        ((("X0", 1), ("2*X0", 1)), "X0^2"),
        ((("X0^2", 1),), "X0^2"),
        ((("1", 1), ("X0", 1)), "X0"),
    ],
)
def test_validate_rejects(pairs, target):
    transcript = []
    with pytest.raises(InvalidFactorization):
        fac(*pairs).validate(poly(target), transcript)
    assert transcript and not transcript[-1].ok


def test_empty_factorization():
    with pytest.raises(InvalidFactorization):
        Factorization(()).validate(poly("X0"))


def test_zero_multiplicity():
    with pytest.raises(InvalidFactorization):
        Factorization((Factor(poly("X0"), 0),)).validate(poly("1"))


def test_reducibility_heuristic():
    assert looks_reducible(poly("X0*X1 + X0*X2"))
    assert not looks_reducible(poly("X0*X1 - X2^2"))
    assert not looks_reducible(poly("X0"))
