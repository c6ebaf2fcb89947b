from typing import Sequence

import pytest
from hypothesis import strategies as st

from core.config import load_all_configs
from core.grammar import parse_poly
from core.pipeline import Pipeline
from core.polyring import HPoly
from core.powerseries import HSeries, VFamily
from core.schemas import JobSpec


def poly(text: str) -> HPoly:
    return parse_poly(text)


def series(texts: Sequence[str], order: int = 8) -> HSeries:
    polys = [parse_poly(s) for s in texts]
    return HSeries(polys, max(order, len(polys)), polys[0].degree)


def pencil(order: int = 8, texts: Sequence[str] = ("X0 + 2*X2", "X1 - 3*X2")) -> VFamily:
    return VFamily.constant([parse_poly(s) for s in texts], order)


def make_job(**data) -> JobSpec:
    return JobSpec.model_validate({"name": "t", **data})


small_ints = st.integers(min_value=-4, max_value=4)

# formas lineares não nulas com coeficientes pequenos
linear_forms = st.lists(small_ints, min_size=3, max_size=3).filter(any).map(HPoly.linear)


@st.composite
def quadrics(draw):
    coeffs = draw(st.lists(small_ints, min_size=6, max_size=6).filter(any))
    monos = [(2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1), (0, 0, 2)]
    return HPoly.from_terms(dict(zip(monos, coeffs)))


@pytest.fixture(scope="session")
def configs():
    return load_all_configs()


@pytest.fixture()
def pipeline(configs):
    return Pipeline(configs)
