import pytest

from gaussian_maps.utils.function_field import CurveModel
from gaussian_maps.utils.parsing import parse_poly


def make_curve(n: int, f: str, label: str | None = None) -> CurveModel:
    return CurveModel(n=n, f=parse_poly(f), label=label)


@pytest.fixture(autouse=True)
def isolated_settings(monkeypatch):
    for name in ("GAUSSIAN_MAPS_N_JOBS", "GAUSSIAN_MAPS_SEED", "GAUSSIAN_MAPS_PRIME_BITS"):
        monkeypatch.delenv(name, raising=False)


@pytest.fixture
def hyperelliptic_g3() -> CurveModel:
    return make_curve(2, "x^8 - 1", label="hyperelliptic g=3")


@pytest.fixture
def hyperelliptic_odd_g3() -> CurveModel:
    return make_curve(2, "x^7 + 1", label="hyperelliptic odd g=3")


@pytest.fixture
def trigonal_g4() -> CurveModel:
    return make_curve(3, "x^6 - 1", label="trigonal g=4")


@pytest.fixture
def trigonal_g7() -> CurveModel:
    return make_curve(3, "x^9 - 1", label="trigonal g=7")


@pytest.fixture
def fermat_quintic() -> CurveModel:
    return make_curve(5, "-x^5 - 1", label="Fermat quintic")


@pytest.fixture
def plane_quintic() -> CurveModel:
    return make_curve(4, "x^5 - 1", label="plane quintic")
