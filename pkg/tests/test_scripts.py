import random

import pytest

from gaussian_maps.scripts.analyze import run_analyze
from gaussian_maps.scripts.numerology import parse_product
from gaussian_maps.scripts.sweep import family_specs
from gaussian_maps.scripts.verify import ROWS, Suite, hyperelliptic_specs, parse_rows, random_squarefree
from gaussian_maps.utils.errors import GaussianMapsError
from gaussian_maps.utils.numerology import ProductCurveSpec
from gaussian_maps.utils.parsing import parse_poly
from gaussian_maps.utils.poly import is_squarefree
from gaussian_maps.utils.report import curve_from_spec


def test_family_specs_hyperelliptic():
    specs = family_specs("hyperelliptic", n=3, lo=3, hi=5)
    assert [s["f"] for s in specs] == ["x^8 - 1", "x^10 - 1", "x^12 - 1"]
    assert [curve_from_spec(s)[0].genus for s in specs] == [3, 4, 5]


def test_family_specs_cyclic():
    specs = family_specs("cyclic", n=3, lo=6, hi=13)
    assert len(specs) == 8
    assert all(curve_from_spec(s)[0].genus >= 3 for s in specs)

    specs = family_specs("cyclic", n=4, lo=5, hi=8)
    assert [s["f"] for s in specs] == ["x^5 - 1", "x^7 - 1", "x^8 - 1"]


@pytest.mark.parametrize(
    "family, kwargs",
    [
        ("hyperelliptic", {"n": 2, "lo": 2, "hi": 5}),
        ("hyperelliptic", {"n": 2, "lo": 6, "hi": 5}),
        ("cyclic", {"n": 2, "lo": 3, "hi": 5}),
        ("quartic", {"n": 2, "lo": 3, "hi": 5}),
    ],
)
def test_family_specs_errors(family, kwargs):
    with pytest.raises(GaussianMapsError):
        family_specs(family, **kwargs)


def test_random_squarefree():
    rng = random.Random(3)
    for degree in [4, 8, 12]:
        f = random_squarefree(rng, degree)
        assert f.degree == degree
        assert f(0) != 0
        assert is_squarefree(f)
        assert all(-5 <= c <= 5 for c in f.coeffs)


def test_hyperelliptic_specs_are_seeded():
    specs = hyperelliptic_specs(seed=1, genera=[3, 4], per_genus=2)
    assert len(specs) == 6
    assert specs == hyperelliptic_specs(seed=1, genera=[3, 4], per_genus=2)
    assert specs != hyperelliptic_specs(seed=2, genera=[3, 4], per_genus=2)
    for spec in specs:
        curve, _ = curve_from_spec(spec)
        assert curve.n == 2
        assert curve.f.degree in (8, 10)
        assert parse_poly(spec["f"]) == curve.f


def test_parse_rows():
    assert parse_rows(None) == ROWS
    assert parse_rows("s1, 2,1") == ["1", "2", "S1"]
    with pytest.raises(GaussianMapsError):
        parse_rows("0")


def test_suite_shares_curves_between_rows():
    suite = Suite(seed=1, n_jobs=1)
    assert suite.needs("S1") == []
    assert len(suite.needs("1")) == len(suite.hyperelliptic) == 8 * 4
    assert suite.needs("6") == suite.needs("7") == suite.needs("8")


def test_modular_row_covers_rows_one_to_nine():
    suite = Suite(seed=1, n_jobs=1)
    covered = {(s["n"], s["f"]) for row in ROWS[:9] for s in suite.needs(row)}
    assert {(s["n"], s["f"]) for s in suite.needs("10")} == covered
    assert len(suite.needs("10")) == len(covered) == 37
    assert suite.primes == Suite(seed=1, n_jobs=2).primes
    assert len(set(suite.primes)) == 3


def test_analyze_modular_checks():
    primes = [1_000_003, 1_000_033]
    report = run_analyze({"n": 3, "f": "x^6 - 1"}, check_primes=primes)
    assert report["modular_checks"] == {"primes": primes, "matrices": 5, "agreements": 10}
    assert "modular_checks" not in run_analyze({"n": 3, "f": "x^6 - 1"})


def test_parse_product():
    assert parse_product("2, 1, 9, 7") == ProductCurveSpec(2, 1, 9, 7)
    for bad in ["2,1,9", "2,1,9,x", ""]:
        with pytest.raises(GaussianMapsError):
            parse_product(bad)
