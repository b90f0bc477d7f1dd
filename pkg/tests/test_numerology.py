import pytest

from gaussian_maps.utils.errors import GaussianMapsError
from gaussian_maps.utils.numerology import (
    ProductCurveSpec,
    bel_criterion,
    corank_mu1K_trigonal,
    dim_i2_expected,
    genus_product,
    h0_kK,
    maroni_admissible,
    rank_mu2_expected,
    surj_possible,
    surjectivity_threshold,
    wahl_product_hypotheses,
)


@pytest.mark.parametrize(
    "spec, genus",
    [
        (ProductCurveSpec(2, 1, 9, 7), 71),
        (ProductCurveSpec(0, 0, 1, 1), 0),
        (ProductCurveSpec(1, 1, 4, 5), 21),
    ],
)
def test_genus_product(spec, genus):
    assert genus_product(spec) == genus


def test_genus_product_symmetry():
    for g1, g2, d1, d2 in [(2, 1, 9, 7), (3, 0, 2, 11), (5, 4, 13, 15)]:
        assert genus_product(ProductCurveSpec(g1, g2, d1, d2)) == genus_product(ProductCurveSpec(g2, g1, d2, d1))


def test_product_spec_validation():
    with pytest.raises(GaussianMapsError):
        ProductCurveSpec(-1, 0, 1, 1)
    with pytest.raises(GaussianMapsError):
        ProductCurveSpec(1, 1, 0, 3)


def test_h0_kK():
    assert h0_kK(7, 3) == 30
    assert h0_kK(3, 4) == 14
    assert h0_kK(2, 2) == 3
    assert h0_kK(7, 3) - corank_mu1K_trigonal(7) == 18
    with pytest.raises(GaussianMapsError):
        h0_kK(1, 2)
    with pytest.raises(GaussianMapsError):
        h0_kK(3, 1)


def test_dim_i2_expected():
    assert dim_i2_expected(4, hyperelliptic=False) == 1
    assert dim_i2_expected(5, hyperelliptic=False) == 3
    assert dim_i2_expected(6, hyperelliptic=False) == 6
    assert dim_i2_expected(3, hyperelliptic=True) == 1
    with pytest.raises(GaussianMapsError):
        dim_i2_expected(2, hyperelliptic=True)


def test_surjectivity_threshold():
    assert surjectivity_threshold() == 18
    assert not surj_possible(17)
    assert surj_possible(18)
    assert not surj_possible(3)


@pytest.mark.parametrize("g", [2, 5, 11])
def test_bel_criterion(g):
    d = 2 * g + 5
    assert bel_criterion(g, 2 * g - 2 + d)
    assert not bel_criterion(g, 0)


def test_wahl_product_hypotheses():
    assert wahl_product_hypotheses(ProductCurveSpec(2, 1, 9, 7))
    assert not wahl_product_hypotheses(ProductCurveSpec(2, 1, 8, 7))
    assert wahl_product_hypotheses(ProductCurveSpec(1, 2, 7, 9))
    assert wahl_product_hypotheses(ProductCurveSpec(3, 2, 11, 9))
    assert not wahl_product_hypotheses(ProductCurveSpec(1, 1, 20, 20))
    # g2 = 0: d2 >= 7 and d2(g1 - 1) > 2 d1 >= 4 g1 + 10
    assert wahl_product_hypotheses(ProductCurveSpec(3, 0, 11, 12))
    assert not wahl_product_hypotheses(ProductCurveSpec(3, 0, 11, 11))


def test_maroni_admissible():
    assert maroni_admissible(7, 1)
    assert maroni_admissible(7, 2)
    assert not maroni_admissible(7, 3)
    assert not maroni_admissible(12, 2)


def test_rank_mu2_expected():
    assert rank_mu2_expected(5, "hyperelliptic") == 5
    assert rank_mu2_expected(9, "trigonal") == 18
    assert rank_mu2_expected(12, "trigonal") == 30
    with pytest.raises(GaussianMapsError):
        rank_mu2_expected(7, "trigonal")
    with pytest.raises(GaussianMapsError):
        rank_mu2_expected(5, "tetragonal")
