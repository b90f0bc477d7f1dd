import random
from fractions import Fraction

import pytest

from conftest import make_curve
from gaussian_maps.utils.errors import CurveModelError, GaussianMapsError
from gaussian_maps.utils.function_field import (
    FFElement,
    KForm,
    PlaneModel,
    coordinatize,
    ff_const,
    ff_derive,
    ff_from_poly,
    ff_from_ypoly,
    ff_inv,
    ff_lincomb,
    ff_monomial,
    ff_mul,
    ff_x,
    ff_y_power,
    poles_over_f,
)
from gaussian_maps.utils.parsing import parse_bivariate, parse_poly
from gaussian_maps.utils.poly import UniPoly

x = UniPoly.x()


@pytest.mark.parametrize(
    "n, f, genus, d",
    [
        (2, "x^8 - 1", 3, 2),
        (2, "x^7 + 1", 3, 1),
        (3, "x^6 - 1", 4, 3),
        (3, "x^9 - 1", 7, 3),
        (3, "x^10 - 1", 9, 1),
        (3, "x^13 - 1", 12, 1),
        (4, "x^5 - 1", 6, 1),
        (5, "-x^5 - 1", 6, 5),
    ],
)
def test_genus(n, f, genus, d):
    curve = make_curve(n, f)
    assert curve.genus == genus
    assert curve.d == d
    assert curve.m == parse_poly(f).degree


@pytest.mark.parametrize(
    "n, f",
    [
        (1, "x^5 - 1"),
        (2, "x^2 - 1"),
        (2, "x^3 - x^2"),
        (4, "x^6 - 1"),
    ],
)
def test_invalid_curves(n, f):
    with pytest.raises(CurveModelError):
        make_curve(n, f)


def test_label_is_not_part_of_equality():
    assert make_curve(3, "x^9 - 1", label="a") == make_curve(3, "x^9 - 1", label="b")
    assert str(make_curve(3, "x^9 - 1")) == "y^3 = x^9 - 1"


def test_defining_relation(trigonal_g7):
    curve = trigonal_g7
    y = ff_y_power(curve, 1)
    assert y**3 == ff_from_poly(curve, curve.f)
    assert ff_y_power(curve, 3) == ff_from_poly(curve, curve.f)
    assert ff_mul(ff_y_power(curve, -1), y) == ff_const(curve, 1)
    assert ff_y_power(curve, -4) == FFElement(curve=curve, nums=(UniPoly.zero(), UniPoly.zero(), UniPoly.one()), den=curve.f**2)


def test_normal_form_makes_equality_structural(hyperelliptic_g3):
    curve = hyperelliptic_g3
    a = FFElement(curve=curve, nums=(2 * x + 2, UniPoly.zero()), den=2 * x**2 - 2)
    b = FFElement(curve=curve, nums=(UniPoly.one(),), den=x - 1)
    assert a == b
    assert a.den.lc == 1


def test_inverse(trigonal_g7):
    curve = trigonal_g7
    y = ff_y_power(curve, 1)
    one = ff_const(curve, 1)

    for a in [ff_x(curve) + y, y * y - ff_x(curve), ff_monomial(curve, 2, -1, 3), ff_from_poly(curve, x**2 + 1)]:
        assert ff_mul(ff_inv(a), a) == one
        assert a / a == one

    with pytest.raises(ZeroDivisionError):
        ff_inv(ff_const(curve, 0))


def test_zero_divisor_on_reducible_model():
    model = PlaneModel.from_equation(parse_bivariate("y^2 - x^2"))
    a = ff_y_power(model, 1) - ff_x(model)
    with pytest.raises(CurveModelError):
        ff_inv(a)


def test_derivative_of_y(trigonal_g7):
    curve = trigonal_g7
    y = ff_y_power(curve, 1)
    assert ff_derive(y) == curve.dydx
    # n y^(n-1) y' = f'
    assert ff_mul(ff_y_power(curve, 2).scale(3), ff_derive(y)) == ff_from_poly(curve, curve.f.derivative())


def test_leibniz(fermat_quintic):
    curve = fermat_quintic
    a = FFElement(curve=curve, nums=(x + 1, UniPoly.zero(), x**2), den=x - 2)
    b = FFElement(curve=curve, nums=(UniPoly.one(), UniPoly.constant(3), UniPoly.zero(), x), den=x**2 + 1)
    assert ff_derive(ff_mul(a, b)) == ff_mul(ff_derive(a), b) + ff_mul(a, ff_derive(b))
    assert ff_derive(ff_const(curve, 5)).is_zero()


def test_plane_model_matches_superelliptic(plane_quintic):
    model = PlaneModel.from_equation(parse_bivariate("y^4 - x^5 + 1"))
    assert model.n == 4
    assert not model.is_superelliptic
    assert model.dydx.nums == plane_quintic.dydx.nums
    assert model.dydx.den == plane_quintic.dydx.den


def test_plane_model_must_be_monic():
    with pytest.raises(CurveModelError):
        PlaneModel.from_equation(parse_bivariate("2*y^2 - x^3"))


def test_ff_from_ypoly_reduces(hyperelliptic_g3):
    curve = hyperelliptic_g3
    # y^3 = f·y
    assert ff_from_ypoly(curve, (UniPoly.zero(), UniPoly.zero(), UniPoly.zero(), UniPoly.one())) == FFElement(curve=curve, nums=(UniPoly.zero(), curve.f))


def test_lincomb(trigonal_g7):
    curve = trigonal_g7
    a, b = ff_monomial(curve, 1, -1), ff_monomial(curve, 0, -2)
    assert ff_lincomb([(2, a), (Fraction(-1, 3), b)]) == a.scale(2) - b.scale(Fraction(1, 3))
    assert ff_lincomb([(0, a)]).is_zero()

    with pytest.raises(GaussianMapsError):
        ff_lincomb([])


def test_poles_over_f(trigonal_g7):
    curve = trigonal_g7
    assert poles_over_f(ff_y_power(curve, -1))
    assert not poles_over_f(ff_from_poly(curve, UniPoly.one(), den=x))


def test_kform_weights(trigonal_g7):
    curve = trigonal_g7
    w1 = KForm(elt=ff_monomial(curve, 0, -1), weight=1)
    w0 = KForm(elt=ff_x(curve))

    assert (w1 * w0).weight == 1
    assert (w1 * w1).weight == 2
    assert (2 * w1).elt == w1.elt.scale(2)

    with pytest.raises(GaussianMapsError):
        w1 + w0
    with pytest.raises(GaussianMapsError):
        KForm(elt=ff_x(curve), weight=-1)


def test_coordinatize(trigonal_g7):
    curve = trigonal_g7
    forms = [KForm(elt=ff_monomial(curve, a, -b), weight=1) for a, b in [(0, 1), (1, 1), (0, 2)]]
    M = coordinatize(forms)
    assert M.nrows == 3

    with pytest.raises(GaussianMapsError):
        coordinatize([forms[0], KForm(elt=ff_x(curve))])


def random_element(curve, rng: random.Random) -> FFElement:
    nums = tuple(UniPoly(tuple(rng.randint(-3, 3) for _ in range(rng.randint(1, 4)))) for _ in range(curve.n))
    den = UniPoly((rng.randint(1, 3), rng.randint(-2, 2), 1))
    return FFElement(curve=curve, nums=nums, den=den)


@pytest.mark.parametrize("seed", range(4))
def test_multiplication_is_commutative_and_associative(seed, trigonal_g7, fermat_quintic):
    rng = random.Random(seed)
    for curve in (trigonal_g7, fermat_quintic):
        a, b, c = (random_element(curve, rng) for _ in range(3))
        assert ff_mul(a, b) == ff_mul(b, a)
        assert ff_mul(ff_mul(a, b), c) == ff_mul(a, ff_mul(b, c))
