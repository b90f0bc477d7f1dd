from fractions import Fraction

import pytest

from conftest import make_curve
from gaussian_maps.utils.canonical import canonical_basis, pencil_F
from gaussian_maps.utils.errors import CurveModelError, GaussianMapsError, NotAdjointError
from gaussian_maps.utils.function_field import KForm, coordinatize, ff_const, ff_monomial
from gaussian_maps.utils.gaussian import QuadricForm, i2_basis, membership_residuals, mu2
from gaussian_maps.utils.linalg import RatMatrix, rank
from gaussian_maps.utils.quadrics import (
    adjoint_quadric,
    factorization_check,
    make_adjoint_pair,
    pencil_quadric,
    psi,
    psi_basis,
    psi_pairs,
    quadric_rank,
    quadric_span_rank,
    quintic_pencil_quadrics,
    trigonal_mu1_type_check,
)


def in_i2(Q: QuadricForm) -> bool:
    r0, r1 = membership_residuals(Q)
    return r0.is_zero() and r1.is_zero()


def test_quadric_rank(hyperelliptic_g3):
    basis = canonical_basis(hyperelliptic_g3)
    assert quadric_rank(QuadricForm(basis=basis, matrix=RatMatrix.from_rows([[1, 0, 0], [0, 1, 0], [0, 0, 0]]))) == 2
    # zero diagonal
    assert quadric_rank(QuadricForm(basis=basis, matrix=RatMatrix.from_rows([[0, 1, 0], [1, 0, 0], [0, 0, 0]]))) == 2
    assert quadric_rank(QuadricForm(basis=basis, matrix=RatMatrix.zeros(3, 3))) == 0
    assert quadric_rank(QuadricForm(basis=basis, matrix=RatMatrix.identity(3))) == 3


@pytest.mark.parametrize("n, f", [(2, "x^8 - 1"), (2, "x^10 - 3"), (3, "x^6 - 1"), (3, "x^9 - 1")])
def test_psi_is_an_isomorphism_onto_i2(n, f):
    curve = make_curve(n, f)
    quadrics = psi_basis(curve)
    assert all(in_i2(Q) for Q in quadrics)
    assert all(quadric_rank(Q) <= 4 for Q in quadrics)
    assert quadric_span_rank(quadrics) == len(quadrics) == len(i2_basis(curve))


@pytest.mark.parametrize("n, f", [(2, "x^8 - 1"), (3, "x^9 - 1")])
def test_factorization_identity(n, f):
    pairs = psi_pairs(make_curve(n, f))
    assert pairs
    for pair in pairs:
        assert factorization_check(pair)
        assert not mu2(adjoint_quadric(pair)).is_zero()


def test_psi_single_pair(trigonal_g7):
    Q = psi(trigonal_g7, 0, 1)
    assert in_i2(Q)
    with pytest.raises(GaussianMapsError):
        psi(trigonal_g7, 1, 1)


def test_adjoint_pair_validation(hyperelliptic_g3):
    basis = canonical_basis(hyperelliptic_g3)
    curve = hyperelliptic_g3
    u = pencil_F(curve)

    far = (KForm(elt=ff_const(curve, 1)), KForm(elt=ff_monomial(curve, 5, 0)))
    with pytest.raises(NotAdjointError):
        make_adjoint_pair(basis, far, (basis[0], basis[1]))

    with pytest.raises(GaussianMapsError):
        make_adjoint_pair(basis, (basis[0], basis[1]), u)
    with pytest.raises(GaussianMapsError):
        make_adjoint_pair(basis, u, (basis[1],))


def test_quintic_pencil_quadrics(fermat_quintic):
    quadrics = quintic_pencil_quadrics(fermat_quintic)
    assert len(quadrics) == 6
    assert all(in_i2(Q) for Q in quadrics)
    assert all(quadric_rank(Q) <= 4 for Q in quadrics)
    assert rank(coordinatize([mu2(Q) for Q in quadrics])) == 6


def test_quintic_pencil_quadrics_d1(plane_quintic):
    quadrics = quintic_pencil_quadrics(plane_quintic)
    assert quadric_span_rank(quadrics) == 6


def test_pencil_quadric_needs_plane_quintic(trigonal_g7):
    one = KForm(elt=ff_const(trigonal_g7, 1))
    with pytest.raises(CurveModelError):
        pencil_quadric(trigonal_g7, (one, one), (one, one))


def test_trigonal_type_formulas(trigonal_g7):
    check = trigonal_mu1_type_check(trigonal_g7)
    assert check.passed
    assert dict(check.checked) == {"type1": 10, "type2": 10, "type3": 1}


def test_trigonal_type_formulas_need_trigonal_model(hyperelliptic_g3):
    with pytest.raises(CurveModelError):
        trigonal_mu1_type_check(hyperelliptic_g3)


def test_psi_on_genus_three_is_rank_three(hyperelliptic_g3):
    basis = canonical_basis(hyperelliptic_g3)
    pair = make_adjoint_pair(basis, pencil_F(hyperelliptic_g3), (basis[1], basis[2]))
    Q = adjoint_quadric(pair)
    # omega_1 * omega_1 - omega_0 * omega_2, up to sign
    assert Q.pair_vector() in {(0, 0, -1, 1, 0, 0), (0, 0, 1, -1, 0, 0)}
    assert quadric_rank(Q) == 3
    assert factorization_check(pair)


def test_degenerate_pencil_gives_zero_quadric(hyperelliptic_g3):
    basis = canonical_basis(hyperelliptic_g3)
    pair = make_adjoint_pair(basis, pencil_F(hyperelliptic_g3), (basis[1], basis[1]))
    assert adjoint_quadric(pair).is_zero()
    assert factorization_check(pair)


def test_trigonal_genus_four_generator(trigonal_g4):
    (generator,) = i2_basis(trigonal_g4)
    (Q,) = psi_basis(trigonal_g4)
    # omega_2^2 - omega_1 omega_3 misses dx/y, since K = 2F here the quadric is a cone
    assert quadric_rank(Q) == 3
    assert Q.matrix.rows[0] == (0, 0, 0, 0)
    assert quadric_span_rank([Q, generator]) == 1


def test_factorization_is_scale_invariant(trigonal_g7):
    basis = canonical_basis(trigonal_g7)
    u0, u1 = pencil_F(trigonal_g7)
    t0, t1 = psi_pairs(basis)[0].w
    assert factorization_check(make_adjoint_pair(basis, (u0 * 3, u1), (t0, t1 * Fraction(-1, 2))))
