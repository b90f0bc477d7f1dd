from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Sequence

from gaussian_maps.utils.canonical import CanonicalBasis, canonical_basis, subsystem_K_minus_F
from gaussian_maps.utils.config import default_prime
from gaussian_maps.utils.errors import DependentSectionsError, GaussianMapsError, InternalCheckError, NotInI2Error
from gaussian_maps.utils.function_field import CoordinateFrame, CurveModel, FFElement, KForm, coordinatize, coordinatize_in_frame, ff_const, ff_derive, ff_from_coordinates, ff_lincomb, ff_mul
from gaussian_maps.utils.linalg import RankCertificate, RatMatrix, certified_rank, kernel_basis, matmul, rank
from gaussian_maps.utils.numerology import h0_kK


@dataclass(frozen=True, eq=False)
class QuadricForm:
    """Q = Σ_{i,j} a_ij ω_i ⊗ ω_j with `matrix` = (a_ij) symmetric, in the ordering of `basis`."""

    basis: CanonicalBasis
    matrix: RatMatrix

    def __post_init__(self):
        g = len(self.basis)
        if self.matrix.shape != (g, g):
            raise GaussianMapsError(f"quadric matrix has shape {self.matrix.shape}, expected ({g}, {g})")
        if not self.matrix.is_symmetric():
            raise GaussianMapsError("quadric matrix is not symmetric")

    @property
    def curve(self):
        return self.basis.curve

    @classmethod
    def from_pair_vector(cls, basis: CanonicalBasis, vector: Sequence[Fraction]) -> "QuadricForm":
        """From coefficients c_ij of the products f_i·f_j, pairs i <= j in lexicographic order."""
        g = len(basis)
        rows = [[Fraction(0)] * g for _ in range(g)]
        for (i, j), c in zip(pair_indices(g), vector, strict=True):
            if i == j:
                rows[i][i] = Fraction(c)
            else:
                rows[i][j] = rows[j][i] = Fraction(c) / 2
        return cls(basis=basis, matrix=RatMatrix.from_rows(rows, ncols=g))

    def pair_vector(self) -> tuple[Fraction, ...]:
        """Weights of the pair products: a_ii on the diagonal, 2·a_ij for i < j."""
        rows = self.matrix.rows
        return tuple(rows[i][j] if i == j else 2 * rows[i][j] for i, j in pair_indices(len(self.basis)))

    def is_zero(self) -> bool:
        return self.matrix.is_zero()


@dataclass(frozen=True)
class GaussMapImage:
    source: str
    images: tuple[KForm, ...]
    certificate: RankCertificate

    @property
    def rank(self) -> int:
        return self.certificate.exact


def pair_indices(g: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(g) for j in range(i, g)]


class PairTables:
    """Products of basis jets over pairs i <= j, built lazily per table, with their coordinate matrices."""

    def __init__(self, basis: CanonicalBasis):
        self.basis = basis
        self.pairs = pair_indices(len(basis))

    @cached_property
    def products(self) -> list[FFElement]:
        """f_i·f_j"""
        jets = self.basis.jets
        return [ff_mul(jets[i][0], jets[j][0]) for i, j in self.pairs]

    @cached_property
    def mixed(self) -> list[FFElement]:
        """(f_i·f_j)'"""
        return [ff_derive(p) for p in self.products]

    @cached_property
    def second(self) -> list[FFElement]:
        """f_i''·f_j + f_j''·f_i, and f_i''·f_i on the diagonal"""
        jets = self.basis.jets
        out = []
        for i, j in self.pairs:
            if i == j:
                out += [ff_mul(jets[i][2], jets[i][0])]
            else:
                out += [ff_mul(jets[i][2], jets[j][0]) + ff_mul(jets[j][2], jets[i][0])]
        return out

    @cached_property
    def first(self) -> list[FFElement]:
        """2·f_i'·f_j', and f_i'^2 on the diagonal"""
        jets = self.basis.jets
        return [ff_mul(jets[i][1], jets[j][1]) if i == j else ff_mul(jets[i][1], jets[j][1]).scale(2) for i, j in self.pairs]

    @cached_property
    def product_coords(self) -> tuple[RatMatrix, CoordinateFrame]:
        return coordinatize_in_frame(self.products)

    @cached_property
    def mixed_coords(self) -> tuple[RatMatrix, CoordinateFrame]:
        return coordinatize_in_frame(self.mixed)

    @cached_property
    def mu2_coords(self) -> tuple[RatMatrix, RatMatrix, CoordinateFrame]:
        """`second` and `first` in one shared frame."""
        both, frame = coordinatize_in_frame([*self.second, *self.first])
        k = len(self.pairs)
        return RatMatrix(rows=both.rows[:k], ncols=both.ncols), RatMatrix(rows=both.rows[k:], ncols=both.ncols), frame


@lru_cache(maxsize=64)
def pair_tables(basis: CanonicalBasis) -> PairTables:
    return PairTables(basis)


def _resolve_basis(curve_or_basis: CurveModel | CanonicalBasis) -> CanonicalBasis:
    if isinstance(curve_or_basis, CanonicalBasis):
        return curve_or_basis
    return canonical_basis(curve_or_basis)


def _diag_weights(Q: QuadricForm) -> list[Fraction]:
    # a_ij per pair i <= j (no doubling); pairs off the diagonal carry both orders in their table entries
    rows = Q.matrix.rows
    return [rows[i][j] for i, j in pair_indices(len(Q.basis))]


def _derivative_weights(Q: QuadricForm) -> list[Fraction]:
    # Σ_{i,j} a_ij f_i' f_j = Σ_i a_ii (f_i^2)' / 2 + Σ_{i<j} a_ij (f_i f_j)'
    return [h / 2 if i == j else h for (i, j), h in zip(pair_indices(len(Q.basis)), _diag_weights(Q))]


def multiplication_matrix(basis: CanonicalBasis) -> RatMatrix:
    """Coordinates of f_i·f_j (pairs i <= j in lexicographic order) in one monomial frame."""
    return pair_tables(basis).product_coords[0]


def _membership_rows(quadrics: Sequence[QuadricForm]) -> tuple[RatMatrix, RatMatrix]:
    # coordinates of both residuals, one row per quadric
    tables = pair_tables(quadrics[0].basis)
    r0 = matmul(RatMatrix.from_rows([Q.pair_vector() for Q in quadrics]), tables.product_coords[0])
    r1 = matmul(RatMatrix.from_rows([_derivative_weights(Q) for Q in quadrics]), tables.mixed_coords[0])
    return r0, r1


def membership_residuals(Q: QuadricForm) -> tuple[FFElement, FFElement]:
    """(Σ a_ij f_i f_j, Σ a_ij f_i' f_j); both vanish iff Q lies in I2."""
    tables = pair_tables(Q.basis)
    r0, r1 = _membership_rows([Q])
    return ff_from_coordinates(tables.product_coords[1], r0.rows[0]), ff_from_coordinates(tables.mixed_coords[1], r1.rows[0])


def _rank_of(images: Sequence[KForm], prime: int | None) -> RankCertificate:
    live = [im for im in images if not im.is_zero()]
    if not live:
        return RankCertificate(exact=0, modular=0, prime=prime or default_prime())
    return certified_rank(coordinatize(live), prime=prime or default_prime())


def i2_basis(curve_or_basis: CurveModel | CanonicalBasis) -> list[QuadricForm]:
    """Basis of the kernel of S^2 H^0(K) -> H^0(2K), each element checked exactly."""

    basis = _resolve_basis(curve_or_basis)
    if len(basis) < 3:
        raise GaussianMapsError(f"I2 needs genus >= 3, got {len(basis)}")

    mult = multiplication_matrix(basis)
    quadrics = [QuadricForm.from_pair_vector(basis, v) for v in kernel_basis(mult.transpose())]
    if not quadrics:
        return quadrics

    r0, r1 = _membership_rows(quadrics)
    if not (r0.is_zero() and r1.is_zero()):
        raise InternalCheckError(f"kernel vector of the multiplication map fails the membership identity on {basis.curve}")

    return quadrics


def wronskian(a: KForm, b: KForm) -> KForm:
    """g_a·g_b' - g_b·g_a', a form of weight w_a + w_b + 1."""
    elt = ff_lincomb([(1, ff_mul(a.elt, ff_derive(b.elt))), (-1, ff_mul(b.elt, ff_derive(a.elt)))])
    return KForm(elt=elt, weight=a.weight + b.weight + 1)


def mu1(sections: Sequence[KForm], *, prime: int | None = None, source: str = "mu1") -> GaussMapImage:
    """First Gaussian map on Λ^2 of the span of `sections`: Wronskians for all pairs i < j."""

    if not sections:
        raise DependentSectionsError("mu1 needs at least one section")

    weights = {s.weight for s in sections}
    if len(weights) != 1:
        raise GaussianMapsError(f"mu1 needs sections of equal weight, got {sorted(weights)}")
    if rank(coordinatize(sections)) != len(sections):
        raise DependentSectionsError(f"the {len(sections)} input sections are linearly dependent")

    w = weights.pop()
    derivs = [ff_derive(s.elt) for s in sections]
    images = []
    for i in range(len(sections)):
        for j in range(i + 1, len(sections)):
            elt = ff_lincomb([(1, ff_mul(sections[i].elt, derivs[j])), (-1, ff_mul(sections[j].elt, derivs[i]))])
            images += [KForm(elt=elt, weight=2 * w + 1)]

    return GaussMapImage(source=source, images=tuple(images), certificate=_rank_of(images, prime))


def mu1_restricted(curve_or_basis: CurveModel | CanonicalBasis, *, prime: int | None = None) -> GaussMapImage:
    """mu1 on the subsystem H^0(K - F)."""
    basis = _resolve_basis(curve_or_basis)
    return mu1(subsystem_K_minus_F(basis), prime=prime, source="mu1_K_minus_F")


def mu2_images(quadrics: Sequence[QuadricForm]) -> list[KForm]:
    """
    mu2 of each quadric, Σ a_ij f_i'' f_j (dx)^4, cross-checked against -Σ a_ij f_i' f_j' (dx)^4.
    All quadrics must share one canonical basis.
    """

    if not quadrics:
        return []

    basis = quadrics[0].basis
    if any(Q.basis.forms != basis.forms for Q in quadrics):
        raise GaussianMapsError("mu2_images needs quadrics over one canonical basis")

    r0, _ = _membership_rows(quadrics)
    for row in r0.rows:
        if any(row):
            residual = ff_from_coordinates(pair_tables(basis).product_coords[1], row)
            raise NotInI2Error(f"quadric is not in I2: Σ a_ij f_i f_j = {residual}")

    second_table, first_table, frame = pair_tables(basis).mu2_coords
    weights = RatMatrix.from_rows([_diag_weights(Q) for Q in quadrics])
    second, first = matmul(weights, second_table), matmul(weights, first_table)

    if any(s + f for srow, frow in zip(second.rows, first.rows) for s, f in zip(srow, frow)):
        raise InternalCheckError(f"the two local formulas for mu2 disagree on {basis.curve}")

    return [KForm(elt=ff_from_coordinates(frame, row), weight=4) for row in second.rows]


def mu2(Q: QuadricForm) -> KForm:
    """Σ a_ij f_i'' f_j (dx)^4, cross-checked against -Σ a_ij f_i' f_j' (dx)^4."""
    if Q.is_zero():
        return KForm(elt=ff_const(Q.curve, 0), weight=4)
    return mu2_images([Q])[0]


def rank_mu2(curve_or_basis: CurveModel | CanonicalBasis, *, prime: int | None = None) -> GaussMapImage:
    images = tuple(mu2_images(i2_basis(curve_or_basis)))
    return GaussMapImage(source="mu2_I2", images=images, certificate=_rank_of(images, prime))


def corank_mu1K(curve_or_basis: CurveModel | CanonicalBasis, *, prime: int | None = None) -> int:
    """h^0(3K) - rank mu1 on the full canonical system."""
    basis = _resolve_basis(curve_or_basis)
    return h0_kK(len(basis), 3) - mu1(basis.forms, prime=prime, source="mu1_K").rank
