from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

from frozendict import frozendict

from gaussian_maps.utils.canonical import CanonicalBasis, canonical_basis, pencil_F, subsystem_K_minus_F
from gaussian_maps.utils.errors import CurveModelError, GaussianMapsError, NotAdjointError
from gaussian_maps.utils.function_field import CurveModel, KForm, coordinatize, ff_const, ff_from_poly, ff_monomial, ff_x, ff_y_power
from gaussian_maps.utils.gaussian import QuadricForm, mu1, mu2, wronskian
from gaussian_maps.utils.linalg import RatMatrix, RatVector, rank, solve_left


@dataclass(frozen=True, eq=False)
class AdjointPair:
    """
    Pencils (u0, u1) of sections of L (weight 0) and (w0, w1) of K - L (weight 1).

    `coords[(a, b)]` holds the canonical coordinates of u_a·w_b.
    """

    basis: CanonicalBasis
    u: tuple[KForm, KForm]
    w: tuple[KForm, KForm]
    coords: frozendict[tuple[int, int], RatVector]


def make_adjoint_pair(basis: CanonicalBasis, u: Sequence[KForm], w: Sequence[KForm]) -> AdjointPair:
    """Express every product u_a·w_b in the canonical basis; fails if one lies outside its span."""

    if len(u) != 2 or len(w) != 2:
        raise GaussianMapsError(f"an adjoint pair needs two pencils of two sections, got {len(u)} and {len(w)}")
    if any(s.weight != 0 for s in u) or any(s.weight != 1 for s in w):
        raise GaussianMapsError("adjoint pencils must have weights 0 (L) and 1 (K - L)")

    products = {(a, b): u[a] * w[b] for a in range(2) for b in range(2)}
    keys = list(products)
    frame = coordinatize([*basis.forms, *(products[k] for k in keys)])

    g = len(basis)
    basis_rows = RatMatrix(rows=frame.rows[:g], ncols=frame.ncols)
    coords = {}
    for k, row in zip(keys, frame.rows[g:]):
        c = solve_left(basis_rows, row)
        if c is None:
            raise NotAdjointError(f"product u{k[0]}·w{k[1]} = {products[k]} is not in the span of the canonical basis")
        coords[k] = c

    return AdjointPair(basis=basis, u=(u[0], u[1]), w=(w[0], w[1]), coords=frozendict(coords))


def _sym(a: RatVector, b: RatVector) -> list[list[Fraction]]:
    # a ⊙ b = (a b^T + b a^T) / 2
    return [[(a[i] * b[j] + b[i] * a[j]) / 2 for j in range(len(a))] for i in range(len(a))]


def adjoint_quadric(pair: AdjointPair) -> QuadricForm:
    """(u0 w0) ⊙ (u1 w1) - (u0 w1) ⊙ (u1 w0), a quadric of rank <= 4 in I2."""

    c = pair.coords
    plus = _sym(c[(0, 0)], c[(1, 1)])
    minus = _sym(c[(0, 1)], c[(1, 0)])
    rows = [[p - m for p, m in zip(rp, rm)] for rp, rm in zip(plus, minus)]

    return QuadricForm(basis=pair.basis, matrix=RatMatrix.from_rows(rows, ncols=len(pair.basis)))


def quadric_rank(Q: QuadricForm) -> int:
    """Rank of the symmetric bilinear form, by congruence (simultaneous row and column) elimination."""

    a = [list(row) for row in Q.matrix.rows]
    live = list(range(len(a)))
    r = 0

    while live:

        k = next((i for i in live if a[i][i]), None)

        if k is None:
            # all remaining diagonal entries vanish: add row/column j to row/column i to create a pivot 2·a_ij
            pair = next(((i, j) for i in live for j in live if i != j and a[i][j]), None)
            if pair is None:
                break
            i, j = pair
            for t in range(len(a)):
                a[i][t] += a[j][t]
            for t in range(len(a)):
                a[t][i] += a[t][j]
            k = i

        piv = a[k][k]
        live.remove(k)
        for i in live:
            factor = a[i][k] / piv
            if factor:
                for j in live:
                    a[i][j] -= factor * a[k][j]
        r += 1

    return r


def psi_pairs(curve_or_basis: CurveModel | CanonicalBasis) -> list[AdjointPair]:
    """The adjoint pairs ((1, 1/x), (t_i, t_j)) for i < j over a basis t of H^0(K - F)."""

    basis = curve_or_basis if isinstance(curve_or_basis, CanonicalBasis) else canonical_basis(curve_or_basis)
    u = pencil_F(basis.curve)
    t = subsystem_K_minus_F(basis)

    return [make_adjoint_pair(basis, u, (t[i], t[j])) for i in range(len(t)) for j in range(i + 1, len(t))]


def psi(curve: CurveModel, i: int, j: int) -> QuadricForm:
    """t_i ∧ t_j ↦ t_i ⊙ (t_j / x) - t_j ⊙ (t_i / x)."""

    basis = canonical_basis(curve)
    t = subsystem_K_minus_F(basis)
    if not 0 <= i < j < len(t):
        raise GaussianMapsError(f"psi needs 0 <= i < j < {len(t)}, got {i=}, {j=}")

    return adjoint_quadric(make_adjoint_pair(basis, pencil_F(curve), (t[i], t[j])))


def psi_basis(curve_or_basis: CurveModel | CanonicalBasis) -> list[QuadricForm]:
    return [adjoint_quadric(pair) for pair in psi_pairs(curve_or_basis)]


def quadric_span_rank(quadrics: Sequence[QuadricForm]) -> int:
    """Dimension of the span of `quadrics` as vectors in S^2 H^0(K)."""

    if not quadrics:
        return 0
    return rank(RatMatrix.from_rows([Q.pair_vector() for Q in quadrics]))


def factorization_check(pair: AdjointPair) -> bool:
    """mu2 of the adjoint quadric equals the product of the two pencil Wronskians."""
    lhs = mu2(adjoint_quadric(pair))
    rhs = wronskian(*pair.u) * wronskian(*pair.w)
    return lhs.weight == rhs.weight and lhs.elt == rhs.elt


def _is_plane_quintic(curve: CurveModel) -> bool:
    return curve.genus == 6 and (curve.n, curve.m) in {(5, 5), (4, 5), (5, 4)}


def pencil_quadric(curve: CurveModel, V: Sequence[KForm], W: Sequence[KForm]) -> QuadricForm:
    """
    Rank <= 4 quadric from two pencils V, W of H^0(O(1)) = <1, x, y> on a plane quintic,
    where K = 2·O(1) and K - L sections are W·dx/y^(n-1).
    """

    if not _is_plane_quintic(curve):
        raise CurveModelError(f"{curve} is not a smooth plane quintic model")

    omega = KForm(elt=ff_y_power(curve, -(curve.n - 1)), weight=1)
    pair = make_adjoint_pair(canonical_basis(curve), V, [s * omega for s in W])
    return adjoint_quadric(pair)


def quintic_pencil_quadrics(curve: CurveModel) -> list[QuadricForm]:
    """The six quadrics Q_{V,W} for V <= W among the pencils <1, x>, <1, y>, <x, y>."""

    ell = [KForm(elt=ff_const(curve, 1)), KForm(elt=ff_x(curve)), KForm(elt=ff_y_power(curve, 1))]
    pencils = [(ell[0], ell[1]), (ell[0], ell[2]), (ell[1], ell[2])]

    return [pencil_quadric(curve, pencils[p], pencils[q]) for p in range(3) for q in range(p, 3)]


class TypeCheck(NamedTuple):
    checked: frozendict[str, int]
    passed: bool


def trigonal_mu1_type_check(curve: CurveModel) -> TypeCheck:
    """
    Check the closed forms of mu1 on σ_ij = x^i y^j dx / y^2 for y^3 = f, deg f = 3k:

        type 1  σ_i0 ∧ σ_k0 -> (k - i) x^(i+k-1) / y^4
        type 2  σ_i0 ∧ σ_k1 -> (k - i) x^(i+k-1) / y^3 + x^(i+k) f' / (3 y^6)
        type 3  σ_i1 ∧ σ_k1 -> (k - i) x^(i+k-1) / y^2
    """

    if curve.n != 3 or curve.d != 3:
        raise CurveModelError(f"the trigonal type formulas need y^3 = f with 3 | deg f, got {curve}")

    basis = canonical_basis(curve)
    sigma0 = [(a, basis[pos]) for pos, (a, b) in enumerate(basis.indices) if b == 2]
    sigma1 = [(a, basis[pos]) for pos, (a, b) in enumerate(basis.indices) if b == 1]
    third_df = ff_from_poly(curve, curve.f.derivative().scale(Fraction(1, 3)))

    def lead(i: int, k: int, b: int):
        if i == k:
            return ff_const(curve, 0)
        return ff_monomial(curve, i + k - 1, -b, k - i)

    def image(s: KForm, t: KForm):
        return mu1([s, t]).images[0].elt

    checked = {"type1": 0, "type2": 0, "type3": 0}
    passed = True

    for pos, (i, si) in enumerate(sigma0):
        for k, sk in sigma0[pos + 1 :]:
            passed &= image(si, sk) == lead(i, k, 4)
            checked["type1"] += 1

    for i, si in sigma0:
        for k, sk in sigma1:
            passed &= image(si, sk) == lead(i, k, 3) + ff_monomial(curve, i + k, -6) * third_df
            checked["type2"] += 1

    for pos, (i, si) in enumerate(sigma1):
        for k, sk in sigma1[pos + 1 :]:
            passed &= image(si, sk) == lead(i, k, 2)
            checked["type3"] += 1

    return TypeCheck(checked=frozendict(checked), passed=passed)
