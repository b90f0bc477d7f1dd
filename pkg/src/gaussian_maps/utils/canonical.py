from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterator, Sequence

from gaussian_maps.utils.errors import CurveModelError, DependentSectionsError, FiberRamifiedError, InternalCheckError
from gaussian_maps.utils.function_field import CurveModel, FFElement, KForm, Model, coordinatize, ff_const, ff_derive, ff_from_ypoly, ff_monomial, ff_y_power
from gaussian_maps.utils.linalg import rank
from gaussian_maps.utils.poly import UniPoly


@dataclass(frozen=True, eq=False)
class CanonicalBasis:
    """
    Ordered basis of holomorphic differentials.

    For superelliptic curves `indices[k] = (a, b)` names the form x^a dx / y^b, ordered by
    b ascending, then a ascending. User-supplied bases carry no indices.
    """

    curve: Model
    forms: tuple[KForm, ...]
    indices: tuple[tuple[int, int], ...] = ()

    def __len__(self) -> int:
        return len(self.forms)

    def __iter__(self) -> Iterator[KForm]:
        return iter(self.forms)

    def __getitem__(self, k: int) -> KForm:
        return self.forms[k]

    @cached_property
    def jets(self) -> tuple[tuple[FFElement, FFElement, FFElement], ...]:
        """(f_i, f_i', f_i'') for each basis form f_i·dx."""
        out = []
        for form in self.forms:
            d1 = ff_derive(form.elt)
            out += [(form.elt, d1, ff_derive(d1))]
        return tuple(out)


def holomorphic_bound(curve: CurveModel, b: int) -> int:
    """Largest a such that x^a dx / y^b is holomorphic (-1 if none)."""
    if curve.d == curve.n:
        return b * curve.m // curve.n - 2
    return (b * curve.m - 1) // curve.n - 1


@lru_cache(maxsize=64)
def canonical_basis(curve: CurveModel) -> CanonicalBasis:
    """The monomial basis {x^a dx / y^b : 1 <= b <= n-1, 0 <= a <= A(b)} of H^0(K)."""

    if not isinstance(curve, CurveModel):
        raise CurveModelError("the monomial canonical basis exists only for superelliptic models; supply adjoint numerators instead")

    indices, forms = [], []
    for b in range(1, curve.n):
        for a in range(holomorphic_bound(curve, b) + 1):
            indices += [(a, b)]
            forms += [KForm(elt=ff_monomial(curve, a, -b), weight=1)]

    if len(forms) != curve.genus:
        raise InternalCheckError(f"canonical basis of {curve} has {len(forms)} forms, expected genus {curve.genus}")

    return CanonicalBasis(curve=curve, forms=tuple(forms), indices=tuple(indices))


def canonical_basis_from_adjoints(model: Model, numerators: Sequence[Sequence[UniPoly]]) -> CanonicalBasis:
    """
    Basis h_k(x, y)·dx / E_y(x, y) from user-supplied adjoint numerators h_k (coefficients by y-degree).

    Holomorphy is not verified; only linear independence is.
    """

    if not numerators:
        raise DependentSectionsError("at least one adjoint numerator is required")

    if isinstance(model, CurveModel):
        e_y = ff_y_power(model, model.n - 1).scale(model.n)
    else:
        e_y = model.e_y

    inv_e_y = e_y ** -1
    forms = tuple(KForm(elt=ff_from_ypoly(model, h) * inv_e_y, weight=1) for h in numerators)
    if rank(coordinatize(forms)) != len(forms):
        raise DependentSectionsError(f"the {len(forms)} supplied adjoint forms are linearly dependent")

    return CanonicalBasis(curve=model, forms=forms)


def shift_hint(curve: CurveModel) -> int:
    """Smallest t >= 0 with f(t) != 0; substituting x -> x + t moves the fiber over 0 off the ramification."""
    t = 0
    while curve.f(t) == 0:
        t += 1
    return t


def _check_fiber(curve: CurveModel) -> None:
    if curve.f(0) == 0:
        t = shift_hint(curve)
        raise FiberRamifiedError(f"f(0) = 0 for {curve}: the fiber over x = 0 is ramified; substitute x -> x + {t}", shift=t)


def pencil_F(curve: CurveModel) -> tuple[KForm, KForm]:
    """The functions (1, 1/x) spanning H^0(F), F the fiber of x over 0."""
    _check_fiber(curve)
    one = ff_const(curve, 1)
    return KForm(elt=one), KForm(elt=FFElement(curve=curve, nums=(UniPoly.one(),), den=UniPoly.x()))


def subsystem_K_minus_F(basis: CanonicalBasis) -> tuple[KForm, ...]:
    """Basis forms with a >= 1, i.e. those vanishing on the fiber over x = 0."""
    _check_fiber(basis.curve)
    return tuple(form for form, (a, _) in zip(basis.forms, basis.indices) if a >= 1)
