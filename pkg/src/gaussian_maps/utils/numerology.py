"""Closed-form dimension counts and hypothesis predicates."""

from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

from gaussian_maps.utils.errors import GaussianMapsError


@dataclass(frozen=True)
class ProductCurveSpec:
    """A curve of bidegree (d1, d2) on the product of curves of genera g1 and g2."""

    g1: int
    g2: int
    d1: int
    d2: int

    def __post_init__(self):
        if self.g1 < 0 or self.g2 < 0:
            raise GaussianMapsError(f"factor genera must be >= 0, got {self.g1=}, {self.g2=}")
        if self.d1 < 1 or self.d2 < 1:
            raise GaussianMapsError(f"bidegrees must be >= 1, got {self.d1=}, {self.d2=}")


def genus_product(spec: ProductCurveSpec) -> int:
    return 1 + (spec.g2 - 1) * spec.d1 + (spec.g1 - 1) * spec.d2 + spec.d1 * spec.d2


def h0_kK(g: int, k: int) -> int:
    """dim H^0(kK) = (2k-1)(g-1) for k >= 2."""
    if g < 2:
        raise GaussianMapsError(f"h0_kK needs genus >= 2, got {g=}")
    if k < 2:
        raise GaussianMapsError(f"h0_kK needs k >= 2, got {k=}")
    return (2 * k - 1) * (g - 1)


def dim_i2_expected(g: int, hyperelliptic: bool) -> int:
    if g < 3:
        raise GaussianMapsError(f"I2 is only considered for genus >= 3, got {g=}")
    if hyperelliptic:
        return (g - 1) * (g - 2) // 2
    return (g - 2) * (g - 3) // 2


def surj_possible(g: int) -> bool:
    """dim I2 >= dim H^0(4K) for a general curve of genus g."""
    return g >= 4 and dim_i2_expected(g, hyperelliptic=False) >= h0_kK(g, 4)


def surjectivity_threshold() -> int:
    g = 4
    while not surj_possible(g):
        g += 1
    return g


def bel_criterion(g: int, l: int) -> bool:
    return 2 * l >= 3 * (2 * g + 2) + 2 * g - 1


def wahl_product_hypotheses(spec: ProductCurveSpec) -> bool:
    g1, g2, d1, d2 = spec.g1, spec.g2, spec.d1, spec.d2

    # the hypotheses are stated with g1 >= g2
    if g1 < g2:
        g1, g2, d1, d2 = g2, g1, d2, d1

    if g1 >= 2 and g2 >= 2:
        return d1 >= 2 * g1 + 5 and d2 >= 2 * g2 + 5
    if g1 >= 2 and g2 == 1:
        return d1 >= 2 * g1 + 5 and d2 >= 7
    if g1 >= 2 and g2 == 0:
        return d2 >= 7 and d2 * (g1 - 1) > 2 * d1 >= 4 * g1 + 10

    return False


def maroni_admissible(g: int, k: int) -> bool:
    """(g-4)/3 <= k <= (g-2)/2 for the scroll invariant of a trigonal canonical curve."""
    return Fraction(g - 4, 3) <= k <= Fraction(g - 2, 2)


def corank_mu1K_trigonal(g: int) -> int:
    return g + 5


def rank_mu2_expected(g: int, kind: Literal["hyperelliptic", "trigonal"]) -> int:
    """Rank of the second Gaussian map on I2: 2g-5 (hyperelliptic), 4g-18 (trigonal, g >= 8)."""

    match kind:
        case "hyperelliptic":
            if g < 3:
                raise GaussianMapsError(f"hyperelliptic rank law needs g >= 3, got {g=}")
            return 2 * g - 5
        case "trigonal":
            if g < 8:
                raise GaussianMapsError(f"trigonal rank law needs g >= 8, got {g=}")
            return 4 * g - 18
        case _:
            raise GaussianMapsError(f"unknown curve kind {kind!r}")
