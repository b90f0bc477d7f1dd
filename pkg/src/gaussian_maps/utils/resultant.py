from typing import Sequence

from gaussian_maps.utils.errors import GaussianMapsError
from gaussian_maps.utils.poly import UniPoly

# a polynomial in y with coefficients in Q[x]; entry b is the coefficient of y^b
type YPoly = tuple[UniPoly, ...]


def y_trim(a: Sequence[UniPoly]) -> YPoly:
    coeffs = list(a)
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return tuple(coeffs)


def y_degree(a: Sequence[UniPoly]) -> int:
    return len(y_trim(a)) - 1


def poly_det(matrix: Sequence[Sequence[UniPoly]]) -> UniPoly:
    """Determinant of a square matrix over Q[x] by Bareiss fraction-free elimination."""

    m = [list(row) for row in matrix]
    n = len(m)
    if n == 0:
        return UniPoly.one()

    negate = False
    prev = UniPoly.one()
    for c in range(n - 1):
        piv = next((i for i in range(c, n) if m[i][c]), None)
        if piv is None:
            return UniPoly.zero()
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            negate = not negate
        p = m[c][c]
        for i in range(c + 1, n):
            a = m[i][c]
            for k in range(c + 1, n):
                m[i][k] = (p * m[i][k] - a * m[c][k]).exact_div(prev)
            m[i][c] = UniPoly.zero()
        prev = p

    det = m[n - 1][n - 1]
    return -det if negate else det


def sylvester_matrix(a: Sequence[UniPoly], b: Sequence[UniPoly]) -> list[list[UniPoly]]:
    """Sylvester matrix in y: deg_y(b) shifted rows of a, then deg_y(a) shifted rows of b (highest degree first)."""

    a, b = y_trim(a), y_trim(b)
    da, db = len(a) - 1, len(b) - 1
    size = da + db
    zero = UniPoly.zero()

    rows = []
    for shift in range(db):
        rows += [[zero] * shift + list(reversed(a)) + [zero] * (size - shift - da - 1)]
    for shift in range(da):
        rows += [[zero] * shift + list(reversed(b)) + [zero] * (size - shift - db - 1)]

    return rows


def resultant_y(a: Sequence[UniPoly], b: Sequence[UniPoly]) -> UniPoly:
    """
    Resultant with respect to y of `a` and `b`, where `b` is monic in y of positive degree.

    Vanishes at x0 iff a(x0, y) and b(x0, y) share a root over the algebraic closure.
    """

    b = y_trim(b)
    if len(b) < 2 or b[-1] != UniPoly.one():
        raise GaussianMapsError(f"resultant_y needs b monic in y of positive degree, got leading coefficient {b[-1] if b else 0}")

    a = y_trim(a)
    if not a:
        return UniPoly.zero()

    return poly_det(sylvester_matrix(a, b))
