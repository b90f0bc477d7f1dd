import random
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

import sympy
from sympy import GF, QQ
from sympy.polys.matrices import DomainMatrix

from gaussian_maps.utils.errors import InternalCheckError, PrimeDivisorError
from gaussian_maps.utils.poly import Scalar, to_rational

type RatVector = tuple[Fraction, ...]


@dataclass(frozen=True, slots=True)
class RatMatrix:
    """Dense rectangular matrix over Q."""

    rows: tuple[tuple[Fraction, ...], ...]
    ncols: int

    def __post_init__(self):
        rows = tuple(tuple(to_rational(a) for a in row) for row in self.rows)
        if any(len(row) != self.ncols for row in rows):
            raise ValueError(f"matrix is not rectangular ({self.ncols=}, row lengths {sorted({len(r) for r in rows})})")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Scalar]], ncols: int | None = None) -> "RatMatrix":
        rows = [tuple(row) for row in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        return cls(rows=tuple(rows), ncols=ncols)

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)], ncols=n)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "RatMatrix":
        return cls.from_rows([[0] * ncols for _ in range(nrows)], ncols=ncols)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def transpose(self) -> "RatMatrix":
        return RatMatrix(rows=tuple(zip(*self.rows)) if self.rows else tuple(() for _ in range(self.ncols)), ncols=self.nrows)

    def permute_columns(self, perm: Sequence[int]) -> "RatMatrix":
        return RatMatrix(rows=tuple(tuple(row[j] for j in perm) for row in self.rows), ncols=self.ncols)

    def apply(self, vector: Sequence[Scalar]) -> RatVector:
        """Matrix-vector product M·v."""
        return tuple(sum((a * b for a, b in zip(row, vector)), Fraction(0)) for row in self.rows)

    def is_symmetric(self) -> bool:
        return self.nrows == self.ncols and all(self.rows[i][j] == self.rows[j][i] for i in range(self.nrows) for j in range(i))

    def is_zero(self) -> bool:
        return not any(any(row) for row in self.rows)


def _fraction(e) -> Fraction:
    return Fraction(int(e.numerator), int(e.denominator))


def to_domain_matrix(matrix: RatMatrix) -> DomainMatrix:
    """The same matrix as a sparse sympy DomainMatrix over QQ."""
    dod = {i: {j: QQ(a.numerator, a.denominator) for j, a in enumerate(row) if a} for i, row in enumerate(matrix.rows)}
    return DomainMatrix.from_dod({i: row for i, row in dod.items() if row}, matrix.shape, QQ)


def from_domain_matrix(dm: DomainMatrix) -> RatMatrix:
    nrows, ncols = dm.shape
    rows = [[Fraction(0)] * ncols for _ in range(nrows)]
    for i, row in dm.to_dod().items():
        for j, e in row.items():
            rows[i][j] = _fraction(e)
    return RatMatrix(rows=tuple(tuple(row) for row in rows), ncols=ncols)


def matmul(a: RatMatrix, b: RatMatrix) -> RatMatrix:
    """Exact product a·b."""
    if a.ncols != b.nrows:
        raise ValueError(f"cannot multiply shapes {a.shape} and {b.shape}")
    if not a.nrows or not b.ncols:
        return RatMatrix.zeros(a.nrows, b.ncols)
    return from_domain_matrix(to_domain_matrix(a).matmul(to_domain_matrix(b)))


def rank(matrix: RatMatrix) -> int:
    """Exact rank over Q."""
    if not matrix.rows or not matrix.ncols:
        return 0
    _, pivots = to_domain_matrix(matrix).rref()
    return len(pivots)


def kernel_basis(matrix: RatMatrix) -> list[RatVector]:
    """
    Exact basis of {v : M·v = 0}, one vector per non-pivot column in ascending order,
    each with its first nonzero coordinate equal to 1.
    """

    ncols = matrix.ncols
    if matrix.rows and ncols:
        reduced, pivots = to_domain_matrix(matrix).rref()
        reduced = reduced.to_dod()
    else:
        reduced, pivots = {}, ()

    pivot_set = set(pivots)
    basis = []
    for j in range(ncols):
        if j in pivot_set:
            continue
        v = [Fraction(0)] * ncols
        v[j] = Fraction(1)
        for i, c in enumerate(pivots):
            e = reduced.get(i, {}).get(j)
            if e:
                v[c] = -_fraction(e)
        lead = next(a for a in v if a)
        basis += [tuple(a / lead for a in v)]

    return basis


def modular_rank(matrix: RatMatrix, p: int) -> int:
    """Rank of M reduced modulo the prime p; never exceeds the rank over Q."""

    field = GF(p)
    dod = {}
    for i, row in enumerate(matrix.rows):
        reduced = {}
        for j, a in enumerate(row):
            if a.denominator % p == 0:
                raise PrimeDivisorError(f"prime {p} divides the denominator of {a}", prime=p)
            r = a.numerator * pow(a.denominator, -1, p) % p
            if r:
                reduced[j] = field(r)
        if reduced:
            dod[i] = reduced

    if not dod:
        return 0

    _, pivots = DomainMatrix.from_dod(dod, matrix.shape, field).rref()
    return len(pivots)


def solve_left(matrix: RatMatrix, vector: Sequence[Scalar]) -> RatVector | None:
    """Return c with c·M = v, or None if v is not in the row space of M."""

    n = matrix.nrows
    # augmented system [M^T | v]
    dod: dict[int, dict[int, object]] = {}
    for i, row in enumerate(matrix.rows):
        for j, a in enumerate(row):
            if a:
                dod.setdefault(j, {})[i] = QQ(a.numerator, a.denominator)
    for j, b in enumerate(vector):
        b = to_rational(b)
        if b:
            dod.setdefault(j, {})[n] = QQ(b.numerator, b.denominator)

    if not dod:
        return tuple(Fraction(0) for _ in range(n))

    reduced, pivots = DomainMatrix.from_dod(dod, (matrix.ncols, n + 1), QQ).rref()
    if n in pivots:
        return None

    reduced = reduced.to_dod()
    solution = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        e = reduced.get(i, {}).get(n)
        if e:
            solution[c] = _fraction(e)

    return tuple(solution)


def random_prime(rng: random.Random, bits: int = 30) -> int:
    """A prime in [2^(bits-1), 2^bits) drawn from the seeded generator `rng`."""
    low = 1 << (bits - 1)
    candidate = low + rng.randrange(low)
    p = sympy.nextprime(candidate)
    return int(p if p < 2 * low else sympy.prevprime(candidate))


class RankCertificate(NamedTuple):
    exact: int
    modular: int | None
    prime: int


def certified_rank(matrix: RatMatrix, *, prime: int) -> RankCertificate:
    """Modular pre-pass with `prime` followed by the authoritative exact rank."""

    try:
        modular = modular_rank(matrix, prime)
    except PrimeDivisorError:
        modular = None

    exact = rank(matrix)
    if modular is not None and modular > exact:
        raise InternalCheckError(f"modular rank {modular} exceeds exact rank {exact} ({prime=})")

    return RankCertificate(exact=exact, modular=modular, prime=prime)


def modular_agreements(checks: Sequence[tuple[RatMatrix, int]], primes: Sequence[int]) -> int:
    """Number of (matrix, prime) pairs whose modular rank equals the known exact rank."""

    agree = 0
    for matrix, exact in checks:
        for p in primes:
            try:
                agree += modular_rank(matrix, p) == exact
            except PrimeDivisorError:
                pass

    return agree
