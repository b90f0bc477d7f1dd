import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

from gaussian_maps.utils.errors import CurveModelError, GaussianMapsError
from gaussian_maps.utils.linalg import RatMatrix
from gaussian_maps.utils.poly import RatFunc, Scalar, UniPoly, is_squarefree, poly_gcd, poly_lcm_all, to_rational
from gaussian_maps.utils.resultant import YPoly, y_trim


@dataclass(frozen=True)
class CurveModel:
    """
    Superelliptic model y^n = f(x) with f squarefree.

    Only the two shapes with totally ramified or unramified infinity are admitted,
    i.e. d = gcd(n, deg f) is 1 or n.
    """

    n: int
    f: UniPoly
    label: str | None = field(default=None, compare=False)

    def __post_init__(self):

        if not isinstance(self.n, int) or self.n < 2:
            raise CurveModelError(f"cover degree must be an integer >= 2, got {self.n=}")
        if not self.f or self.f.degree < 3:
            raise CurveModelError(f"f must have degree >= 3, got f = {self.f}")
        if not is_squarefree(self.f):
            raise CurveModelError(f"f = {self.f} is not squarefree")

        d = math.gcd(self.n, self.f.degree)
        if d not in (1, self.n):
            raise CurveModelError(f"gcd(n, deg f) = {d} must be 1 or n = {self.n}; infinity of mixed ramification is not supported")

    @property
    def m(self) -> int:
        return self.f.degree

    @property
    def c(self) -> Fraction:
        return self.f.lc

    @property
    def d(self) -> int:
        return math.gcd(self.n, self.m)

    @property
    def genus(self) -> int:
        return ((self.n - 1) * (self.m - 1) + 1 - self.d) // 2

    @property
    def is_superelliptic(self) -> bool:
        return True

    @property
    def reduction(self) -> tuple[UniPoly, ...]:
        """Coefficients s_b of the rewriting rule y^n = Σ s_b(x) y^b."""
        return (self.f,) + (UniPoly.zero(),) * (self.n - 1)

    @cached_property
    def dydx(self) -> "FFElement":
        # f'·y / (n·f), equal to f' / (n·y^(n-1)) modulo y^n - f
        return FFElement(curve=self, nums=(UniPoly.zero(), self.f.derivative()), den=self.f.scale(self.n))

    def __str__(self) -> str:
        return f"y^{self.n} = {self.f}"


@dataclass(frozen=True)
class PlaneModel:
    """
    General plane model E(x, y) = y^n - Σ_{b<n} s_b(x) y^b = 0, monic in y.

    Supports field arithmetic and differentiation only; no valuations or holomorphy checks.
    """

    reduction: tuple[UniPoly, ...]
    label: str | None = field(default=None, compare=False)

    def __post_init__(self):
        if len(self.reduction) < 2:
            raise CurveModelError(f"a plane model needs y-degree >= 2, got {len(self.reduction)}")

    @classmethod
    def from_equation(cls, equation: Sequence[UniPoly], label: str | None = None) -> "PlaneModel":
        """Build from the coefficients (by y-degree) of E(x, y), which must be monic in y."""
        equation = y_trim(equation)
        if not equation or equation[-1] != UniPoly.one():
            raise CurveModelError("the general model must be monic in y")
        return cls(reduction=tuple(-c for c in equation[:-1]), label=label)

    @property
    def n(self) -> int:
        return len(self.reduction)

    @property
    def is_superelliptic(self) -> bool:
        return False

    @property
    def equation(self) -> YPoly:
        return tuple(-s for s in self.reduction) + (UniPoly.one(),)

    @cached_property
    def e_y(self) -> "FFElement":
        """∂E/∂y as a field element."""
        nums = [UniPoly.zero()] * self.n
        nums[self.n - 1] = UniPoly.constant(self.n)
        for b in range(1, self.n):
            nums[b - 1] = nums[b - 1] - self.reduction[b].scale(b)
        return FFElement(curve=self, nums=tuple(nums))

    @cached_property
    def dydx(self) -> "FFElement":
        e_x = FFElement(curve=self, nums=tuple(-s.derivative() for s in self.reduction))
        return -(e_x * ff_inv(self.e_y))

    def __str__(self) -> str:
        terms = [f"({s})*y^{b}" if b else f"({s})" for b, s in enumerate(self.reduction) if s]
        return f"y^{self.n} = " + (" + ".join(terms) or "0")


type Model = CurveModel | PlaneModel


def _reduce_y(curve: Model, prod: list[UniPoly]) -> list[UniPoly]:
    # rewrite y^k, k >= n, with y^n = Σ s_b y^b, from the top down
    n = curve.n
    reduction = curve.reduction
    for k in range(len(prod) - 1, n - 1, -1):
        c = prod[k]
        if not c:
            continue
        for b, s in enumerate(reduction):
            if s:
                prod[k - n + b] = prod[k - n + b] + c * s
    return prod[:n]


@dataclass(frozen=True)
class FFElement:
    """
    Element Σ_b (nums[b] / den) · y^b of Q(x)[y]/(E), b < n.

    Normal form: den monic and gcd(den, nums...) = 1, so structural equality is field equality.
    """

    curve: Model
    nums: tuple[UniPoly, ...]
    den: UniPoly = UniPoly.one()

    def __post_init__(self):

        n = self.curve.n
        nums = list(self.nums)
        if len(nums) > n:
            raise GaussianMapsError(f"element has {len(nums)} y-coefficients, expected at most {n}")
        nums += [UniPoly.zero()] * (n - len(nums))

        den = self.den
        if not den:
            raise ZeroDivisionError("field element with zero denominator")

        if not any(nums):
            den = UniPoly.one()
        else:
            if den.degree > 0:
                g = den
                for p in nums:
                    if p:
                        g = poly_gcd(g, p)
                        if g.degree == 0:
                            break
                if g.degree > 0:
                    nums = [p // g for p in nums]
                    den = den // g
            if den.lc != 1:
                inv = 1 / den.lc
                nums = [p.scale(inv) for p in nums]
                den = den.scale(inv)

        object.__setattr__(self, "nums", tuple(nums))
        object.__setattr__(self, "den", den)

    @classmethod
    def _trusted(cls, curve: Model, nums: tuple[UniPoly, ...], den: UniPoly) -> "FFElement":
        # bypasses normalisation; only for results already in normal form
        obj = object.__new__(cls)
        object.__setattr__(obj, "curve", curve)
        object.__setattr__(obj, "nums", nums)
        object.__setattr__(obj, "den", den)
        return obj

    @property
    def coeffs(self) -> tuple[RatFunc, ...]:
        """The reduced coefficient functions r_b with self = Σ r_b y^b."""
        return tuple(RatFunc(num=p, den=self.den) for p in self.nums)

    def is_zero(self) -> bool:
        return not any(self.nums)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def _check_curve(self, other: "FFElement") -> None:
        if other.curve is not self.curve and other.curve != self.curve:
            raise CurveModelError(f"curve mismatch: {self.curve} vs {other.curve}")

    def _coerce(self, other) -> "FFElement":
        if isinstance(other, FFElement):
            self._check_curve(other)
            return other
        if isinstance(other, (int, Fraction)):
            return ff_const(self.curve, other)
        if isinstance(other, UniPoly):
            return FFElement(curve=self.curve, nums=(other,))
        return NotImplemented

    def __add__(self, other) -> "FFElement":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return FFElement(curve=self.curve, nums=tuple(p + q for p, q in zip(self.nums, other.nums)), den=self.den)
        g = poly_gcd(self.den, other.den)
        ma, mb = other.den // g, self.den // g
        nums = tuple(p * ma + q * mb for p, q in zip(self.nums, other.nums))
        return FFElement(curve=self.curve, nums=nums, den=self.den * ma)

    __radd__ = __add__

    def __neg__(self) -> "FFElement":
        return FFElement._trusted(self.curve, tuple(-p for p in self.nums), self.den)

    def __sub__(self, other) -> "FFElement":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "FFElement":
        return (-self) + other

    def scale(self, c: Scalar) -> "FFElement":
        c = to_rational(c)
        if not c:
            return ff_const(self.curve, 0)
        return FFElement._trusted(self.curve, tuple(p.scale(c) for p in self.nums), self.den)

    def __mul__(self, other) -> "FFElement":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return ff_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "FFElement":
        if isinstance(other, (int, Fraction)):
            return self.scale(1 / to_rational(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return ff_mul(self, ff_inv(other))

    def __pow__(self, k: int) -> "FFElement":
        if k < 0:
            return ff_inv(self) ** (-k)
        result, base = ff_const(self.curve, 1), self
        while k:
            if k & 1:
                result = ff_mul(result, base)
            base = ff_mul(base, base)
            k >>= 1
        return result

    def derive(self) -> "FFElement":
        return ff_derive(self)

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        terms = []
        for b, p in enumerate(self.nums):
            if p:
                mono = "" if b == 0 else ("*y" if b == 1 else f"*y^{b}")
                terms += [f"({p}){mono}"]
        body = " + ".join(terms)
        return body if self.den.degree == 0 else f"[{body}]/({self.den})"


def ff_const(curve: Model, value: Scalar) -> FFElement:
    return FFElement(curve=curve, nums=(UniPoly.constant(value),))


def ff_from_poly(curve: Model, p: UniPoly, den: UniPoly | None = None) -> FFElement:
    return FFElement(curve=curve, nums=(p,), den=den or UniPoly.one())


def ff_x(curve: Model) -> FFElement:
    return FFElement(curve=curve, nums=(UniPoly.x(),))


def ff_y_power(curve: Model, k: int) -> FFElement:
    """y^k in normal form; negative powers are eliminated eagerly (1/y^b = y^(n-b)/f)."""

    n = curve.n
    if 0 <= k < n:
        nums = [UniPoly.zero()] * n
        nums[k] = UniPoly.one()
        return FFElement(curve=curve, nums=tuple(nums))

    if not curve.is_superelliptic:
        y = ff_y_power(curve, 1)
        return y**k

    q, r = divmod(k, n)  # y^k = f^q · y^r with 0 <= r < n, q possibly negative
    nums = [UniPoly.zero()] * n
    if q >= 0:
        nums[r] = curve.f**q
        return FFElement(curve=curve, nums=tuple(nums))
    nums[r] = UniPoly.one()
    return FFElement(curve=curve, nums=tuple(nums), den=curve.f ** (-q))


def ff_monomial(curve: Model, a: int, b: int, coeff: Scalar = 1) -> FFElement:
    """coeff · x^a · y^b (b may be negative)."""
    return ff_y_power(curve, b) * FFElement(curve=curve, nums=(UniPoly.monomial(a, coeff),))


def ff_mul(a: FFElement, b: FFElement) -> FFElement:
    """Product in Q(x)[y]/(E), rewriting y^n with the defining relation."""

    a._check_curve(b)
    curve = a.curve
    n = curve.n
    prod = [UniPoly.zero()] * (2 * n - 1)
    for i, p in enumerate(a.nums):
        if not p:
            continue
        for j, q in enumerate(b.nums):
            if q:
                prod[i + j] = prod[i + j] + p * q

    return FFElement(curve=curve, nums=tuple(_reduce_y(curve, prod)), den=a.den * b.den)


def _rf_divmod(a: list[RatFunc], b: list[RatFunc]) -> tuple[list[RatFunc], list[RatFunc]]:
    # division of polynomials in y over Q(x); b has a nonzero leading coefficient
    rem = list(a)
    db = len(b) - 1
    if len(rem) - 1 < db:
        return [], rem
    quot = [RatFunc(num=UniPoly.zero())] * (len(rem) - db)
    inv_lc = b[-1].inverse()
    for k in range(len(rem) - 1, db - 1, -1):
        c = rem[k]
        if not c:
            continue
        q = c * inv_lc
        quot[k - db] = q
        for j in range(db + 1):
            rem[k - db + j] = rem[k - db + j] - q * b[j]
    rem = rem[:db]
    while rem and not rem[-1]:
        rem.pop()
    return quot, rem


def _rf_sub_mul(s0: list[RatFunc], q: list[RatFunc], s1: list[RatFunc]) -> list[RatFunc]:
    # s0 - q*s1
    out = list(s0) + [RatFunc(num=UniPoly.zero())] * max(0, len(q) + len(s1) - 1 - len(s0))
    for i, qi in enumerate(q):
        if not qi:
            continue
        for j, sj in enumerate(s1):
            if sj:
                out[i + j] = out[i + j] - qi * sj
    while out and not out[-1]:
        out.pop()
    return out


def _from_ratfuncs(curve: Model, coeffs: Sequence[RatFunc]) -> FFElement:
    coeffs = list(coeffs) + [RatFunc(num=UniPoly.zero())] * (curve.n - len(coeffs))
    den = poly_lcm_all(r.den for r in coeffs)
    nums = tuple(r.num * (den // r.den) for r in coeffs)
    return FFElement(curve=curve, nums=nums, den=den)


def ff_inv(a: FFElement) -> FFElement:
    """Multiplicative inverse by the extended Euclidean algorithm in Q(x)[y] modulo the relation."""

    if a.is_zero():
        raise ZeroDivisionError("inverse of the zero field element")

    curve = a.curve
    n = curve.n
    support = [b for b, p in enumerate(a.nums) if p]

    # r·y^b with y^n = f: (r·y^b)^-1 = y^(n-b) / (r·f)
    if curve.is_superelliptic and len(support) == 1:
        b = support[0]
        p = a.nums[b]
        if b == 0:
            return FFElement(curve=curve, nums=(a.den,), den=p)
        nums = [UniPoly.zero()] * n
        nums[n - b] = a.den
        return FFElement(curve=curve, nums=tuple(nums), den=p * curve.f)

    zero = RatFunc(num=UniPoly.zero())
    r0 = [RatFunc(num=-s) for s in curve.reduction] + [RatFunc(num=UniPoly.one())]
    r1 = [c for c in a.coeffs]
    while r1 and not r1[-1]:
        r1.pop()
    s0: list[RatFunc] = []
    s1: list[RatFunc] = [RatFunc(num=UniPoly.one())]

    while r1:
        q, r = _rf_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _rf_sub_mul(s0, q, s1)

    if len(r0) != 1:
        raise CurveModelError(f"{a} is a zero divisor: the defining relation of {curve} is reducible")

    inv_g = r0[0].inverse()
    coeffs = [c * inv_g for c in s0] or [zero]
    if len(coeffs) > n:
        _, coeffs = _rf_divmod(coeffs, [RatFunc(num=-s) for s in curve.reduction] + [RatFunc(num=UniPoly.one())])

    return _from_ratfuncs(curve, coeffs)


def ff_derive(a: FFElement) -> FFElement:
    """Formal d/dx with dy/dx from the defining relation; for y^n = f, dy/dx = f'·y / (n·f)."""

    curve = a.curve
    if a.is_zero():
        return a

    den, dden = a.den, a.den.derivative()

    if curve.is_superelliptic:
        # d(N_b/D · y^b) = [(N_b' D - N_b D')·n·f + N_b·D·b·f'] / (n·f·D²) · y^b
        f, df, n = curve.f, curve.f.derivative(), curve.n
        nums = tuple((p.derivative() * den - p * dden) * f.scale(n) + (p * den * df).scale(b) for b, p in enumerate(a.nums))
        return FFElement(curve=curve, nums=nums, den=(den * den * f).scale(n))

    # Σ r_b' y^b + (Σ b r_b y^(b-1)) · dy/dx
    outer = FFElement(curve=curve, nums=tuple(p.derivative() * den - p * dden for p in a.nums), den=den * den)
    inner_nums = tuple(a.nums[b + 1].scale(b + 1) for b in range(curve.n - 1))
    inner = FFElement(curve=curve, nums=inner_nums, den=den)
    return outer + ff_mul(inner, curve.dydx)


def ff_lincomb(terms: Iterable[tuple[Scalar, FFElement]]) -> FFElement:
    """Σ c_k · e_k over one common denominator; requires at least one term."""

    terms = [(to_rational(c), e) for c, e in terms]
    if not terms:
        raise GaussianMapsError("ff_lincomb needs at least one term")

    curve = terms[0][1].curve
    live = [(c, e) for c, e in terms if c and not e.is_zero()]
    if not live:
        return ff_const(curve, 0)

    den = poly_lcm_all({e.den for _, e in live})
    acc = [UniPoly.zero()] * curve.n
    for c, e in live:
        e._check_curve(live[0][1])
        mult = (den // e.den).scale(c)
        for b, p in enumerate(e.nums):
            if p:
                acc[b] = acc[b] + p * mult

    return FFElement(curve=curve, nums=tuple(acc), den=den)


def poles_over_f(a: FFElement) -> bool:
    """True iff the denominator of `a` divides a power of f (poles only over roots of f and at infinity)."""

    den = a.den
    while den.degree > 0:
        g = poly_gcd(den, a.curve.f)
        if g.degree == 0:
            return False
        den = den // g
    return True


@dataclass(frozen=True)
class KForm:
    """A k-canonical form elt·(dx)^weight."""

    elt: FFElement
    weight: int = 0

    def __post_init__(self):
        if self.weight < 0:
            raise GaussianMapsError(f"form weight must be >= 0, got {self.weight}")

    @property
    def curve(self) -> Model:
        return self.elt.curve

    def is_zero(self) -> bool:
        return self.elt.is_zero()

    def _check_weight(self, other: "KForm") -> None:
        if other.weight != self.weight:
            raise GaussianMapsError(f"cannot add forms of weights {self.weight} and {other.weight}")

    def __add__(self, other: "KForm") -> "KForm":
        self._check_weight(other)
        return KForm(elt=self.elt + other.elt, weight=self.weight)

    def __sub__(self, other: "KForm") -> "KForm":
        self._check_weight(other)
        return KForm(elt=self.elt - other.elt, weight=self.weight)

    def __neg__(self) -> "KForm":
        return KForm(elt=-self.elt, weight=self.weight)

    def __mul__(self, other) -> "KForm":
        if isinstance(other, KForm):
            return KForm(elt=ff_mul(self.elt, other.elt), weight=self.weight + other.weight)
        if isinstance(other, (int, Fraction)):
            return KForm(elt=self.elt.scale(other), weight=self.weight)
        return NotImplemented

    __rmul__ = __mul__

    def __str__(self) -> str:
        if self.weight == 0:
            return str(self.elt)
        suffix = "dx" if self.weight == 1 else f"(dx)^{self.weight}"
        return f"{self.elt} {suffix}"


def coordinatize(forms: Sequence[KForm | FFElement]) -> RatMatrix:
    """
    Coordinate matrix of `forms` over one common denominator D(x): row k holds the
    coefficients of x^a·y^b in D·forms[k], columns ordered by (b, a).
    """

    if not forms:
        return RatMatrix.from_rows([], ncols=0)

    weights = {f.weight for f in forms if isinstance(f, KForm)}
    if len(weights) > 1:
        raise GaussianMapsError(f"coordinatize needs forms of equal weight, got {sorted(weights)}")

    return coordinatize_in_frame(forms)[0]


class CoordinateFrame(NamedTuple):
    """Common denominator and x-degree bound shared by the rows of a coordinate matrix."""

    curve: Model
    den: UniPoly
    width: int


def coordinatize_in_frame(forms: Sequence[KForm | FFElement]) -> tuple[RatMatrix, CoordinateFrame]:
    """`coordinatize`, also returning the frame needed to turn rows back into elements."""

    elts = [f.elt if isinstance(f, KForm) else f for f in forms]
    curve = elts[0].curve
    for e in elts[1:]:
        elts[0]._check_curve(e)

    den = poly_lcm_all({e.den for e in elts if not e.is_zero()})
    scaled = [[p * (den // e.den) for p in e.nums] for e in elts]
    width = max((p.degree for row in scaled for p in row), default=-1) + 1
    width = max(width, 1)

    rows = []
    for row in scaled:
        coords = []
        for b in range(curve.n):
            p = row[b]
            coords += [p[a] for a in range(width)]
        rows += [coords]

    return RatMatrix.from_rows(rows, ncols=curve.n * width), CoordinateFrame(curve=curve, den=den, width=width)


def ff_from_coordinates(frame: CoordinateFrame, coords: Sequence[Scalar]) -> FFElement:
    """Inverse of one row of `coordinatize_in_frame`."""
    w = frame.width
    nums = tuple(UniPoly(coeffs=tuple(coords[b * w : (b + 1) * w])) for b in range(frame.curve.n))
    return FFElement(curve=frame.curve, nums=nums, den=frame.den)


def ff_from_ypoly(curve: Model, coeffs: Sequence[UniPoly], den: UniPoly | None = None) -> FFElement:
    """Σ coeffs[b]·y^b / den for any y-degree, reduced with the defining relation."""
    nums = _reduce_y(curve, list(coeffs) + [UniPoly.zero()] * max(0, curve.n - len(coeffs)))
    return FFElement(curve=curve, nums=tuple(nums), den=den or UniPoly.one())
