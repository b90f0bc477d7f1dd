import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable

from sympy import ZZ
from sympy.polys.densearith import dup_mul, dup_pdiv
from sympy.polys.euclidtools import dup_gcd

from gaussian_maps.utils.errors import GaussianMapsError

# BigRational: every scalar in the package is a Fraction (arbitrary precision, always reduced)
type BigRational = Fraction
type Scalar = int | Fraction


def to_rational(value: int | Fraction | str) -> Fraction:
    """Convert `value` to a Fraction, e.g. `"3/2"` to `Fraction(3, 2)`."""
    return value if isinstance(value, Fraction) else Fraction(value)


def render_rational(value: Fraction) -> str:
    """Render as `"p/q"` (or `"p"` for integers), the format used in every report."""
    return str(to_rational(value))


def _zz_image(p: "UniPoly") -> tuple[list, int]:
    """(q, s) with s > 0 and q = s·p an integer polynomial in sympy's dense form, leading coefficient first."""
    s = math.lcm(*(c.denominator for c in p.coeffs)) if p.coeffs else 1
    return [ZZ(c.numerator * (s // c.denominator)) for c in reversed(p.coeffs)], s


def _from_zz(q: list, *, num: int = 1, den: int = 1) -> "UniPoly":
    """(num / den)·q back as a UniPoly."""
    return UniPoly._raw([Fraction(int(c) * num, den) for c in reversed(q)])


@dataclass(frozen=True, slots=True)
class UniPoly:
    """
    Dense univariate polynomial over the rationals.

    `coeffs[k]` is the coefficient of x^k. Trailing zeros are stripped, so the zero
    polynomial is the empty tuple and the leading coefficient is always nonzero.
    """

    coeffs: tuple[Fraction, ...] = ()

    def __post_init__(self):
        coeffs = [to_rational(c) for c in self.coeffs]
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        object.__setattr__(self, "coeffs", tuple(coeffs))

    @classmethod
    def _raw(cls, coeffs: list[Fraction]) -> "UniPoly":
        # skips conversion; callers guarantee Fraction entries
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        obj = object.__new__(cls)
        object.__setattr__(obj, "coeffs", tuple(coeffs))
        return obj

    @classmethod
    def zero(cls) -> "UniPoly":
        return cls._raw([])

    @classmethod
    def one(cls) -> "UniPoly":
        return cls._raw([Fraction(1)])

    @classmethod
    def constant(cls, value: Scalar) -> "UniPoly":
        return cls._raw([to_rational(value)])

    @classmethod
    def x(cls) -> "UniPoly":
        return cls._raw([Fraction(0), Fraction(1)])

    @classmethod
    def monomial(cls, degree: int, coeff: Scalar = 1) -> "UniPoly":
        return cls._raw([Fraction(0)] * degree + [to_rational(coeff)])

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    @staticmethod
    def _coerce(other) -> "UniPoly":
        if isinstance(other, UniPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return UniPoly._raw([Fraction(other)])
        return NotImplemented

    def __add__(self, other) -> "UniPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] += c
        return UniPoly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "UniPoly":
        return UniPoly._raw([-c for c in self.coeffs])

    def __sub__(self, other) -> "UniPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "UniPoly":
        return (-self) + other

    def __mul__(self, other) -> "UniPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, UniPoly):
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return UniPoly.zero()
        if len(other.coeffs) == 1:
            return self.scale(other.coeffs[0])
        if len(self.coeffs) == 1:
            return other.scale(self.coeffs[0])
        a, sa = _zz_image(self)
        b, sb = _zz_image(other)
        return _from_zz(dup_mul(a, b, ZZ), den=sa * sb)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "UniPoly":
        if k < 0:
            raise ValueError(f"negative exponent {k=}")
        result, base = UniPoly.one(), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c: Scalar) -> "UniPoly":
        c = to_rational(c)
        if not c:
            return UniPoly.zero()
        return UniPoly._raw([c * a for a in self.coeffs])

    def shift(self, k: int) -> "UniPoly":
        """Multiply by x^k."""
        if not self.coeffs:
            return self
        return UniPoly._raw([Fraction(0)] * k + list(self.coeffs))

    def __divmod__(self, other: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        other = self._coerce(other)
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        if self.degree < other.degree:
            return UniPoly.zero(), self
        if other.degree == 0:
            return self.scale(1 / other.lc), UniPoly.zero()

        # lc(b)^N · a = q·b + r over the integers, N = deg a - deg b + 1
        a, sa = _zz_image(self)
        b, sb = _zz_image(other)
        q, r = dup_pdiv(a, b, ZZ)
        den = sa * int(b[0]) ** (self.degree - other.degree + 1)
        return _from_zz(q, num=sb, den=den), _from_zz(r, den=den)

    def __floordiv__(self, other: "UniPoly") -> "UniPoly":
        return divmod(self, other)[0]

    def __mod__(self, other: "UniPoly") -> "UniPoly":
        return divmod(self, other)[1]

    def exact_div(self, other: "UniPoly") -> "UniPoly":
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def divides(self, other: "UniPoly") -> bool:
        return not (other % self)

    def derivative(self) -> "UniPoly":
        return UniPoly._raw([k * c for k, c in enumerate(self.coeffs)][1:])

    def __call__(self, value):
        """Horner evaluation; `value` may be a scalar or another UniPoly (composition)."""
        acc = Fraction(0) if not isinstance(value, UniPoly) else UniPoly.zero()
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    def monic(self) -> "UniPoly":
        if not self.coeffs or self.coeffs[-1] == 1:
            return self
        return self.scale(1 / self.lc)

    def reversed(self, degree: int | None = None) -> "UniPoly":
        """x^degree * p(1/x); `degree` defaults to deg p."""
        degree = self.degree if degree is None else degree
        padded = list(self.coeffs) + [Fraction(0)] * (degree + 1 - len(self.coeffs))
        return UniPoly._raw(padded[::-1])

    def truncate(self, k: int) -> "UniPoly":
        """Terms of degree < k."""
        return UniPoly._raw(list(self.coeffs[:k]))

    def render(self, var: str = "x") -> str:
        """Render in the syntax accepted by `parse_poly`, e.g. `3/2*x^2 + x - 5`."""

        if not self.coeffs:
            return "0"

        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                mono = var if k == 1 else f"{var}^{k}"
                body = mono if mag == 1 else f"{mag}*{mono}"
            parts += [("-" if c < 0 else "+", body)]

        sign, body = parts[0]
        text = f"-{body}" if sign == "-" else body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"

        return text

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"UniPoly({self.render()!r})"


def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic greatest common divisor; gcd(0, 0) = 0."""
    if not a or not b:
        return (a or b).monic()
    if a.is_constant() or b.is_constant():
        return UniPoly.one()
    return _from_zz(dup_gcd(_zz_image(a)[0], _zz_image(b)[0], ZZ)).monic()


def poly_xgcd(a: UniPoly, b: UniPoly) -> tuple[UniPoly, UniPoly, UniPoly]:
    """Return (g, s, t) with s*a + t*b = g and g = poly_gcd(a, b)."""

    r0, r1 = a, b
    s0, s1 = UniPoly.one(), UniPoly.zero()
    t0, t1 = UniPoly.zero(), UniPoly.one()
    while r1:
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1

    if not r0:
        return r0, s0, t0

    inv = 1 / r0.lc
    return r0.scale(inv), s0.scale(inv), t0.scale(inv)


def poly_lcm(a: UniPoly, b: UniPoly) -> UniPoly:
    if not a or not b:
        return UniPoly.zero()
    return (a // poly_gcd(a, b) * b).monic()


def poly_lcm_all(polys: Iterable[UniPoly]) -> UniPoly:
    return reduce(poly_lcm, polys, UniPoly.one())


def poly_gcd_all(polys: Iterable[UniPoly]) -> UniPoly:
    return reduce(poly_gcd, polys, UniPoly.zero())


def is_squarefree(p: UniPoly) -> bool:
    """True iff p has no repeated root, i.e. gcd(p, p') = 1."""
    if not p:
        raise GaussianMapsError("is_squarefree is undefined for the zero polynomial")
    return poly_gcd(p, p.derivative()).degree == 0


def squarefree_part(p: UniPoly) -> UniPoly:
    if not p:
        return p
    return (p // poly_gcd(p, p.derivative())).monic()


def poly_inverse_mod(a: UniPoly, modulus: UniPoly) -> UniPoly:
    """Inverse of `a` in Q[x]/(modulus); raises ZeroDivisionError if not a unit."""
    g, s, _ = poly_xgcd(a % modulus, modulus)
    if g.degree != 0:
        raise ZeroDivisionError(f"{a} is not invertible modulo {modulus}")
    return s % modulus


@dataclass(frozen=True, slots=True)
class RatFunc:
    """Reduced rational function num/den with den monic."""

    num: UniPoly
    den: UniPoly = UniPoly.one()

    def __post_init__(self):
        num, den = self.num, self.den
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if not num:
            num, den = UniPoly.zero(), UniPoly.one()
        elif den.degree > 0:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num, den = num // g, den // g
        if den.lc != 1:
            inv = 1 / den.lc
            num, den = num.scale(inv), den.scale(inv)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @classmethod
    def from_poly(cls, p: UniPoly) -> "RatFunc":
        return cls(num=p)

    @staticmethod
    def _coerce(other) -> "RatFunc":
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, UniPoly):
            return RatFunc(num=other)
        if isinstance(other, (int, Fraction)):
            return RatFunc(num=UniPoly.constant(other))
        return NotImplemented

    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self) -> bool:
        return bool(self.num)

    @property
    def degree(self) -> int:
        """deg num - deg den (the negated order at infinity)."""
        if not self.num:
            raise ValueError("degree of the zero rational function")
        return self.num.degree - self.den.degree

    def __add__(self, other) -> "RatFunc":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return RatFunc(num=self.num + other.num, den=self.den)
        return RatFunc(num=self.num * other.den + other.num * self.den, den=self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        return RatFunc(num=-self.num, den=self.den)

    def __sub__(self, other) -> "RatFunc":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "RatFunc":
        return (-self) + other

    def __mul__(self, other) -> "RatFunc":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RatFunc(num=self.num * other.num, den=self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if not self.num:
            raise ZeroDivisionError("inverse of the zero rational function")
        return RatFunc(num=self.den, den=self.num)

    def __truediv__(self, other) -> "RatFunc":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def derivative(self) -> "RatFunc":
        return RatFunc(num=self.num.derivative() * self.den - self.num * self.den.derivative(), den=self.den * self.den)

    def __str__(self) -> str:
        if self.den.degree == 0:
            return self.num.render()
        return f"({self.num.render()})/({self.den.render()})"
