from fractions import Fraction

from gaussian_maps.utils.errors import PolySyntaxError
from gaussian_maps.utils.poly import UniPoly

DIGITS = "0123456789"


class _PolyParser:
    """
    Recursive-descent parser for polynomial expressions.

    Grammar (whitespace insignificant):

        expr  := sign? term (('+' | '-') term)*
        term  := coeff ('*'? factor ('*'? factor)*)? | factor ('*'? factor)*
        factor:= VAR ('^' uint)?
        coeff := uint ('/' uint)?

    Each variable appears at most once per term, so `x*x` and `x x` are rejected.
    """

    def __init__(self, text: str, variables: tuple[str, ...]):
        self.text = text
        self.pos = 0
        self.variables = variables

    def _peek(self) -> str:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def _uint(self) -> int:
        self._peek()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos] in DIGITS:
            self.pos += 1
        if start == self.pos:
            raise PolySyntaxError("expected an unsigned integer", offset=start)
        return int(self.text[start : self.pos])

    def _is_digit(self, ch: str) -> bool:
        return ch != "" and ch in DIGITS

    def _factor(self, exps: list[int]) -> None:
        var = self._peek()
        if exps[self.variables.index(var)]:
            raise PolySyntaxError(f"variable {var!r} repeated in one term", offset=self.pos)
        self.pos += 1
        exp = 1
        if self._peek() == "^":
            self.pos += 1
            exp = self._uint()
        exps[self.variables.index(var)] += exp

    def _term(self) -> tuple[Fraction, tuple[int, ...]]:

        coeff = Fraction(1)
        exps = [0] * len(self.variables)
        ch = self._peek()

        if self._is_digit(ch):
            num = self._uint()
            den = 1
            if self._peek() == "/":
                self.pos += 1
                self._peek()
                den_offset = self.pos
                den = self._uint()
                if den == 0:
                    raise PolySyntaxError("zero denominator", offset=den_offset)
            coeff = Fraction(num, den)
            if self._peek() == "*":
                self.pos += 1
                if self._peek() not in self.variables:
                    raise PolySyntaxError(f"expected one of {self.variables}", offset=self.pos)
        elif ch not in self.variables:
            raise PolySyntaxError("expected a term", offset=self.pos)

        while self._peek() in self.variables:
            self._factor(exps)
            if self._peek() == "*":
                self.pos += 1
                if self._peek() not in self.variables:
                    raise PolySyntaxError(f"expected one of {self.variables}", offset=self.pos)

        return coeff, tuple(exps)

    def parse(self) -> dict[tuple[int, ...], Fraction]:

        terms: dict[tuple[int, ...], Fraction] = {}
        sign = 1
        if self._peek() in ("+", "-"):
            sign = -1 if self.text[self.pos] == "-" else 1
            self.pos += 1

        while True:
            coeff, exps = self._term()
            terms[exps] = terms.get(exps, Fraction(0)) + sign * coeff
            ch = self._peek()
            if ch not in ("+", "-"):
                break
            sign = -1 if ch == "-" else 1
            self.pos += 1

        if self.pos != len(self.text):
            raise PolySyntaxError(f"unexpected character {self.text[self.pos]!r}", offset=self.pos)

        return terms


def parse_poly(text: str) -> UniPoly:
    """Parse a univariate polynomial in x, e.g. `"3/2x^2 + x - 5"`."""

    terms = _PolyParser(text, variables=("x",)).parse()
    degree = max(exps[0] for exps in terms)
    coeffs = [Fraction(0)] * (degree + 1)
    for (k,), c in terms.items():
        coeffs[k] += c

    return UniPoly(tuple(coeffs))


def parse_bivariate(text: str) -> tuple[UniPoly, ...]:
    """Parse a polynomial in x and y; entry b of the result is the coefficient of y^b."""

    terms = _PolyParser(text, variables=("x", "y")).parse()
    deg_y = max(b for _, b in terms)
    deg_x = max(a for a, _ in terms)
    rows = [[Fraction(0)] * (deg_x + 1) for _ in range(deg_y + 1)]
    for (a, b), c in terms.items():
        rows[b][a] += c

    return tuple(UniPoly(tuple(row)) for row in rows)


def render_bivariate(coeffs: tuple[UniPoly, ...]) -> str:
    parts = []
    for b in range(len(coeffs) - 1, -1, -1):
        if not coeffs[b]:
            continue
        inner = coeffs[b].render()
        mono = "" if b == 0 else ("y" if b == 1 else f"y^{b}")
        parts += [f"({inner})*{mono}" if mono else f"({inner})"]
    return " + ".join(parts) or "0"
