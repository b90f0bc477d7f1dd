"""
Valuations of k-canonical forms on superelliptic curves and base-locus certification.

Places are grouped into classes keyed by squarefree moduli; a class is refined by gcd
splitting whenever the forms behave differently on parts of it, so no factorization over Q
is ever needed.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from frozendict import frozendict

from gaussian_maps.utils.errors import CurveModelError, GaussianMapsError, InternalCheckError, PlaceClassError
from gaussian_maps.utils.function_field import CurveModel, KForm, poles_over_f
from gaussian_maps.utils.poly import UniPoly, is_squarefree, poly_gcd, poly_inverse_mod, squarefree_part
from gaussian_maps.utils.resultant import YPoly, resultant_y, y_trim


@dataclass(frozen=True)
class RamPlaceClass:
    """Places (α, 0) with p(α) = 0, p a monic squarefree divisor of f."""

    p: UniPoly

    def __str__(self) -> str:
        return str(self.p)


@dataclass(frozen=True)
class InfPlaceClass:
    """
    Places over x = ∞: the single totally ramified place when gcd(n, m) = 1, otherwise
    the places where y / x^(m/n) tends to a root of the factor `q` of w^n - c.
    """

    totally_ramified: bool
    q: UniPoly | None = None

    def __str__(self) -> str:
        return "inf" if self.totally_ramified else f"inf[{self.q.render('w')}]"


@dataclass(frozen=True)
class AffineCertificate:
    """All forms vanish at the points (α, β) with modulus(α) = 0 and y_gcd(α, β) = 0, f(α) != 0."""

    modulus: UniPoly
    y_gcd: YPoly


@dataclass(frozen=True)
class BaseLocusVerdict:
    ram: frozendict[RamPlaceClass, int]
    infinity: frozendict[InfPlaceClass, int]
    affine_unram: tuple[AffineCertificate, ...]
    is_free: bool


def _require_superelliptic(form: KForm) -> CurveModel:
    if not isinstance(form.curve, CurveModel):
        raise CurveModelError("valuations are only available on superelliptic models")
    if form.is_zero():
        raise GaussianMapsError("the zero form has infinite order everywhere")
    return form.curve


def multiplicity_split(p: UniPoly, h: UniPoly) -> list[tuple[UniPoly, int]]:
    """Split squarefree p into monic pieces on which the multiplicity of h is constant."""

    if not h:
        raise GaussianMapsError("multiplicity of the zero polynomial is infinite")

    out = []
    cur, e = p.monic(), 0
    while cur.degree > 0:
        g = poly_gcd(cur, h)
        rest = cur // g
        if rest.degree > 0:
            out += [(rest.monic(), e)]
        if g.degree <= 0:
            break
        h = h // g
        cur, e = g, e + 1

    return out


def _refine(p: UniPoly, polys: Sequence[UniPoly]) -> list[tuple[UniPoly, tuple[int | None, ...]]]:
    # pieces of p with the multiplicity of every nonzero h in polys (None for h = 0)
    pieces = [(p.monic(), ())]
    for h in polys:
        nxt = []
        for piece, mults in pieces:
            if not h:
                nxt += [(piece, mults + (None,))]
            else:
                nxt += [(sub, mults + (e,)) for sub, e in multiplicity_split(piece, h)]
        pieces = nxt
    return pieces


def ram_classes(curve: CurveModel, moduli: Sequence[UniPoly] | None = None) -> list[RamPlaceClass]:
    """Validated ramification classes; defaults to the single class of f."""

    out = []
    for p in moduli or [curve.f]:
        if p.degree < 1:
            raise PlaceClassError(f"a ramification modulus must have degree >= 1, got {p}")
        if not p.divides(curve.f):
            raise PlaceClassError(f"modulus {p} does not divide f = {curve.f}")
        if not is_squarefree(p):
            raise PlaceClassError(f"modulus {p} is not squarefree")
        out += [RamPlaceClass(p=p.monic())]
    return out


def infinity_classes(curve: CurveModel) -> list[InfPlaceClass]:
    if curve.d == 1:
        return [InfPlaceClass(totally_ramified=True)]
    return [InfPlaceClass(totally_ramified=False, q=_w_polynomial(curve))]


def _w_polynomial(curve: CurveModel) -> UniPoly:
    # w^n - c
    return UniPoly.monomial(curve.n) - curve.c


def ord_at_ram_pieces(form: KForm, place: RamPlaceClass) -> list[tuple[RamPlaceClass, int]]:
    """
    Order of `form` on each piece of the class: min_b (b + n·v_p(r_b)) + k(n-1).

    At a place over a simple root of f: ord(y) = 1, ord(x - α) = n, ord(dx) = n - 1; the
    candidates are distinct modulo n, so the minimum is attained exactly once.
    """

    curve = _require_superelliptic(form)
    (checked,) = ram_classes(curve, [place.p])

    n, k = curve.n, form.weight
    elt = form.elt
    out = []
    for piece, mults in _refine(checked.p, [elt.den, *elt.nums]):
        v_den = mults[0]
        order = min(b + n * (e - v_den) for b, e in enumerate(mults[1:]) if e is not None)
        out += [(RamPlaceClass(p=piece), order + k * (n - 1))]

    return out


def ord_at_ram(form: KForm, place: RamPlaceClass) -> int:
    return min(order for _, order in ord_at_ram_pieces(form, place))


def root_series(curve: CurveModel, precision: int) -> list[Fraction]:
    """
    Coefficients S_0..S_{precision-1} of (f(x) / (c·x^m))^(1/n) as a series in t = 1/x,
    by the power recurrence S_k = (1/k) Σ_{j=1..k} ((α+1)j - k) A_j S_{k-j}, α = 1/n.
    """

    a = curve.f.reversed().scale(1 / curve.c)
    alpha = Fraction(1, curve.n)
    s = [Fraction(1)]
    for k in range(1, precision):
        acc = Fraction(0)
        for j in range(1, min(k, a.degree) + 1):
            if a[j]:
                acc += ((alpha + 1) * j - k) * a[j] * s[k - j]
        s += [acc / k]
    return s


def _series_mul(a: list[Fraction], b: list[Fraction], precision: int) -> list[Fraction]:
    out = [Fraction(0)] * precision
    for i, ai in enumerate(a[:precision]):
        if ai:
            for j, bj in enumerate(b[: precision - i]):
                out[i + j] += ai * bj
    return out


def ord_at_infinity_pieces(form: KForm, place: InfPlaceClass) -> list[tuple[InfPlaceClass, int]]:
    """
    Order of `form` at infinity, per piece of the class.

    gcd(n, m) = 1: min_b (-n·deg r_b - m·b) + k(-n-1).
    gcd(n, m) = n: expand D·form = Σ N_b(x) y^b with y = w·x^(m/n)·S(1/x) as a series in t = 1/x
    over Q[w]/(q); the order is deg D - M + j - 2k, where x^M is the common leading power and j the
    first index whose coefficient is nonzero at the roots of the piece.
    """

    curve = _require_superelliptic(form)
    n, m, k = curve.n, curve.m, form.weight
    elt = form.elt

    if curve.d == 1:
        if not place.totally_ramified:
            raise PlaceClassError("gcd(n, deg f) = 1: infinity is a single totally ramified place")
        order = min(-n * (p.degree - elt.den.degree) - m * b for b, p in enumerate(elt.nums) if p)
        return [(place, order + k * (-n - 1))]

    if place.totally_ramified or place.q is None:
        raise PlaceClassError("gcd(n, deg f) = n: infinity classes are keyed by factors of w^n - c")
    q = place.q.monic()
    if q.degree < 1 or not q.divides(_w_polynomial(curve)):
        raise PlaceClassError(f"{q.render('w')} does not divide w^{n} - {curve.c}")

    e = m // n
    live = [(b, p) for b, p in enumerate(elt.nums) if p]
    top = max(p.degree + e * b for b, p in live)
    deg_den = elt.den.degree

    # the order at one place is at most k(2g-2) plus every pole elsewhere
    bound = k * (2 * curve.genus - 2) + n * deg_den + (n - 1) * max(0, top - deg_den + 2 * k)
    precision = bound - deg_den + top + 2 * k + 2

    s = root_series(curve, precision)
    s_pow = [[Fraction(1)] + [Fraction(0)] * (precision - 1)]
    for _ in range(1, n):
        s_pow += [_series_mul(s_pow[-1], s, precision)]

    terms = {}
    for b, p in live:
        rev = p.reversed(top - e * b)
        terms[b] = _series_mul(list(rev.coeffs), s_pow[b], precision)

    out = []
    pending = [q]
    for j in range(precision):
        coeff = UniPoly(tuple(terms[b][j] if b in terms else 0 for b in range(n)))
        nxt = []
        for piece in pending:
            g = poly_gcd(piece, coeff)
            rest = piece // g
            if rest.degree > 0:
                out += [(InfPlaceClass(totally_ramified=False, q=rest.monic()), deg_den - top + j - 2 * k)]
            if g.degree > 0:
                nxt += [g]
        pending = nxt
        if not pending:
            break

    if pending:
        raise InternalCheckError(f"series of a nonzero form vanished through t^{precision - 1} at infinity on {curve}")

    return out


def ord_at_infinity(form: KForm, place: InfPlaceClass) -> int:
    return min(order for _, order in ord_at_infinity_pieces(form, place))


def _intersect(acc: list[tuple[UniPoly, int]], pieces: list[tuple[UniPoly, int]]) -> list[tuple[UniPoly, int]]:
    # common refinement of two partitions of one squarefree modulus, keeping the minimum order
    out = []
    for a, va in acc:
        for b, vb in pieces:
            g = poly_gcd(a, b)
            if g.degree > 0:
                out += [(g, min(va, vb))]
    return out


def _reduce(a: Sequence[UniPoly], mod: UniPoly) -> YPoly:
    return y_trim([c % mod for c in a])


def _y_rem(a: YPoly, b: YPoly, mod: UniPoly) -> YPoly:
    # a mod b in (Q[x]/mod)[y], lc(b) a unit
    inv = poly_inverse_mod(b[-1], mod)
    a = list(a)
    while len(a) >= len(b):
        c = (a[-1] * inv) % mod
        shift = len(a) - len(b)
        for j in range(len(b)):
            a[shift + j] = (a[shift + j] - c * b[j]) % mod
        a = list(y_trim(a[:-1]))
    return tuple(a)


def _y_monic(a: YPoly, mod: UniPoly) -> YPoly:
    inv = poly_inverse_mod(a[-1], mod)
    return tuple((c * inv) % mod for c in a)


def dynamic_ygcd(modulus: UniPoly, a: Sequence[UniPoly], b: Sequence[UniPoly]) -> list[tuple[UniPoly, YPoly]]:
    """
    gcd of a and b in (Q[x]/modulus)[y] for squarefree `modulus`, splitting the modulus whenever
    a leading coefficient is a zero divisor. Returns (piece, monic gcd) pairs whose pieces multiply
    to `modulus`.
    """

    done = []
    work = [(modulus.monic(), tuple(a), tuple(b))]
    while work:
        mod, a, b = work.pop()
        a, b = _reduce(a, mod), _reduce(b, mod)

        if not b:
            if not a:
                done += [(mod, ())]
                continue
            g = poly_gcd(a[-1], mod)
            if g.degree > 0:
                work += [(g, a[:-1], ())]
                if (mod // g).degree > 0:
                    work += [(mod // g, a, ())]
                continue
            done += [(mod, _y_monic(a, mod))]
            continue

        g = poly_gcd(b[-1], mod)
        if g.degree > 0:
            # lc(b) vanishes on g and is a unit on mod / g
            work += [(g, a, b[:-1])]
            if (mod // g).degree > 0:
                work += [(mod // g, a, b)]
            continue

        work += [(mod, b, _y_rem(a, b, mod))]

    return sorted(done, key=lambda item: item[0].coeffs)


def affine_unramified_certificates(forms: Sequence[KForm]) -> tuple[AffineCertificate, ...]:
    """Certified common zeros of `forms` at affine places with f(x) != 0 (empty if none)."""

    curve = forms[0].curve
    relation = (-curve.f,) + (UniPoly.zero(),) * (curve.n - 1) + (UniPoly.one(),)

    G = UniPoly.zero()
    for form in forms:
        G = poly_gcd(G, resultant_y(form.elt.nums, relation))
        if G.degree == 0:
            return ()

    while (h := poly_gcd(G, curve.f)).degree > 0:
        G = G // h
    G = squarefree_part(G)
    if G.degree <= 0:
        return ()

    states = [(G, relation)]
    for form in forms:
        nxt = []
        for mod, acc in states:
            for piece, g in dynamic_ygcd(mod, acc, form.elt.nums):
                if len(g) >= 2:
                    nxt += [(piece, g)]
        states = nxt
        if not states:
            return ()

    return tuple(AffineCertificate(modulus=mod, y_gcd=g) for mod, g in states)


def base_locus(images: Sequence[KForm], moduli: Sequence[UniPoly] | None = None) -> BaseLocusVerdict:
    """Common zeros of `images` at ramification places, affine unramified places and infinity."""

    live = [im for im in images if not im.is_zero()]
    if not live:
        raise GaussianMapsError("base locus of an all-zero image list")

    curve = live[0].curve
    if not isinstance(curve, CurveModel):
        raise CurveModelError("base loci are only available on superelliptic models")
    if len({im.weight for im in live}) != 1:
        raise GaussianMapsError("base locus needs forms of equal weight")

    for im in live:
        if not poles_over_f(im.elt):
            raise InternalCheckError(f"form with poles away from f = 0 reached the base locus: {im}")

    ram = {}
    for place in ram_classes(curve, moduli):
        acc = [(place.p, float("inf"))]
        for im in live:
            acc = _intersect(acc, [(piece.p, order) for piece, order in ord_at_ram_pieces(im, place)])
        ram.update({RamPlaceClass(p=p): int(v) for p, v in acc})

    infinity = {}
    for place in infinity_classes(curve):
        if place.totally_ramified:
            infinity[place] = min(ord_at_infinity(im, place) for im in live)
            continue
        acc = [(place.q, float("inf"))]
        for im in live:
            acc = _intersect(acc, [(piece.q, order) for piece, order in ord_at_infinity_pieces(im, place)])
        infinity.update({InfPlaceClass(totally_ramified=False, q=q): int(v) for q, v in acc})

    certificates = affine_unramified_certificates(live)
    is_free = all(v <= 0 for v in ram.values()) and all(v <= 0 for v in infinity.values()) and not certificates

    return BaseLocusVerdict(
        ram=frozendict(sorted(ram.items(), key=lambda item: item[0].p.coeffs)),
        infinity=frozendict(sorted(infinity.items(), key=lambda item: (item[0].q or UniPoly.zero()).coeffs)),
        affine_unram=certificates,
        is_free=is_free,
    )
