"""Places of the rational function field Q(T) and exact valuations.

A place is either a monic irreducible polynomial in T or the point at
infinity.  Valuations are normalized so that a uniformizer has value 1;
at infinity the value of a rational function is deg(den) - deg(num).

Functions whose coefficients lie in a real quadratic extension Q(sqrt(d))
are supported at places that stay prime in the extension (every odd-degree
place does, and infinity does).  There the valuation of A + B*sqrt(d) is
min(v(A), v(B)).
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational as _RationalABC

from cleanpair.exactmath.factor import (
    factor_rational_poly,
    is_irreducible,
    stays_irreducible_over_quadratic,
)
from cleanpair.exactmath.poly import RatFunc, UniPoly
from cleanpair.exactmath.scalars import QQ, QuadExtElem, QuadExtField


class UndefinedValuation(ArithmeticError):
    """Valuation of the zero function was requested."""


class PoleAtPlace(ArithmeticError):
    """Residue of a function was requested at one of its poles."""


class Place:
    """A closed point of the projective T-line over Q."""

    __slots__ = ("var", "poly")

    def __init__(self, var: str, poly: UniPoly | None):
        if poly is not None:
            if poly.var != var:
                raise ValueError("place polynomial in the wrong variable")
            if poly.field != QQ:
                raise TypeError("place polynomials must have rational coefficients")
            if not poly.is_monic():
                raise ValueError("place polynomial must be monic")
            if not is_irreducible(poly):
                raise ValueError(f"place polynomial must be irreducible: {poly}")
        object.__setattr__(self, "var", var)
        object.__setattr__(self, "poly", poly)

    def __setattr__(self, name, value):
        raise AttributeError("Place is immutable")

    @classmethod
    def finite(cls, poly: UniPoly) -> "Place":
        return cls(poly.var, poly)

    @classmethod
    def linear(cls, var: str, root) -> "Place":
        """The place T = root, i.e. the prime (T - root)."""
        gen = UniPoly.gen(var, QQ)
        return cls(var, gen - Fraction(root))

    @classmethod
    def infinity(cls, var: str) -> "Place":
        return cls(var, None)

    @property
    def is_infinity(self) -> bool:
        return self.poly is None

    def degree(self) -> int:
        return 1 if self.poly is None else self.poly.degree()

    def sort_key(self):
        if self.poly is None:
            return (1, 0, ())
        return (0, self.poly.degree(), tuple(self.poly.coeffs))

    def __eq__(self, other):
        return (
            isinstance(other, Place)
            and self.var == other.var
            and self.poly == other.poly
        )

    def __hash__(self):
        return hash((self.var, self.poly))

    def __repr__(self):
        if self.poly is None:
            return f"Place.infinity({self.var!r})"
        return f"Place.finite({self.poly!r})"

    def __str__(self):
        return "infinity" if self.poly is None else f"({self.poly})"


# -- internal helpers ---------------------------------------------------------


def _as_ratfunc(place: Place, f):
    if isinstance(f, RatFunc):
        return f
    if isinstance(f, UniPoly):
        return RatFunc(f)
    if isinstance(f, (int, _RationalABC, QuadExtElem)):
        field = QQ
        if isinstance(f, QuadExtElem) and not f.is_rational:
            field = QuadExtField(f.rad)
        return RatFunc.constant(place.var, f, field)
    raise TypeError(f"cannot take a valuation of {type(f).__name__}")


def _multiplicity(num: UniPoly, p: UniPoly) -> int:
    count = 0
    q, r = divmod(num, p)
    while not r and num:
        count += 1
        num = q
        q, r = divmod(num, p)
    return count


def _split_components(p: UniPoly) -> tuple[UniPoly, UniPoly, Fraction]:
    """Write a QuadExtField-coefficient polynomial as A + B*sqrt(rad)."""
    field = p.field
    a = UniPoly(p.var, [c.a for c in p.coeffs], QQ)
    b = UniPoly(p.var, [c.b for c in p.coeffs], QQ)
    return a, b, field.rad


def _check_inert(place: Place, rad: int) -> None:
    if place.is_infinity or place.degree() % 2 == 1:
        return
    if place.degree() == 2 and stays_irreducible_over_quadratic(place.poly, rad):
        return
    raise ValueError(
        f"place {place} does not stay prime over the quadratic extension"
    )


def _poly_valuation(place: Place, p: UniPoly) -> int:
    """Valuation of a nonzero polynomial; infinity gives -degree."""
    if p.field != QQ:
        if isinstance(p.field, QuadExtField):
            a, b, rad = _split_components(p)
            if not b:
                return _poly_valuation(place, a)
            if not a:
                return _poly_valuation(place, b)
            _check_inert(place, rad)
            return min(_poly_valuation(place, a), _poly_valuation(place, b))
        raise TypeError("valuations need rational or quadratic coefficients")
    if place.is_infinity:
        return -p.degree()
    return _multiplicity(p, place.poly)


# -- public API ---------------------------------------------------------------


def valuation_at(place: Place, f) -> int:
    """Order of vanishing of f at the place.  Raises UndefinedValuation
    when f is identically zero."""
    g = _as_ratfunc(place, f)
    if g.var != place.var:
        raise ValueError(f"variable mismatch: {g.var} vs {place.var}")
    if not g:
        raise UndefinedValuation(f"valuation of 0 at {place}")
    return _poly_valuation(place, g.num) - _poly_valuation(place, g.den)


def valuation_or_inf(place: Place, f):
    """Like valuation_at but maps the zero function to +infinity."""
    try:
        return valuation_at(place, f)
    except UndefinedValuation:
        return float("inf")


def quotient_field_image(place: Place, f):
    """Image of f in the residue field of the place.

    Degree-one places (including infinity) return a Fraction; a place of
    higher degree returns the reduced representative as a UniPoly.  Raises
    PoleAtPlace when the function has a pole there.
    """
    g = _as_ratfunc(place, f)
    if g.field != QQ:
        raise TypeError("residues are implemented for rational coefficients")
    if place.is_infinity:
        dn, dd = g.num.degree(), g.den.degree()
        if dn > dd:
            raise PoleAtPlace(f"{g} has a pole at infinity")
        if dn < dd:
            return Fraction(0)
        return Fraction(g.num.lc())
    if not g:
        return Fraction(0) if place.degree() == 1 else UniPoly.zero(place.var, QQ)
    if valuation_at(place, g) < 0:
        raise PoleAtPlace(f"{g} has a pole at {place}")
    p = place.poly
    num = g.num % p
    den = g.den % p
    res = (num * _inverse_mod(den, p)) % p
    if place.degree() == 1:
        return Fraction(res.coeff(0))
    return res


def _inverse_mod(a: UniPoly, p: UniPoly) -> UniPoly:
    """Inverse of a modulo the irreducible p, by extended Euclid."""
    if not (a % p):
        raise ZeroDivisionError("element is not invertible modulo the place")
    r0, r1 = p, a % p
    s0 = UniPoly.zero(p.var, p.field)
    s1 = UniPoly.constant(p.var, p.field.one(), p.field)
    while r1:
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
    inv = s0 * (p.field.one() / r0.lc())
    return inv % p


def divisor_of(f) -> list[tuple[Place, int]]:
    """Principal divisor of a nonzero f in Q(T), sorted deterministically.

    The sum of degree * multiplicity over the divisor is zero.
    """
    if isinstance(f, UniPoly):
        f = RatFunc(f)
    if not isinstance(f, RatFunc):
        raise TypeError("divisor_of expects a rational function")
    if not f:
        raise UndefinedValuation("the zero function has no divisor")
    if f.field != QQ:
        raise TypeError("divisors are implemented for rational coefficients")
    entries: dict[Place, int] = {}
    _, num_parts = factor_rational_poly(f.num)
    for q, m in num_parts:
        entries[Place.finite(q)] = m
    _, den_parts = factor_rational_poly(f.den)
    for q, m in den_parts:
        entries[Place.finite(q)] = entries.get(Place.finite(q), 0) - m
    at_inf = f.den.degree() - f.num.degree()
    if at_inf:
        entries[Place.infinity(f.var)] = at_inf
    out = [(pl, m) for pl, m in entries.items() if m]
    out.sort(key=lambda pm: pm[0].sort_key())
    return out
