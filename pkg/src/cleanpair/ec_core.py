"""Short-Weierstrass curves y^2 = x^3 + ax + b and their group law.

Everything is exact and field-generic: coefficients may be rationals,
quadratic-extension elements, or rational functions.  Torsion testing and
the Lutz-Nagell enumeration are specific to curves over Q.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import NamedTuple, Optional

from cleanpair.exactmath import (
    QQ,
    QuadExtElem,
    QuadExtField,
    RatFunc,
    RatFuncField,
    UniPoly,
    nth_root_rational,
    rational_roots,
)


class SingularCurveError(ValueError):
    """The cubic has a vanishing discriminant."""


class ModelError(ValueError):
    """An operation needed an integral model and did not get one."""


class ShapeError(ValueError):
    """Curve coefficients do not have the required shape."""


class TorsionError(ValueError):
    """A point required to have infinite order is torsion."""


_MAZUR_BOUND = 12  # uniform bound on rational torsion orders
_PROBE_PRIMES = (5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43)


def _field_of(*elems):
    for e in elems:
        if isinstance(e, QuadExtElem) and not e.is_rational:
            return QuadExtField(e.rad)
        if isinstance(e, RatFunc):
            return RatFuncField(e.var, e.field)
        if isinstance(e, UniPoly):
            return RatFuncField(e.var, e.field)
    return QQ


class CurvePoint:
    """A point on some curve: either the identity O or an affine pair."""

    __slots__ = ("x", "y")

    def __init__(self, x=None, y=None):
        if (x is None) != (y is None):
            raise ValueError("affine points need both coordinates")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    def __setattr__(self, name, value):
        raise AttributeError("CurvePoint is immutable")

    @classmethod
    def infinity(cls) -> "CurvePoint":
        return cls()

    @classmethod
    def affine(cls, x, y) -> "CurvePoint":
        if x is None or y is None:
            raise ValueError("affine coordinates must not be None")
        return cls(x, y)

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def __neg__(self) -> "CurvePoint":
        if self.is_infinity:
            return self
        return CurvePoint(self.x, -self.y)

    def __eq__(self, other):
        if not isinstance(other, CurvePoint):
            return NotImplemented
        if self.is_infinity or other.is_infinity:
            return self.is_infinity and other.is_infinity
        return self.x == other.x and self.y == other.y

    def __hash__(self):
        if self.is_infinity:
            return hash(("pt", None))
        return hash(("pt", self.x, self.y))

    def __repr__(self):
        if self.is_infinity:
            return "CurvePoint.infinity()"
        return f"CurvePoint.affine({self.x!r}, {self.y!r})"

    def __str__(self):
        return "O" if self.is_infinity else f"({self.x}, {self.y})"


O = CurvePoint.infinity()


class WeierstrassCurve:
    """y^2 = x^3 + ax + b over the field of its coefficients.

    The plain constructor rejects singular cubics; reduction fibers and
    other intentionally degenerate models go through possibly_singular.
    """

    __slots__ = ("a", "b", "field")

    def __init__(self, a, b, field=None):
        if field is None:
            field = _field_of(a, b)
        a = field.coerce(a)
        b = field.coerce(b)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "field", field)
        if not self.discriminant():
            raise SingularCurveError(f"singular cubic: a={a}, b={b}")

    def __setattr__(self, name, value):
        raise AttributeError("WeierstrassCurve is immutable")

    @classmethod
    def possibly_singular(cls, a, b, field=None) -> "WeierstrassCurve":
        self = cls.__new__(cls)
        if field is None:
            field = _field_of(a, b)
        object.__setattr__(self, "a", field.coerce(a))
        object.__setattr__(self, "b", field.coerce(b))
        object.__setattr__(self, "field", field)
        return self

    def discriminant(self):
        a, b = self.a, self.b
        return -16 * (4 * a * a * a + 27 * b * b)

    def is_singular(self) -> bool:
        return not self.discriminant()

    def j_invariant(self):
        a, b = self.a, self.b
        den = 4 * a * a * a + 27 * b * b
        if not den:
            raise SingularCurveError("j-invariant of a singular cubic")
        return 6912 * a * a * a / den

    def rhs(self, x):
        """The cubic x^3 + ax + b."""
        return x * x * x + self.a * x + self.b

    def rhs_poly(self, var: str = "x") -> UniPoly:
        return UniPoly(var, [self.b, self.a, self.field.zero(), self.field.one()], self.field)

    def contains(self, P: CurvePoint) -> bool:
        if P.is_infinity:
            return True
        return P.y * P.y == self.rhs(P.x)

    def require_on_curve(self, P: CurvePoint) -> CurvePoint:
        if not self.contains(P):
            raise ValueError(f"point {P} is not on y^2 = x^3 + ({self.a})x + ({self.b})")
        return P

    def add(self, P: CurvePoint, Q: CurvePoint) -> CurvePoint:
        if P.is_infinity:
            return Q
        if Q.is_infinity:
            return P
        x1, y1, x2, y2 = P.x, P.y, Q.x, Q.y
        if x1 == x2:
            if y1 == -y2:
                return O
            lam = (3 * x1 * x1 + self.a) / (2 * y1)
        else:
            lam = (y2 - y1) / (x2 - x1)
        x3 = lam * lam - x1 - x2
        y3 = lam * (x1 - x3) - y1
        return CurvePoint(x3, y3)

    def scalar_mul(self, n: int, P: CurvePoint) -> CurvePoint:
        if n < 0:
            return self.scalar_mul(-n, -P)
        acc = O
        base = P
        while n:
            if n & 1:
                acc = self.add(acc, base)
            base = self.add(base, base)
            n >>= 1
        return acc

    def __eq__(self, other):
        if not isinstance(other, WeierstrassCurve):
            return NotImplemented
        return self.a == other.a and self.b == other.b and self.field == other.field

    def __hash__(self):
        return hash((self.a, self.b))

    def __repr__(self):
        return f"WeierstrassCurve({self.a!r}, {self.b!r})"

    def __str__(self):
        return f"y^2 = x^3 + ({self.a})*x + ({self.b})"


class IsomorphismWitness(NamedTuple):
    """(x, y) -> (d^2 x, d^3 y) from a source curve to a target curve,
    so a_target = d^4 a_source and b_target = d^6 b_source."""

    d: object

    def apply_point(self, P: CurvePoint) -> CurvePoint:
        if P.is_infinity:
            return P
        d = self.d
        return CurvePoint(d * d * P.x, d * d * d * P.y)

    def apply_curve(self, E: WeierstrassCurve) -> WeierstrassCurve:
        d2 = self.d * self.d
        d4 = d2 * d2
        return WeierstrassCurve(d4 * E.a, d4 * d2 * E.b, E.field)

    def inverse(self) -> "IsomorphismWitness":
        return IsomorphismWitness(1 / self.d)

    def then(self, other: "IsomorphismWitness") -> "IsomorphismWitness":
        """Composite witness: self first, then other."""
        return IsomorphismWitness(self.d * other.d)


# -- function-style operation surface -------------------------------------------


def curve_discriminant(E: WeierstrassCurve):
    return E.discriminant()


def add(E: WeierstrassCurve, P: CurvePoint, Q: CurvePoint) -> CurvePoint:
    return E.add(P, Q)


def scalar_mul(E: WeierstrassCurve, n: int, P: CurvePoint) -> CurvePoint:
    return E.scalar_mul(n, P)


# -- torsion over Q -----------------------------------------------------------


def _reduction_refutes_torsion(E: WeierstrassCurve, P: CurvePoint) -> bool:
    """True when some good prime certifies that P is non-torsion.

    Rational torsion injects into E(F_p) for good odd p, so if no multiple
    nP with n <= 12 reduces to the identity, none is the identity over Q.
    """
    a_den = E.a.denominator
    b_den = E.b.denominator
    x_den = P.x.denominator
    y_den = P.y.denominator
    disc_num = E.discriminant().numerator
    for p in _PROBE_PRIMES:
        if (a_den * b_den * x_den * y_den * disc_num) % p == 0:
            continue
        a = E.a.numerator * pow(a_den, -1, p) % p
        b = E.b.numerator * pow(b_den, -1, p) % p
        x0 = P.x.numerator * pow(x_den, -1, p) % p
        y0 = P.y.numerator * pow(y_den, -1, p) % p
        pt = (x0, y0)
        hit_identity = False
        for _ in range(_MAZUR_BOUND):
            if pt is None:
                hit_identity = True
                break
            pt = _mod_add(a, pt, (x0, y0), p)
        if pt is None:
            hit_identity = True
        return not hit_identity
    return False


def _mod_add(a: int, P, Q, p: int):
    if P is None:
        return Q
    if Q is None:
        return P
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2:
        if (y1 + y2) % p == 0:
            return None
        lam = (3 * x1 * x1 + a) * pow(2 * y1, -1, p) % p
    else:
        lam = (y2 - y1) * pow(x2 - x1, -1, p) % p
    x3 = (lam * lam - x1 - x2) % p
    y3 = (lam * (x1 - x3) - y1) % p
    return (x3, y3)


def is_torsion_overQ(E: WeierstrassCurve, P: CurvePoint) -> Optional[int]:
    """Exact order of P when torsion (1 for O), None when infinite order."""
    if E.field != QQ:
        raise TypeError("torsion testing is implemented over Q")
    if P.is_infinity:
        return 1
    if _reduction_refutes_torsion(E, P):
        return None
    Q = P
    for n in range(1, _MAZUR_BOUND + 1):
        if Q.is_infinity:
            return n
        Q = E.add(Q, P)
    return None


def _integer_divisor_squares(n: int):
    n = abs(n)
    y = 1
    while y * y <= n:
        if n % (y * y) == 0:
            yield y
        y += 1


def torsion_points_overQ(E: WeierstrassCurve) -> list[CurvePoint]:
    """All rational torsion points of an integral model, O first.

    Candidates come from Lutz-Nagell (y = 0, or y^2 dividing the
    discriminant); each is confirmed by the exact torsion test.
    """
    if E.field != QQ:
        raise TypeError("torsion enumeration is implemented over Q")
    if E.a.denominator != 1 or E.b.denominator != 1:
        raise ModelError("integral model required; scale with to_integral_model")
    found = [O]
    seen = set()
    cubic = E.rhs_poly()

    def consider(x, y):
        pt = CurvePoint(x, y)
        if pt in seen:
            return
        seen.add(pt)
        if is_torsion_overQ(E, pt):
            found.append(pt)

    for x, _ in rational_roots(cubic):
        consider(x, Fraction(0))
    disc = int(E.discriminant())
    for y in _integer_divisor_squares(disc):
        for x, _ in rational_roots(cubic - y * y):
            consider(x, Fraction(y))
            consider(x, Fraction(-y))
    found.sort(key=lambda pt: (not pt.is_infinity, pt.x, pt.y))
    return found


def to_integral_model(E: WeierstrassCurve) -> tuple[WeierstrassCurve, IsomorphismWitness]:
    """Scale a rational curve to integer coefficients.

    Returns the integral curve and the witness mapping E onto it; the
    scaling factor is the least positive integer u with u^4 a, u^6 b
    integral.
    """
    if E.field != QQ:
        raise TypeError("integral scaling is implemented over Q")
    u = 1
    den = E.a.denominator * E.b.denominator
    p = 2
    while p * p <= den:
        if den % p == 0:
            ea = _val_int(E.a.denominator, p)
            eb = _val_int(E.b.denominator, p)
            u *= p ** max(-(-ea // 4), -(-eb // 6))
            while den % p == 0:
                den //= p
        p += 1
    if den > 1:
        p = den
        ea = _val_int(E.a.denominator, p)
        eb = _val_int(E.b.denominator, p)
        u *= p ** max(-(-ea // 4), -(-eb // 6))
    w = IsomorphismWitness(Fraction(u))
    return w.apply_curve(E), w


def _val_int(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


# -- isomorphism testing ------------------------------------------------------


def are_isomorphic(E1: WeierstrassCurve, E2: WeierstrassCurve) -> Optional[IsomorphismWitness]:
    """A witness d with (x,y) -> (d^2 x, d^3 y) mapping E1 onto E2, or None."""
    if E1.field != E2.field:
        raise TypeError("curves live over different fields")
    field = E1.field
    a1, b1, a2, b2 = E1.a, E1.b, E2.a, E2.b
    if bool(a1) != bool(a2) or bool(b1) != bool(b2):
        return None
    if a1 and b1:
        d_sq = (a1 * b2) / (a2 * b1)
        d = field.sqrt(d_sq)
        if d is None:
            return None
        w = IsomorphismWitness(d)
        if w.apply_curve(E1) == E2:
            return w
        return None
    if field != QQ:
        raise NotImplementedError("twist search beyond Q is not supported")
    if a1:  # b = 0 on both sides: need d^4 = a2/a1
        r = nth_root_rational(a2 / a1, 4)
        return IsomorphismWitness(r) if r is not None else None
    if b1:  # a = 0 on both sides: need d^6 = b2/b1
        r = nth_root_rational(b2 / b1, 6)
        return IsomorphismWitness(r) if r is not None else None
    return None


# -- Weierstrass-form normalization into the two-parameter family -------------


class FamilyNormalization(NamedTuple):
    s: Fraction
    t: Fraction
    witness: IsomorphismWitness
    point: CurvePoint


def normalize_to_family(
    E: WeierstrassCurve, t, P: CurvePoint
) -> FamilyNormalization:
    """Move (E, P) with a = -3t^2 into the standard two-parameter form.

    The image curve has parameters (s, d^2 t) with s = (b - 2t^3)/y(P)^2
    and d = (x(P) - t)/y(P); the marked point goes to
    (1 - s - 2t', 1 - s - 3t').  When x(P) = t the point is first replaced
    by -2P, which moves it off that locus.
    """
    if E.field != QQ:
        raise TypeError("normalization is implemented over Q")
    t = Fraction(t)
    if E.a != -3 * t * t:
        raise ShapeError(f"coefficient a = {E.a} is not -3*({t})^2")
    E.require_on_curve(P)
    if P.is_infinity or P.y == 0:
        raise TorsionError("marked point must avoid two-torsion")
    if is_torsion_overQ(E, P):
        raise TorsionError(f"marked point {P} is torsion")
    if P.x == t:
        P = E.scalar_mul(-2, P)
        if P.is_infinity or P.x == t:
            raise TorsionError("could not move the point off x = t")
    s = (E.b - 2 * t**3) / (P.y * P.y)
    d = (P.x - t) / P.y
    w = IsomorphismWitness(d)
    t_new = d * d * t
    image = w.apply_curve(E)
    P_new = w.apply_point(P)
    expected = CurvePoint(1 - s - 2 * t_new, 1 - s - 3 * t_new)
    if P_new != expected or not image.contains(expected):
        raise ArithmeticError("normalization identity failed")
    return FamilyNormalization(s, t_new, w, P_new)
