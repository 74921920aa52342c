"""Elliptic curves over Q(T): reduction data, local heights, canonical
heights, and the generic-rank computation for the curve family.

The base field is Q(T) (with points allowed to have coordinates in a real
quadratic extension Q(sqrt(s))(T)).  A curve carries two integral models:
the given one, and the one at infinity obtained from the substitution
(x, y, T) = (x'/U^2, y'/U^3, 1/U), whose coefficients are polynomials in U
whenever deg a <= 4 and deg b <= 6.  The place at infinity of Q(T) is the
place (U) of the second model.

Local heights follow the standard valuation-theoretic algorithm.  The
auxiliary quantities are the squares of the first two division polynomials,

    F2 = (2y)^2,    F3 = (3x^4 + 6ax^2 + 12bx - a^2)^2,

and with N = val(Delta) the cases are:

  * P reduces to a smooth point:  lambda = (1/2) max(0, -val(x)) + N/12
  * node (multiplicative), P singular:
        alpha = min(val(F2), 2N - val(F2)) / (2N)
        lambda = (N/2)(alpha^2 - alpha + 1/6)
  * cusp (additive), P singular:
        lambda = N/12 - val(F2)/6   if val(F3) >= 3 val(F2)
        lambda = N/12 - val(F3)/16  otherwise

The normalization makes the canonical height equal to the degree-weighted
sum of local values over all places, and satisfies h(2P) = 4 h(P).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from cleanpair.ec_core import CurvePoint, WeierstrassCurve
from cleanpair.exactmath import (
    QQ,
    Place,
    QuadExtElem,
    QuadExtField,
    RatFunc,
    RatFuncField,
    UniPoly,
    factor_rational_poly,
    rational_to_str,
    sqrt_rational,
    valuation_or_inf,
)
from cleanpair.family import functionfield_coefficients, marked_point_coords

FFPoint = CurvePoint

_INF = float("inf")


class MinimalityError(ValueError):
    """The model is not minimal at some bad place."""


class NotRationalSurface(ValueError):
    """Degree-weighted discriminant valuations do not sum to 12."""


class IdentityHeight(ValueError):
    """Local height of the identity point was requested."""


class DegenerateS(ValueError):
    """The family parameter s = 0 gives identically singular curves."""


class ReductionType(enum.Enum):
    GOOD = "Good"
    MULTIPLICATIVE = "Multiplicative"
    ADDITIVE = "Additive"


@dataclass(frozen=True)
class ReductionProfile:
    place: Place
    val_delta: int
    type: ReductionType
    component_count: int
    geometric_multiplicity: int


def _as_poly(value, var: str) -> UniPoly:
    if isinstance(value, RatFunc):
        if not value.is_polynomial():
            raise ValueError("coefficients must be polynomial in the base model")
        return value.num.rename(var) if value.var != var else value.num
    if isinstance(value, UniPoly):
        return value
    return UniPoly.constant(var, Fraction(value), QQ)


class FunctionFieldCurve:
    """y^2 = x^3 + a(T) x + b(T) with integral models at every place."""

    __slots__ = ("var", "inf_var", "a", "b", "a_inf", "b_inf")

    def __init__(self, a, b, var: str = "T"):
        a = _as_poly(a, var)
        b = _as_poly(b, var)
        if a.field != QQ or b.field != QQ:
            raise TypeError("curve coefficients must be rational")
        if a.degree() > 4 or b.degree() > 6:
            raise ValueError(
                "no integral model at infinity: need deg a <= 4 and deg b <= 6"
            )
        inf_var = var + "'"
        object.__setattr__(self, "var", var)
        object.__setattr__(self, "inf_var", inf_var)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        # (x, y, T) = (x'/U^2, y'/U^3, 1/U) turns a into U^4 a(1/U), b into U^6 b(1/U)
        object.__setattr__(self, "a_inf", a.reversed_coeffs(5).rename(inf_var))
        object.__setattr__(self, "b_inf", b.reversed_coeffs(7).rename(inf_var))
        if not self.discriminant():
            raise ValueError("singular: the discriminant vanishes identically")

    def __setattr__(self, name, value):
        raise AttributeError("FunctionFieldCurve is immutable")

    def discriminant(self) -> UniPoly:
        a, b = self.a, self.b
        return -16 * (4 * a * a * a + 27 * b * b)

    def discriminant_inf(self) -> UniPoly:
        a, b = self.a_inf, self.b_inf
        return -16 * (4 * a * a * a + 27 * b * b)

    def c4(self) -> UniPoly:
        return -48 * self.a

    def c4_inf(self) -> UniPoly:
        return -48 * self.a_inf

    def weierstrass(self, coeff_field=QQ) -> WeierstrassCurve:
        field = RatFuncField(self.var, coeff_field)
        return WeierstrassCurve(
            RatFunc(self.a).with_field(coeff_field),
            RatFunc(self.b).with_field(coeff_field),
            field,
        )

    def weierstrass_inf(self, coeff_field=QQ) -> WeierstrassCurve:
        field = RatFuncField(self.inf_var, coeff_field)
        return WeierstrassCurve(
            RatFunc(self.a_inf).with_field(coeff_field),
            RatFunc(self.b_inf).with_field(coeff_field),
            field,
        )

    def contains(self, P: CurvePoint) -> bool:
        if P.is_infinity:
            return True
        field = _coeff_field_of(P)
        return self.weierstrass(field).contains(_promote_point(P, field, self.var))

    def point_to_inf(self, P: CurvePoint) -> CurvePoint:
        """Coordinates of P in the model at infinity."""
        if P.is_infinity:
            return P
        x = _as_ratfunc_coord(P.x, self.var)
        y = _as_ratfunc_coord(P.y, self.var)
        u = UniPoly.gen(self.inf_var, x.field)
        x_inf = x.substitute_inverse(self.inf_var) * (u * u)
        y_inf = y.substitute_inverse(self.inf_var) * (u * u * u)
        return CurvePoint.affine(x_inf, y_inf)

    def add(self, P: CurvePoint, Q: CurvePoint) -> CurvePoint:
        field = _coeff_field_of(P, Q)
        return self.weierstrass(field).add(
            _promote_point(P, field, self.var), _promote_point(Q, field, self.var)
        )

    def scalar_mul(self, n: int, P: CurvePoint) -> CurvePoint:
        field = _coeff_field_of(P)
        return self.weierstrass(field).scalar_mul(n, _promote_point(P, field, self.var))

    def __repr__(self):
        return f"FunctionFieldCurve({self.a!r}, {self.b!r})"

    def __str__(self):
        return f"y^2 = x^3 + ({self.a})*x + ({self.b})"


def family_functionfield_curve(s, var: str = "T") -> tuple[FunctionFieldCurve, CurvePoint]:
    """The family member over Q(T) at a fixed rational s with its marked
    point (1 - s - 2T, 1 - s - 3T)."""
    s = Fraction(s)
    if s == 0:
        raise DegenerateS("s = 0 gives a vanishing discriminant")
    a, b = functionfield_coefficients(s, var)
    curve = FunctionFieldCurve(a, b, var)
    x, y = marked_point_coords(s, UniPoly.gen(var, QQ))
    return curve, CurvePoint.affine(RatFunc(x), RatFunc(y))


def second_section(s, var: str = "T") -> CurvePoint:
    """The point (T, (1 - s - 3T) sqrt(s)); coordinates lie in Q(sqrt(s))(T)."""
    s = Fraction(s)
    t = UniPoly.gen(var, QQ)
    w = 1 - s - 3 * t
    r = sqrt_rational(s)
    if r is not None:
        return CurvePoint.affine(RatFunc(t), RatFunc(w * r))
    K = QuadExtField(s)
    root = K.sqrt_gen()
    return CurvePoint.affine(
        RatFunc(t).with_field(K),
        RatFunc(w).with_field(K) * root,
    )


def _coeff_field_of(*points):
    for P in points:
        if P is None or P.is_infinity:
            continue
        for coord in (P.x, P.y):
            if isinstance(coord, RatFunc) and isinstance(coord.field, QuadExtField):
                return coord.field
    return QQ


def _as_ratfunc_coord(value, var: str) -> RatFunc:
    if isinstance(value, RatFunc):
        return value
    if isinstance(value, UniPoly):
        return RatFunc(value)
    return RatFunc.constant(var, value, QQ)


def _promote_point(P: CurvePoint, field, var: str) -> CurvePoint:
    if P.is_infinity:
        return P
    x = _as_ratfunc_coord(P.x, var)
    y = _as_ratfunc_coord(P.y, var)
    if x.field == field and y.field == field:
        return CurvePoint.affine(x, y)
    return CurvePoint.affine(x.with_field(field), y.with_field(field))


def _conjugate_ratfunc(f: RatFunc) -> RatFunc:
    if not isinstance(f.field, QuadExtField):
        return f
    conj = lambda c: c.conjugate()  # noqa: E731
    return RatFunc(f.num.map_coefficients(conj), f.den.map_coefficients(conj))


def conjugate_point(P: CurvePoint) -> CurvePoint:
    """Apply the quadratic-extension conjugation to both coordinates."""
    if P.is_infinity:
        return P
    return CurvePoint.affine(_conjugate_ratfunc(P.x), _conjugate_ratfunc(P.y))


# -- reduction data -----------------------------------------------------------


def _classify(val_delta: int, val_c4: int, place: Place) -> ReductionProfile:
    if val_delta == 0:
        rtype = ReductionType.GOOD
        m = 1
    elif val_c4 == 0:
        rtype = ReductionType.MULTIPLICATIVE
        m = val_delta
    else:
        rtype = ReductionType.ADDITIVE
        m = val_delta - 1
    if val_delta and not (val_delta < 12 or val_c4 < 4):
        raise MinimalityError(f"model is not minimal at {place}")
    return ReductionProfile(place, val_delta, rtype, m, place.degree())


def reduction_at(E: FunctionFieldCurve, place: Place) -> ReductionProfile:
    if place.is_infinity:
        spot = Place.linear(E.inf_var, 0)
        vd = valuation_or_inf(spot, E.discriminant_inf())
        vc = valuation_or_inf(spot, E.c4_inf())
    else:
        vd = valuation_or_inf(place, E.discriminant())
        vc = valuation_or_inf(place, E.c4())
    vd = 0 if vd == _INF else int(vd)
    vc = 4 if vc == _INF else int(vc)  # c4 = 0: deep additive, capped for the tests
    return _classify(vd, vc, place)


def bad_places(E: FunctionFieldCurve) -> list[ReductionProfile]:
    """Reduction profile at every place of bad reduction, infinity last."""
    profiles = []
    disc = E.discriminant()
    _, parts = factor_rational_poly(disc)
    for q, _ in parts:
        profiles.append(reduction_at(E, Place.finite(q)))
    inf = reduction_at(E, Place.infinity(E.var))
    if inf.val_delta:
        profiles.append(inf)
    profiles.sort(key=lambda pr: pr.place.sort_key())
    return profiles


def shioda_tate_rank(profiles) -> int:
    """Geometric Mordell-Weil rank bound for a rational elliptic surface:
    8 - sum(val Delta) + #(bad places) + #(additive places), all counts
    degree-weighted."""
    total = sum(pr.geometric_multiplicity * pr.val_delta for pr in profiles)
    if total != 12:
        raise NotRationalSurface(f"valuations of Delta sum to {total}, not 12")
    n_bad = sum(pr.geometric_multiplicity for pr in profiles if pr.val_delta)
    n_add = sum(
        pr.geometric_multiplicity
        for pr in profiles
        if pr.type is ReductionType.ADDITIVE
    )
    return 8 - total + n_bad + n_add


# -- local heights -------------------------------------------------------------


@dataclass(frozen=True)
class PlaceHeightEntry:
    place: Place
    val_delta: int
    reduction: ReductionType
    smooth: bool
    local: Fraction
    val_f2: Optional[int]
    val_f3: Optional[int]


@dataclass(frozen=True)
class HeightReport:
    entries: tuple[PlaceHeightEntry, ...]
    total: Fraction

    def local_at(self, place: Place) -> Fraction:
        for e in self.entries:
            if e.place == place:
                return e.local
        return Fraction(0)

    def to_table_json(self) -> dict:
        return {
            "places": [str(e.place) for e in self.entries],
            "val_delta": [e.val_delta for e in self.entries],
            "reduction": [e.reduction.value for e in self.entries],
            "point_smooth": [e.smooth for e in self.entries],
            "val_F2": [e.val_f2 for e in self.entries],
            "val_F3": [e.val_f3 for e in self.entries],
            "local_heights": [rational_to_str(e.local) for e in self.entries],
            "total": rational_to_str(self.total),
        }


def _local_data(E: FunctionFieldCurve, P: CurvePoint, place: Place):
    """(model a, model b, x, y, valuation place) in the chart where the
    given place is finite."""
    if place.is_infinity:
        Pm = E.point_to_inf(P)
        field = _coeff_field_of(Pm)
        a = RatFunc(E.a_inf).with_field(field)
        b = RatFunc(E.b_inf).with_field(field)
        return a, b, Pm.x, Pm.y, Place.linear(E.inf_var, 0)
    field = _coeff_field_of(P)
    a = RatFunc(E.a).with_field(field)
    b = RatFunc(E.b).with_field(field)
    x = _as_ratfunc_coord(P.x, E.var).with_field(field)
    y = _as_ratfunc_coord(P.y, E.var).with_field(field)
    return a, b, x, y, place


def _local_height_entry(
    E: FunctionFieldCurve, P: CurvePoint, place: Place, profile: ReductionProfile
) -> PlaceHeightEntry:
    if P.is_infinity:
        raise IdentityHeight("local height of the identity is undefined")
    a, b, x, y, spot = _local_data(E, P, place)
    n = profile.val_delta
    vx = valuation_or_inf(spot, x)
    v2y = valuation_or_inf(spot, 2 * y)

    def entry(smooth, lam, vf2=None, vf3=None):
        return PlaceHeightEntry(place, n, profile.type, smooth, lam, vf2, vf3)

    if vx < 0 or n == 0:
        lam = Fraction(max(0, -vx), 2) + Fraction(n, 12)
        return entry(True, lam)
    v_tangent = valuation_or_inf(spot, 3 * x * x + a)
    if not (v2y > 0 and v_tangent > 0):
        lam = Fraction(n, 12)  # vx >= 0 here, so no max term
        return entry(True, lam)
    # P meets the singular point of the fiber
    if profile.type is ReductionType.MULTIPLICATIVE:
        if v2y == _INF:
            raise ArithmeticError("two-torsion on a node is not supported")
        vf2 = 2 * int(v2y)
        alpha = Fraction(min(vf2, 2 * n - vf2), 2 * n)
        lam = Fraction(n, 2) * (alpha * alpha - alpha + Fraction(1, 6))
        return entry(False, lam, vf2=vf2)
    psi3 = 3 * x**4 + 6 * a * x * x + 12 * b * x - a * a
    vpsi3 = valuation_or_inf(spot, psi3)
    if v2y == _INF and vpsi3 == _INF:
        raise ArithmeticError("degenerate torsion point on a cusp")
    vf2 = None if v2y == _INF else 2 * int(v2y)
    vf3 = None if vpsi3 == _INF else 2 * int(vpsi3)
    if vf3 is None or (vf2 is not None and vf3 >= 3 * vf2):
        lam = Fraction(n, 12) - Fraction(vf2, 6)
    else:
        lam = Fraction(n, 12) - Fraction(vf3, 16)
    return entry(False, lam, vf2=vf2, vf3=vf3)


def local_height(E: FunctionFieldCurve, P: CurvePoint, place: Place) -> Fraction:
    return _local_height_entry(E, P, place, reduction_at(E, place)).local


def _rational_norm_poly(p: UniPoly) -> UniPoly:
    """p * conj(p) for quadratic-extension coefficients, descended to Q."""
    if p.field == QQ:
        return p
    conj = p.map_coefficients(lambda c: c.conjugate())
    prod = p * conj
    return UniPoly(p.var, [c.a for c in prod.coeffs], QQ)


def _pole_places(x: RatFunc, var: str) -> list[Place]:
    den = x.den if x.field == QQ else _rational_norm_poly(x.den)
    places = []
    if den.degree() > 0:
        _, parts = factor_rational_poly(den)
        places = [Place.finite(q) for q, _ in parts]
    return places


def canonical_height(E: FunctionFieldCurve, P: CurvePoint) -> HeightReport:
    """Degree-weighted sum of local heights over every contributing place.

    The identity gets the empty report with total 0.  Entries cover all bad
    places plus any good place where the point has a pole.
    """
    if P.is_infinity:
        return HeightReport((), Fraction(0))
    candidates: dict[Place, ReductionProfile] = {}
    for pr in bad_places(E):
        candidates[pr.place] = pr
    x = _as_ratfunc_coord(P.x, E.var)
    for place in _pole_places(x, E.var):
        candidates.setdefault(place, reduction_at(E, place))
    inf = Place.infinity(E.var)
    candidates.setdefault(inf, reduction_at(E, inf))
    entries = []
    total = Fraction(0)
    for place in sorted(candidates, key=lambda pl: pl.sort_key()):
        e = _local_height_entry(E, P, place, candidates[place])
        total += place.degree() * e.local
        if e.local or candidates[place].val_delta:
            entries.append(e)
    return HeightReport(tuple(entries), total)


def height_pairing(E: FunctionFieldCurve, P: CurvePoint, Q: CurvePoint) -> Fraction:
    """<P, Q> = (h(P+Q) - h(P) - h(Q)) / 2."""
    hsum = canonical_height(E, E.add(P, Q)).total
    return (hsum - canonical_height(E, P).total - canonical_height(E, Q).total) / 2


# -- j-invariant ---------------------------------------------------------------


def j_invariant_ff(E: FunctionFieldCurve) -> RatFunc:
    """j = 1728 * 4a^3 / (4a^3 + 27 b^2), exactly."""
    a, b = E.a, E.b
    num = 6912 * a * a * a
    den = 4 * a * a * a + 27 * b * b
    return RatFunc(num, den)


def is_isotrivial(E: FunctionFieldCurve) -> bool:
    return j_invariant_ff(E).degree_map() == 0


# -- generic rank over Q(T) -----------------------------------------------------


@dataclass(frozen=True)
class GenericRankEvidence:
    shioda_tate_bound: int
    heights: dict
    orthogonal: Optional[bool]
    galois_action: Optional[str]
    note: Optional[str]


def generic_rank(s) -> tuple[int, GenericRankEvidence]:
    """Rank of the family member over the rational function field, with the
    computational evidence that supports it.

    The rank is 1 for s = 1 (the two standard sections are dependent:
    P = -2Q, checked exactly), 2 for square s not 0 or 1 (two sections of
    positive height, orthogonal under the pairing), and 1 for non-square s
    (the conjugation of Q(sqrt(s)) negates the second section and fixes the
    first, so only a rank-1 piece is Galois-stable; the rank-2 bound and
    both heights are still verified)."""
    s = Fraction(s)
    if s == 0:
        raise DegenerateS("s = 0 is outside the family's good locus")
    E, P = family_functionfield_curve(s)
    bound = shioda_tate_rank(bad_places(E))
    Q = second_section(s)
    h_p = canonical_height(E, P).total
    if h_p <= 0:
        raise ArithmeticError("marked point must have positive height")
    if s == 1:
        minus_2q = E.scalar_mul(-2, Q)
        if minus_2q != P:
            raise ArithmeticError("expected the identity P = -2Q at s = 1")
        evidence = GenericRankEvidence(
            shioda_tate_bound=bound,
            heights={"P": h_p, "Q": canonical_height(E, Q).total},
            orthogonal=None,
            galois_action=None,
            note="P = -2Q: the two sections generate the same rank-1 subgroup",
        )
        return 1, evidence
    h_q = canonical_height(E, Q).total
    h_pq = canonical_height(E, E.add(P, Q)).total
    heights = {"P": h_p, "Q": h_q, "P+Q": h_pq}
    orthogonal = h_pq == h_p + h_q
    if sqrt_rational(s) is not None:
        if not orthogonal:
            raise ArithmeticError("height pairing of the two sections is not zero")
        evidence = GenericRankEvidence(
            shioda_tate_bound=bound,
            heights=heights,
            orthogonal=True,
            galois_action=None,
            note="Gram matrix diag(h(P), h(Q)) is nondegenerate",
        )
        return 2, evidence
    sigma_q = conjugate_point(Q)
    if sigma_q != CurvePoint.affine(Q.x, -Q.y):
        raise ArithmeticError("conjugation should negate the second section")
    evidence = GenericRankEvidence(
        shioda_tate_bound=bound,
        heights=heights,
        orthogonal=orthogonal,
        galois_action="sqrt(s) -> -sqrt(s) sends Q to -Q and fixes P",
        note="only the span of P is stable under the quadratic conjugation",
    )
    return 1, evidence
