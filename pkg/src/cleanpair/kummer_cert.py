"""Nodal-fiber certificates for products of two family members.

A pair of points (x1, y1), (x2, y2) on two cubics y^2 = f(x1) and
y^2 = g(x2) determines the ratio r = y1/y2, and the locus with a fixed
ratio is the plane cubic

    F(x1, x2) = f(x1) - r^2 g(x2) = 0.

When f and g both have a critical point (at t1 and t2) and the critical
values match up, F acquires a singular point at (t1, t2); if it is a
node, lines through it parametrize the cubic by their slope.  On that
parameter line one can write down a rational function whose zeros sit
over the marked-point image and whose poles sit over the points at
infinity, all of which collapse to a single product point.  Pushing the
function forward shows that a multiple of the cycle

    ([P1] - [-P1]) (x) ([P2] - [-P2])

dies in CH^2 of the product, which is the content of a clean-pair
certificate.  The certificate stores every intermediate object; the
verifier recomputes all of them from the pair data alone and compares,
so any mutation of a stored field is detected.

Serialization: one self-contained JSON document per certificate, with
rationals as "num/den" strings and polynomials as coefficient arrays,
lowest degree first.  The bivariate F is an array of arrays (outer index
the x1-degree, inner arrays coefficients in x2).
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from cleanpair.ec_core import CurvePoint, WeierstrassCurve, is_torsion_overQ
from cleanpair.exactmath import (
    QQ,
    PolyRing,
    RatFunc,
    UniPoly,
    parse_rational,
    poly_gcd,
    rational_roots,
    rational_to_str,
    resultant,
)
from cleanpair.family import (
    FamilyMember,
    PairHypothesis,
    discriminant_formula,
    family_coefficients,
    marked_point_coords,
)

CERTIFICATE_FORMAT = "cleanpair.certificate/1"

_LVAR = "L"  # slope parameter of the lines through the node
_X2RING = PolyRing("x2", QQ)


class TwoTorsionError(ValueError):
    """A source point has y = 0, so the ratio y1/y2 is degenerate."""


class NotOnFiber(ValueError):
    """The proposed point does not satisfy F(x1, x2) = 0."""


class NotSingular(ValueError):
    """The proposed point lies on the fiber but is a smooth point."""


class CuspNotSupported(ValueError):
    """The singular point is a cusp (t1*t2 = 0); only nodes are
    parametrized."""


class NodeIsTarget(ValueError):
    """The witness target coincides with the node."""


class IrrationalParameter(ValueError):
    """The target has no rational slope parameter (its line through the
    node is the vertical x2 = t2, slope at infinity)."""


class ReducibleFiber(ArithmeticError):
    """The fiber cubic has a line through the node as a component.  A
    common root of Q2 and Q3 is the slope of such a line (the line meets
    the cubic with total multiplicity 4 > 3, forcing it inside), so
    coprimality of Q2 and Q3 is exactly irreducibility of the fiber."""


class NodeKind(enum.Enum):
    NODE = "Node"
    CUSP = "Cusp"


# -- data records ---------------------------------------------------------------


@dataclass(frozen=True)
class PencilFiber:
    """The cubic F = f(x1) - r^2 g(x2), stored as a polynomial in x1 whose
    coefficients are polynomials in x2."""

    r: Fraction
    F: UniPoly
    source_curves: tuple[WeierstrassCurve, WeierstrassCurve]


@dataclass(frozen=True)
class NodeData:
    t1: Fraction
    t2: Fraction
    hessian_det: Fraction
    kind: NodeKind


@dataclass(frozen=True)
class NodalParametrization:
    """Lines x1 = t1 + L*tau, x2 = t2 + tau through the node; substituting
    into F leaves Q2(L) tau^2 + Q3(L) tau^3, so the third intersection is
    at tau(L) = -Q2(L)/Q3(L).

    node_branch_poly is Q2 (its roots are the two branch slopes at the
    node); infinity_branch_poly is Q3 (its roots are the three slopes
    whose lines meet the cubic at infinity instead).
    """

    tau: RatFunc
    x1_of: RatFunc
    x2_of: RatFunc
    node_branch_poly: UniPoly
    infinity_branch_poly: UniPoly
    node: NodeData


@dataclass(frozen=True)
class DivisorWitness:
    """h(L) with zeros only over the target and poles only over points at
    infinity of the fiber.

    With multiplier m = 3 the pole divisor is all three roots of Q3; with
    m = 1 (available when Q3 has a rational root) it is that single root.
    Either way the pushforward divisor is m*[target] - m*[infinity point].
    """

    h: RatFunc
    lambda_p: Fraction
    multiplier: int


@dataclass(frozen=True)
class CertifiedFiber:
    fiber: PencilFiber
    node: NodeData
    parametrization: NodalParametrization
    witness: DivisorWitness


@dataclass(frozen=True)
class PreimageCheck:
    """Which sign choices (s1*P1, s2*P2) land on which fiber: the ratio
    s1*y1/(s2*y2) equals r for matching signs and -r for opposite ones."""

    on_r: tuple[tuple[str, str], ...]
    on_minus_r: tuple[tuple[str, str], ...]


@dataclass(frozen=True)
class Conclusion:
    """The certified statement.  n and n_prime are the integers relating
    the marked points to rank-1 generators; they depend on analytic input
    the certificate does not carry, so the slots stay empty."""

    statement: str
    multiplier: int
    rank_one_hypotheses: tuple[bool, bool]
    rank_one_conditional: bool
    n: Optional[int]
    n_prime: Optional[int]
    torsion_factor: str


@dataclass(frozen=True)
class CleanPairCertificate:
    pair: PairHypothesis
    r: Fraction
    fiber_plus: CertifiedFiber
    fiber_minus: CertifiedFiber
    preimage_check: PreimageCheck
    conclusion: Conclusion


# -- construction ---------------------------------------------------------------


def _eval_bivariate(F: UniPoly, v1, v2):
    inner = F.evaluate(v1)
    if isinstance(inner, UniPoly):
        return inner.evaluate(v2)
    return inner


def _d_x2(F: UniPoly) -> UniPoly:
    return F.map_coefficients(lambda c: c.derivative())


def build_fiber(E1: WeierstrassCurve, E2: WeierstrassCurve, P1: CurvePoint,
                P2: CurvePoint) -> tuple[Fraction, PencilFiber]:
    """The ratio r = y1/y2 and the cubic F = f(x1) - r^2 g(x2) through
    (x(P1), x(P2))."""
    for P in (P1, P2):
        if P.is_infinity or P.y == 0:
            raise TwoTorsionError("source points must be affine with y != 0")
    r = Fraction(P1.y) / Fraction(P2.y)
    f = E1.rhs_poly("x1")
    g = E2.rhs_poly("x2")
    lifted = f.map_coefficients(lambda c: UniPoly.constant("x2", c), _X2RING)
    F = lifted - UniPoly.constant("x1", r * r * g, _X2RING)
    if _eval_bivariate(F, P1.x, P2.x) != 0:
        raise ArithmeticError("fiber misses its defining points; construction bug")
    return r, PencilFiber(r, F, (E1, E2))


def find_node(fiber: PencilFiber, t1, t2) -> NodeData:
    """Check that (t1, t2) is a singular point of the fiber and classify
    it by the determinant of second partials."""
    t1 = Fraction(t1)
    t2 = Fraction(t2)
    F = fiber.F
    if _eval_bivariate(F, t1, t2) != 0:
        raise NotOnFiber(
            f"F({t1}, {t2}) != 0: critical values do not satisfy f(t1) = r^2 g(t2)"
        )
    if (
        _eval_bivariate(F.derivative(), t1, t2) != 0
        or _eval_bivariate(_d_x2(F), t1, t2) != 0
    ):
        raise NotSingular(f"({t1}, {t2}) is a smooth point of the fiber")
    fxx = _eval_bivariate(F.derivative().derivative(), t1, t2)
    fyy = _eval_bivariate(_d_x2(_d_x2(F)), t1, t2)
    fxy = _eval_bivariate(_d_x2(F.derivative()), t1, t2)
    det = fxx * fyy - fxy * fxy
    kind = NodeKind.NODE if det != 0 else NodeKind.CUSP
    return NodeData(t1, t2, det, kind)


def parametrize(fiber: PencilFiber, node: NodeData) -> NodalParametrization:
    """Substitute the pencil of lines through the node into F and read off
    the third-intersection map tau(L) = -Q2(L)/Q3(L)."""
    if node.kind is not NodeKind.NODE:
        raise CuspNotSupported("cuspidal fibers are not parametrized")
    lring = PolyRing(_LVAR, QQ)
    lam = UniPoly.gen(_LVAR)
    x1_line = UniPoly("tau", [lring.coerce(node.t1), lam], lring)
    x2_line = UniPoly("tau", [lring.coerce(node.t2), lring.one()], lring)
    fsub = UniPoly.zero("tau", lring)
    for i, c in enumerate(fiber.F.coeffs):
        fsub = fsub + c.evaluate(x2_line) * x1_line**i
    if fsub.coeff(0) or fsub.coeff(1):
        raise ArithmeticError("low-order terms survived at a singular point")
    q2 = fsub.coeff(2)
    q3 = fsub.coeff(3)
    if q2.degree() != 2 or q3.degree() != 3:
        raise ArithmeticError("tangent cone or infinity cubic degenerated")
    if poly_gcd(q2, q3).degree() > 0:
        raise ReducibleFiber(
            "a line through the node is a component of the fiber; "
            "no nodal parametrization exists"
        )
    tau = RatFunc(-q2, q3)
    lamf = RatFunc.gen(_LVAR)
    x1_of = node.t1 + lamf * tau
    x2_of = node.t2 + tau
    check = RatFunc.constant(_LVAR, 0)
    for i, c in enumerate(fiber.F.coeffs):
        check = check + c.evaluate(x2_of) * x1_of**i
    if check:
        raise ArithmeticError("parametrization does not satisfy F = 0")
    return NodalParametrization(tau, x1_of, x2_of, q2, q3, node)


def _witness_parts(q3: UniPoly, lam_p: Fraction) -> tuple[int, UniPoly, UniPoly]:
    """Numerator and denominator of h.  A rational root of Q3 allows a
    degree-1 witness; otherwise the whole monic Q3 is the pole divisor and
    the zero is tripled to balance."""
    lin = UniPoly(_LVAR, [-lam_p, 1])
    roots = rational_roots(q3)
    if roots:
        rho = roots[0][0]
        return 1, lin, UniPoly(_LVAR, [-rho, 1])
    return 3, lin**3, q3.monic()


def divisor_witness(par: NodalParametrization, target) -> DivisorWitness:
    """A rational function on the parameter line whose divisor is
    supported on the target's parameter and on infinity slopes only."""
    x1t = Fraction(target[0])
    x2t = Fraction(target[1])
    t1, t2 = par.node.t1, par.node.t2
    if (x1t, x2t) == (t1, t2):
        raise NodeIsTarget("witness target coincides with the node")
    tau_p = x2t - t2
    if tau_p == 0:
        raise IrrationalParameter(
            "target lies on the vertical line x2 = t2; slope parameter is infinite"
        )
    lam_p = (x1t - t1) / tau_p
    q2 = par.node_branch_poly
    q3 = par.infinity_branch_poly
    if q3.evaluate(lam_p) == 0 or par.tau.evaluate(lam_p) != tau_p:
        raise NotOnFiber(f"({x1t}, {x2t}) does not lie on the parametrized fiber")
    m, num, den = _witness_parts(q3, lam_p)
    if resultant(num, q2) == 0 or resultant(den, q2) == 0:
        raise ArithmeticError("witness divisor touches the node branches")
    if poly_gcd(num, den).degree() > 0:
        raise ArithmeticError("witness zero collides with a pole")
    return DivisorWitness(RatFunc(num, den), lam_p, m)


def _certify_fiber(E1, E2, P1, P2, t1, t2) -> tuple[Fraction, CertifiedFiber]:
    r, fiber = build_fiber(E1, E2, P1, P2)
    node = find_node(fiber, t1, t2)
    par = parametrize(fiber, node)
    wit = divisor_witness(par, (P1.x, P2.x))
    return r, CertifiedFiber(fiber, node, par, wit)


_SIGNS = ("+", "-")


def _canonical_preimage_table() -> PreimageCheck:
    on_r = []
    on_minus = []
    for s1 in _SIGNS:
        for s2 in _SIGNS:
            (on_r if s1 == s2 else on_minus).append((s1, s2))
    return PreimageCheck(tuple(on_r), tuple(on_minus))


def _verify_preimage_table(check: PreimageCheck, P1, P2, r) -> bool:
    sign = {"+": 1, "-": -1}
    for pairs, expected in ((check.on_r, r), (check.on_minus_r, -r)):
        for s1, s2 in pairs:
            if sign[s1] * P1.y != expected * sign[s2] * P2.y:
                return False
    covered = set(check.on_r) | set(check.on_minus_r)
    return len(check.on_r) == 2 and len(check.on_minus_r) == 2 and len(covered) == 4


def _statement_text(m: int, conditional: bool) -> str:
    base = (
        f"{m} * Phi(([P1] - [-P1]) (x) ([P2] - [-P2])) = 0 in CH^2(E1 x E2)"
    )
    if conditional:
        tail = (
            "; rank-1 hypotheses supplied for both curves, so the pair "
            "(E1, E2) is clean"
        )
    else:
        tail = "; if both curves have rank 1 then the pair (E1, E2) is clean"
    return base + tail


def _torsion_factor_text(m: int) -> str:
    return f"4*n*n'*{m}"


def assemble_certificate(pair: PairHypothesis) -> CleanPairCertificate:
    """Run the whole construction for a validated pair and package every
    intermediate object."""
    m1, m2 = pair.left, pair.right
    P1, P2 = m1.marked_point, m2.marked_point
    for P in (P1, P2):
        if P.is_infinity or P.y == 0:
            raise TwoTorsionError("marked points must be affine with y != 0")
    r, cf_plus = _certify_fiber(m1.curve, m2.curve, P1, P2, m1.t, m2.t)
    P2_neg = CurvePoint.affine(P2.x, -P2.y)
    r_minus, cf_minus = _certify_fiber(m1.curve, m2.curve, P1, P2_neg, m1.t, m2.t)
    if r_minus != -r or cf_plus.fiber.F != cf_minus.fiber.F:
        raise ArithmeticError("mirror fiber disagrees; construction bug")
    if cf_plus.witness.multiplier != cf_minus.witness.multiplier:
        raise ArithmeticError("witness multipliers disagree between fibers")
    table = _canonical_preimage_table()
    if not _verify_preimage_table(table, P1, P2, r):
        raise ArithmeticError("preimage sign table failed verification")
    m = cf_plus.witness.multiplier
    conditional = pair.rank_one_asserted[0] and pair.rank_one_asserted[1]
    conclusion = Conclusion(
        statement=_statement_text(m, conditional),
        multiplier=m,
        rank_one_hypotheses=tuple(pair.rank_one_asserted),
        rank_one_conditional=conditional,
        n=None,
        n_prime=None,
        torsion_factor=_torsion_factor_text(m),
    )
    return CleanPairCertificate(pair, r, cf_plus, cf_minus, table, conclusion)


# -- serialization --------------------------------------------------------------


def _poly_json(p: UniPoly) -> list[str]:
    return [rational_to_str(c) for c in p.coeffs]


def _ratfunc_json(f: RatFunc) -> dict:
    return {"num": _poly_json(f.num), "den": _poly_json(f.den)}


def _poly_from(coeffs, var: str) -> UniPoly:
    return UniPoly(var, [parse_rational(c) for c in coeffs])


def _ratfunc_from(data, var: str) -> RatFunc:
    return RatFunc(_poly_from(data["num"], var), _poly_from(data["den"], var))


def _fiber_json(cf: CertifiedFiber) -> dict:
    par = cf.parametrization
    wit = cf.witness
    return {
        "r": rational_to_str(cf.fiber.r),
        "F": [_poly_json(c) for c in cf.fiber.F.coeffs],
        "node": {
            "t1": rational_to_str(cf.node.t1),
            "t2": rational_to_str(cf.node.t2),
            "hessian": rational_to_str(cf.node.hessian_det),
            "kind": cf.node.kind.value,
        },
        "parametrization": {
            "Q2": _poly_json(par.node_branch_poly),
            "Q3": _poly_json(par.infinity_branch_poly),
            "tau": _ratfunc_json(par.tau),
            "x1": _ratfunc_json(par.x1_of),
            "x2": _ratfunc_json(par.x2_of),
        },
        "witness": {
            "lambda_P": rational_to_str(wit.lambda_p),
            "multiplier": wit.multiplier,
            "h": _ratfunc_json(wit.h),
        },
    }


def certificate_to_json(cert: CleanPairCertificate) -> dict:
    pair = cert.pair
    members = []
    for m in (pair.left, pair.right):
        members.append(
            {
                "t": rational_to_str(m.t),
                "a": rational_to_str(m.curve.a),
                "b": rational_to_str(m.curve.b),
                "point": [
                    rational_to_str(m.marked_point.x),
                    rational_to_str(m.marked_point.y),
                ],
            }
        )
    return {
        "format": CERTIFICATE_FORMAT,
        "pair": {
            "s": rational_to_str(pair.shared_s),
            "members": members,
            "rank_one": list(pair.rank_one_asserted),
        },
        "r": rational_to_str(cert.r),
        "fiber_plus": _fiber_json(cert.fiber_plus),
        "fiber_minus": _fiber_json(cert.fiber_minus),
        "preimage_check": {
            "on_r": [list(p) for p in cert.preimage_check.on_r],
            "on_minus_r": [list(p) for p in cert.preimage_check.on_minus_r],
        },
        "conclusion": {
            "statement": cert.conclusion.statement,
            "multiplier": cert.conclusion.multiplier,
            "rank_one_hypotheses": list(cert.conclusion.rank_one_hypotheses),
            "rank_one_conditional": cert.conclusion.rank_one_conditional,
            "n": cert.conclusion.n,
            "n_prime": cert.conclusion.n_prime,
            "torsion_factor": cert.conclusion.torsion_factor,
        },
    }


def _member_from(data, s: Fraction) -> FamilyMember:
    t = parse_rational(data["t"])
    a = parse_rational(data["a"])
    b = parse_rational(data["b"])
    curve = WeierstrassCurve.possibly_singular(a, b, QQ)
    point = CurvePoint.affine(
        parse_rational(data["point"][0]), parse_rational(data["point"][1])
    )
    return FamilyMember(s, t, curve, point, True)


def _fiber_from(data, curves) -> CertifiedFiber:
    r = parse_rational(data["r"])
    F = UniPoly(
        "x1", [ _poly_from(c, "x2") for c in data["F"] ], _X2RING
    )
    nd = data["node"]
    node = NodeData(
        parse_rational(nd["t1"]),
        parse_rational(nd["t2"]),
        parse_rational(nd["hessian"]),
        NodeKind(nd["kind"]),
    )
    pd = data["parametrization"]
    par = NodalParametrization(
        _ratfunc_from(pd["tau"], _LVAR),
        _ratfunc_from(pd["x1"], _LVAR),
        _ratfunc_from(pd["x2"], _LVAR),
        _poly_from(pd["Q2"], _LVAR),
        _poly_from(pd["Q3"], _LVAR),
        node,
    )
    wd = data["witness"]
    wit = DivisorWitness(
        _ratfunc_from(wd["h"], _LVAR),
        parse_rational(wd["lambda_P"]),
        int(wd["multiplier"]),
    )
    return CertifiedFiber(PencilFiber(r, F, curves), node, par, wit)


def certificate_from_json(data: dict) -> CleanPairCertificate:
    if data.get("format") != CERTIFICATE_FORMAT:
        raise ValueError(f"unsupported certificate format: {data.get('format')!r}")
    pd = data["pair"]
    s = parse_rational(pd["s"])
    left = _member_from(pd["members"][0], s)
    right = _member_from(pd["members"][1], s)
    flags = tuple(bool(f) for f in pd["rank_one"])
    pair = PairHypothesis(left, right, s, flags)
    curves = (left.curve, right.curve)
    pc = data["preimage_check"]
    cd = data["conclusion"]
    return CleanPairCertificate(
        pair=pair,
        r=parse_rational(data["r"]),
        fiber_plus=_fiber_from(data["fiber_plus"], curves),
        fiber_minus=_fiber_from(data["fiber_minus"], curves),
        preimage_check=PreimageCheck(
            tuple(tuple(p) for p in pc["on_r"]),
            tuple(tuple(p) for p in pc["on_minus_r"]),
        ),
        conclusion=Conclusion(
            statement=cd["statement"],
            multiplier=int(cd["multiplier"]),
            rank_one_hypotheses=tuple(bool(f) for f in cd["rank_one_hypotheses"]),
            rank_one_conditional=bool(cd["rank_one_conditional"]),
            n=cd["n"],
            n_prime=cd["n_prime"],
            torsion_factor=cd["torsion_factor"],
        ),
    )


def certificate_dumps(cert: CleanPairCertificate) -> str:
    return json.dumps(certificate_to_json(cert), indent=2, sort_keys=True)


def certificate_loads(text: str) -> CleanPairCertificate:
    return certificate_from_json(json.loads(text))


# -- verification ---------------------------------------------------------------


@dataclass(frozen=True)
class VerificationResult:
    ok: bool
    reasons: tuple[str, ...]

    def __bool__(self) -> bool:
        return self.ok


def _check_membership(cert: CleanPairCertificate) -> list[str]:
    bad = []
    pair = cert.pair
    if pair.left.s != pair.shared_s or pair.right.s != pair.shared_s:
        bad.append("PairMembership")
    if pair.left.t == pair.right.t:
        bad.append("PairMembership")
    for m in (pair.left, pair.right):
        a, b = family_coefficients(m.s, m.t)
        x, y = marked_point_coords(m.s, m.t)
        P = m.marked_point
        if (m.curve.a, m.curve.b) != (a, b) or (P.x, P.y) != (x, y):
            bad.append("PairMembership")
            continue
        f = m.curve.rhs_poly()
        if (
            P.y * P.y != f.evaluate(P.x)
            or f.derivative().evaluate(m.t) != 0
            or f.evaluate(m.t) != m.s * P.y * P.y
        ):
            bad.append("PairMembership")
            continue
        if discriminant_formula(m.s, m.t) == 0 or is_torsion_overQ(m.curve, P):
            bad.append("PairMembership")
    return bad


def _check_ratio(cert: CleanPairCertificate) -> list[str]:
    bad = []
    pair = cert.pair
    y1 = pair.left.marked_point.y
    y2 = pair.right.marked_point.y
    if y2 == 0 or cert.r != Fraction(y1) / Fraction(y2):
        bad.append("RatioMismatch")
    f = pair.left.curve.rhs_poly()
    g = pair.right.curve.rhs_poly()
    if cert.r * cert.r * g.evaluate(pair.right.t) != f.evaluate(pair.left.t):
        bad.append("RatioMismatch")
    if cert.fiber_plus.fiber.r != cert.r or cert.fiber_minus.fiber.r != -cert.r:
        bad.append("RatioMismatch")
    if cert.fiber_plus.fiber.F != cert.fiber_minus.fiber.F:
        bad.append("FiberMismatch")
    return bad


def _rebuild_fiber_poly(cert: CleanPairCertificate) -> UniPoly:
    pair = cert.pair
    f = pair.left.curve.rhs_poly("x1")
    g = pair.right.curve.rhs_poly("x2")
    lifted = f.map_coefficients(lambda c: UniPoly.constant("x2", c), _X2RING)
    return lifted - UniPoly.constant("x1", cert.r * cert.r * g, _X2RING)


def _check_fiber(cf: CertifiedFiber, expected_F: UniPoly, r: Fraction) -> list[str]:
    bad = []
    F = cf.fiber.F
    if F != expected_F:
        bad.append("FiberMismatch")
    if F.coeff(3) != _X2RING.one() or F.coeff(0).coeff(3) != -(r * r):
        bad.append("FiberMismatch")
    if any(i + c.degree() > 3 for i, c in enumerate(F.coeffs) if c):
        bad.append("FiberMismatch")
    return bad


def _check_node(cf: CertifiedFiber, expected_F: UniPoly, t1, t2) -> list[str]:
    node = cf.node
    if (node.t1, node.t2) != (t1, t2):
        return ["NodeMismatch"]
    try:
        fresh = find_node(PencilFiber(cf.fiber.r, expected_F, cf.fiber.source_curves), t1, t2)
    except (NotOnFiber, NotSingular):
        return ["NodeMismatch"]
    if (
        node.hessian_det != fresh.hessian_det
        or node.kind != fresh.kind
        or node.kind is not NodeKind.NODE
    ):
        return ["NodeMismatch"]
    return []


def _check_parametrization(cf: CertifiedFiber, expected_F: UniPoly) -> list[str]:
    try:
        fresh = parametrize(
            PencilFiber(cf.fiber.r, expected_F, cf.fiber.source_curves), cf.node
        )
    except (ValueError, ArithmeticError):
        return ["ParametrizationMismatch"]
    par = cf.parametrization
    if (
        par.node_branch_poly != fresh.node_branch_poly
        or par.infinity_branch_poly != fresh.infinity_branch_poly
        or par.tau != fresh.tau
        or par.x1_of != fresh.x1_of
        or par.x2_of != fresh.x2_of
    ):
        return ["ParametrizationMismatch"]
    # the stored coordinate functions must satisfy F = 0 on their own
    check = RatFunc.constant(_LVAR, 0)
    for i, c in enumerate(expected_F.coeffs):
        check = check + c.evaluate(par.x2_of) * par.x1_of**i
    if check:
        return ["ParametrizationMismatch"]
    return []


def _check_witness(cf: CertifiedFiber, target) -> list[str]:
    bad = []
    par = cf.parametrization
    wit = cf.witness
    t1, t2 = cf.node.t1, cf.node.t2
    tau_p = Fraction(target[1]) - t2
    if tau_p == 0:
        return ["DivisorMismatch"]
    lam_p = (Fraction(target[0]) - t1) / tau_p
    q2 = par.node_branch_poly
    q3 = par.infinity_branch_poly
    if wit.lambda_p != lam_p:
        bad.append("DivisorMismatch")
    if q3.evaluate(lam_p) == 0 or par.tau.evaluate(lam_p) != tau_p:
        bad.append("DivisorMismatch")
        return bad
    m, num, den = _witness_parts(q3, lam_p)
    if wit.multiplier != m or wit.h != RatFunc(num, den):
        bad.append("DivisorMismatch")
        return bad
    # independent divisor analysis of the stored function
    hn, hd = wit.h.num, wit.h.den
    lin = UniPoly(_LVAR, [-lam_p, 1])
    if hn != lin**m or hn.degree() != m or hd.degree() != m or not hd.is_monic():
        bad.append("DivisorMismatch")
    if m == 1:
        roots = rational_roots(hd)
        if len(roots) != 1 or q3.evaluate(roots[0][0]) != 0:
            bad.append("DivisorMismatch")
    elif hd != q3.monic():
        bad.append("DivisorMismatch")
    if (
        resultant(hn, q2) == 0
        or resultant(hd, q2) == 0
        or poly_gcd(hn, hd).degree() > 0
    ):
        bad.append("DivisorMismatch")
    return bad


def _check_conclusion(cert: CleanPairCertificate) -> list[str]:
    con = cert.conclusion
    m = cert.fiber_plus.witness.multiplier
    expected_cond = con.rank_one_hypotheses[0] and con.rank_one_hypotheses[1]
    ok = (
        con.multiplier == m
        and cert.fiber_minus.witness.multiplier == m
        and con.rank_one_hypotheses == tuple(cert.pair.rank_one_asserted)
        and con.rank_one_conditional == expected_cond
        and con.n is None
        and con.n_prime is None
        and con.statement == _statement_text(m, expected_cond)
        and con.torsion_factor == _torsion_factor_text(m)
    )
    return [] if ok else ["ConclusionMismatch"]


def verify_certificate(cert: CleanPairCertificate) -> VerificationResult:
    """Recompute every component of the certificate from the pair data and
    compare; collects a reason code for each failing section instead of
    raising."""
    reasons: list[str] = []

    def run(tag, fn, *args):
        try:
            reasons.extend(fn(*args))
        except (ArithmeticError, ValueError, TypeError, KeyError) as _:
            reasons.append(tag)

    run("PairMembership", _check_membership, cert)
    run("RatioMismatch", _check_ratio, cert)
    try:
        expected_F = _rebuild_fiber_poly(cert)
    except (ArithmeticError, ValueError, TypeError):
        return VerificationResult(False, tuple(reasons) + ("FiberMismatch",))
    target = (cert.pair.left.marked_point.x, cert.pair.right.marked_point.x)
    for cf, r in ((cert.fiber_plus, cert.r), (cert.fiber_minus, -cert.r)):
        run("FiberMismatch", _check_fiber, cf, expected_F, r)
        run("NodeMismatch", _check_node, cf, expected_F, cert.pair.left.t, cert.pair.right.t)
        run("ParametrizationMismatch", _check_parametrization, cf, expected_F)
        run("DivisorMismatch", _check_witness, cf, target)

    def check_preimage():
        table = cert.preimage_check
        canonical = _canonical_preimage_table()
        P1 = cert.pair.left.marked_point
        P2 = cert.pair.right.marked_point
        if (
            table.on_r != canonical.on_r
            or table.on_minus_r != canonical.on_minus_r
            or not _verify_preimage_table(table, P1, P2, cert.r)
        ):
            return ["PreimageMismatch"]
        return []

    run("PreimageMismatch", check_preimage)
    run("ConclusionMismatch", _check_conclusion, cert)
    seen = []
    for tag in reasons:
        if tag not in seen:
            seen.append(tag)
    return VerificationResult(not seen, tuple(seen))
