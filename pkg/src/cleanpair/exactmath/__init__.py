"""Exact arithmetic: rationals, quadratic extensions, polynomials,
rational functions, and places of Q(T)."""

from cleanpair.exactmath.factor import (
    factor_rational_poly,
    is_irreducible,
    rational_roots,
    stays_irreducible_over_quadratic,
)
from cleanpair.exactmath.poly import (
    DegreeError,
    PolyRing,
    RatFunc,
    RatFuncField,
    UniPoly,
    poly_discriminant,
    poly_discriminant_cubic,
    poly_gcd,
    resultant,
    squarefree_decomposition,
)
from cleanpair.exactmath.places import (
    Place,
    PoleAtPlace,
    UndefinedValuation,
    divisor_of,
    quotient_field_image,
    valuation_at,
    valuation_or_inf,
)
from cleanpair.exactmath.scalars import (
    QQ,
    QuadExtElem,
    QuadExtField,
    Rational,
    RationalField,
    as_fraction,
    is_rational_square,
    nth_root_rational,
    parse_rational,
    rational_to_str,
    sqrt_int,
    sqrt_rational,
    squarefree_part,
)

__all__ = [
    "QQ",
    "DegreeError",
    "Place",
    "PolyRing",
    "PoleAtPlace",
    "QuadExtElem",
    "QuadExtField",
    "RatFunc",
    "RatFuncField",
    "Rational",
    "RationalField",
    "UndefinedValuation",
    "UniPoly",
    "as_fraction",
    "divisor_of",
    "factor_rational_poly",
    "is_irreducible",
    "is_rational_square",
    "nth_root_rational",
    "parse_rational",
    "poly_discriminant",
    "poly_discriminant_cubic",
    "poly_gcd",
    "quotient_field_image",
    "rational_roots",
    "rational_to_str",
    "resultant",
    "sqrt_int",
    "sqrt_rational",
    "squarefree_part",
    "squarefree_decomposition",
    "stays_irreducible_over_quadratic",
    "valuation_at",
    "valuation_or_inf",
]
