"""Dense univariate polynomials and rational functions over exact fields.

Coefficients live in any field with exact operator arithmetic (Fraction,
QuadExtElem, or RatFunc for nested towers).  Each polynomial carries a
variable tag and a field descriptor; mixing variables or fields in one
operation is an error rather than a silent coercion.

The degree of the zero polynomial is the sentinel -1.
"""

from __future__ import annotations

from fractions import Fraction

import sympy

from cleanpair.exactmath.scalars import QQ, as_fraction


class DegreeError(ValueError):
    """An operation received a polynomial of unsupported degree."""


def _is_zero(c) -> bool:
    return not c


class UniPoly:
    """Immutable dense polynomial; coefficients stored lowest degree first."""

    __slots__ = ("var", "coeffs", "field")

    def __init__(self, var: str, coeffs, field=QQ):
        coeffs = [field.coerce(c) for c in coeffs]
        while coeffs and _is_zero(coeffs[-1]):
            coeffs.pop()
        object.__setattr__(self, "var", var)
        object.__setattr__(self, "coeffs", tuple(coeffs))
        object.__setattr__(self, "field", field)

    def __setattr__(self, name, value):
        raise AttributeError("UniPoly is immutable")

    # -- constructors --------------------------------------------------

    @classmethod
    def constant(cls, var: str, value, field=QQ):
        return cls(var, [value], field)

    @classmethod
    def gen(cls, var: str, field=QQ):
        return cls(var, [field.zero(), field.one()], field)

    @classmethod
    def zero(cls, var: str, field=QQ):
        return cls(var, [], field)

    # -- basic structure -------------------------------------------------

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def lc(self):
        if not self.coeffs:
            raise DegreeError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coeff(self, i: int):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.field.zero()

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == self.field.one()

    def __bool__(self):
        return bool(self.coeffs)

    def _check_compat(self, other: "UniPoly"):
        if self.var != other.var:
            raise ValueError(f"variable mismatch: {self.var} vs {other.var}")
        if self.field != other.field:
            raise ValueError("coefficient field mismatch")

    def _coerce_operand(self, other):
        if (
            isinstance(other, UniPoly)
            and other.var == self.var
            and other.field == self.field
        ):
            return other
        # Anything else goes through the coefficient field; on failure the
        # operator returns NotImplemented so reflected ops get a chance
        # (needed when the other side's field can absorb this polynomial).
        try:
            return UniPoly.constant(self.var, self.field.coerce(other), self.field)
        except TypeError:
            return None

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        o = self._coerce_operand(other)
        if o is None:
            return NotImplemented
        n = max(len(self.coeffs), len(o.coeffs))
        return UniPoly(
            self.var,
            [self.coeff(i) + o.coeff(i) for i in range(n)],
            self.field,
        )

    __radd__ = __add__

    def __neg__(self):
        return UniPoly(self.var, [-c for c in self.coeffs], self.field)

    def __sub__(self, other):
        o = self._coerce_operand(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce_operand(other)
        if o is None:
            return NotImplemented
        if not self.coeffs or not o.coeffs:
            return UniPoly.zero(self.var, self.field)
        out = [self.field.zero()] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if _is_zero(a):
                continue
            for j, b in enumerate(o.coeffs):
                out[i + j] = out[i + j] + a * b
        return UniPoly(self.var, out, self.field)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out = UniPoly.constant(self.var, self.field.one(), self.field)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __divmod__(self, other):
        o = self._coerce_operand(other)
        if o is None:
            return NotImplemented
        if not o:
            raise ZeroDivisionError("polynomial division by zero")
        q = [self.field.zero()] * max(0, len(self.coeffs) - len(o.coeffs) + 1)
        rem = list(self.coeffs)
        dlc = o.lc()
        dd = o.degree()
        while len(rem) - 1 >= dd and rem:
            k = len(rem) - 1 - dd
            c = rem[-1] / dlc
            q[k] = c
            for j, b in enumerate(o.coeffs):
                rem[k + j] = rem[k + j] - c * b
            while rem and _is_zero(rem[-1]):
                rem.pop()
        return (
            UniPoly(self.var, q, self.field),
            UniPoly(self.var, rem, self.field),
        )

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __truediv__(self, other):
        if isinstance(other, UniPoly):
            return RatFunc(self, other)
        try:
            c = self.field.coerce(other)
        except TypeError:
            return NotImplemented
        return self * (self.field.one() / c)

    def exact_div(self, other: "UniPoly") -> "UniPoly":
        q, r = divmod(self, other)
        if r:
            raise ValueError("division is not exact")
        return q

    # -- calculus and evaluation --------------------------------------------

    def derivative(self) -> "UniPoly":
        return UniPoly(
            self.var,
            [i * c for i, c in enumerate(self.coeffs)][1:],
            self.field,
        )

    def evaluate(self, value):
        """Horner evaluation; value may live in any ring the coefficients
        multiply into (scalars, QuadExtElem, UniPoly, RatFunc)."""
        acc = None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * value + c
        if acc is None:
            return self.field.zero()
        return acc

    def compose(self, inner: "UniPoly") -> "UniPoly":
        acc = UniPoly.zero(inner.var, inner.field)
        for c in reversed(self.coeffs):
            acc = acc * inner + UniPoly.constant(inner.var, c, inner.field)
        return acc

    # -- normalization -----------------------------------------------------

    def monic(self) -> "UniPoly":
        if not self:
            return self
        c = self.lc()
        one = self.field.one()
        if c == one:
            return self
        inv = one / c
        return UniPoly(self.var, [a * inv for a in self.coeffs], self.field)

    def with_field(self, field) -> "UniPoly":
        """Re-coerce every coefficient into another field descriptor."""
        return UniPoly(self.var, [field.coerce(c) for c in self.coeffs], field)

    def map_coefficients(self, fn, field=None) -> "UniPoly":
        return UniPoly(self.var, [fn(c) for c in self.coeffs], field or self.field)

    def rename(self, var: str) -> "UniPoly":
        return UniPoly(var, self.coeffs, self.field)

    def reversed_coeffs(self, length: int | None = None) -> "UniPoly":
        """Coefficient reversal x^n * p(1/x), padded to the given length."""
        n = length if length is not None else len(self.coeffs)
        if n < len(self.coeffs):
            raise DegreeError("reversal length below polynomial length")
        padded = list(self.coeffs) + [self.field.zero()] * (n - len(self.coeffs))
        return UniPoly(self.var, list(reversed(padded)), self.field)

    # -- comparison and display ---------------------------------------------

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return (
                self.var == other.var
                and self.field == other.field
                and self.coeffs == other.coeffs
            )
        if not self.coeffs:
            return other == 0
        if len(self.coeffs) == 1:
            return self.coeffs[0] == other
        return NotImplemented

    def __hash__(self):
        return hash((self.var, self.coeffs))

    def __repr__(self):
        return f"UniPoly({self.var!r}, {list(self.coeffs)!r})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(self.degree(), -1, -1):
            c = self.coeff(i)
            if _is_zero(c):
                continue
            cs = str(c)
            if i == 0:
                term = cs
            else:
                xs = self.var if i == 1 else f"{self.var}^{i}"
                term = xs if cs == "1" else (f"-{xs}" if cs == "-1" else f"{cs}*{xs}")
            parts.append(term)
        out = parts[0]
        for term in parts[1:]:
            if term.startswith("-"):
                out += " - " + term[1:]
            else:
                out += " + " + term
        return out


# -- gcd -------------------------------------------------------------------


def sympy_from_unipoly(p: UniPoly) -> sympy.Poly:
    """Rational-coefficient UniPoly to a sympy Poly (shared kernel entry)."""
    if p.field != QQ:
        raise TypeError("sympy conversion needs rational coefficients")
    x = sympy.Symbol(p.var)
    coeffs = [sympy.Rational(c.numerator, c.denominator) for c in reversed(p.coeffs)]
    return sympy.Poly(coeffs or [0], x, domain="QQ")


def unipoly_from_sympy(sp: sympy.Poly, var: str) -> UniPoly:
    coeffs = [Fraction(c.p, c.q) for c in reversed(sp.all_coeffs())]
    return UniPoly(var, coeffs, QQ)


def poly_gcd(f: UniPoly, g: UniPoly) -> UniPoly:
    """Monic gcd.  Over Q the work is delegated to sympy (fast modular
    methods); other fields use monic Euclid directly."""
    f._check_compat(g)
    if not f:
        return g.monic()
    if not g:
        return f.monic()
    if f.field == QQ:
        out = sympy_from_unipoly(f).gcd(sympy_from_unipoly(g))
        return unipoly_from_sympy(out, f.var).monic()
    a, b = f.monic(), g.monic()
    while b:
        a, b = b, (a % b)
        if b:
            b = b.monic()
    return a.monic()


# -- resultants and discriminants -------------------------------------------


def resultant(f: UniPoly, g: UniPoly):
    """Res(f, g) = lc(f)^deg(g) * product of g over the roots of f."""
    f._check_compat(g)
    one = f.field.one()
    m, n = f.degree(), g.degree()
    if m < 0 or n < 0:
        return f.field.zero()
    if m == 0:
        return f.lc() ** n if n else one
    if n == 0:
        return g.lc() ** m
    if n < m:
        swapped = resultant(g, f)
        return -swapped if (m * n) % 2 else swapped
    r = g % f
    if not r:
        return f.field.zero()
    return f.lc() ** (n - r.degree()) * resultant(f, r)


def poly_discriminant(p: UniPoly):
    """Discriminant via Res(p, p'); defined for degree >= 1."""
    n = p.degree()
    if n < 1:
        raise DegreeError("discriminant needs degree >= 1")
    res = resultant(p, p.derivative())
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * res * (p.field.one() / p.lc())


def poly_discriminant_cubic(p: UniPoly):
    """Discriminant of a cubic; for x^3 + a*x + b this is -4a^3 - 27b^2."""
    if p.degree() != 3:
        raise DegreeError(f"expected a cubic, got degree {p.degree()}")
    return poly_discriminant(p)


def squarefree_decomposition(p: UniPoly):
    """Yun decomposition: returns (constant, [(monic squarefree, mult)]).

    The parts are pairwise coprime and constant * prod part^mult == p.
    """
    if not p:
        raise DegreeError("zero polynomial has no squarefree decomposition")
    const = p.lc()
    p = p.monic()
    if p.degree() == 0:
        return const, []
    parts = []
    dp = p.derivative()
    a = poly_gcd(p, dp)
    b = p.exact_div(a)
    c = dp.exact_div(a)
    i = 1
    while b.degree() > 0:
        d = c - b.derivative()
        g = poly_gcd(b, d)
        if g.degree() > 0:
            parts.append((g, i))
        b = b.exact_div(g)
        if d:
            c = d.exact_div(g)
        else:
            c = UniPoly.zero(p.var, p.field)
        i += 1
    return const, parts


# -- rational functions ------------------------------------------------------


class RatFunc:
    """Reduced fraction of UniPoly with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: UniPoly, den: UniPoly | None = None):
        if den is None:
            den = UniPoly.constant(num.var, num.field.one(), num.field)
        num._check_compat(den)
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if num:
            g = poly_gcd(num, den)
            if g.degree() > 0:
                num = num.exact_div(g)
                den = den.exact_div(g)
        else:
            den = UniPoly.constant(num.var, num.field.one(), num.field)
        c = den.lc()
        if c != num.field.one():
            inv = num.field.one() / c
            num = num * inv
            den = den * inv
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RatFunc is immutable")

    @classmethod
    def constant(cls, var: str, value, field=QQ):
        return cls(UniPoly.constant(var, value, field))

    @classmethod
    def gen(cls, var: str, field=QQ):
        return cls(UniPoly.gen(var, field))

    @property
    def var(self):
        return self.num.var

    @property
    def field(self):
        return self.num.field

    def is_polynomial(self) -> bool:
        return self.den.degree() == 0

    def degree_map(self) -> int:
        """Degree as a morphism to the projective line."""
        return max(self.num.degree(), self.den.degree())

    def __bool__(self):
        return bool(self.num)

    def _coerce_operand(self, other):
        if isinstance(other, RatFunc):
            if self.var != other.var or self.field != other.field:
                return None
            return other
        if isinstance(other, UniPoly):
            if other.var != self.var or other.field != self.field:
                return None
            return RatFunc(other)
        try:
            return RatFunc.constant(self.var, self.field.coerce(other), self.field)
        except TypeError:
            return None

    def __add__(self, other):
        o = self._coerce_operand(other)
        if o is None:
            return NotImplemented
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        o = self._coerce_operand(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce_operand(other)
        if o is None:
            return NotImplemented
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce_operand(other)
        if o is None:
            return NotImplemented
        if not o.num:
            raise ZeroDivisionError("division by the zero function")
        return RatFunc(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._coerce_operand(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, n: int):
        if n < 0:
            if not self.num:
                raise ZeroDivisionError("negative power of zero")
            return RatFunc(self.den, self.num) ** (-n)
        return RatFunc(self.num**n, self.den**n)

    def evaluate(self, value):
        dv = self.den.evaluate(value)
        if not dv:
            raise ZeroDivisionError("evaluation at a pole")
        return self.num.evaluate(value) / dv

    def substitute_inverse(self, new_var: str) -> "RatFunc":
        """The function f(1/u) as a RatFunc in u."""
        m = max(len(self.num.coeffs), len(self.den.coeffs))
        n = self.num.reversed_coeffs(m).rename(new_var)
        d = self.den.reversed_coeffs(m).rename(new_var)
        return RatFunc(n, d)

    def with_field(self, field) -> "RatFunc":
        return RatFunc(self.num.with_field(field), self.den.with_field(field))

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return (
                self.var == other.var
                and self.num == other.num
                and self.den == other.den
            )
        if self.den.degree() == 0:
            return self.num == other
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RatFunc({self.num!r}, {self.den!r})"

    def __str__(self):
        if self.den.degree() == 0:
            return str(self.num)
        return f"({self.num})/({self.den})"


# -- field/ring descriptors for towers ---------------------------------------


class PolyRing:
    """Coefficient-ring descriptor whose elements are UniPoly in a fixed
    variable.  Division is not provided; suitable for nested polynomial
    construction and evaluation only."""

    def __init__(self, var: str, coeff_field=QQ):
        self.var = var
        self.coeff_field = coeff_field

    def zero(self):
        return UniPoly.zero(self.var, self.coeff_field)

    def one(self):
        return UniPoly.constant(self.var, self.coeff_field.one(), self.coeff_field)

    def coerce(self, value):
        if isinstance(value, UniPoly):
            if value.var == self.var and value.field == self.coeff_field:
                return value
            raise TypeError("polynomial from a different ring")
        return UniPoly.constant(self.var, self.coeff_field.coerce(value), self.coeff_field)

    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and self.var == other.var
            and self.coeff_field == other.coeff_field
        )

    def __hash__(self):
        return hash(("PolyRing", self.var, self.coeff_field))

    def __repr__(self):
        return f"PolyRing({self.var!r}, {self.coeff_field!r})"


class RatFuncField:
    """Field descriptor whose elements are RatFunc in a fixed variable."""

    def __init__(self, var: str, coeff_field=QQ):
        self.var = var
        self.coeff_field = coeff_field

    def zero(self):
        return RatFunc.constant(self.var, self.coeff_field.zero(), self.coeff_field)

    def one(self):
        return RatFunc.constant(self.var, self.coeff_field.one(), self.coeff_field)

    def gen(self):
        return RatFunc.gen(self.var, self.coeff_field)

    def coerce(self, value):
        if isinstance(value, RatFunc):
            if value.var == self.var and value.field == self.coeff_field:
                return value
            raise TypeError("rational function from a different field")
        if isinstance(value, UniPoly):
            if value.var == self.var and value.field == self.coeff_field:
                return RatFunc(value)
            raise TypeError("polynomial from a different ring")
        return RatFunc.constant(self.var, self.coeff_field.coerce(value), self.coeff_field)

    def __eq__(self, other):
        return (
            isinstance(other, RatFuncField)
            and self.var == other.var
            and self.coeff_field == other.coeff_field
        )

    def __hash__(self):
        return hash(("RatFuncField", self.var, self.coeff_field))

    def __repr__(self):
        return f"RatFuncField({self.var!r}, {self.coeff_field!r})"
