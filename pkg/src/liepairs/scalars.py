"""Exact scalars: the Gaussian rationals Q(i).

Every quantity in this library is a GaussScalar, so no rounding can occur
anywhere.  Scalars serialize as strings like "2", "-1/3" or "1/2+3/4*i".
"""

from __future__ import annotations

from fractions import Fraction


class GaussScalar:
    """An exact complex rational a + b*i (a, b arbitrary-precision rationals)."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        # Fraction keeps lowest terms and a positive denominator for us.
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussScalar is immutable")

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        other = as_scalar(other)
        return GaussScalar(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = as_scalar(other)
        return GaussScalar(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return as_scalar(other) - self

    def __mul__(self, other):
        other = as_scalar(other)
        return GaussScalar(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __neg__(self):
        return GaussScalar(-self.re, -self.im)

    def __truediv__(self, other):
        other = as_scalar(other)
        n = other.re * other.re + other.im * other.im
        if n == 0:
            raise ZeroDivisionError("division by zero GaussScalar")
        return GaussScalar(
            (self.re * other.re + self.im * other.im) / n,
            (self.im * other.re - self.re * other.im) / n,
        )

    def __rtruediv__(self, other):
        return as_scalar(other) / self

    def inverse(self):
        return ONE / self

    def conjugate(self):
        return GaussScalar(self.re, -self.im)

    # -- predicates and hashing ---------------------------------------------

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def is_zero(self):
        return not self.re and not self.im

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = GaussScalar(other)
        if not isinstance(other, GaussScalar):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        return "GaussScalar(%r)" % format_scalar(self)

    def __str__(self):
        return format_scalar(self)


def as_scalar(value) -> GaussScalar:
    """Coerce ints, Fractions and GaussScalars to GaussScalar."""
    if isinstance(value, GaussScalar):
        return value
    if isinstance(value, (int, Fraction)):
        return GaussScalar(value)
    raise TypeError("cannot coerce %r to GaussScalar" % (value,))


ZERO = GaussScalar(0)
ONE = GaussScalar(1)
I = GaussScalar(0, 1)


def _format_fraction(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return "%d/%d" % (q.numerator, q.denominator)


def format_scalar(s: GaussScalar) -> str:
    """Canonical string form: "0", "a/b", "c/d*i" or "a/b+c/d*i"."""
    if not s.im:
        return _format_fraction(s.re)
    imag = _format_fraction(abs(s.im)) + "*i"
    if not s.re:
        return imag if s.im > 0 else "-" + imag
    sign = "+" if s.im > 0 else "-"
    return _format_fraction(s.re) + sign + imag


def _parse_fraction(text: str) -> Fraction:
    text = text.strip()
    if not text:
        raise ValueError("empty rational")
    return Fraction(text)


def parse_scalar(text: str) -> GaussScalar:
    """Parse "a/b", "a/b+c/d*i", "c*i", "i" or plain integers."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty scalar string")
    if "i" not in s:
        return GaussScalar(_parse_fraction(s))
    # Split the imaginary tail off at the last sign that is not leading.
    split = -1
    for pos in range(1, len(s)):
        if s[pos] in "+-":
            split = pos
    real_part, imag_part = (s[:split], s[split:]) if split > 0 else ("", s)
    if not imag_part.endswith("i"):
        raise ValueError("malformed scalar %r" % text)
    coeff = imag_part[:-1]
    if coeff.endswith("*"):
        num = coeff[:-1]
        if num in ("", "+", "-"):
            raise ValueError("malformed scalar %r" % text)
        im = _parse_fraction(num)
    elif coeff in ("", "+"):
        im = Fraction(1)
    elif coeff == "-":
        im = Fraction(-1)
    else:
        raise ValueError("imaginary part needs '*i' in %r" % text)
    re = _parse_fraction(real_part) if real_part else Fraction(0)
    return GaussScalar(re, im)
