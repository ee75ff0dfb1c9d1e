"""Scalar field plumbing: exact Gaussian rationals and complex literals.

The exact path works over complex numbers whose real and imaginary parts
are arbitrary-precision rationals.  That subset of the complex plane is
closed under the four arithmetic operations and supports exact equality,
which is what the identity-level tests need.  Everything irrational goes
through the double-precision path (plain ``complex``).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import ParseError

_Rational = (int, Fraction)


@dataclass(frozen=True)
class ExactComplex:
    """A complex number with rational real and imaginary parts.

    Arithmetic is exact; equality carries no tolerance.  Division by an
    exact zero raises ``ZeroDivisionError``.
    """

    re: Fraction
    im: Fraction

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    # -- arithmetic ------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, ExactComplex):
            return other
        if isinstance(other, _Rational):
            return ExactComplex(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ExactComplex(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ExactComplex(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ExactComplex(o.re - self.re, o.im - self.im)

    def __neg__(self):
        return ExactComplex(-self.re, -self.im)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ExactComplex(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("division by exact zero")
        return ExactComplex(
            (self.re * o.re + self.im * o.im) / d,
            (self.im * o.re - self.re * o.im) / d,
        )

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    # -- queries ---------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def conjugate(self) -> "ExactComplex":
        return ExactComplex(self.re, -self.im)

    def abs2(self) -> Fraction:
        """|z|^2 as an exact rational."""
        return self.re * self.re + self.im * self.im

    def log_abs(self) -> float:
        """log|z|, computed without overflowing floats for huge rationals."""
        a2 = self.abs2()
        if a2 == 0:
            return -math.inf
        return (math.log(a2.numerator) - math.log(a2.denominator)) / 2.0

    def __abs__(self) -> float:
        return math.exp(self.log_abs()) if not self.is_zero else 0.0

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"ExactComplex({self.re!r}, {self.im!r})"

    def __str__(self):
        return format_scalar(self)


EX_ZERO = ExactComplex(0)
EX_ONE = ExactComplex(1)


def is_exact_scalar(v) -> bool:
    return isinstance(v, (ExactComplex, int, Fraction))


def to_exact(v) -> ExactComplex:
    """Coerce to an ExactComplex; floats are rejected (use the float path)."""
    if isinstance(v, ExactComplex):
        return v
    if isinstance(v, _Rational):
        return ExactComplex(v)
    raise TypeError(f"not an exact scalar: {v!r}")


def to_complex(v) -> complex:
    if isinstance(v, ExactComplex):
        return complex(v)
    return complex(v)


def canonicalize_scalars(values):
    """Normalize a list of mixed scalars to one arithmetic kind.

    Returns ``(tuple, exact_flag)``: all-ExactComplex when every entry is
    an int/Fraction/ExactComplex, otherwise all-``complex``.
    """
    values = tuple(values)
    if all(is_exact_scalar(v) for v in values):
        return tuple(to_exact(v) for v in values), True
    return tuple(to_complex(v) for v in values), False


def scalar_is_zero(v) -> bool:
    if isinstance(v, ExactComplex):
        return v.is_zero
    return complex(v) == 0


# -- literal syntax ------------------------------------------------------

_NUM = re.compile(
    r"""(?P<sign>[+-])?
        (?P<body>
            (?P<int>\d+)(?:/(?P<den>\d+))?          # 3 or 3/2
            (?P<frac>\.\d+)?(?P<exp>[eE][+-]?\d+)?  # 1.5, 2e-3
        )?
        (?P<i>i)?""",
    re.VERBOSE,
)


def _split_terms(s):
    """Split a literal like '3/2-1/3i' into signed terms at top level."""
    terms = []
    start = 0
    for pos in range(1, len(s)):
        c = s[pos]
        if c in "+-" and s[pos - 1] not in "eE+-":
            terms.append((start, s[start:pos]))
            start = pos
    terms.append((start, s[start:]))
    return terms


def _parse_term(text, offset):
    m = _NUM.fullmatch(text)
    if m is None or (m.group("body") is None and m.group("i") is None):
        raise ParseError(
            f"cannot parse scalar component {text!r}", position=offset
        )
    sign = -1 if m.group("sign") == "-" else 1
    imag = m.group("i") is not None
    if m.group("body") is None or m.group("int") is None:
        if not imag:
            raise ParseError(
                f"empty numeric component in {text!r}", position=offset
            )
        return sign * Fraction(1), imag
    if m.group("den") is not None:
        if m.group("frac") or m.group("exp"):
            raise ParseError(
                f"mixed rational/decimal component {text!r}", position=offset
            )
        den = int(m.group("den"))
        if den == 0:
            raise ParseError(f"zero denominator in {text!r}", position=offset)
        return sign * Fraction(int(m.group("int")), den), imag
    if m.group("frac") or m.group("exp"):
        return sign * float(m.group("body")), imag
    return sign * Fraction(int(m.group("int"))), imag


def parse_scalar(text: str):
    """Parse a complex literal into an ExactComplex or a ``complex``.

    Accepted forms: ``3``, ``-2``, ``3/2``, ``1.5``, ``2e-3``, ``i``,
    ``-i``, ``2i``, ``1+2i``, ``3/2-1/3i``.  Integer and p/q components
    give an exact result; any decimal component makes the whole value a
    double-precision ``complex``.
    """
    s = text.strip().replace("−", "-").replace(" ", "")
    if not s:
        raise ParseError("empty scalar literal", position=0)
    terms = _split_terms(s)
    if len(terms) > 2:
        raise ParseError(f"too many components in {text!r}", position=terms[2][0])
    parsed = [(_parse_term(t, off)) for off, t in terms]
    re_part, im_part = 0, 0
    seen_re = seen_im = False
    for (value, imag), (off, _) in zip(parsed, terms):
        if imag:
            if seen_im:
                raise ParseError("two imaginary components", position=off)
            im_part, seen_im = value, True
        else:
            if seen_re:
                raise ParseError("two real components", position=off)
            re_part, seen_re = value, True
    if len(terms) == 2 and not seen_im:
        raise ParseError(
            "second component must be imaginary", position=terms[1][0]
        )
    if isinstance(re_part, float) or isinstance(im_part, float):
        return complex(float(re_part), float(im_part))
    return ExactComplex(re_part, im_part)


def _fmt_rational(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _fmt_float(x: float) -> str:
    return repr(x)


def format_scalar(v) -> str:
    """Render a scalar in the literal syntax accepted by ``parse_scalar``."""
    if isinstance(v, ExactComplex):
        re_s, im_q = _fmt_rational(v.re), v.im
        if im_q == 0:
            return re_s
        im_s = _fmt_rational(abs(im_q)) + "i"
        sign = "-" if im_q < 0 else "+"
        if v.re == 0:
            return ("-" if im_q < 0 else "") + im_s
        return f"{re_s}{sign}{im_s}"
    z = complex(v)
    if z.imag == 0:
        return _fmt_float(z.real)
    im_s = _fmt_float(abs(z.imag)) + "i"
    sign = "-" if z.imag < 0 else "+"
    if z.real == 0:
        return ("-" if z.imag < 0 else "") + im_s
    return f"{_fmt_float(z.real)}{sign}{im_s}"
