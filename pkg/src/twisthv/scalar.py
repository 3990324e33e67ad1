"""Exact Gaussian rationals.

Every coefficient in the library is a :class:`Scalar`, a pair of
:class:`fractions.Fraction` values ``re + im*i``.  Plain ``int`` and
``Fraction`` operands are accepted wherever a scalar is expected.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Union

Number = Union[int, Fraction, "Scalar"]

_TERM = re.compile(
    r"""\s*(?P<sign>[+-])?\s*
        (?:(?P<num>\d+(?:/\d+)?)\s*\*?\s*)?
        (?P<unit>i)?\s*""",
    re.VERBOSE,
)


class Scalar:
    __slots__ = ("re", "im", "_hash")

    def __init__(self, re_part: int | Fraction | str = 0, im_part: int | Fraction | str = 0):
        self.re = Fraction(re_part)
        self.im = Fraction(im_part)
        self._hash = None

    # construction -------------------------------------------------------

    @classmethod
    def coerce(cls, x: Number) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        if isinstance(x, (int, Fraction)):
            return cls(x)
        if isinstance(x, str):
            return cls.parse(x)
        raise TypeError(f"cannot use {type(x).__name__} as an exact scalar")

    @classmethod
    def parse(cls, text: str) -> "Scalar":
        """Parse ``"p/q"``, ``"i"``, ``"-3/2*i"``, ``"1/2+3i"`` and similar."""
        s = text.strip()
        if not s:
            raise ValueError("empty scalar")
        pos = 0
        re_part = Fraction(0)
        im_part = Fraction(0)
        seen = False
        while pos < len(s):
            m = _TERM.match(s, pos)
            if m is None or m.end() == pos or (m.group("num") is None and m.group("unit") is None):
                raise ValueError(f"cannot parse scalar {text!r} at column {pos + 1}")
            if seen and m.group("sign") is None:
                raise ValueError(f"missing sign in scalar {text!r} at column {pos + 1}")
            value = Fraction(m.group("num")) if m.group("num") else Fraction(1)
            if m.group("sign") == "-":
                value = -value
            if m.group("unit"):
                im_part += value
            else:
                re_part += value
            seen = True
            pos = m.end()
        return cls(re_part, im_part)

    @classmethod
    def from_json(cls, obj) -> "Scalar":
        if isinstance(obj, dict):
            return cls(Fraction(obj["re"]), Fraction(obj.get("im", "0")))
        return cls.parse(str(obj))

    def to_json(self) -> dict:
        return {"re": _frac_str(self.re), "im": _frac_str(self.im)}

    # predicates -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def is_real(self) -> bool:
        return not self.im

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    # arithmetic ---------------------------------------------------------

    def conj(self) -> "Scalar":
        if not self.im:
            return self
        return Scalar(self.re, -self.im)

    def __neg__(self) -> "Scalar":
        return Scalar(-self.re, -self.im)

    def __pos__(self) -> "Scalar":
        return self

    def __add__(self, other: Number) -> "Scalar":
        if isinstance(other, Scalar):
            return Scalar(self.re + other.re, self.im + other.im)
        if isinstance(other, (int, Fraction)):
            return Scalar(self.re + other, self.im)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other: Number) -> "Scalar":
        if isinstance(other, Scalar):
            return Scalar(self.re - other.re, self.im - other.im)
        if isinstance(other, (int, Fraction)):
            return Scalar(self.re - other, self.im)
        return NotImplemented

    def __rsub__(self, other: Number) -> "Scalar":
        return (-self) + other

    def __mul__(self, other: Number) -> "Scalar":
        if isinstance(other, Scalar):
            if not self.im and not other.im:
                return Scalar(self.re * other.re)
            return Scalar(
                self.re * other.re - self.im * other.im,
                self.re * other.im + self.im * other.re,
            )
        if isinstance(other, (int, Fraction)):
            return Scalar(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if not self:
            raise ZeroDivisionError("inverse of zero scalar")
        if not self.im:
            return Scalar(1 / self.re)
        n = self.re * self.re + self.im * self.im
        return Scalar(self.re / n, -self.im / n)

    def __truediv__(self, other: Number) -> "Scalar":
        return self * Scalar.coerce(other).inverse()

    def __rtruediv__(self, other: Number) -> "Scalar":
        return Scalar.coerce(other) * self.inverse()

    def __pow__(self, k: int) -> "Scalar":
        if k < 0:
            return self.inverse() ** (-k)
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # comparison ---------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, Scalar):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return not self.im and self.re == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.re) if not self.im else hash((self.re, self.im))
        return self._hash

    def real_value(self) -> Fraction:
        """The real part, insisting the imaginary part vanishes."""
        if self.im:
            raise ValueError(f"{self} is not real")
        return self.re

    # display ------------------------------------------------------------

    def __str__(self) -> str:
        if not self.im:
            return _frac_str(self.re)
        if not self.re:
            return _imag_str(self.im)
        im = _imag_str(self.im)
        return f"{_frac_str(self.re)}{'' if im.startswith('-') else '+'}{im}"

    def __repr__(self) -> str:
        return f"Scalar({self})"


def _frac_str(f: Fraction) -> str:
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def _imag_str(f: Fraction) -> str:
    if f == 1:
        return "i"
    if f == -1:
        return "-i"
    return f"{_frac_str(f)}*i"


ZERO = Scalar(0)
ONE = Scalar(1)
I_UNIT = Scalar(0, 1)


def S(x: Number) -> Scalar:
    """Shorthand coercion used throughout the package."""
    return Scalar.coerce(x)
