"""Exact Gaussian-rational and double-precision complex scalars.

Signal values in this package are either ``GaussianRational`` (rational real
and imaginary parts, arithmetic exact) or plain ``complex``. A container is
"exact" when every value it holds is a GaussianRational; identity claims on
exact data are decided by equality instead of tolerances. Combining an exact
scalar with a float demotes the result to ``complex``, matching ordinary
numeric promotion.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction

_TWO_PI = 2.0 * math.pi


class GaussianRational:
    """Complex number with ``Fraction`` real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def modulus_squared(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    @staticmethod
    def _coerce(other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussianRational(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return complex(self) + other
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return complex(self) - other
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return other - complex(self)
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return complex(self) * other
        return GaussianRational(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return complex(self) / other
        d = o.modulus_squared()
        if not d:
            raise ZeroDivisionError("division by zero scalar")
        return GaussianRational(
            (self.re * o.re + self.im * o.im) / d,
            (self.im * o.re - self.re * o.im) / d,
        )

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return other / complex(self)
        return o / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        if isinstance(other, (float, complex)):
            return complex(self) == complex(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GaussianRational({self.re!s}, {self.im!s})"

    def __str__(self):
        return format_scalar(self)


def as_scalar(value):
    """Coerce to the canonical scalar types: GaussianRational or complex."""
    if isinstance(value, GaussianRational):
        return value
    if isinstance(value, (int, Fraction)):
        return GaussianRational(value)
    if isinstance(value, (float, complex)):
        return complex(value)
    if isinstance(value, str):
        return parse_scalar(value)
    raise TypeError(f"cannot interpret {value!r} as a scalar")


def is_exact(value) -> bool:
    return isinstance(value, GaussianRational)


def is_zero(value) -> bool:
    return not as_scalar(value)


def is_real(value) -> bool:
    v = as_scalar(value)
    if isinstance(v, GaussianRational):
        return v.im == 0
    return v.imag == 0.0


def conjugate(value):
    return as_scalar(value).conjugate()


def modulus_squared(value):
    """|v|^2, as an exact Fraction for exact scalars and float otherwise."""
    v = as_scalar(value)
    if isinstance(v, GaussianRational):
        return v.modulus_squared()
    return v.real * v.real + v.imag * v.imag


def close(a, b, tol: float = 1e-12) -> bool:
    """Equality for exact pairs, absolute tolerance otherwise."""
    a, b = as_scalar(a), as_scalar(b)
    if isinstance(a, GaussianRational) and isinstance(b, GaussianRational):
        return a == b
    return abs(complex(a) - complex(b)) <= tol


def unit_modulus(value, tol: float = 1e-9) -> bool:
    v = as_scalar(value)
    if isinstance(v, GaussianRational):
        return v.modulus_squared() == 1
    return abs(abs(v) - 1.0) <= tol


def phase_angle(value) -> float:
    """Argument of the scalar, reduced to [0, 2*pi)."""
    a = cmath.phase(complex(as_scalar(value)))
    return a % _TWO_PI


def unit_from_angle(alpha: float) -> complex:
    return cmath.exp(1j * alpha)


# --- parsing and rendering -------------------------------------------------

def _last_top_sign(s: str) -> int:
    for k in range(len(s) - 1, 0, -1):
        if s[k] in "+-" and s[k - 1] not in "eE":
            return k
    return -1


def _parse_real_part(s: str):
    """Fraction for rational syntax, float when a decimal point/exponent appears."""
    if s in ("", "+"):
        return Fraction(1)
    if s == "-":
        return Fraction(-1)
    if ("." in s) or (("e" in s or "E" in s) and "/" not in s):
        return float(s)
    return Fraction(s)


def parse_scalar(text: str):
    """Parse "3", "-2/5", "1+2i", "1/2-3/4i", "i", "2.5", "1.5-0.5i" forms.

    Rational syntax (no decimal point) yields an exact GaussianRational;
    any decimal part makes the result a plain complex.
    """
    s = text.strip().replace(" ", "")
    if not s:
        raise ValueError("empty scalar")
    if s[-1] in "ij":
        body = s[:-1]
        cut = _last_top_sign(body)
        if cut <= 0:
            re_part, im_part = Fraction(0), _parse_real_part(body)
        else:
            re_part = _parse_real_part(body[:cut])
            im_part = _parse_real_part(body[cut:])
    else:
        re_part, im_part = _parse_real_part(s), Fraction(0)
    if isinstance(re_part, Fraction) and isinstance(im_part, Fraction):
        return GaussianRational(re_part, im_part)
    return complex(float(re_part), float(im_part))


def parse_real(text: str):
    """Parse a real number; Fraction for rational syntax, float otherwise."""
    v = parse_scalar(text)
    if isinstance(v, GaussianRational):
        if v.im != 0:
            raise ValueError(f"expected a real number, got {text!r}")
        return v.re
    if v.imag != 0.0:
        raise ValueError(f"expected a real number, got {text!r}")
    return v.real


def format_scalar(value) -> str:
    v = as_scalar(value)
    if isinstance(v, GaussianRational):
        if v.im == 0:
            return str(v.re)
        im = f"{v.im}i" if abs(v.im) != 1 else ("i" if v.im > 0 else "-i")
        if v.re == 0:
            return im
        sign = "+" if v.im > 0 else ""
        return f"{v.re}{sign}{im}"
    if v.imag == 0.0:
        return repr(v.real)
    sign = "+" if v.imag >= 0 else ""
    return f"{v.real!r}{sign}{v.imag!r}i"


def _render_part(x):
    if isinstance(x, Fraction):
        return str(x)
    return float(x)


def render(value) -> dict:
    """JSON form: {"re": ..., "im": ...} with "p/q" strings in exact mode."""
    v = as_scalar(value)
    if isinstance(v, GaussianRational):
        return {"re": _render_part(v.re), "im": _render_part(v.im)}
    return {"re": v.real, "im": v.imag}


def _part_from_json(x):
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, bool):
        raise ValueError("boolean is not a number")
    if isinstance(x, int):
        return Fraction(x)
    return float(x)


def scalar_from_json(obj):
    re_part = _part_from_json(obj.get("re", 0))
    im_part = _part_from_json(obj.get("im", 0))
    if isinstance(re_part, Fraction) and isinstance(im_part, Fraction):
        return GaussianRational(re_part, im_part)
    return complex(float(re_part), float(im_part))


# --- real coordinates (continuous geometry) --------------------------------

def as_coord(x):
    """Coerce one coordinate: Fraction stays exact, floats stay float."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("boolean is not a coordinate")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return x
    if isinstance(x, str):
        return _part_from_json(x) if ("/" in x or "." not in x) else float(x)
    raise TypeError(f"cannot interpret {x!r} as a coordinate")


def render_coord(x):
    return _render_part(x)


def coord_from_json(x):
    return _part_from_json(x)


def coords_close(a, b, tol: float = 1e-12) -> bool:
    """Pairwise coordinate equality; exact when both sides are Fractions."""
    if len(a) != len(b):
        return False
    for x, y in zip(a, b):
        if isinstance(x, Fraction) and isinstance(y, Fraction):
            if x != y:
                return False
        elif abs(float(x) - float(y)) > tol:
            return False
    return True
