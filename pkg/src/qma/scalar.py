"""Exact scalars: the field Q(q) of rational functions in q.

A value is stored as ``q**shift * num / den`` where ``num`` and ``den`` are
polynomials over Q (python-flint ``fmpq_poly``) with nonzero constant terms,
``gcd(num, den) = 1`` and ``den`` monic.  This form is unique, so equality and
hashing are structural.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import flint

_P = flint.fmpq_poly
_ONE_POLY = _P([1])
_ZERO_POLY = _P([])


class SpecializationError(ArithmeticError):
    """Raised when a scalar has a pole at q = 1."""


def _low_order(p):
    """Index of the lowest nonzero coefficient of a nonzero polynomial."""
    for k, c in enumerate(p.coeffs()):
        if c != 0:
            return k
    raise ValueError("zero polynomial")


def _to_fraction(c) -> Fraction:
    return Fraction(int(c.p), int(c.q))


class RatFunc:
    __slots__ = ("num", "den", "shift", "_hash")

    def __init__(self, num, den=_ONE_POLY, shift=0, *, _canonical=False):
        if _canonical:
            self.num, self.den, self.shift = num, den, shift
        else:
            self.num, self.den, self.shift = _canonicalize(num, den, shift)
        self._hash = None

    # constructors -----------------------------------------------------
    @staticmethod
    def const(c) -> "RatFunc":
        c = Fraction(c)
        if c == 0:
            return ZERO
        return RatFunc(_P([flint.fmpq(c.numerator, c.denominator)]), _ONE_POLY, 0, _canonical=True)

    @staticmethod
    def qpow(n: int) -> "RatFunc":
        return _qpow(n)

    @staticmethod
    def from_laurent(coeffs: dict[int, object]) -> "RatFunc":
        """Build from an exponent -> rational map."""
        coeffs = {e: Fraction(c) for e, c in coeffs.items() if Fraction(c) != 0}
        if not coeffs:
            return ZERO
        lo = min(coeffs)
        hi = max(coeffs)
        vec = [0] * (hi - lo + 1)
        for e, c in coeffs.items():
            vec[e - lo] = flint.fmpq(c.numerator, c.denominator)
        return RatFunc(_P(vec), _ONE_POLY, lo, _canonical=True)

    # predicates -------------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def is_laurent(self) -> bool:
        return self.den.is_one()

    def is_one(self) -> bool:
        return self.shift == 0 and self.den.is_one() and self.num.is_one()

    def laurent_coeffs(self) -> dict[int, Fraction]:
        """Exponent -> coefficient map; only valid for Laurent values."""
        if not self.is_laurent():
            raise ValueError(f"{self} is not a Laurent polynomial")
        return {
            k + self.shift: _to_fraction(c)
            for k, c in enumerate(self.num.coeffs())
            if c != 0
        }

    def as_rational(self) -> Fraction | None:
        """The value as a constant, or None if it depends on q."""
        if self.is_zero():
            return Fraction(0)
        if self.shift == 0 and self.den.is_one() and self.num.degree() == 0:
            return _to_fraction(self.num.coeffs()[0])
        return None

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, RatFunc):
            other = _coerce(other)
            if other is NotImplemented:
                return other
        if self.num.is_zero():
            return other
        if other.num.is_zero():
            return self
        s1, s2 = self.shift, other.shift
        s = min(s1, s2)
        n1 = self.num.left_shift(s1 - s) if s1 != s else self.num
        n2 = other.num.left_shift(s2 - s) if s2 != s else other.num
        if self.den.is_one() and other.den.is_one():
            num = n1 + n2
            if num.is_zero():
                return ZERO
            k = _low_order(num)
            if k:
                num = num.right_shift(k)
            return RatFunc(num, _ONE_POLY, s + k, _canonical=True)
        if self.den == other.den:
            return RatFunc(n1 + n2, self.den, s)
        return RatFunc(n1 * other.den + n2 * self.den, self.den * other.den, s)

    __radd__ = __add__

    def __neg__(self):
        if self.num.is_zero():
            return self
        return RatFunc(-self.num, self.den, self.shift, _canonical=True)

    def __sub__(self, other):
        if not isinstance(other, RatFunc):
            other = _coerce(other)
            if other is NotImplemented:
                return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, RatFunc):
            other = _coerce(other)
            if other is NotImplemented:
                return other
        if self.num.is_zero() or other.num.is_zero():
            return ZERO
        s = self.shift + other.shift
        if self.den.is_one() and other.den.is_one():
            return RatFunc(self.num * other.num, _ONE_POLY, s, _canonical=True)
        return RatFunc(self.num * other.num, self.den * other.den, s)

    __rmul__ = __mul__

    def inv(self) -> "RatFunc":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(q)")
        lc = self.num.leading_coefficient()
        return RatFunc(self.den / lc, self.num / lc, -self.shift, _canonical=True)

    def __truediv__(self, other):
        if not isinstance(other, RatFunc):
            other = _coerce(other)
            if other is NotImplemented:
                return other
        return self * other.inv()

    def __rtruediv__(self, other):
        return _coerce(other) * self.inv()

    def __pow__(self, n: int):
        if n < 0:
            return self.inv() ** (-n)
        if self.den.is_one():
            return RatFunc(self.num ** n, _ONE_POLY, self.shift * n, _canonical=True)
        return RatFunc(self.num ** n, self.den ** n, self.shift * n, _canonical=True)

    # comparison -------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, RatFunc):
            other = _coerce(other)
            if other is NotImplemented:
                return False
        return self.shift == other.shift and self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(
                (self.shift, tuple(self.num.coeffs()), tuple(self.den.coeffs()))
            )
        return self._hash

    # rendering --------------------------------------------------------
    def __str__(self):
        if self.num.is_zero():
            return "0"
        if self.den.is_one():
            return _laurent_str(self.num, self.shift)
        num_shift = max(self.shift, 0)
        den_shift = max(-self.shift, 0)
        return f"({_laurent_str(self.num, num_shift)})/({_laurent_str(self.den, den_shift)})"

    def __repr__(self):
        return f"RatFunc({self})"


def _coerce(x):
    if isinstance(x, (int, Fraction)):
        return RatFunc.const(x)
    return NotImplemented


def _canonicalize(num, den, shift):
    if den.is_zero():
        raise ZeroDivisionError("zero denominator in Q(q)")
    if num.is_zero():
        return _ZERO_POLY, _ONE_POLY, 0
    k = _low_order(num)
    if k:
        num = num.right_shift(k)
        shift += k
    k = _low_order(den)
    if k:
        den = den.right_shift(k)
        shift -= k
    if den.degree() > 0:
        g = num.gcd(den)
        if not g.is_one():
            num = num // g
            den = den // g
    lc = den.leading_coefficient()
    if lc != 1:
        num = num / lc
        den = den / lc
    return num, den, shift


def _laurent_str(poly, shift) -> str:
    parts = []
    coeffs = poly.coeffs()
    for k in range(len(coeffs) - 1, -1, -1):
        c = _to_fraction(coeffs[k])
        if c == 0:
            continue
        e = k + shift
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if e == 0:
            body = str(mag)
        else:
            qpart = "q" if e == 1 else f"q^{e}"
            body = qpart if mag == 1 else f"{mag}*{qpart}"
        parts.append((sign, body))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f"{sign}{body}"
    return out


ZERO = RatFunc(_ZERO_POLY, _ONE_POLY, 0, _canonical=True)
ONE = RatFunc(_ONE_POLY, _ONE_POLY, 0, _canonical=True)


@lru_cache(maxsize=None)
def _qpow(n: int) -> RatFunc:
    return RatFunc(_ONE_POLY, _ONE_POLY, n, _canonical=True)


Q = _qpow(1)


def qp(n: int) -> RatFunc:
    """q**n."""
    return _qpow(n)


@lru_cache(maxsize=None)
def q_integer(m: int, d: int = 1) -> RatFunc:
    """(m)_{q^d} = (q^{dm} - q^{-dm}) / (q^d - q^{-d})."""
    if d < 1:
        raise ValueError("d must be positive")
    return (qp(d * m) - qp(-d * m)) / (qp(d) - qp(-d))


@lru_cache(maxsize=None)
def q_factorial(n: int, d: int = 1) -> RatFunc:
    if n < 0:
        raise ValueError("n must be nonnegative")
    out = ONE
    for k in range(1, n + 1):
        out = out * q_integer(k, d)
    return out


@lru_cache(maxsize=None)
def q_binomial(n: int, k: int, d: int = 1) -> RatFunc:
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    return q_factorial(n, d) / (q_factorial(k, d) * q_factorial(n - k, d))


def specialize_q1(f: RatFunc) -> Fraction:
    """Evaluate at q = 1; raises SpecializationError on a pole."""
    if f.num.is_zero():
        return Fraction(0)
    one = flint.fmpq(1)
    den = f.den(one)
    if den == 0:
        raise SpecializationError(f"pole at q = 1: {f}")
    return _to_fraction(f.num(one) / den)
