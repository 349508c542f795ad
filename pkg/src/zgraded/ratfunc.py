"""Univariate polynomials and rational functions over Q, all arithmetic exact.

Rational functions serve two roles: as the field Q(t) used for rank and
acyclicity computations (a flat stand-in for the truncated Novikov ring), and
as the source of exact Laurent expansions in descending powers of t.
"""

from __future__ import annotations

from fractions import Fraction


class Poly:
    """Dense polynomial over Q; coefficients stored low degree first."""

    __slots__ = ("c",)

    def __init__(self, coeffs=()):
        c = [Fraction(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.c = tuple(c)

    @classmethod
    def const(cls, q):
        return cls((Fraction(q),))

    @classmethod
    def x(cls):
        return cls((0, 1))

    @classmethod
    def monomial(cls, q, k):
        if k < 0:
            raise ValueError("monomial exponent must be >= 0")
        return cls((0,) * k + (Fraction(q),))

    def is_zero(self):
        return not self.c

    def degree(self):
        # degree of the zero polynomial is -1 by convention
        return len(self.c) - 1

    def lc(self):
        if not self.c:
            return Fraction(0)
        return self.c[-1]

    def coeff(self, k):
        if 0 <= k < len(self.c):
            return self.c[k]
        return Fraction(0)

    def __bool__(self):
        return bool(self.c)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.c == other.c

    def __hash__(self):
        return hash(self.c)

    def __neg__(self):
        return Poly(tuple(-a for a in self.c))

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        n = max(len(self.c), len(other.c))
        return Poly(tuple(self.coeff(i) + other.coeff(i) for i in range(n)))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        if not self.c or not other.c:
            return Poly()
        out = [Fraction(0)] * (len(self.c) + len(other.c) - 1)
        for i, a in enumerate(self.c):
            if a == 0:
                continue
            for j, b in enumerate(other.c):
                if b != 0:
                    out[i + j] += a * b
        return Poly(out)

    def __divmod__(self, other):
        if not isinstance(other, Poly) or other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.c)
        dq = other.degree()
        lcq = other.lc()
        quo = [Fraction(0)] * max(0, len(rem) - dq)
        while len(rem) - 1 >= dq and rem:
            k = len(rem) - 1 - dq
            f = rem[-1] / lcq
            quo[k] = f
            for j, b in enumerate(other.c):
                rem[k + j] -= f * b
            while rem and rem[-1] == 0:
                rem.pop()
        return Poly(quo), Poly(rem)

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def monic(self):
        if self.is_zero():
            return self
        lc = self.lc()
        return Poly(tuple(a / lc for a in self.c))

    def evaluate(self, point):
        acc = Fraction(0)
        for a in reversed(self.c):
            acc = acc * point + a
        return acc

    def __repr__(self):
        return f"Poly({list(self.c)})"


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


class RatFunc:
    """Element of Q(t), kept normalised: monic denominator, coprime parts."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if not isinstance(num, Poly):
            num = Poly.const(num)
        if den is None:
            den = Poly.const(1)
        elif not isinstance(den, Poly):
            den = Poly.const(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            self.num = Poly()
            self.den = Poly.const(1)
            return
        g = poly_gcd(num, den)
        if g.degree() > 0:
            num = num // g
            den = den // g
        lc = den.lc()
        if lc != 1:
            num = num * (1 / lc)
            den = den.monic()
        self.num = num
        self.den = den

    @classmethod
    def zero(cls):
        return cls(Poly())

    @classmethod
    def one(cls):
        return cls(Poly.const(1))

    @classmethod
    def t_power(cls, k):
        """t^k for any integer k (negative powers allowed)."""
        if k >= 0:
            return cls(Poly.monomial(1, k))
        return cls(Poly.const(1), Poly.monomial(1, -k))

    def is_zero(self):
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RatFunc(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RatFunc(other)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RatFunc(other)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RatFunc(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def evaluate(self, point):
        """Value at a rational point; raises ZeroDivisionError at a pole."""
        d = self.den.evaluate(point)
        if d == 0:
            raise ZeroDivisionError("pole")
        return self.num.evaluate(point) / d

    def top_degree(self):
        """Degree of the leading term of the expansion at infinity."""
        if self.is_zero():
            return None
        return self.num.degree() - self.den.degree()

    def expand_at_infinity(self, low):
        """Exact Laurent expansion in descending powers of t, down to degree `low`.

        Returns {degree: coefficient} with all kept coefficients nonzero;
        the discarded tail consists of degrees < low only.
        """
        if self.is_zero():
            return {}
        out = {}
        rem = {i: a for i, a in enumerate(self.num.c) if a != 0}
        dq = self.den.degree()
        lcq = self.den.lc()
        top = self.num.degree() - dq
        for k in range(top, low - 1, -1):
            a = rem.get(k + dq, Fraction(0))
            if a == 0:
                continue
            c = a / lcq
            out[k] = c
            for j, b in enumerate(self.den.c):
                if b == 0:
                    continue
                key = k + j
                v = rem.get(key, Fraction(0)) - c * b
                if v == 0:
                    rem.pop(key, None)
                else:
                    rem[key] = v
        return out

    def __repr__(self):
        return f"RatFunc({self.num!r}, {self.den!r})"
