"""Polynomials in one variable with exact integer coefficients."""

from __future__ import annotations

from fractions import Fraction
from math import comb


class IntPoly:
    """Integer-coefficient polynomial; ``coeffs[k]`` multiplies ``p**k``.

    Trailing zeros are trimmed, so the zero polynomial has no coefficients.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        c = [int(a) for a in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def const(cls, a: int) -> IntPoly:
        return cls((a,))

    @classmethod
    def x(cls) -> IntPoly:
        return cls((0, 1))

    @classmethod
    def from_text(cls, text: str) -> IntPoly:
        return cls(int(tok) for tok in text.split())

    def to_text(self) -> str:
        return " ".join(map(str, self.coeffs)) if self.coeffs else "0"

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __repr__(self):
        return f"IntPoly({list(self.coeffs)})"

    def __eq__(self, other):
        if isinstance(other, int):
            other = IntPoly.const(other)
        if not isinstance(other, IntPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    @staticmethod
    def _lift(other):
        if isinstance(other, IntPoly):
            return other
        if isinstance(other, int):
            return IntPoly.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return IntPoly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return IntPoly(-a for a in self.coeffs)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if not self.coeffs or not other.coeffs:
            return IntPoly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result, base = IntPoly.const(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __call__(self, x):
        """Horner evaluation; the result has the numeric kind of ``x``."""
        acc = x * 0
        for a in reversed(self.coeffs):
            acc = acc * x + a
        return acc

    def derivative(self) -> IntPoly:
        return IntPoly(k * a for k, a in enumerate(self.coeffs) if k)


def poly_sub(a: IntPoly, b: IntPoly) -> IntPoly:
    return a - b


def poly_eval(a: IntPoly, x):
    return a(x)


def bernstein_sum(counts, m: int) -> IntPoly:
    """Expand ``sum_k counts[k] * p**k * (1 - p)**(m - k)`` exactly."""
    out = [0] * (m + 1)
    for k, n_k in enumerate(counts):
        if not n_k:
            continue
        # p^k (1-p)^(m-k) = sum_j C(m-k, j) (-1)^j p^(k+j)
        for j in range(m - k + 1):
            term = comb(m - k, j) * n_k
            out[k + j] += -term if j & 1 else term
    return IntPoly(out)


def sign_at(a: IntPoly, x) -> int:
    """Exact sign of ``a`` at a rational point."""
    v = a(Fraction(x))
    return (v > 0) - (v < 0)
