"""Truncated power series over the complex numbers.

A series of order N keeps the coefficients of t^0..t^N. Inverses and square
roots use Newton iteration, doubling the number of correct terms per step.
"""
from math import comb
from typing import Optional, Sequence, Union

import numpy as np

Number = Union[int, float, complex]


class PowerSeries:
    """Truncated power series sum_{s<=N} c_s t^s"""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[Number], order: Optional[int] = None):
        c = np.asarray(coeffs, dtype=complex).ravel()
        if order is None:
            order = len(c) - 1
        out = np.zeros(order + 1, dtype=complex)
        n = min(len(c), order + 1)
        out[:n] = c[:n]
        self.coeffs = out

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def constant(cls, value: Number, order: int) -> "PowerSeries":
        return cls([value], order)

    @classmethod
    def variable(cls, order: int, center: Number = 0.0, scale: Number = 1.0) -> "PowerSeries":
        """The series of x = center + scale * t"""
        return cls([center, scale], order)

    def truncate(self, order: int) -> "PowerSeries":
        return PowerSeries(self.coeffs, order)

    def _coerce(self, other) -> "PowerSeries":
        if isinstance(other, PowerSeries):
            return other
        return PowerSeries.constant(other, self.order)

    def __add__(self, other) -> "PowerSeries":
        other = self._coerce(other)
        n = min(self.order, other.order)
        return PowerSeries(self.coeffs[:n + 1] + other.coeffs[:n + 1])

    __radd__ = __add__

    def __neg__(self) -> "PowerSeries":
        return PowerSeries(-self.coeffs)

    def __sub__(self, other) -> "PowerSeries":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "PowerSeries":
        return self._coerce(other) - self

    def __mul__(self, other) -> "PowerSeries":
        if not isinstance(other, PowerSeries):
            return PowerSeries(self.coeffs * complex(other))
        n = min(self.order, other.order)
        return PowerSeries(np.convolve(self.coeffs[:n + 1], other.coeffs[:n + 1])[:n + 1])

    __rmul__ = __mul__

    def __truediv__(self, other) -> "PowerSeries":
        if not isinstance(other, PowerSeries):
            return PowerSeries(self.coeffs / complex(other))
        return self * other.inverse()

    def __pow__(self, k: int) -> "PowerSeries":
        if k < 0:
            return self.inverse() ** (-k)
        result = PowerSeries.constant(1.0, self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self) -> "PowerSeries":
        """1/A by Newton iteration B <- B (2 - A B)"""
        a0 = self.coeffs[0]
        if a0 == 0:
            raise ZeroDivisionError("series with zero constant term has no inverse")
        b = PowerSeries([1.0 / a0], 0)
        prec = 1
        while prec <= self.order:
            prec = min(2 * prec, self.order + 1)
            a = self.truncate(prec - 1)
            b = b.truncate(prec - 1)
            b = b * (2.0 - a * b)
        return b.truncate(self.order)

    def sqrt(self, root0: Optional[Number] = None) -> "PowerSeries":
        """Square root with constant term root0 (principal root by default)

        Newton iteration S <- (S + A/S) / 2.
        """
        a0 = self.coeffs[0]
        if a0 == 0:
            raise ZeroDivisionError("series with zero constant term has no series square root")
        s0 = complex(np.sqrt(complex(a0))) if root0 is None else complex(root0)
        s = PowerSeries([s0], 0)
        prec = 1
        while prec <= self.order:
            prec = min(2 * prec, self.order + 1)
            a = self.truncate(prec - 1)
            s = s.truncate(prec - 1)
            s = (s + a / s) * 0.5
        return s.truncate(self.order)

    def compose_even(self) -> "PowerSeries":
        """A(t^2) as a series in t, keeping the order"""
        out = np.zeros(2 * self.order + 1, dtype=complex)
        out[::2] = self.coeffs
        return PowerSeries(out, self.order)

    def evaluate(self, t: Number) -> complex:
        return complex(np.polyval(self.coeffs[::-1], t))

    def derivative_values(self) -> np.ndarray:
        """s! c_s for every s"""
        facts = np.cumprod(np.r_[1.0, np.arange(1, self.order + 1)])
        return self.coeffs * facts

    def __repr__(self) -> str:
        return f"PowerSeries(order={self.order}, coeffs={self.coeffs!r})"


def taylor_shift(coeffs: Sequence[Number], center: Number, order: int) -> PowerSeries:
    """Coefficients of p(center + t) for an ascending-coefficient polynomial p"""
    c = np.asarray(coeffs, dtype=complex)
    d = len(c) - 1
    shifted = np.zeros(d + 1, dtype=complex)
    powers = np.array([center ** k for k in range(d + 1)], dtype=complex)
    for s in range(d + 1):
        shifted[s] = sum(comb(k, s) * c[k] * powers[k - s] for k in range(s, d + 1))
    return PowerSeries(shifted, order)


def deflate(coeffs: Sequence[Number], root: Number) -> np.ndarray:
    """Quotient of p(x) by (x - root), ascending coefficients, remainder dropped"""
    c = np.asarray(coeffs, dtype=complex)
    d = len(c) - 1
    q = np.zeros(d, dtype=complex)
    acc = c[d]
    for k in range(d - 1, -1, -1):
        q[k] = acc
        acc = c[k] + root * acc
    return q
