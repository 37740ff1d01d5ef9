"""Exact formal power series over the rationals.

Dense coefficient storage up to a truncation order N; every operation is
carried out in exact Fraction arithmetic, so series identities checked at
order N are genuine integer/rational equalities rather than float
comparisons.  Binary operations on series of different orders truncate to
the smaller order.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Sequence, Union

import mpmath as mp

from .errors import OrderError

Coeff = Union[int, Fraction]


class FormalSeries:
    """A truncated power series  c0 + c1*q + ... + cN*q^N  with exact
    rational coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[Coeff]):
        if not coeffs:
            raise OrderError("a series needs at least a constant term")
        self.coeffs = tuple(Fraction(c) for c in coeffs)

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, order: int) -> "FormalSeries":
        return cls([0] * (order + 1))

    @classmethod
    def one(cls, order: int) -> "FormalSeries":
        return cls([1] + [0] * order)

    @classmethod
    def from_terms(cls, terms: dict[int, Coeff], order: int) -> "FormalSeries":
        c = [Fraction(0)] * (order + 1)
        for e, v in terms.items():
            if 0 <= e <= order:
                c[e] += Fraction(v)
        return cls(c)

    # -- basic protocol ----------------------------------------------
    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n: int) -> Fraction:
        return self.coeffs[n]

    def __len__(self) -> int:
        return len(self.coeffs)

    def __eq__(self, other) -> bool:
        return isinstance(other, FormalSeries) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        head = ", ".join(str(c) for c in self.coeffs[:6])
        tail = ", ..." if len(self.coeffs) > 6 else ""
        return f"FormalSeries([{head}{tail}], order={self.order})"

    def truncate(self, order: int) -> "FormalSeries":
        if order >= self.order:
            return self
        return FormalSeries(self.coeffs[: order + 1])

    # -- ring operations ----------------------------------------------
    def __add__(self, other: "FormalSeries") -> "FormalSeries":
        n = min(self.order, other.order)
        return FormalSeries([self.coeffs[i] + other.coeffs[i] for i in range(n + 1)])

    def __sub__(self, other: "FormalSeries") -> "FormalSeries":
        n = min(self.order, other.order)
        return FormalSeries([self.coeffs[i] - other.coeffs[i] for i in range(n + 1)])

    def __neg__(self) -> "FormalSeries":
        return FormalSeries([-c for c in self.coeffs])

    def scale(self, c: Coeff) -> "FormalSeries":
        c = Fraction(c)
        return FormalSeries([c * x for x in self.coeffs])

    def __mul__(self, other: "FormalSeries") -> "FormalSeries":
        n = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        out = [Fraction(0)] * (n + 1)
        for i in range(min(len(a) - 1, n) + 1):
            ai = a[i]
            if not ai:
                continue
            for j in range(min(len(b) - 1, n - i) + 1):
                if b[j]:
                    out[i + j] += ai * b[j]
        return FormalSeries(out)

    def shift(self, e: int) -> "FormalSeries":
        """Multiply by q**e (dropping overflow beyond the order)."""
        if e < 0:
            raise OrderError("negative shifts are not representable")
        return FormalSeries(
            tuple([Fraction(0)] * e) + self.coeffs[: max(0, len(self.coeffs) - e)]
        )

    def mul_one_minus(self, e: int, c: Coeff = 1) -> "FormalSeries":
        """Multiply by (1 - c*q**e) in O(N)."""
        if e <= 0:
            raise OrderError("exponent must be positive")
        c = Fraction(c)
        out = list(self.coeffs)
        for i in range(len(out) - 1, e - 1, -1):
            out[i] -= c * self.coeffs[i - e]
        return FormalSeries(out)

    def inverse(self) -> "FormalSeries":
        a = self.coeffs
        if a[0] == 0:
            raise OrderError("cannot invert a series with zero constant term")
        inv0 = 1 / a[0]
        out = [inv0] + [Fraction(0)] * self.order
        for n in range(1, self.order + 1):
            s = Fraction(0)
            for k in range(1, n + 1):
                if k < len(a) and a[k]:
                    s += a[k] * out[n - k]
            out[n] = -inv0 * s
        return FormalSeries(out)

    def pow_int(self, k: int) -> "FormalSeries":
        if k < 0:
            return self.inverse().pow_int(-k)
        result = FormalSeries.one(self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def pow_rational(self, k: Coeff) -> "FormalSeries":
        """self**k for rational k; requires constant term 1."""
        k = Fraction(k)
        if k.denominator == 1:
            return self.pow_int(k.numerator)
        if self.coeffs[0] != 1:
            raise OrderError("rational powers require constant term 1")
        return self.log().scale(k).exp()

    def log(self) -> "FormalSeries":
        if self.coeffs[0] != 1:
            raise OrderError("series log requires constant term 1")
        f = self.coeffs
        n_ord = self.order
        out = [Fraction(0)] * (n_ord + 1)
        for n in range(1, n_ord + 1):
            s = Fraction(n) * f[n]
            for k in range(1, n):
                if out[k] and f[n - k]:
                    s -= k * out[k] * f[n - k]
            out[n] = s / n
        return FormalSeries(out)

    def exp(self) -> "FormalSeries":
        if self.coeffs[0] != 0:
            raise OrderError("series exp requires constant term 0")
        l = self.coeffs
        n_ord = self.order
        out = [Fraction(1)] + [Fraction(0)] * n_ord
        for n in range(1, n_ord + 1):
            s = Fraction(0)
            for k in range(1, n + 1):
                if l[k]:
                    s += k * l[k] * out[n - k]
            out[n] = s / n
        return FormalSeries(out)

    # -- numeric bridge -----------------------------------------------
    def evaluate(self, x) -> mp.mpf:
        """Horner evaluation at an mpf point (current mp precision)."""
        acc = mp.mpf(0)
        for c in reversed(self.coeffs):
            acc = acc * x + (mp.mpf(c.numerator) / c.denominator if c else 0)
        return acc


def exponent_product(x_of_n: Callable[[int], Coeff], order: int) -> FormalSeries:
    """The exact expansion of  prod_{n>=1} (1 - q^n)^(x(n))  to the given
    order, via log/exp: log of the product is -sum_j q^j/j * sum_{d|j} d*x(d).
    """
    logs = [Fraction(0)] * (order + 1)
    xs = [Fraction(0)] + [Fraction(x_of_n(n)) for n in range(1, order + 1)]
    for d in range(1, order + 1):
        xd = xs[d]
        if not xd:
            continue
        for j in range(d, order + 1, d):
            logs[j] -= xd * d
    for j in range(1, order + 1):
        logs[j] /= j
    return FormalSeries(logs).exp()


def one_minus_power_product(exponents: Sequence[int], order: int) -> FormalSeries:
    """prod (1 - q^e) over the listed exponents (each clipped at the order)."""
    s = FormalSeries.one(order)
    for e in exponents:
        if e <= order:
            s = s.mul_one_minus(e)
    return s
