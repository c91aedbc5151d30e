"""
Exact Bernoulli numbers and polynomials over the rationals.

Convention B_1 = -1/2, i.e. the coefficients of t/(e^t - 1).  Everything here
is Fraction arithmetic; there is no floating-point path.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, List

from .errors import HypothesisError
from .partitions import PartSet

__all__ = [
    "RationalPoly",
    "bernoulli_numbers",
    "bernoulli_poly",
    "faulhaber_sum",
    "main_term_partial_sum",
]


class RationalPoly:
    """Immutable polynomial with Fraction coefficients, ascending degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def x(cls) -> "RationalPoly":
        return cls([0, 1])

    @property
    def degree(self) -> int:
        # zero polynomial has degree -1
        return len(self.coeffs) - 1

    def __call__(self, x) -> Fraction:
        x = Fraction(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other: "RationalPoly") -> "RationalPoly":
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return RationalPoly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self) -> "RationalPoly":
        return RationalPoly(-c for c in self.coeffs)

    def __sub__(self, other) -> "RationalPoly":
        return self + (-_as_poly(other))

    def __rsub__(self, other) -> "RationalPoly":
        return _as_poly(other) - self

    def __mul__(self, other) -> "RationalPoly":
        other = _as_poly(other)
        if not self.coeffs or not other.coeffs:
            return RationalPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return RationalPoly(out)

    __rmul__ = __mul__

    def shift(self, a) -> "RationalPoly":
        """Return the polynomial x -> p(x + a)."""
        a = Fraction(a)
        n = len(self.coeffs)
        out = [Fraction(0)] * n
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            # c * (x + a)^i
            for j in range(i + 1):
                out[j] += c * math.comb(i, j) * a ** (i - j)
        return RationalPoly(out)

    def __eq__(self, other) -> bool:
        if isinstance(other, RationalPoly):
            return self.coeffs == other.coeffs
        try:
            return self.coeffs == _as_poly(other).coeffs
        except TypeError:
            return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"RationalPoly([{', '.join(str(c) for c in self.coeffs)}])"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if mono and abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}" + (f"*{mono}" if mono else "")
            terms.append(("-" if c < 0 else "+", body))
        head_sign, head = terms[0]
        s = ("-" if head_sign == "-" else "") + head
        for sign, body in terms[1:]:
            s += f" {sign} {body}"
        return s


def _as_poly(p) -> RationalPoly:
    if isinstance(p, RationalPoly):
        return p
    if isinstance(p, (int, Fraction)):
        return RationalPoly([p])
    raise TypeError(f"cannot treat {type(p).__name__} as a polynomial")


@lru_cache(maxsize=None)
def _bernoulli_tuple(k_max: int) -> tuple[Fraction, ...]:
    B = [Fraction(1)]
    for k in range(1, k_max + 1):
        # sum_{j=0}^{k} C(k+1, j) B_j = 0
        s = sum(math.comb(k + 1, j) * B[j] for j in range(k))
        B.append(-s / (k + 1))
    return tuple(B)


def bernoulli_numbers(k_max: int) -> List[Fraction]:
    """B_0..B_{k_max} with B_1 = -1/2."""
    if k_max < 0:
        raise ValueError("k_max must be >= 0")
    return list(_bernoulli_tuple(k_max))


@lru_cache(maxsize=None)
def bernoulli_poly(k: int) -> RationalPoly:
    """B_k(x) = sum_j C(k, j) B_j x^(k-j)."""
    if k < 0:
        raise ValueError("k must be >= 0")
    B = _bernoulli_tuple(k)
    coeffs = [Fraction(0)] * (k + 1)
    for j in range(k + 1):
        coeffs[k - j] = math.comb(k, j) * B[j]
    return RationalPoly(coeffs)


def faulhaber_sum(k: int, x: int) -> Fraction:
    """Closed form of sum_{m=1}^{x} m^k, (B_{k+1}(x+1) - B_{k+1}(0)) / (k+1)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if x < 1:
        raise ValueError("x must be >= 1")
    P = bernoulli_poly(k + 1)
    return (P(x + 1) - P(0)) / (k + 1)


def main_term_partial_sum(parts: PartSet, x: int) -> Fraction:
    """Bernoulli-polynomial main term for sum_{n<=x} p_H(n).

    Returns (B_k(x+1) - B_k(0)) / (k * (k-1)! * prod(H)) for k = |H| >= 2.

    Raises:
        HypothesisError: if k < 2
        InvalidSetError: if gcd(H) != 1 (raised when building the PartSet)
    """
    if not isinstance(parts, PartSet):
        parts = PartSet(tuple(parts))
    k = parts.k
    if k < 2:
        raise HypothesisError(f"main term needs k >= 2, got k = {k}")
    P = bernoulli_poly(k)
    return (P(x + 1) - P(0)) / (k * math.factorial(k - 1) * parts.prod)


def dump_numbers_csv(k_max: int, out) -> None:
    out.write("k,numerator,denominator\n")
    for k, b in enumerate(bernoulli_numbers(k_max)):
        out.write(f"{k},{b.numerator},{b.denominator}\n")


def dump_poly_csv(k: int, out) -> None:
    out.write("degree,numerator,denominator\n")
    for d, c in enumerate(bernoulli_poly(k).coeffs):
        out.write(f"{d},{c.numerator},{c.denominator}\n")

