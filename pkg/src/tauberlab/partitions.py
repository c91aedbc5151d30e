"""
Restricted partition counts.

p_H(n) counts multisets of elements of a finite set H summing to n; p_m(n)
counts partitions of n into at most m parts, which by conjugation equals
p_{{1..m}}(n).  Tables are exact: they are built in int64 and rebuilt with
Python integers if any entry would overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import CapacityError, GuardError, InvalidSetError, ShapeError

DEFAULT_TABLE_CAP = 50_000_000
BRUTE_FORCE_MAX_N = 60


def _normalize_parts(parts: Iterable[int]) -> tuple[int, ...]:
    parts = list(parts)
    if not parts:
        raise InvalidSetError("part set is empty")
    for h in parts:
        if int(h) != h or h < 1:
            raise InvalidSetError(f"parts must be positive integers, got {h!r}")
    if len(set(parts)) != len(parts):
        raise InvalidSetError(f"parts must be distinct, got {parts}")
    return tuple(sorted(int(h) for h in parts))


@dataclass(frozen=True)
class PartSet:
    """A set H of distinct positive integers with gcd 1.

    Plain counting accepts any part set (pass a tuple or list); this type is
    for the operations whose asymptotics need gcd(H) = 1.
    """

    parts: tuple[int, ...]

    def __post_init__(self):
        parts = _normalize_parts(self.parts)
        g = reduce(math.gcd, parts)
        if g != 1:
            raise InvalidSetError(f"gcd of {list(parts)} is {g}, not 1")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def of(cls, *parts: int) -> "PartSet":
        return cls(tuple(parts))

    @property
    def k(self) -> int:
        return len(self.parts)

    @property
    def prod(self) -> int:
        return math.prod(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.parts)) + "}"


PartsLike = Union[PartSet, Sequence[int]]


def parts_of(parts: PartsLike) -> tuple[int, ...]:
    if isinstance(parts, PartSet):
        return parts.parts
    return _normalize_parts(parts)


@dataclass(frozen=True)
class CountTable:
    """Exact partition counts for 0 <= n <= limit.

    Attributes:
        source: the part tuple, or ("max_parts", m) for p_m
        limit: largest n covered
        counts: int64 array, or object array of Python ints when int64 overflows
    """

    source: tuple
    limit: int
    counts: np.ndarray

    def __getitem__(self, n):
        return self.counts[n]

    def __len__(self) -> int:
        return len(self.counts)

    @property
    def values(self) -> np.ndarray:
        return self.counts

    def as_float(self) -> np.ndarray:
        return self.counts.astype(np.float64)


def _count_dp(parts: tuple[int, ...], limit: int, dtype) -> np.ndarray | None:
    counts = np.zeros(limit + 1, dtype=dtype)
    counts[0] = 1
    # parts outer, amounts inner: multiplying by 1/(1 - x^h) is a running sum
    # along each residue class mod h
    for h in parts:
        if h > limit:
            continue
        for r in range(h):
            counts[r::h] = np.cumsum(counts[r::h])
        # cumsum of non-negative int64 wraps to a negative value first
        if dtype is np.int64 and (counts < 0).any():
            return None
    return counts


def p_H_table(parts: PartsLike, limit: int, cap: int = DEFAULT_TABLE_CAP) -> CountTable:
    """Number of partitions of n into parts from H, for 0 <= n <= limit."""
    parts = parts_of(parts)
    if limit < 0 or limit > cap:
        raise CapacityError(f"partition table limit {limit} outside [0, {cap}]")
    counts = _count_dp(parts, limit, np.int64)
    if counts is None:
        counts = _count_dp(parts, limit, object)
    counts.setflags(write=False)
    return CountTable(parts, limit, counts)


def p_m_table(m: int, limit: int, cap: int = DEFAULT_TABLE_CAP) -> CountTable:
    """Partitions of n into at most m parts (= parts of size at most m)."""
    if m < 1:
        raise InvalidSetError(f"m must be >= 1, got {m}")
    table = p_H_table(range(1, m + 1), limit, cap)
    return CountTable(("max_parts", m), limit, table.counts)


def brute_force_p_H(parts: PartsLike, n: int) -> int:
    """Count partitions by explicit enumeration, parts chosen non-increasing.

    Independent of the table builder; exponential, so guarded at n <= 60.
    """
    if n > BRUTE_FORCE_MAX_N:
        raise GuardError(f"brute force refuses n={n} > {BRUTE_FORCE_MAX_N}")
    if n < 0:
        return 0
    desc = sorted(parts_of(parts), reverse=True)

    def count(remaining: int, start: int) -> int:
        if remaining == 0:
            return 1
        total = 0
        for i in range(start, len(desc)):
            if desc[i] <= remaining:
                total += count(remaining - desc[i], i)
        return total

    return count(n, 0)


def asymptotic_main_term(parts: PartSet, n: int) -> float:
    """Leading term n^(k-1) / ((k-1)! * prod(H)) of p_H(n)."""
    if not isinstance(parts, PartSet):
        parts = PartSet(tuple(parts))
    if n < 1:
        raise ValueError("n must be >= 1")
    k = parts.k
    return n ** (k - 1) / (math.factorial(k - 1) * parts.prod)


@dataclass(frozen=True)
class PartialSumTable:
    """A(x) = sum_{n<=x} a_n b_n for 0 <= x <= limit."""

    a_name: str
    b_name: str
    limit: int
    sums: np.ndarray

    def __getitem__(self, x):
        return self.sums[x]


def _name(obj) -> str:
    for attr in ("kind", "source", "name"):
        if hasattr(obj, attr):
            return str(getattr(obj, attr))
    return type(obj).__name__


def _values(obj) -> np.ndarray:
    if hasattr(obj, "values") and not isinstance(obj, dict):
        vals = obj.values
        if callable(vals):
            vals = vals()
        return np.asarray(vals)
    return np.asarray(obj)


def partial_sums(a, b, limit: int) -> PartialSumTable:
    """Prefix sums of a_n * b_n for n = 0..limit.

    ``a`` and ``b`` are tables (CountTable, ArithFnTable) or array-likes
    indexed from 0; ``a`` may also be a scalar such as 1.  Integer inputs give
    exact Python-int sums; anything else is summed with compensation.

    Raises:
        ShapeError: if either input covers fewer than limit + 1 entries
    """
    from .arith import compensated_cumsum

    bv = _values(b)
    if np.ndim(a) == 0 and not hasattr(a, "values"):
        av = np.full(len(bv), a, dtype=np.asarray(a).dtype)
        a_name = f"const({a})"
    else:
        av = _values(a)
        a_name = _name(a)
    if len(av) < limit + 1 or len(bv) < limit + 1:
        raise ShapeError(
            f"inputs cover {len(av)} and {len(bv)} entries, need {limit + 1}"
        )
    av = av[: limit + 1]
    bv = bv[: limit + 1]
    integral = all(v.dtype.kind in "iub" or v.dtype == object for v in (av, bv))
    if integral:
        prods = [int(x) * int(y) for x, y in zip(av.tolist(), bv.tolist())]
        sums = np.empty(limit + 1, dtype=object)
        acc = 0
        for i, v in enumerate(prods):
            acc += v
            sums[i] = acc
    else:
        sums = compensated_cumsum(av.astype(np.float64) * bv.astype(np.float64))
    return PartialSumTable(a_name, _name(b), limit, sums)


def dump_csv(table: CountTable, out, main_term: PartSet | None = None) -> None:
    """Write ``n,p(n)`` rows; with ``main_term`` a third column of leading terms."""
    if main_term is None:
        out.write("n,p(n)\n")
        for n in range(table.limit + 1):
            out.write(f"{n},{int(table.counts[n])}\n")
        return
    out.write("n,p(n),main_term\n")
    for n in range(table.limit + 1):
        mt = asymptotic_main_term(main_term, n) if n >= 1 else float("nan")
        out.write(f"{n},{int(table.counts[n])},{mt:.15g}\n")
