"""
Sieve-based tables of classical arithmetic functions.

Provides:
- smallest-prime-factor sieve
- Mobius function mu(n)
- von Mangoldt function Lambda(n)
- generalized von Mangoldt Lambda_k(n) = sum_{d|n} mu(d) log(n/d)^k
- prime indicator, pi(x) and psi(x)

All tables have length limit+1 and are indexed by n directly; index 0 is a
placeholder holding 0.  Tables are read-only once built.

Derived tables are filled in dyadic blocks [lo, 2*lo): for n in a block the
cofactor n // spf[n] is at most n/2 and therefore lies in an earlier block,
so each block is a single vectorized step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, List

import numpy as np

from .errors import CapacityError

DEFAULT_SIEVE_CAP = 50_000_000


@dataclass(frozen=True)
class FactorSieve:
    """Smallest prime factor table.

    Attributes:
        limit: largest n covered
        spf: spf[n] = smallest prime factor of n for n >= 2; spf[1] = 1, spf[0] = 0
    """

    limit: int
    spf: np.ndarray

    def factorize(self, n: int) -> List[tuple[int, int]]:
        """Return [(p, e), ...] for n with primes ascending."""
        if n < 1 or n > self.limit:
            raise ValueError(f"n={n} outside sieve range 1..{self.limit}")
        spf = self.spf
        out = []
        while n > 1:
            p = int(spf[n])
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        return out

    def distinct_primes(self, n: int) -> List[int]:
        return [p for p, _ in self.factorize(n)]


@dataclass(frozen=True)
class ArithFnTable:
    """Values of one arithmetic function for 1 <= n <= limit (values[0] unused)."""

    kind: str
    limit: int
    values: np.ndarray
    k: int | None = None

    def __getitem__(self, n):
        return self.values[n]

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class PrimeSummaryTable:
    """Cumulative prime counts pi(x) and Chebyshev psi(x) for 0 <= x <= limit."""

    limit: int
    pi: np.ndarray
    psi: np.ndarray


def build_factor_sieve(limit: int, cap: int = DEFAULT_SIEVE_CAP) -> FactorSieve:
    """Smallest-prime-factor sieve up to ``limit`` inclusive.

    Args:
        limit: largest n to cover, 2 <= limit <= cap
        cap: memory guard; the int32 table costs 4 bytes per entry

    Raises:
        CapacityError: if limit is outside [2, cap]
    """
    if limit < 2 or limit > cap:
        raise CapacityError(f"sieve limit {limit} outside [2, {cap}]")
    dtype = np.int32 if limit < 2**31 - 1 else np.int64
    spf = np.zeros(limit + 1, dtype=dtype)
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == 0:
            seg = spf[p * p :: p]
            seg[seg == 0] = p
    primes = np.flatnonzero(spf == 0)
    spf[primes] = primes
    spf[0] = 0
    spf[1] = 1
    spf.setflags(write=False)
    return FactorSieve(limit=limit, spf=spf)


def restrict(sieve: FactorSieve, limit: int) -> FactorSieve:
    """The same sieve truncated to ``limit`` (a view, no copy)."""
    limit = max(2, min(limit, sieve.limit))
    return FactorSieve(limit=limit, spf=sieve.spf[: limit + 1])


def _blocks(limit: int) -> Iterator[tuple[int, int]]:
    lo = 2
    while lo <= limit:
        hi = min(2 * lo, limit + 1)
        yield lo, hi
        lo = hi


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def prime_indicator(sieve: FactorSieve) -> ArithFnTable:
    n = np.arange(sieve.limit + 1)
    ind = ((sieve.spf == n) & (n >= 2)).astype(np.int8)
    return ArithFnTable("prime_indicator", sieve.limit, _frozen(ind))


def mobius_table(sieve: FactorSieve) -> ArithFnTable:
    """mu(n): 0 unless n is squarefree, else (-1)^(number of prime factors)."""
    spf = sieve.spf
    mu = np.zeros(sieve.limit + 1, dtype=np.int8)
    mu[1] = 1
    for lo, hi in _blocks(sieve.limit):
        p = spf[lo:hi]
        m = np.arange(lo, hi) // p
        mu[lo:hi] = np.where(m % p == 0, 0, -mu[m])
    return ArithFnTable("mobius", sieve.limit, _frozen(mu))


def prime_power_base(sieve: FactorSieve) -> np.ndarray:
    """base[n] = p if n = p^j with j >= 1, else 0."""
    spf = sieve.spf
    base = np.zeros(sieve.limit + 1, dtype=spf.dtype)
    for lo, hi in _blocks(sieve.limit):
        p = spf[lo:hi]
        m = np.arange(lo, hi) // p
        base[lo:hi] = np.where((m == 1) | (base[m] == p), p, 0)
    return base


def omega_table(sieve: FactorSieve) -> np.ndarray:
    """Number of distinct prime factors of n; omega[1] = 0."""
    spf = sieve.spf
    omega = np.zeros(sieve.limit + 1, dtype=np.int8)
    for lo, hi in _blocks(sieve.limit):
        p = spf[lo:hi]
        m = np.arange(lo, hi) // p
        omega[lo:hi] = omega[m] + (spf[m] != p)
    return omega


def von_mangoldt_table(sieve: FactorSieve) -> ArithFnTable:
    """Lambda(n) = log p if n = p^j, else 0."""
    base = prime_power_base(sieve)
    lam = np.zeros(sieve.limit + 1, dtype=np.float64)
    nz = base > 0
    lam[nz] = np.log(base[nz].astype(np.float64))
    return ArithFnTable("vonmangoldt", sieve.limit, _frozen(lam))


def lambda_k_value(n: int, k: int, sieve: FactorSieve) -> float:
    """Lambda_k(n) from the squarefree divisors of n.

    Only squarefree d contribute since mu(d) = 0 otherwise; they are the
    products of subsets of the distinct primes of n.  The signed terms are
    summed with math.fsum.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if n == 1:
        return 0.0
    primes = sieve.distinct_primes(n)
    terms = []
    for size in range(len(primes) + 1):
        sign = -1.0 if size % 2 else 1.0
        for subset in combinations(primes, size):
            d = math.prod(subset)
            terms.append(sign * math.log(n // d) ** k)
    return math.fsum(terms)


def lambda_k_table(sieve: FactorSieve, k: int) -> ArithFnTable:
    """Lambda_k(n) for 1 <= n <= limit, one divisor sum per n."""
    if k < 1:
        raise ValueError("k must be >= 1")
    vals = np.zeros(sieve.limit + 1, dtype=np.float64)
    for n in range(2, sieve.limit + 1):
        vals[n] = lambda_k_value(n, k, sieve)
    return ArithFnTable("lambda_k", sieve.limit, _frozen(vals), k=k)


def compensated_cumsum(values: np.ndarray) -> np.ndarray:
    """Prefix sums with Neumaier compensation.

    The running sum is only updated at nonzero entries and forward-filled in
    between, so sparse inputs (Lambda, prime indicators) cost one Python step
    per nonzero entry.
    """
    values = np.asarray(values, dtype=np.float64)
    out = np.zeros(len(values), dtype=np.float64)
    idx = np.flatnonzero(values)
    if len(idx) == 0:
        return out
    s = 0.0
    c = 0.0
    sums = np.empty(len(idx), dtype=np.float64)
    for i, v in enumerate(values[idx].tolist()):
        t = s + v
        if abs(s) >= abs(v):
            c += (s - t) + v
        else:
            c += (v - t) + s
        s = t
        sums[i] = s + c
    # forward fill: position of the last nonzero entry at or before each n
    last = np.full(len(values), -1, dtype=np.int64)
    last[idx] = np.arange(len(idx))
    last = np.maximum.accumulate(last)
    filled = last >= 0
    out[filled] = sums[last[filled]]
    return out


def prime_summaries(sieve: FactorSieve) -> PrimeSummaryTable:
    """pi(x) exactly (int64) and psi(x) = sum_{n<=x} Lambda(n) by compensated summation."""
    ind = prime_indicator(sieve).values
    pi = np.cumsum(ind, dtype=np.int64)
    psi = compensated_cumsum(von_mangoldt_table(sieve).values)
    return PrimeSummaryTable(sieve.limit, _frozen(pi), _frozen(psi))


def dump_csv(values, out) -> None:
    """Write ``n,value`` rows for n >= 1 with 15 significant digits."""
    out.write("n,value\n")
    for n in range(1, len(values)):
        out.write(f"{n},{float(values[n]):.15g}\n")
