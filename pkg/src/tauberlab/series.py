"""
Power series sum_{n>=0} c_n z^n for 0 < z < 1 with certified truncation.

Each coefficient family carries a growth certificate |c_n| <= C (n+1)^r.  For
N >= ceil(r / log(1/z)) the tail terms C (n+1)^r z^n, n > N, have consecutive
ratios at most q = z ((N+2)/(N+1))^r < 1, so

    sum_{n>N} |c_n| z^n <= C (N+2)^r z^(N+1) / (1 - q).

The truncation N is the first index at which that bound drops below
rel_tol * |partial sum|.  Partial sums are taken with math.fsum in index order.

Envelopes are the predicted growth functions of z near 1; ratio_sweep tabulates
series / envelope along z_j = 1 - 2^-j.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, List, NamedTuple, Optional, Sequence

import numpy as np

from . import arith
from .errors import CapacityError, DomainError
from .partitions import PartSet, parts_of, p_H_table

DEFAULT_MAX_TERMS = 200_000_000
LOG_SLACK_DELTA = 0.25


@dataclass(frozen=True)
class GrowthCertificate:
    """|c_n| <= C * (n+1)^r for every n >= 0."""

    C: float
    r: float

    def bound(self, n: np.ndarray) -> np.ndarray:
        return self.C * (np.asarray(n, dtype=np.float64) + 1.0) ** self.r


def log_power_certificate(power: int, delta: float = LOG_SLACK_DELTA) -> GrowthCertificate:
    """Certificate for coefficients bounded by log(n+1)^power.

    log(x)^m / x^delta peaks at log x = m / delta, so
    log(x)^m <= (m / (e delta))^m x^delta.
    """
    if power == 0:
        return GrowthCertificate(1.0, 0.0)
    return GrowthCertificate((power / (math.e * delta)) ** power, delta)


class SeriesSpec:
    """A coefficient family c_n with its growth certificate.

    Args:
        name: identifier used in reports
        coefficients: callable returning float64 c_0..c_N for a requested N
        certificate: growth bound used for the tail estimate
        start_index: 0 or 1; entries below it are zero
    """

    def __init__(
        self,
        name: str,
        coefficients: Callable[[int], np.ndarray],
        certificate: GrowthCertificate,
        start_index: int = 0,
    ):
        if start_index not in (0, 1):
            raise ValueError("start_index must be 0 or 1")
        self.name = name
        self._coefficients = coefficients
        self.certificate = certificate
        self.start_index = start_index

    def coefficients(self, n_max: int) -> np.ndarray:
        c = np.asarray(self._coefficients(n_max), dtype=np.float64)[: n_max + 1]
        if len(c) < n_max + 1:
            raise CapacityError(f"family {self.name} covers only {len(c) - 1} < {n_max} terms")
        if self.start_index:
            c = c.copy()
            c[: self.start_index] = 0.0
        return c

    def check_certificate(self, coeffs: np.ndarray) -> None:
        bound = self.certificate.bound(np.arange(len(coeffs)))
        bad = np.flatnonzero(np.abs(coeffs) > bound * (1 + 1e-12))
        if len(bad):
            n = int(bad[0])
            raise ValueError(
                f"growth certificate of {self.name} fails at n={n}: "
                f"|c_n|={abs(coeffs[n])!r} > {bound[n]!r}"
            )

    def __repr__(self) -> str:
        c = self.certificate
        return f"SeriesSpec({self.name!r}, C={c.C:g}, r={c.r:g})"


class SeriesValue(NamedTuple):
    value: float
    n_used: int
    tail_bound: float


def _check_z(z: float) -> None:
    if not (0.0 < z < 1.0):
        raise DomainError(f"z={z!r} outside (0, 1)")


def _tail_bounds(cert: GrowthCertificate, log_z: float, Ns: np.ndarray) -> np.ndarray:
    Ns = Ns.astype(np.float64)
    log_q = log_z + cert.r * np.log1p(1.0 / (Ns + 1.0))
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        one_minus_q = -np.expm1(log_q)
        tail = cert.C * np.exp(cert.r * np.log(Ns + 2.0) + (Ns + 1.0) * log_z) / one_minus_q
    return np.where(log_q < 0, tail, np.inf)


def eval_series(
    spec: SeriesSpec,
    z: float,
    rel_tol: float = 1e-12,
    max_terms: int = DEFAULT_MAX_TERMS,
) -> SeriesValue:
    """Truncated sum of spec at z with a certified tail.

    Returns:
        (value, N, tail_bound) with tail_bound <= rel_tol * |value|, where
        value = sum_{n<=N} c_n z^n.

    Raises:
        DomainError: z outside (0, 1)
        CapacityError: the required N would exceed ``max_terms``
    """
    _check_z(z)
    if not (1e-14 < rel_tol < 1e-2):
        raise ValueError(f"rel_tol={rel_tol!r} outside (1e-14, 1e-2)")
    cert = spec.certificate
    log_z = math.log1p(z - 1.0)
    n0 = math.ceil(cert.r / -log_z)
    n = max(n0 + 1, 64)
    while True:
        if n + 1 > max_terms:
            raise CapacityError(
                f"series {spec.name} at z={z!r} needs more than {max_terms} terms"
            )
        coeffs = spec.coefficients(n)
        spec.check_certificate(coeffs)
        terms = coeffs * np.exp(np.arange(n + 1, dtype=np.float64) * log_z)
        approx = np.abs(np.cumsum(terms))
        Ns = np.arange(n0, n + 1)
        tails = _tail_bounds(cert, log_z, Ns)
        ok = np.flatnonzero(tails <= rel_tol * approx[n0:] * (1 - 1e-9))
        for i in ok[:8]:
            N = int(Ns[i])
            value = math.fsum(terms[: N + 1].tolist())
            if tails[i] <= rel_tol * abs(value):
                return SeriesValue(value, N, float(tails[i]))
        # one last attempt at exactly max_terms terms before giving up
        n = n + 1 if n + 1 == max_terms else min(2 * n, max_terms - 1)


def product_oracle(parts, z: float) -> float:
    """prod_{h in H} 1 / (1 - z^h), the generating function of p_H."""
    _check_z(z)
    out = 1.0
    for h in parts_of(parts):
        out /= -math.expm1(h * math.log(z))
    return out


class PartsCheck(NamedTuple):
    lhs: float
    rhs: float
    abs_diff: float


def summation_by_parts_check(spec: SeriesSpec, z: float, N: int) -> PartsCheck:
    """Both sides of sum_{n<=N} c_n z^n = (1-z) sum_{n<N} A(n) z^n + A(N) z^N.

    A(n) = sum_{j<=n} c_j.
    """
    _check_z(z)
    c = spec.coefficients(N)
    powers = np.exp(np.arange(N + 1, dtype=np.float64) * math.log(z))
    lhs = math.fsum((c * powers).tolist())
    A = arith.compensated_cumsum(c)
    rhs = (1.0 - z) * math.fsum((A[:N] * powers[:N]).tolist()) + A[N] * powers[N]
    return PartsCheck(lhs, rhs, abs(lhs - rhs))


# --- coefficient families -------------------------------------------------


class _GrowingTable:
    """Rebuilds a float table with headroom whenever a larger N is requested."""

    def __init__(self, build: Callable[[int], np.ndarray], max_limit: Optional[int] = None):
        self._build = build
        self._max = max_limit
        self._cache: Optional[np.ndarray] = None

    def __call__(self, n_max: int) -> np.ndarray:
        if self._cache is None or len(self._cache) <= n_max:
            target = 2 * n_max
            if self._max is not None:
                if n_max > self._max:
                    raise CapacityError(f"table needs n={n_max} beyond limit {self._max}")
                target = min(target, self._max)
            self._cache = self._build(target)
        return self._cache[: n_max + 1]


def constant_family(value: float = 1.0) -> SeriesSpec:
    return SeriesSpec(
        f"const({value:g})",
        lambda n: np.full(n + 1, value, dtype=np.float64),
        GrowthCertificate(abs(value), 0.0),
    )


def identity_family() -> SeriesSpec:
    """c_n = n."""
    return SeriesSpec(
        "n", lambda n: np.arange(n + 1, dtype=np.float64), GrowthCertificate(1.0, 1.0)
    )


def array_family(name: str, values: Sequence[float], certificate: GrowthCertificate) -> SeriesSpec:
    """Family backed by a fixed table; asking for more terms is a capacity error."""
    arr = np.asarray(values, dtype=np.float64)
    return SeriesSpec(name, lambda n: arr, certificate)


def partition_family(parts) -> SeriesSpec:
    """c_n = p_H(n).

    Fixing the multiplicities of all parts but the smallest determines a
    partition, so p_H(n) <= prod_{h>min H} (n/h + 1) <= (n+1)^(k-1).
    """
    parts = parts_of(parts)
    cert = GrowthCertificate(1.0, float(len(parts) - 1))
    table = _GrowingTable(lambda n: p_H_table(parts, n).as_float())
    return SeriesSpec(f"p_H{list(parts)}", table, cert)


def prime_partition_family(parts, sieve: Optional[arith.FactorSieve] = None) -> SeriesSpec:
    """c_n = p_H(n) if n is prime else 0.

    With a prebuilt sieve the family is capped at the sieve limit; otherwise
    sieves are built on demand.
    """
    parts = parts_of(parts)
    cert = GrowthCertificate(1.0, float(len(parts) - 1))

    def build(n: int) -> np.ndarray:
        s = arith.restrict(sieve, n) if sieve is not None else arith.build_factor_sieve(max(n, 2))
        ind = arith.prime_indicator(s).values
        return p_H_table(parts, n).as_float() * ind

    limit = sieve.limit if sieve is not None else None
    return SeriesSpec(
        f"p_H{list(parts)}@primes", _GrowingTable(build, limit), cert, start_index=1
    )


def _sieve_table(fn: Callable[[arith.FactorSieve], np.ndarray], sieve) -> _GrowingTable:
    if sieve is not None:
        return _GrowingTable(lambda n: fn(arith.restrict(sieve, n)), sieve.limit)
    return _GrowingTable(lambda n: fn(arith.build_factor_sieve(max(n, 2))))


def von_mangoldt_family(sieve: Optional[arith.FactorSieve] = None) -> SeriesSpec:
    """c_n = Lambda(n) <= log n."""
    table = _sieve_table(lambda s: arith.von_mangoldt_table(s).values, sieve)
    return SeriesSpec("Lambda", table, log_power_certificate(1), start_index=1)


def von_mangoldt_squared_family(sieve: Optional[arith.FactorSieve] = None) -> SeriesSpec:
    """c_n = Lambda(n)^2."""
    table = _sieve_table(lambda s: arith.von_mangoldt_table(s).values ** 2, sieve)
    return SeriesSpec("Lambda^2", table, log_power_certificate(2), start_index=1)


def _lambda_times_lambda_k(s: arith.FactorSieve, k: int) -> np.ndarray:
    lam = arith.von_mangoldt_table(s).values
    out = np.zeros_like(lam)
    # Lambda(n) vanishes off prime powers, so only those need Lambda_k(n)
    for n in np.flatnonzero(lam).tolist():
        out[n] = lam[n] * arith.lambda_k_value(n, k, s)
    return out


def lambda_weighted_family(k: int, sieve: Optional[arith.FactorSieve] = None) -> SeriesSpec:
    """c_n = Lambda(n) * Lambda_k(n) <= log(n)^(k+1)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    table = _sieve_table(lambda s: _lambda_times_lambda_k(s, k), sieve)
    return SeriesSpec(f"Lambda*Lambda_{k}", table, log_power_certificate(k + 1), start_index=1)


# --- envelopes ------------------------------------------------------------


@dataclass(frozen=True)
class Envelope:
    """Predicted growth of a series as z -> 1-, as a function of z."""

    kind: str
    params: dict
    evaluator: Callable[[float], float] = field(repr=False, compare=False)

    def __call__(self, z: float) -> float:
        return envelope_value(self, z)


def _log_inv(z: float) -> float:
    # log(1/(1-z)); positive for every z in (0, 1)
    L = -math.log1p(-z)
    if L <= 0.0:
        raise DomainError(f"log(1/(1-z)) = {L!r} <= 0 at z={z!r}")
    return L


def gamma_value(x: float) -> float:
    """Gamma(x): exact factorial at positive integers, math.gamma elsewhere."""
    if float(x).is_integer() and x >= 1:
        return float(math.factorial(int(x) - 1))
    return math.gamma(x)


def envelope_value(env: Envelope, z: float) -> float:
    _check_z(z)
    v = env.evaluator(z)
    if not (math.isfinite(v) and v > 0.0):
        raise DomainError(f"envelope {env.kind} is {v!r} at z={z!r}")
    return v


def pole_envelope(order: float) -> Envelope:
    """(1 - z)^(-order)."""
    return Envelope("pole", {"order": order}, lambda z: (1.0 - z) ** (-order))


def abelian_envelope(
    C: float,
    eps: float,
    f: Optional[Callable[[float], float]] = None,
    exponent: str = "classical",
) -> Envelope:
    """C * Gamma(eps+1) * (1-z)^(-p) * f(1/(1-z)).

    ``exponent="classical"`` uses p = eps, the form that holds when the partial
    sums grow like C n^eps f(n).  ``exponent="literal"`` uses p = eps + 1.
    """
    if exponent not in ("classical", "literal"):
        raise ValueError("exponent must be 'classical' or 'literal'")
    f = f or (lambda x: 1.0)
    p = eps if exponent == "classical" else eps + 1.0
    g = gamma_value(eps + 1.0)
    return Envelope(
        "abelian",
        {"C": C, "eps": eps, "exponent": exponent},
        lambda z: C * g * (1.0 - z) ** (-p) * f(1.0 / (1.0 - z)),
    )


def partition_envelope(parts: PartSet, partial_sum_model: Callable[[float], float]) -> Envelope:
    """(1-z)^(-(k-1)) * A(1/(1-z)) for weights a_n with partial sums modelled by A."""
    k = parts.k
    return Envelope(
        "partition",
        {"parts": parts.parts},
        lambda z: (1.0 - z) ** (-(k - 1)) * partial_sum_model(1.0 / (1.0 - z)),
    )


def prime_partition_envelope(parts: PartSet) -> Envelope:
    """(1-z)^(-k) / log(1/(1-z))."""
    k = parts.k
    return Envelope(
        "prime_partition",
        {"parts": parts.parts},
        lambda z: (1.0 - z) ** (-k) / _log_inv(z),
    )


def lambda_k_envelope(eps: float, k: int) -> Envelope:
    """(1-z)^(-eps) * log(1/(1-z))^k."""
    return Envelope(
        "lambda_k",
        {"eps": eps, "k": k},
        lambda z: (1.0 - z) ** (-eps) * _log_inv(z) ** k,
    )


# --- sweeps ---------------------------------------------------------------


@dataclass(frozen=True)
class EvalGrid:
    """Points z in (0, 1), strictly increasing, each tagged with j = log2(1/(1-z))."""

    points: tuple[float, ...]
    labels: tuple[float, ...]

    def __post_init__(self):
        if not self.points:
            raise ValueError("empty grid")
        if len(self.points) != len(self.labels):
            raise ValueError("points and labels differ in length")
        for z in self.points:
            _check_z(z)
        if any(b <= a for a, b in zip(self.points, self.points[1:])):
            raise ValueError("grid points must be strictly increasing")

    @classmethod
    def dyadic(cls, j_min: int = 4, j_max: int = 14) -> "EvalGrid":
        """z_j = 1 - 2^-j for j_min <= j <= j_max."""
        if j_min < 1 or j_max < j_min:
            raise ValueError(f"bad dyadic range {j_min}..{j_max}")
        js = tuple(range(j_min, j_max + 1))
        return cls(tuple(1.0 - 2.0**-j for j in js), js)

    @classmethod
    def from_points(cls, points: Sequence[float]) -> "EvalGrid":
        pts = tuple(float(z) for z in points)
        for z in pts:
            _check_z(z)
        return cls(pts, tuple(-math.log2(1.0 - z) for z in pts))

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class RatioRow:
    j: float
    z: float
    n_used: int
    value: float
    envelope: float
    ratio: float
    tail_bound: float


@dataclass(frozen=True)
class RatioReport:
    series: str
    envelope: str
    rows: tuple[RatioRow, ...]

    @property
    def ratios(self) -> List[float]:
        return [r.ratio for r in self.rows]

    @property
    def plateau(self) -> tuple[float, float]:
        """(min, max) ratio over the last half of the grid."""
        tail = self.ratios[len(self.rows) // 2 :]
        return min(tail), max(tail)

    def band(self, j_lo: float = -math.inf, j_hi: float = math.inf) -> float:
        """max/min of the ratio over rows with j_lo <= j <= j_hi."""
        rs = [r.ratio for r in self.rows if j_lo <= r.j <= j_hi]
        if not rs:
            raise ValueError(f"no rows with {j_lo} <= j <= {j_hi}")
        return max(rs) / min(rs)

    def to_csv(self) -> str:
        lines = ["j,z,N,value,envelope,ratio,tail_bound"]
        for r in self.rows:
            lines.append(
                f"{r.j:.15g},{r.z:.15g},{r.n_used},{r.value:.15g},"
                f"{r.envelope:.15g},{r.ratio:.15g},{r.tail_bound:.15g}"
            )
        return "\n".join(lines) + "\n"

    def to_plot(self) -> str:
        """Whitespace-separated (log2(1/(1-z)), ratio) pairs."""
        return "".join(f"{r.j:.15g} {r.ratio:.15g}\n" for r in self.rows)


def ratio_sweep(
    spec: SeriesSpec,
    env: Envelope,
    grid: EvalGrid,
    rel_tol: float = 1e-10,
    max_terms: int = DEFAULT_MAX_TERMS,
    workers: int = 1,
) -> RatioReport:
    """Series-to-envelope ratios along ``grid``, rows in grid order."""

    def one(i: int) -> RatioRow:
        z = grid.points[i]
        try:
            sv = eval_series(spec, z, rel_tol, max_terms)
        except CapacityError as exc:
            raise CapacityError(f"grid index {i} (j={grid.labels[i]}): {exc}") from exc
        e = envelope_value(env, z)
        return RatioRow(grid.labels[i], z, sv.n_used, sv.value, e, sv.value / e, sv.tail_bound)

    idx = range(len(grid))
    if workers > 1:
        # families cache tables lazily; warm the cache at the deepest point first
        last = one(len(grid) - 1)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(one, idx[:-1])) + [last]
    else:
        rows = [one(i) for i in idx]
    return RatioReport(spec.name, env.kind, tuple(rows))
