"""
Verification suites.

Each check function returns a Check; the CLI ``verify`` command and the
acceptance tests share these.  Report text carries no timings so repeated runs
are byte-identical.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from itertools import accumulate
from typing import Callable, Dict, List, Optional

import numpy as np

from . import arith, bernoulli, partitions, series
from .partitions import PartSet

ORACLE_FAMILY = [(1,), (1, 2), (2, 3), (1, 2, 3), (3, 4, 5), (1, 5, 6)]


@dataclass(frozen=True)
class Check:
    name: str
    anchor: str
    passed: bool
    measured: str
    threshold: str

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name} [{self.anchor}] measured={self.measured} threshold={self.threshold}"


@dataclass
class SuiteResult:
    suite: str
    checks: List[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks)

    def report(self) -> str:
        lines = [f"# suite {self.suite}"]
        lines += [c.line() for c in self.checks]
        n_pass = sum(c.passed for c in self.checks)
        lines.append(f"# {self.suite}: {n_pass}/{len(self.checks)} passed")
        return "\n".join(lines) + "\n"


@dataclass
class VerifyConfig:
    j_max: Optional[int] = None
    sieve_limit: int = 50_000_000
    rel_tol: float = 1e-10
    seed: int = 20240601


def _cap_j(j: int, cfg: VerifyConfig) -> int:
    return j if cfg.j_max is None else min(j, cfg.j_max)


# --- partitions -------------------------------------------------------------


def check_partition_oracle(cfg: VerifyConfig) -> Check:
    mismatches = 0
    for H in ORACLE_FAMILY:
        table = partitions.p_H_table(H, 40)
        for n in range(41):
            if int(table[n]) != partitions.brute_force_p_H(H, n):
                mismatches += 1
    return Check(
        "partition-oracle-equivalence", "partition-count",
        mismatches == 0, f"{mismatches} mismatches", "0 mismatches",
    )


def check_generating_function(cfg: VerifyConfig) -> Check:
    worst = 0.0
    for H in ORACLE_FAMILY:
        v = series.eval_series(series.partition_family(H), 0.5, rel_tol=1e-13)
        worst = max(worst, abs(v.value - series.product_oracle(H, 0.5)))
    return Check(
        "generating-function-oracle", "gen-fn-product",
        worst <= 1e-9, f"{worst:.3e}", "1e-09",
    )


def leading_term_errors() -> tuple[float, float]:
    """|p_H(n) * Gamma(k) * prod(H) / n^(k-1) - 1| for H = {1,2,3} at n = 1e2, 1e4."""
    H = PartSet.of(1, 2, 3)
    table = partitions.p_H_table(H, 10**4)
    errs = []
    for n in (10**2, 10**4):
        errs.append(abs(int(table[n]) / partitions.asymptotic_main_term(H, n) - 1.0))
    return errs[0], errs[1]


def check_leading_term(cfg: VerifyConfig) -> Check:
    e2, e4 = leading_term_errors()
    ok = e4 <= 0.01 and e4 <= e2 / 5
    return Check(
        "leading-term-convergence", "leading-term",
        ok, f"err(1e4)={e4:.4g},err(1e2)={e2:.4g}", "err(1e4)<=0.01,err(1e4)<=err(1e2)/5",
    )


def check_max_parts_bound(cfg: VerifyConfig) -> Check:
    violations = 0
    for m in range(1, 6):
        table = partitions.p_m_table(m, 1000)
        violations += sum(int(table[n]) > (n + 1) ** m for n in range(1001))
    return Check(
        "max-parts-bound", "max-parts-count",
        violations == 0, f"{violations} violations", "0 violations",
    )


# --- bernoulli --------------------------------------------------------------


def check_faulhaber(cfg: VerifyConfig) -> Check:
    bad = 0
    xs = list(range(1, 101)) + [1000]
    for k in range(1, 21):
        prefix = list(accumulate(m**k for m in range(1, 1001)))
        for x in xs:
            if bernoulli.faulhaber_sum(k, x) != prefix[x - 1]:
                bad += 1
    return Check(
        "faulhaber-exact", "power-sum-closed-form",
        bad == 0, f"{bad} mismatches", "0 mismatches",
    )


def check_odd_bernoulli(cfg: VerifyConfig) -> Check:
    B = bernoulli.bernoulli_numbers(30)
    nonzero = [j for j in range(3, 31, 2) if B[j] != 0]
    return Check(
        "odd-bernoulli-vanish", "bernoulli-generating-function",
        not nonzero, f"{len(nonzero)} nonzero", "0 nonzero",
    )


def partial_sum_errors(exponent: int) -> List[float]:
    """|sum_{n<=x} p_H(n) - main term| / x^exponent for H = {1,2,3}, x = 1e2, 1e3, 1e4."""
    H = PartSet.of(1, 2, 3)
    table = partitions.p_H_table(H, 10**4)
    prefix = list(accumulate(int(v) for v in table.counts.tolist()))
    out = []
    for x in (10**2, 10**3, 10**4):
        err = abs(prefix[x] - bernoulli.main_term_partial_sum(H, x))
        out.append(float(err / x**exponent))
    return out


def check_partial_sum_main_term(cfg: VerifyConfig) -> Check:
    # claimed error order x^(k-2) = x for k = 3
    errs = partial_sum_errors(1)
    band = max(errs) / min(errs)
    return Check(
        "partial-sum-error-order-k-minus-2", "partial-sum-main-term",
        band <= 10, f"max/min={band:.4g}", "10",
    )


def check_partial_sum_main_term_corrected(cfg: VerifyConfig) -> Check:
    # summing an O(n^(k-2)) pointwise error gives order x^(k-1)
    errs = partial_sum_errors(2)
    band = max(errs) / min(errs)
    return Check(
        "partial-sum-error-order-k-minus-1", "partial-sum-main-term",
        band <= 10, f"max/min={band:.4g}", "10",
    )


# --- tauberian --------------------------------------------------------------


def check_pole_limit(cfg: VerifyConfig) -> Check:
    j = _cap_j(14, cfg)
    z = 1.0 - 2.0**-j
    worst = 0.0
    for H in [PartSet.of(1, 2), PartSet.of(1, 2, 3)]:
        v = series.eval_series(series.partition_family(H), z, cfg.rel_tol)
        scaled = (1.0 - z) ** H.k * v.value
        worst = max(worst, abs(scaled * H.prod - 1.0))
    return Check(
        f"pole-limit-j{j}", "partition-series-pole",
        worst <= 0.02, f"{worst:.4g}", "0.02",
    )


def check_prime_partitions(cfg: VerifyConfig, sieve: Optional[arith.FactorSieve] = None) -> Check:
    j_hi = _cap_j(16, cfg)
    j_lo = min(8, j_hi)
    if sieve is None:
        sieve = arith.build_factor_sieve(cfg.sieve_limit)
    H = PartSet.of(1, 2)
    report = series.ratio_sweep(
        series.prime_partition_family(H, sieve),
        series.prime_partition_envelope(H),
        series.EvalGrid.dyadic(j_lo, j_hi),
        cfg.rel_tol,
    )
    band = report.band()
    return Check(
        f"prime-partition-band-j{j_lo}-{j_hi}", "prime-partition-bound",
        band <= 2, f"max/min={band:.6g}", "2",
    )


def check_chebyshev(cfg: VerifyConfig) -> Check:
    j = _cap_j(13, cfg)
    z = 1.0 - 2.0**-j
    v = series.eval_series(series.von_mangoldt_family(), z, cfg.rel_tol)
    scaled = (1.0 - z) * v.value
    return Check(
        f"lambda-series-pole-j{j}", "chebyshev-pnt",
        0.95 <= scaled <= 1.05, f"{scaled:.6g}", "[0.95,1.05]",
    )


def check_lambda_weighted(cfg: VerifyConfig, k: int) -> Check:
    j_hi = _cap_j(14, cfg)
    j_lo = min(8, j_hi)
    spec = series.von_mangoldt_squared_family() if k == 1 else series.lambda_weighted_family(k)
    report = series.ratio_sweep(
        spec, series.lambda_k_envelope(1.0, k), series.EvalGrid.dyadic(j_lo, j_hi), cfg.rel_tol
    )
    band = report.band()
    return Check(
        f"lambda-weighted-k{k}-band-j{j_lo}-{j_hi}", "lambda-weighted-bound",
        band <= 3, f"max/min={band:.6g}", "3",
    )


def summation_by_parts_trials(seed: int, count: int = 100):
    """Seeded (family, z, N) triples over non-negative coefficient families."""
    rng = random.Random(seed)
    makers: Dict[str, Callable[[], series.SeriesSpec]] = {
        "const": series.constant_family,
        "n": series.identity_family,
        "p_H[1,2]": lambda: series.partition_family((1, 2)),
        "p_H[1,2,3]": lambda: series.partition_family((1, 2, 3)),
        "p_H[3,4,5]": lambda: series.partition_family((3, 4, 5)),
        "Lambda": series.von_mangoldt_family,
        "Lambda^2": series.von_mangoldt_squared_family,
        "p_H[1,2]@primes": lambda: series.prime_partition_family((1, 2)),
    }
    names = sorted(makers)
    cache: Dict[str, series.SeriesSpec] = {}
    for _ in range(count):
        name = rng.choice(names)
        z = rng.uniform(0.05, 0.999)
        N = rng.randint(10, 20_000)
        if name not in cache:
            cache[name] = makers[name]()
        yield name, cache[name], z, N


def check_summation_by_parts(cfg: VerifyConfig) -> Check:
    worst = 0.0
    for _, spec, z, N in summation_by_parts_trials(cfg.seed):
        res = series.summation_by_parts_check(spec, z, N)
        worst = max(worst, res.abs_diff / abs(res.lhs))
    return Check(
        "summation-by-parts", "summation-by-parts",
        worst <= 1e-9, f"{worst:.3e}", "1e-09",
    )


def check_abelian_classical(cfg: VerifyConfig) -> Check:
    j = _cap_j(12, cfg)
    z = 1.0 - 2.0**-j
    v = series.eval_series(series.constant_family(), z, cfg.rel_tol)
    env = series.abelian_envelope(1.0, 1.0, exponent="classical")
    dev = abs(v.value / env(z) - 1.0)
    return Check(
        f"abelian-classical-j{j}", "abelian-envelope",
        dev <= 1e-6, f"{dev:.3e}", "1e-06",
    )


# --- lambda -----------------------------------------------------------------


def lambda_k_violations(limit: int = 10**5) -> Dict[str, int]:
    sieve = arith.build_factor_sieve(limit)
    omega = arith.omega_table(sieve)
    lam = arith.von_mangoldt_table(sieve).values
    n = np.arange(limit + 1, dtype=np.float64)
    logn = np.zeros_like(n)
    logn[1:] = np.log(n[1:])
    out = {"bound": 0, "vanish": 0, "lambda1": 0}
    for k in (1, 2, 3):
        vals = arith.lambda_k_table(sieve, k).values
        out["bound"] += int(np.sum(vals[1:] > logn[1:] ** k + 1e-9))
        # "= 0" at floating-point resolution of a signed divisor sum
        out["vanish"] += int(np.sum(np.abs(vals[omega > k]) > 1e-9))
        if k == 1:
            out["lambda1"] = int(np.sum(np.abs(vals[1:] - lam[1:]) > 1e-10))
    return out


def check_lambda_k(cfg: VerifyConfig) -> Check:
    v = lambda_k_violations()
    total = sum(v.values())
    measured = ",".join(f"{k}={v[k]}" for k in sorted(v))
    return Check(
        "lambda-k-invariants", "lambda-k-bound",
        total == 0, measured, "all 0",
    )


# --- suites -----------------------------------------------------------------

SUITES: Dict[str, List[Callable[[VerifyConfig], Check]]] = {
    "partitions": [
        check_partition_oracle,
        check_generating_function,
        check_leading_term,
        check_max_parts_bound,
    ],
    "bernoulli": [
        check_faulhaber,
        check_odd_bernoulli,
        check_partial_sum_main_term,
        check_partial_sum_main_term_corrected,
    ],
    "tauberian": [
        check_abelian_classical,
        check_pole_limit,
        check_prime_partitions,
        check_chebyshev,
        lambda cfg: check_lambda_weighted(cfg, 1),
        lambda cfg: check_lambda_weighted(cfg, 2),
        check_summation_by_parts,
    ],
    "lambda": [check_lambda_k],
}
SUITE_ORDER = ["partitions", "bernoulli", "tauberian", "lambda"]


def run_suite(name: str, cfg: Optional[VerifyConfig] = None) -> List[SuiteResult]:
    """Run one suite, or every suite in canonical order for ``all``."""
    cfg = cfg or VerifyConfig()
    names = SUITE_ORDER if name == "all" else [name]
    results = []
    for suite in names:
        if suite not in SUITES:
            raise KeyError(f"unknown suite {suite!r}")
        res = SuiteResult(suite)
        for fn in SUITES[suite]:
            res.checks.append(fn(cfg))
        results.append(res)
    return results
