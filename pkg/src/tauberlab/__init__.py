"""Exact arithmetic tables and certified power-series sweeps for Tauberian checks."""

from .arith import (
    FactorSieve,
    build_factor_sieve,
    lambda_k_table,
    mobius_table,
    prime_summaries,
    von_mangoldt_table,
)
from .bernoulli import RationalPoly, bernoulli_numbers, bernoulli_poly, faulhaber_sum, main_term_partial_sum
from .errors import CapacityError, DomainError, GuardError, HypothesisError, InvalidSetError, ShapeError
from .partitions import PartSet, asymptotic_main_term, brute_force_p_H, p_H_table, p_m_table, partial_sums
from .series import EvalGrid, SeriesSpec, eval_series, product_oracle, ratio_sweep

__version__ = "0.1.0"
