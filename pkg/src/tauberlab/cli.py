"""Command-line front end: table dumps, series sweeps and verification suites.

Exit codes: 0 success, 1 failed check, 2 usage error, 3 capacity error.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from contextlib import contextmanager
from pathlib import Path
from typing import Dict, Iterator, List, Optional, TextIO

from . import arith, bernoulli, checks, partitions, series
from .errors import CapacityError, DomainError, InvalidSetError, TauberlabError
from .partitions import PartSet

log = logging.getLogger("tauberlab")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAPACITY = 0, 1, 2, 3

FAMILIES = ["pH", "pH_primes", "lambda", "lambda_sq", "lambda_k_weighted"]
ENVELOPES = ["plain", "partition", "prime-partition", "hl", "abelian", "lambda-k"]
# envelopes that make sense for each family
COMPATIBLE = {
    "pH": {"plain", "partition"},
    "pH_primes": {"prime-partition"},
    "lambda": {"hl", "abelian"},
    "lambda_sq": {"lambda-k"},
    "lambda_k_weighted": {"lambda-k"},
}

DEFAULTS = {
    "set": None,
    "m": None,
    "limit": 100,
    "k": 1,
    "j_min": 4,
    "j_max": None,
    "rel_tol": 1e-10,
    "out": None,
    "suite": "all",
    "asymptotic": False,
    "fn": "mobius",
    "family": None,
    "envelope": None,
    "poly": False,
    "sieve_limit": arith.DEFAULT_SIEVE_CAP,
    "max_terms": series.DEFAULT_MAX_TERMS,
    "workers": 1,
}


class UsageError(Exception):
    pass


def _parse_set(text) -> Optional[List[int]]:
    if text is None or isinstance(text, list):
        return text
    try:
        return [int(t) for t in str(text).split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"--set expects comma-separated integers, got {text!r}")


def read_config_file(path: str) -> Dict[str, str]:
    """Parse ``key=value`` lines; '#' starts a comment; dashes in keys become underscores."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def _coerce(key: str, value):
    if value is None:
        return None
    default = DEFAULTS.get(key)
    if key == "set":
        return _parse_set(value)
    if isinstance(default, bool):
        return value if isinstance(value, bool) else str(value).lower() in ("1", "true", "yes", "on")
    if key in ("limit", "k", "m", "j_min", "j_max", "sieve_limit", "max_terms", "workers"):
        return int(float(value)) if isinstance(value, str) and "e" in value.lower() else int(value)
    if key == "rel_tol":
        return float(value)
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    # every option defaults to None so the config file can fill unset ones
    common.add_argument("--config", help="key=value file; flags override it")
    common.add_argument("--set", help="part set, e.g. 1,2,3")
    common.add_argument("--m", type=int, help="max number of parts (partitions)")
    common.add_argument("--limit", type=int)
    common.add_argument("--k", type=int)
    common.add_argument("--jmin", dest="j_min", type=int)
    common.add_argument("--jmax", dest="j_max", type=int)
    common.add_argument("--rel-tol", dest="rel_tol", type=float)
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--sieve-limit", dest="sieve_limit", type=int)
    common.add_argument("--max-terms", dest="max_terms", type=int)
    common.add_argument("--workers", type=int)
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="tauberlab", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("partitions", parents=[common], help="dump p_H(n) or p_m(n)")
    sp.add_argument("--asymptotic", action="store_const", const=True,
                    help="add the leading-term column; needs gcd(H) = 1")

    sb = sub.add_parser("bernoulli", parents=[common], help="dump Bernoulli numbers")
    sb.add_argument("--poly", action="store_const", const=True,
                    help="dump coefficients of B_k(x) instead")

    sa = sub.add_parser("arith", parents=[common], help="dump an arithmetic-function table")
    sa.add_argument("--fn", choices=["mobius", "vonmangoldt", "lambda_k", "prime", "pi", "psi"])

    ss = sub.add_parser("series", parents=[common], help="series/envelope ratio sweep")
    ss.add_argument("--family", choices=FAMILIES)
    ss.add_argument("--envelope", choices=ENVELOPES)

    sv = sub.add_parser("verify", parents=[common], help="run verification suites")
    sv.add_argument("--suite", choices=["all"] + checks.SUITE_ORDER)
    return p


def resolve_config(ns: argparse.Namespace) -> argparse.Namespace:
    """Merge flags over config-file values over built-in defaults."""
    file_values = read_config_file(ns.config) if ns.config else {}
    unknown = set(file_values) - set(DEFAULTS)
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
    for key, default in DEFAULTS.items():
        value = getattr(ns, key, None)
        if value is None:
            value = file_values.get(key, default)
        setattr(ns, key, _coerce(key, value))
    return ns


@contextmanager
def _output(path: Optional[str]) -> Iterator[TextIO]:
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", newline="\n") as fh:
            yield fh


def run_partitions(cfg) -> int:
    if cfg.m is not None:
        if cfg.set is not None:
            raise UsageError("give either --set or --m, not both")
        if cfg.asymptotic:
            raise UsageError("--asymptotic applies to --set only")
        table = partitions.p_m_table(cfg.m, cfg.limit)
        main = None
    else:
        if not cfg.set:
            raise UsageError("partitions needs --set or --m")
        table = partitions.p_H_table(cfg.set, cfg.limit)
        main = PartSet(tuple(cfg.set)) if cfg.asymptotic else None
    with _output(cfg.out) as fh:
        partitions.dump_csv(table, fh, main_term=main)
    return EXIT_OK


def run_bernoulli(cfg) -> int:
    if cfg.k < 0:
        raise UsageError("--k must be >= 0")
    with _output(cfg.out) as fh:
        if cfg.poly:
            bernoulli.dump_poly_csv(cfg.k, fh)
        else:
            bernoulli.dump_numbers_csv(cfg.k, fh)
    return EXIT_OK


def run_arith(cfg) -> int:
    sieve = arith.build_factor_sieve(cfg.limit, cap=cfg.sieve_limit)
    if cfg.fn == "mobius":
        values = arith.mobius_table(sieve).values
    elif cfg.fn == "vonmangoldt":
        values = arith.von_mangoldt_table(sieve).values
    elif cfg.fn == "lambda_k":
        values = arith.lambda_k_table(sieve, cfg.k).values
    elif cfg.fn == "prime":
        values = arith.prime_indicator(sieve).values
    else:
        summary = arith.prime_summaries(sieve)
        values = summary.pi if cfg.fn == "pi" else summary.psi
    with _output(cfg.out) as fh:
        arith.dump_csv(values, fh)
    return EXIT_OK


def _series_setup(cfg):
    fam, env_name = cfg.family, cfg.envelope
    if fam is None or env_name is None:
        raise UsageError("series needs --family and --envelope")
    if env_name not in COMPATIBLE[fam]:
        raise UsageError(
            f"envelope {env_name!r} does not match family {fam!r} "
            f"(expected one of {sorted(COMPATIBLE[fam])})"
        )
    if fam in ("pH", "pH_primes"):
        if not cfg.set:
            raise UsageError(f"family {fam} needs --set")
        H = PartSet(tuple(cfg.set))
        if fam == "pH":
            spec = series.partition_family(H)
            env = (
                series.pole_envelope(H.k)
                if env_name == "plain"
                else series.partition_envelope(H, lambda x: x + 1.0)
            )
        else:
            spec = series.prime_partition_family(H)
            env = series.prime_partition_envelope(H)
    elif fam == "lambda":
        spec = series.von_mangoldt_family()
        env = series.pole_envelope(1) if env_name == "hl" else series.abelian_envelope(1.0, 1.0)
    elif fam == "lambda_sq":
        spec = series.von_mangoldt_squared_family()
        env = series.lambda_k_envelope(1.0, 1)
    else:
        if cfg.k < 1:
            raise UsageError("--k must be >= 1")
        spec = series.lambda_weighted_family(cfg.k)
        env = series.lambda_k_envelope(1.0, cfg.k)
    return spec, env


def run_series(cfg) -> int:
    spec, env = _series_setup(cfg)
    j_max = cfg.j_max if cfg.j_max is not None else 14
    try:
        grid = series.EvalGrid.dyadic(cfg.j_min, j_max)
    except ValueError as exc:
        raise UsageError(str(exc))
    report = series.ratio_sweep(spec, env, grid, cfg.rel_tol, cfg.max_terms, cfg.workers)
    with _output(cfg.out) as fh:
        fh.write(report.to_csv())
    if cfg.out is not None:
        Path(cfg.out).with_suffix(".plot").write_text(report.to_plot())
    lo, hi = report.plateau
    log.info("plateau ratio min=%.6g max=%.6g", lo, hi)
    return EXIT_OK


def run_verify(cfg) -> int:
    vcfg = checks.VerifyConfig(j_max=cfg.j_max, sieve_limit=cfg.sieve_limit, rel_tol=cfg.rel_tol)
    t0 = time.perf_counter()
    results = checks.run_suite(cfg.suite, vcfg)
    log.info("verify %s took %.1f s", cfg.suite, time.perf_counter() - t0)
    text = "".join(r.report() for r in results)
    ok = all(r.passed for r in results)
    text += f"# overall: {'PASS' if ok else 'FAIL'}\n"
    sys.stdout.write(text)
    if cfg.out is not None:
        Path(cfg.out).write_text(text)
    return EXIT_OK if ok else EXIT_FAIL


COMMANDS = {
    "partitions": run_partitions,
    "bernoulli": run_bernoulli,
    "arith": run_arith,
    "series": run_series,
    "verify": run_verify,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if ns.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        cfg = resolve_config(ns)
        return COMMANDS[cfg.command](cfg)
    except (UsageError, InvalidSetError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (TauberlabError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
