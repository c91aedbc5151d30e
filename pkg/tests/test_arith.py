import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tauberlab import arith
from tauberlab.errors import CapacityError


def trial_factor(n):
    out = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


def mobius_oracle(n):
    f = trial_factor(n)
    if any(e > 1 for e in f.values()):
        return 0
    return (-1) ** len(f)


@pytest.fixture(scope="module")
def sieve():
    return arith.build_factor_sieve(10**5)


def test_spf_examples(sieve):
    assert sieve.spf[12] == 2
    assert sieve.spf[97] == 97
    assert sieve.spf[91] == 7


def test_spf_matches_trial_division(sieve):
    for n in range(2, 5001):
        assert sieve.spf[n] == min(trial_factor(n))


def test_spf_prime_iff_fixed_point(sieve):
    spf = sieve.spf
    n = np.arange(2, sieve.limit + 1)
    composite = spf[2:] != n
    assert np.all(n[composite] % spf[2:][composite] == 0)
    # spf of a composite is itself prime
    assert np.all(spf[spf[2:][composite]] == spf[2:][composite])


def test_sieve_capacity():
    with pytest.raises(CapacityError):
        arith.build_factor_sieve(1)
    with pytest.raises(CapacityError):
        arith.build_factor_sieve(1000, cap=999)


def test_tables_are_read_only(sieve):
    mu = arith.mobius_table(sieve)
    with pytest.raises(ValueError):
        mu.values[5] = 3


def test_mobius_examples(sieve):
    mu = arith.mobius_table(sieve)
    assert mu[1] == 1
    assert mu[4] == 0
    assert mu[30] == -1


def test_mobius_matches_factorization(sieve):
    mu = arith.mobius_table(sieve)
    for n in range(1, 3001):
        assert mu[n] == mobius_oracle(n)


def test_mobius_divisor_sum(sieve):
    mu = arith.mobius_table(sieve).values.astype(np.int64)
    total = np.zeros(10**4 + 1, dtype=np.int64)
    for d in range(1, 10**4 + 1):
        total[d::d] += mu[d]
    assert total[1] == 1
    assert np.all(total[2:] == 0)


def test_von_mangoldt_examples(sieve):
    lam = arith.von_mangoldt_table(sieve)
    assert lam[1] == 0.0
    assert lam[9] == pytest.approx(math.log(3), rel=1e-15)
    assert lam[6] == 0.0


def test_von_mangoldt_definition(sieve):
    lam = arith.von_mangoldt_table(sieve)
    for n in range(2, 3001):
        f = trial_factor(n)
        expected = math.log(next(iter(f))) if len(f) == 1 else 0.0
        assert lam[n] == pytest.approx(expected, abs=1e-15)


def test_lambda_k_examples(sieve):
    l2 = arith.lambda_k_table(arith.restrict(sieve, 100), 2)
    assert l2[6] == pytest.approx(2 * math.log(2) * math.log(3), rel=1e-12)
    assert l2[6] == pytest.approx(1.5231, abs=1e-4)
    for k in (1, 2, 3):
        assert arith.lambda_k_value(1, k, sieve) == 0.0


@pytest.mark.parametrize("k", [1, 2, 3])
def test_lambda_k_against_full_divisor_sum(sieve, k):
    # independent route: every divisor d, mu from trial division
    for n in range(1, 1201):
        expected = math.fsum(mobius_oracle(d) * math.log(n // d) ** k for d in divisors(n))
        assert arith.lambda_k_value(n, k, sieve) == pytest.approx(expected, abs=1e-10)


def test_lambda_1_equals_von_mangoldt(sieve):
    l1 = arith.lambda_k_table(sieve, 1).values
    lam = arith.von_mangoldt_table(sieve).values
    assert np.max(np.abs(l1 - lam)) <= 1e-10


@pytest.mark.parametrize("k", [1, 2, 3])
def test_lambda_k_bound_and_vanishing(sieve, k):
    vals = arith.lambda_k_table(sieve, k).values
    omega = arith.omega_table(sieve)
    n = np.arange(1, sieve.limit + 1, dtype=np.float64)
    assert np.all(vals[1:] <= np.log(n) ** k + 1e-9)
    assert np.all(np.abs(vals[omega > k]) <= 1e-9)
    assert np.all(vals[1:] >= -1e-9)


def test_omega_matches_factorization(sieve):
    omega = arith.omega_table(sieve)
    for n in range(1, 2001):
        assert omega[n] == len(trial_factor(n))


def test_prime_summaries_examples(sieve):
    s = arith.prime_summaries(sieve)
    assert s.pi[10] == 4
    # plain Eratosthenes oracle
    flags = [True] * 1001
    flags[0] = flags[1] = False
    for p in range(2, 32):
        if flags[p]:
            for q in range(p * p, 1001, p):
                flags[q] = False
    assert s.pi[1000] == sum(flags) == 168
    assert s.psi[10] == pytest.approx(math.log(2520), rel=1e-15)
    assert s.psi[10] == pytest.approx(7.8320, abs=1e-4)


def test_prime_summaries_monotone_and_pnt():
    s = arith.prime_summaries(arith.build_factor_sieve(10**6))
    assert np.all(np.diff(s.pi) >= 0)
    assert np.all(np.diff(s.psi) >= 0)
    assert s.psi.min() >= 0
    assert 0.8 <= s.psi[10**6] / 10**6 <= 1.2


def test_psi_matches_log_lcm():
    s = arith.prime_summaries(arith.build_factor_sieve(2000))
    lcm = 1
    for x in range(1, 2001):
        lcm = math.lcm(lcm, x)
        if x % 97 == 0:
            assert s.psi[x] == pytest.approx(math.log(lcm), rel=1e-14)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(-1e6, 1e6, allow_nan=False) | st.just(0.0), min_size=1, max_size=200))
def test_compensated_cumsum_matches_fsum(values):
    got = arith.compensated_cumsum(np.array(values))
    for i in range(len(values)):
        exact = math.fsum(values[: i + 1])
        assert got[i] == pytest.approx(exact, abs=1e-9 * (1 + sum(abs(v) for v in values)))


def test_factorize(sieve):
    assert sieve.factorize(360) == [(2, 3), (3, 2), (5, 1)]
    assert sieve.factorize(1) == []


def test_dump_csv():
    buf = io.StringIO()
    arith.dump_csv(arith.von_mangoldt_table(arith.build_factor_sieve(4)).values, buf)
    assert buf.getvalue() == "n,value\n1,0\n2,0.693147180559945\n3,1.09861228866811\n4,0.693147180559945\n"
