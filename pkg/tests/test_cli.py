import subprocess
import sys
import time

import pytest

from tauberlab import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_partitions_dump(capsys):
    code, out, _ = run(capsys, "partitions", "--set", "1,2", "--limit", "5")
    assert code == 0
    assert out == "n,p(n)\n0,1\n1,1\n2,2\n3,2\n4,3\n5,3\n"
    code, out, _ = run(capsys, "partitions", "--set", "1", "--limit", "3")
    assert out.splitlines()[1:] == ["0,1", "1,1", "2,1", "3,1"]


def test_partitions_gcd_only_blocks_asymptotics(capsys):
    code, out, _ = run(capsys, "partitions", "--set", "2,4", "--limit", "10")
    assert code == 0 and out.splitlines()[-1] == "10,3"
    code, _, err = run(capsys, "partitions", "--set", "2,4", "--limit", "10", "--asymptotic")
    assert code == 2 and "gcd" in err


def test_partitions_asymptotic_column(capsys):
    code, out, _ = run(capsys, "partitions", "--set", "1,2", "--limit", "100", "--asymptotic")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "n,p(n),main_term"
    assert lines[-1] == "100,51,50"


def test_partitions_max_parts(capsys):
    code, out, _ = run(capsys, "partitions", "--m", "2", "--limit", "5")
    assert out.splitlines()[-1] == "5,3"


def test_partitions_usage_and_capacity(capsys):
    assert run(capsys, "partitions", "--limit", "5")[0] == 2
    assert run(capsys, "partitions", "--set", "1,x")[0] == 2
    assert run(capsys, "partitions", "--set", "1,2", "--limit", str(10**9))[0] == 3


def test_bernoulli_dump(capsys):
    code, out, _ = run(capsys, "bernoulli", "--k", "4")
    assert code == 0
    assert out.splitlines() == [
        "k,numerator,denominator", "0,1,1", "1,-1,2", "2,1,6", "3,0,1", "4,-1,30",
    ]
    code, out, _ = run(capsys, "bernoulli", "--k", "2", "--poly")
    assert out.splitlines() == ["degree,numerator,denominator", "0,1,6", "1,-1,1", "2,1,1"]


def test_arith_dump(capsys):
    code, out, _ = run(capsys, "arith", "--fn", "mobius", "--limit", "6")
    assert out.splitlines() == ["n,value", "1,1", "2,-1", "3,-1", "4,0", "5,-1", "6,1"]
    code, out, _ = run(capsys, "arith", "--fn", "psi", "--limit", "10")
    assert out.splitlines()[-1] == "10,7.83201418050547"
    code, out, _ = run(capsys, "arith", "--fn", "lambda_k", "--k", "2", "--limit", "6")
    assert float(out.splitlines()[-1].split(",")[1]) == pytest.approx(1.5230000208, abs=1e-9)


def test_arith_capacity(capsys):
    assert run(capsys, "arith", "--limit", "100", "--sieve-limit", "50")[0] == 3


def test_series_partition_plain(tmp_path, capsys):
    out = tmp_path / "ph.csv"
    code, _, _ = run(
        capsys, "series", "--family", "pH", "--set", "1,2,3", "--envelope", "plain",
        "--jmax", "12", "--out", str(out),
    )
    assert code == 0
    rows = out.read_text().splitlines()
    assert rows[0] == "j,z,N,value,envelope,ratio,tail_bound"
    assert [r.split(",")[0] for r in rows[1:]] == [str(j) for j in range(4, 13)]
    assert float(rows[-1].split(",")[5]) == pytest.approx(1 / 6, rel=0.02)
    plot = (tmp_path / "ph.plot").read_text().splitlines()
    assert len(plot) == 9 and plot[-1].split()[0] == "12"


def test_series_lambda_hl(capsys):
    code, out, _ = run(capsys, "series", "--family", "lambda", "--envelope", "hl", "--jmax", "13")
    assert code == 0
    assert 0.95 <= float(out.splitlines()[-1].split(",")[5]) <= 1.05


def test_series_prime_partition_band(capsys):
    code, out, _ = run(
        capsys, "series", "--family", "pH_primes", "--set", "1,2", "--envelope", "prime-partition",
        "--jmin", "8", "--jmax", "14",
    )
    ratios = [float(r.split(",")[5]) for r in out.splitlines()[1:]]
    assert code == 0 and max(ratios) / min(ratios) <= 2


def test_series_mismatch_is_usage_error(capsys):
    code, _, err = run(capsys, "series", "--family", "lambda", "--envelope", "prime-partition")
    assert code == 2 and "does not match" in err
    assert run(capsys, "series", "--family", "pH", "--envelope", "plain")[0] == 2


def test_series_capacity(capsys):
    code, _, err = run(
        capsys, "series", "--family", "lambda", "--envelope", "hl", "--jmax", "10", "--max-terms", "5000"
    )
    assert code == 3 and "grid index" in err


def test_series_deterministic(tmp_path, capsys):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        run(capsys, "series", "--family", "lambda_k_weighted", "--k", "2", "--envelope", "lambda-k",
            "--jmax", "10", "--out", str(p))
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# partitions of {1,2}\nset = 1,2\nlimit=4\n")
    code, out, _ = run(capsys, "partitions", "--config", str(cfg))
    assert code == 0 and out.splitlines()[-1] == "4,3"
    code, out, _ = run(capsys, "partitions", "--config", str(cfg), "--limit", "5")
    assert out.splitlines()[-1] == "5,3"
    cfg.write_text("bogus=1\n")
    assert run(capsys, "partitions", "--config", str(cfg))[0] == 2


def test_verify_partitions(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "partitions")
    assert code == 0
    assert "PASS partition-oracle-equivalence" in out
    assert "PASS leading-term-convergence" in out


def test_verify_bernoulli_faulhaber_lines(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "bernoulli")
    assert "PASS faulhaber-exact [power-sum-closed-form]" in out
    assert "PASS odd-bernoulli-vanish" in out
    # every check line names an anchor in brackets
    for line in out.splitlines():
        if not line.startswith("#"):
            assert line.split()[2].startswith("[") and line.split()[2].endswith("]")
    assert code == (0 if "FAIL" not in out else 1)


def test_verify_tauberian_reduced_depth(capsys):
    t0 = time.perf_counter()
    code, out, _ = run(capsys, "verify", "--suite", "tauberian", "--jmax", "10")
    assert time.perf_counter() - t0 < 10
    assert code == 0, out
    assert "pole-limit-j10" in out


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "tauberlab", "partitions", "--set", "1,2", "--limit", "2"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout == "n,p(n)\n0,1\n1,1\n2,2\n"
