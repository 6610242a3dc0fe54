"""The ten acceptance criteria at their stated scale and tolerances.

Each test records one pass/fail line, printed in a summary section at the
end of the run."""

import subprocess
import sys
import time

import pytest

from cosetforge import verify


def _record(record_criterion, result, seconds, limit=None):
    timing = f" [{seconds:.1f}s" + (f", limit {limit}s]" if limit else "]")
    ok = result.passed and (limit is None or seconds < limit)
    status = "PASS" if ok else "FAIL"
    record_criterion(f"[{status}] {result.criterion:>2} {result.name}: {result.detail}{timing}")
    return ok


def _timed(fn, *args):
    t0 = time.perf_counter()
    res = fn(*args)
    return res, time.perf_counter() - t0


def test_01_subgroup_counts_exact(record_criterion):
    res, dt = _timed(verify.check_subgroup_counts, verify.GRID_ORDER)
    assert _record(record_criterion, res, dt, limit=300), res.detail


def test_02_coset_counts_exact(record_criterion):
    res, dt = _timed(verify.check_cosets, verify.GRID_ORDER)
    assert _record(record_criterion, res, dt), res.detail


def test_03_gaussian_binomial(record_criterion):
    res, dt = _timed(verify.check_gaussian)
    assert _record(record_criterion, res, dt, limit=1), res.detail


def test_04_bound_sandwich(record_criterion):
    res, dt = _timed(verify.check_bounds)
    assert _record(record_criterion, res, dt), res.detail


def test_05_coset_extraction(record_criterion):
    assert verify.DEFAULT_SAMPLES >= 500
    res, dt = _timed(verify.check_extraction, verify.DEFAULT_SAMPLES, verify.DEFAULT_SEED)
    assert _record(record_criterion, res, dt, limit=120), res.detail


def test_06_subgroup_types_fit(record_criterion):
    res, dt = _timed(verify.check_subgroup_types, verify.GRID_ORDER)
    assert _record(record_criterion, res, dt), res.detail


def test_07_norm_facts(record_criterion):
    res, dt = _timed(verify.check_norms)
    assert _record(record_criterion, res, dt), res.detail


def test_08_sunit_oracle(record_criterion):
    res, dt = _timed(verify.check_sunit, 4)
    assert _record(record_criterion, res, dt, limit=60), res.detail


def test_09_representable_truth_table(record_criterion):
    res, dt = _timed(verify.check_representable, verify.DEFAULT_SEED, 20)
    assert _record(record_criterion, res, dt), res.detail


def test_10_verify_is_deterministic(record_criterion, tmp_path):
    outs = []
    t0 = time.perf_counter()
    for k in range(2):
        path = tmp_path / f"report{k}.txt"
        done = subprocess.run([sys.executable, "-m", "cosetforge", "verify", "--seed", "0",
                               "--format", "text", "--out", str(path)],
                              capture_output=True, text=True)
        assert done.returncode == 0, done.stderr
        outs.append(path.read_bytes())
    dt = time.perf_counter() - t0
    same = outs[0] == outs[1]
    res = verify.CheckResult(10, "determinism", same,
                             f"two full verify runs, {len(outs[0])} bytes each, "
                             f"{'identical' if same else 'different'}")
    assert _record(record_criterion, res, dt), res.detail
