import csv
import math

import numpy as np
import pytest

from hashgrand.channel import ChannelParams
from hashgrand.codes import SystematicCode
from hashgrand.grand import GrandConfig
from hashgrand.harness import (CSV_HEADER, BlerPoint, HarnessIOError, SweepConfig, SweepConfigError,
                               csv_text, emit_summary, intervals_overlap, read_csv, run_point,
                               run_sweep, run_trial, wilson_interval, write_csv)


def test_header_only_for_empty_sweep(tmp_path):
    path = tmp_path / "empty.csv"
    write_csv([], path)
    assert path.read_text() == ",".join(CSV_HEADER) + "\n"
    assert CSV_HEADER == ("family", "k", "n", "ebn0_db", "trials", "block_errors",
                          "abandonments", "bler", "avg_queries", "seed")


def test_bler_field():
    point = BlerPoint("sha1", 128, 288, 4.0, 0.67, 0, trials=100, block_errors=7,
                      abandonments=3, total_queries=1234)
    row = csv_text([point]).splitlines()[1].split(",")
    assert row == ["sha1", "128", "288", "4", "100", "7", "3", "0.07", "12.34", "0"]


def test_six_significant_digits():
    point = BlerPoint("srlc", 8, 16, 1.0 / 3, 1.0, 5, trials=3, block_errors=1,
                      total_queries=10)
    row = dict(zip(CSV_HEADER, csv_text([point]).splitlines()[1].split(",")))
    assert row["ebn0_db"] == "0.333333"
    assert row["bler"] == "0.333333"
    assert row["avg_queries"] == "3.33333"


def test_write_error_has_path(tmp_path):
    bad = tmp_path / "missing" / "out.csv"
    with pytest.raises(HarnessIOError, match="missing"):
        write_csv([], bad)
    with pytest.raises(HarnessIOError):
        read_csv(bad)


def test_wilson():
    lo, hi = wilson_interval(7, 100)
    assert lo < 0.07 < hi
    # frozen: roots of (n + z^2) p^2 - (2 n phat + z^2) p + n phat^2 = 0
    assert (lo, hi) == pytest.approx((0.03431926, 0.13749515), abs=1e-8)
    assert wilson_interval(0, 50)[0] == 0.0
    assert wilson_interval(50, 50)[1] == 1.0
    assert intervals_overlap((0.1, 0.2), (0.2, 0.3))
    assert not intervals_overlap((0.1, 0.2), (0.21, 0.3))
    with pytest.raises(ValueError):
        wilson_interval(0, 0)


@pytest.mark.parametrize("kwargs", [
    dict(trials_per_point=0), dict(ebn0_grid=(2.0, 1.0)), dict(ebn0_grid=(1.0, 1.0)),
    dict(family="md5"), dict(k=20, n=20), dict(seed=-1), dict(seed=2 ** 64),
    dict(workers=0), dict(max_weight=-1), dict(early_stop_errors=0),
    dict(ebn0_grid=(float("nan"),)),
])
def test_config_validation(kwargs):
    base = dict(family="sha1", k=16, n=40, ebn0_grid=(1.0, 2.0), trials_per_point=10)
    base.update(kwargs)
    with pytest.raises(SweepConfigError):
        SweepConfig(**base)


def test_noiseless_trial():
    code = SystematicCode("sha1", 32, 80)
    out = run_trial(code, ChannelParams.from_sigma(0.0, 0.4), GrandConfig(), np.random.default_rng(0))
    assert out.status == "success" and out.queries == 1 and out.flips == 0


def test_heavy_noise_abandons():
    code = SystematicCode("sha256", 64, 192)
    out = run_trial(code, ChannelParams.from_sigma(3.0, 1 / 3), GrandConfig(max_weight=1),
                    np.random.default_rng(1))
    assert out.status == "abandoned" and out.queries == 1 + 192


def test_point_invariants():
    config = SweepConfig("srnlc", 32, 80, (2.0,), 300, max_weight=2, seed=3)
    point = run_point(config, ChannelParams.from_ebn0(2.0, config.rate))
    assert point.trials == 300
    assert 0 <= point.bler <= 1
    assert point.abandonments <= point.block_errors
    assert point.abandonments + point.undetected_errors == point.block_errors
    assert point.block_errors > 0


def test_early_stop_records_actual_trials():
    config = SweepConfig("srlc", 32, 80, (0.0,), 2000, max_weight=1, seed=0, early_stop_errors=10)
    (point,) = run_sweep(config)
    assert point.block_errors >= 10
    assert point.trials < 2000 and point.trials % 250 == 0


def test_repeat_runs_identical(tmp_path):
    config = SweepConfig("sha1", 24, 60, (3.0, 5.0), 200, max_weight=3, seed=9)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    write_csv(run_sweep(config), a)
    write_csv(run_sweep(config), b)
    assert a.read_bytes() == b.read_bytes()
    rows = read_csv(a)
    assert [r["ebn0_db"] for r in rows] == ["3", "5"]


def test_worker_count_invariance():
    base = dict(family="srnlc", k=24, n=60, ebn0_grid=(2.0, 4.0), trials_per_point=600,
                max_weight=3, seed=17)
    one = run_sweep(SweepConfig(**base, workers=1))
    four = run_sweep(SweepConfig(**base, workers=4))
    assert csv_text(one) == csv_text(four)
    assert [p.undetected_errors for p in one] == [p.undetected_errors for p in four]


def test_seed_changes_results():
    base = dict(family="srlc", k=24, n=60, ebn0_grid=(1.0,), trials_per_point=500, max_weight=2)
    a = run_sweep(SweepConfig(**base, seed=1))
    b = run_sweep(SweepConfig(**base, seed=2))
    assert csv_text(a) != csv_text(b)


def test_progress_and_summary():
    seen = []
    config = SweepConfig("sha1", 16, 40, (1.0, 2.0), 50, max_weight=2)
    points = run_sweep(config, progress=seen.append)
    assert seen == points
    text = emit_summary(points)
    assert len(text.splitlines()) == 3 and "Wilson" in text


def test_noiseless_digest_flag():
    config = SweepConfig("sha1", 16, 40, (0.0,), 250, max_weight=16, noiseless_digest=True)
    (point,) = run_sweep(config)
    assert point.undetected_errors == 0 or point.block_errors > 0
    assert math.isfinite(point.avg_queries)
