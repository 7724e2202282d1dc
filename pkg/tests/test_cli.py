import subprocess
import sys

import pytest

from hashgrand.cli import main, parse_grid
from hashgrand.harness import CSV_HEADER


def test_parse_grid():
    assert parse_grid("0:2:0.5") == (0.0, 0.5, 1.0, 1.5, 2.0)
    assert parse_grid("3") == (3.0,)
    assert parse_grid("1,2.5") == (1.0, 2.5)


def test_capacity(capsys):
    assert main(["capacity", "--k", "128", "--n", "288", "--ebn0", "4"]) == 0
    out = capsys.readouterr().out
    assert "0.669231" in out and "+0.198823" in out
    assert main(["capacity", "--k", "128", "--n", "288", "--ebn0", "4", "--model", "soft"]) == 0


def test_sweep_writes_csv(tmp_path, capsys):
    out = tmp_path / "bler.csv"
    code = main(["sweep", "--family", "srnlc", "--k", "16", "--n", "40", "--ebn0", "2:4:1",
                 "--trials", "100", "--max-weight", "3", "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == ",".join(CSV_HEADER) and len(lines) == 4
    assert lines[1].startswith("srnlc,16,40,2,100,")


def test_sweep_from_config_file(tmp_path):
    cfg = tmp_path / "code.cfg"
    cfg.write_text("family = srlc\nk = 16\nn = 40\nseed = 4\n")
    out = tmp_path / "bler.csv"
    assert main(["sweep", "--config", str(cfg), "--ebn0", "3", "--trials", "50",
                 "--max-weight", "2", "--out", str(out)]) == 0
    assert out.read_text().splitlines()[1].startswith("srlc,16,40,3,50,")
    assert out.read_text().splitlines()[1].endswith(",4")


@pytest.mark.parametrize("argv", [
    ["sweep", "--family", "md5", "--ebn0", "1", "--out", "x.csv"],
    ["sweep", "--k", "10", "--n", "10", "--ebn0", "1", "--out", "x.csv"],
    ["sweep", "--ebn0", "3:1:1", "--out", "x.csv"],
    ["sweep", "--trials", "0", "--ebn0", "1", "--out", "x.csv"],
    ["capacity", "--k", "128"],
    ["decode-demo", "--flip-bits", "99"],
    ["bogus"],
])
def test_validation_exit_code(argv, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    with pytest.raises(SystemExit) as exc:
        sys.exit(main(argv))
    assert exc.value.code == 1


def test_io_exit_code(tmp_path):
    out = tmp_path / "nope" / "bler.csv"
    assert main(["sweep", "--k", "16", "--n", "40", "--ebn0", "5", "--trials", "10",
                 "--max-weight", "1", "--out", str(out)]) == 2
    assert main(["sweep", "--config", str(tmp_path / "missing.cfg"), "--ebn0", "5",
                 "--out", str(tmp_path / "a.csv")]) == 2


def test_decode_demo(capsys):
    assert main(["decode-demo", "--family", "sha1", "--flip-bits", "0,20", "--max-weight", "2"]) == 0
    out = capsys.readouterr().out
    assert "VERIFIED" in out and "correct" in out
    assert "query        1" in out


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "hashgrand", "capacity", "--k", "1", "--n", "2",
                          "--ebn0", "0"], capture_output=True, text=True)
    assert res.returncode == 0 and "rate k/n      0.500000" in res.stdout
