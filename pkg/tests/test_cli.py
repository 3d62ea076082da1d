import json
import math

import pytest

from coset_resonance import cli
from coset_resonance.report_io import parse


def run(args, capsys):
    code = cli.main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_default_passes(capsys):
    code, out, _ = run(["verify"], capsys)
    assert code == 0
    _, rows = parse(out)
    assert all(r["passed"] for r in rows) and len(rows) == 8


def test_verify_deterministic(capsys):
    a = run(["verify", "--q-max", "150", "--seed", "3"], capsys)[1]
    b = run(["verify", "--q-max", "150", "--seed", "3"], capsys)[1]
    assert a == b


def test_non_prime_is_invalid_input(capsys):
    code, _, err = run(["verify", "--q", "100"], capsys)
    assert code == 2 and "prime" in err


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["scan", "--format", "xml"])
    assert exc.value.code == 2


def test_scan_q101(capsys):
    code, out, _ = run(["scan", "--q", "101"], capsys)
    assert code == 0
    _, rows = parse(out)
    assert [(r["K"], r["c"]) for r in rows] == [(K, c) for K in (1, 2, 4, 5, 10) for c in range(K)]
    assert all(r["lower_bound"] <= r["max_abs_L"] + 1e-6 for r in rows)


def test_scan_empty_range(capsys):
    code, out, _ = run(["scan", "--q-min", "24", "--q-max", "28"], capsys)
    assert code == 0 and len(out.splitlines()) == 2


def test_scan_json_matches_csv(capsys):
    _, a = parse(run(["scan", "--q", "103", "--index", "3"], capsys)[1], "csv")
    _, b = parse(run(["scan", "--q", "103", "--index", "3", "--format", "json"], capsys)[1], "json")
    assert a == b and len(a) == 3


def test_scan_overrides_and_workers(tmp_path, capsys):
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["scan", "--q-min", "101", "--q-max", "140", "--index", "2"]
    assert cli.main(args + ["--out", str(out1)]) == 0
    assert cli.main(args + ["--out", str(out2), "--workers", "3"]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    code, out, _ = run(["scan", "--q", "1009", "--index", "2", "--coset", "1", "--N", "2", "--X", "1.5"], capsys)
    _, rows = parse(out)
    assert code == 0 and len(rows) == 1 and rows[0]["N"] == 2 and rows[0]["X"] == 1.5


def test_scan_bad_override_is_invalid(capsys):
    code, _, err = run(["scan", "--q", "1009", "--index", "3", "--coset", "1", "--N", "40"], capsys)
    assert code == 2


def test_budget_refusal(capsys):
    code, _, err = run(["scan", "--q", "1000003"], capsys)
    assert code == 3 and "budget" in err


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"q": 101, "index": [2], "format": "json"}))
    code, out, _ = run(["scan", "--config", str(cfg)], capsys)
    assert code == 0 and parse(out, "json")[1][0]["K"] == 2
    code, out, _ = run(["scan", "--config", str(cfg), "--format", "csv", "--index", "5"], capsys)
    assert code == 0 and {r["K"] for r in parse(out)[1]} == {5}
    cfg.write_text(json.dumps({"nonsense": 1}))
    assert run(["scan", "--config", str(cfg)], capsys)[0] == 2
    cfg.write_text("{not json")
    assert run(["scan", "--config", str(cfg)], capsys)[0] == 2


def test_resonate(capsys):
    code, out, _ = run(["resonate", "--N", "2", "--resonator", "optimal"], capsys)
    (row,) = parse(out)[1]
    assert code == 0 and abs(row["optimum"] - (1 + 1 / (2 * math.sqrt(2)))) < 1e-10
    code, out, _ = run(["resonate", "--N", "1000"], capsys)
    (row,) = parse(out)[1]
    assert row["degenerate"] is True and row["rayleigh"] == 1
    assert run(["resonate"], capsys)[0] == 2


def test_lemma5(capsys):
    code, out, _ = run(["lemma5", "--q-min", "3", "--q-max", "500"], capsys)
    assert code == 0 and all(r["holds"] for r in parse(out)[1])
    code, out, _ = run(["lemma5", "--q-min", "3", "--q-max", "100", "--index", "2", "--N", "12"], capsys)
    rows = parse(out)[1]
    assert any(r["witness_h"] is not None for r in rows)


def test_bounds(tmp_path, capsys):
    code, out, _ = run(["bounds", "--q", "101", "--index", "1,2,3,5"], capsys)
    rows = parse(out)[1]
    assert code == 0 and all(r["measured_log_max"] is None for r in rows)
    L = rows[0]["calL"]
    assert abs(rows[0]["theorem_exponent"] - L / math.sqrt(3)) < 1e-15
    mixed = {r["K"]: r["theorem_exponent"] for r in rows if r["profile"] == "mixed"}
    for K in (2, 3, 5):
        assert abs(mixed[K] * math.sqrt(2 * K - 1) - L / math.sqrt(3)) < 1e-14
    scan = tmp_path / "scan.csv"
    assert cli.main(["scan", "--q", "101", "--out", str(scan)]) == 0
    code, out, _ = run(["bounds", "--q", "101", "--index", "1,5", "--scan-data", str(scan)], capsys)
    rows = parse(out)[1]
    assert rows[0]["measured_log_max"] is not None
    assert any(r["profile"] == "mixed" and r["measured_log_max"] is not None for r in rows)
