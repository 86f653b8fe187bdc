import json

import numpy as np
import pytest

from bergshift import cli
from bergshift.coefficients import JacobiSequence, VerblunskySequence, constant_jacobi
from bergshift.hessenberg import jacobi_truncation
from bergshift.io import batch_request_rows, config_hash, fmt, write_csv


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# -- model strings ---------------------------------------------------------------


def test_parse_model_forms(tmp_path):
    assert isinstance(cli.parse_model("jacobi:a=0.5,b=0"), JacobiSequence)
    assert cli.parse_model("jacobi:a=1;2,b=0;3").take(3)[0].tolist() == [1, 2, 1]
    assert cli.parse_model("verblunsky:alpha=0.3")[5] == 0.3
    assert cli.parse_model("verblunsky:decay=1,offset=2")[0] == 0.5
    assert cli.parse_model("verblunsky:values=0.1;0.2i").take(2).tolist() == [0.1, 0.2j]
    assert cli.parse_model("measure:roots=8").count == 8
    spec = {"model": "verblunsky", "kind": "constant", "params": {"value": 0.25}, "seed": None}
    assert cli.parse_model(json.dumps(spec))[3] == 0.25
    path = tmp_path / "m.json"
    path.write_text(json.dumps(spec))
    assert isinstance(cli.parse_model(f"@{path}"), VerblunskySequence)


@pytest.mark.parametrize("bad", ["jacobi:a=0.5,c=1", "verblunsky:", "torus:x=1", "jacobi:a"])
def test_parse_model_rejects(bad):
    with pytest.raises(cli.ConfigError):
        cli.parse_model(bad)


# -- commands --------------------------------------------------------------------


def test_ratio_example(capsys):
    code, out, _ = run(capsys, "ratio", "--model", "jacobi:a=0.5,b=0", "--n", "200", "--z", "2+0i")
    assert code == 0
    assert abs(float(out.split(":")[-1]) - 0.535898) < 1e-6


def test_compare_degenerate_example(capsys, tmp_path):
    code, out, _ = run(capsys, "compare", "--paper-example", "degenerate", "--n", "500", "--out", str(tmp_path))
    assert code == 0
    summary = json.loads((tmp_path / "manifest.json").read_text())["summary"]
    assert summary["ratio_A_at_r"] <= 0.05 and summary["ratio_B_at_r"] <= 0.05
    assert summary["diagonal_gap"] == pytest.approx(0.9589, abs=1e-2)
    assert summary["window_tail_difference"] == pytest.approx(2 * np.sin(0.5), abs=1e-2)


def test_invalid_alpha_in_config_exits_2(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"command": "ratio", "model": "verblunsky:values=0.1;0.2;1.5", "n": 2}))
    code, _, err = run(capsys, "run", str(cfg))
    assert code == 2 and "alpha_2" in err


def test_unknown_config_key_exits_2(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"model": "jacobi:a=0.5,b=0", "n": 10, "colour": "red"}))
    code, _, err = run(capsys, "ratio", "--config", str(cfg))
    assert code == 2 and "colour" in err


def test_flags_override_config(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"model": "jacobi:a=0.5,b=0", "n": 10, "z": "3"}))
    out_dir = tmp_path / "o"
    assert run(capsys, "ratio", "--config", str(cfg), "--n", "20", "--out", str(out_dir))[0] == 0
    manifest = json.loads((out_dir / "manifest.json").read_text())
    assert manifest["config"]["n"] == 20 and manifest["config"]["z"] == "3"


def test_numeric_error_exits_3(capsys):
    code, _, err = run(capsys, "moments", "--model", "verblunsky:alpha=0.2", "--n", "10", "--N", "11", "--j", "3")
    assert code == 3 and "numeric" in err


def test_io_error_exits_4(capsys, tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    code, _, _ = run(capsys, "zeros", "--model", "jacobi:a=0.5,b=0", "--n", "3", "--out", str(blocker / "sub"))
    assert code == 4


def test_random_needs_seed(capsys):
    code, _, err = run(capsys, "random", "--model", "verblunsky:alpha=0.3", "--dist", "atomic:0.3;-0.3")
    assert code == 2 and "seed" in err


def test_manifest_records_defaults_and_versions(capsys, tmp_path):
    assert run(capsys, "right-limit", "--model", "jacobi:a=0.5,b=0", "--sub", "5:5:40", "--out", str(tmp_path))[0] == 0
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["defaults"]["epsilon"] == 1e-3
    assert manifest["defaults"]["m"] == 2
    assert set(manifest["versions"]) == {"bergshift", "numpy", "scipy", "python"}
    assert manifest["config_hash"] == config_hash(manifest["config"])
    assert manifest["summary"]["converged"] is True


@pytest.mark.parametrize(
    "argv",
    [
        ["build-matrix", "--model", "verblunsky:decay=1", "--N", "6"],
        ["laurent", "--model", "jacobi:a=0.5,b=0", "--n", "30", "--terms", "8"],
        ["moments", "--model", "verblunsky:decay=0.5i", "--n", "12"],
        ["zeros", "--model", "measure:roots=16", "--n", "6"],
        ["compare", "--paper-example", "stripping", "--n", "80"],
        ["compare", "--model", "verblunsky:decay=1", "--model-b", "verblunsky:alpha=0", "--n", "64", "--quantity", "h"],
        ["random", "--model", "verblunsky:alpha=0.3", "--dist", "atomic:0.3;-0.3", "--H", "3000", "--seed", "5", "--ensemble", "2"],
        ["universal", "--kind", "jacobi", "--base", "1;2;3", "--base-b", "0;1;2", "--length", "60"],
    ],
)
def test_outputs_are_byte_identical(capsys, tmp_path, argv):
    assert run(capsys, *argv, "--out", str(tmp_path / "a"))[0] == 0
    assert run(capsys, *argv, "--out", str(tmp_path / "b"))[0] == 0
    files = sorted(p.name for p in (tmp_path / "a").iterdir())
    assert "manifest.json" in files and any(f.endswith(".csv") for f in files)
    for name in files:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_run_subcommand(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"command": "universal", "kind": "circle", "base": [0.1, 0.2, 0.3], "length": 8}))
    code, out, _ = run(capsys, "run", str(cfg))
    assert code == 0
    assert [line.split(",")[1] for line in out.split()] == ["0.1", "0.1", "0.2", "0.2", "0.1", "0.1", "0.2", "0.3"]


def test_batch_request(capsys, tmp_path):
    req = tmp_path / "req.json"
    req.write_text(json.dumps({"n": {"start": 5, "stop": 7}, "z": {"kind": "circle", "radius": 2, "points": 4}}))
    assert run(capsys, "ratio", "--model", "jacobi:a=0.5,b=0", "--request", str(req), "--out", str(tmp_path / "o"))[0] == 0
    lines = (tmp_path / "o" / "batch.csv").read_text().splitlines()
    assert lines[0] == "n,re_z,im_z,re_value,im_value"
    assert len(lines) == 1 + 3 * 4


# -- io helpers --------------------------------------------------------------------


def test_fmt_round_trips():
    for x in (0.1, 1 / 3, 1e-300, -2.5e17, np.float64(0.535898)):
        assert float(fmt(x)) == x
    assert fmt(np.int64(3)) == "3" and fmt(True) == "true"


def test_write_csv(tmp_path):
    path = write_csv(tmp_path / "x.csv", ("a", "b"), [(1, 0.5), (2, 1 / 3)])
    assert path.read_text() == "a,b\n1,0.5\n2,0.3333333333333333\n"


def test_batch_rows_monic_and_bad_keys():
    J = jacobi_truncation(constant_jacobi(0.5, 0.0), 10)
    header, rows = batch_request_rows(J, {"n": [2, 2], "z": {"kind": "points", "values": ["1"]}, "quantity": "monic"})
    assert rows == [(2, 1.0, 0.0, 0.75, 0.0)]
    with pytest.raises(ValueError):
        batch_request_rows(J, {"n": [1, 2], "z": {"kind": "points", "values": [2]}, "bogus": 1})
