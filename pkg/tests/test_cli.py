import json
import subprocess
import sys

import pytest

from ballquot import cli, data


def run_cli(*args, env=None):
    return subprocess.run([sys.executable, "-m", "ballquot", *args], capture_output=True, text=True, env=env)


def test_list_and_resolve():
    assert cli.resolve("chern.n3")[1] == 3
    assert cli.resolve("gamma1.ab")[1] is None
    with pytest.raises(cli.UnknownClaim):
        cli.resolve("nope")
    with pytest.raises(cli.UnknownClaim):
        cli.resolve("gamma1.ab.n3")
    assert cli.main(["list"]) == 0


def test_ordering_respects_dependencies():
    waves = cli.ordered(["tau.kernel", "gw.words", "chern.n3"])
    flat = {c: i for i, w in enumerate(waves) for c in w}
    assert flat["gw.words"] < flat["tau.kernel"]


def test_chern_claim_witness(capsys):
    assert cli.main(["verify", "--claim", "chern.n3", "--no-timing"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["schema"] == cli.SCHEMA
    (r,) = doc["results"]
    assert r["claim"] == "chern.n3" and r["status"] == "pass"
    assert r["witness"]["c1sq"] == 621 and r["witness"]["c2"] == 243
    assert "seconds" not in r


def test_empty_selection(capsys):
    assert cli.main(["verify"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["results"] == [] and doc["summary"]["exit_code"] == 0


def test_convention_both_records_passing(capsys):
    assert cli.main(["verify", "--claim", "tau.relations", "--convention", "both"]) == 0
    w = json.loads(capsys.readouterr().out)["results"][0]["witness"]
    assert w["passing"] == ["left", "right"]


def test_skip_and_exit_codes(capsys):
    assert cli.main(["verify", "--claim", "chern.n4"]) == 0
    assert json.loads(capsys.readouterr().out)["results"][0]["status"] == "skipped"
    assert cli.main(["verify", "--claim", "bogus.claim"]) == 3
    assert cli.main(["verify", "--claim", "chern.n3", "--data-dir", "/nonexistent/dir"]) == 3
    assert cli.main(["verify", "--claim", "gamma.ab.n5", "--max-cosets", "100"]) == 2


def test_deterministic_json_without_timing():
    args = ["verify", "--claim", "gamma1.ab", "--claim", "chern.n3", "--claim", "dm.euler",
            "--claim", "tau.orders.n3", "--workers", "2", "--no-timing"]
    a, b = run_cli(*args), run_cli(*args)
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout


def test_mutated_tau_matrix_fails(data_copy, capsys):
    path = data_copy / "tau_h.mat"
    lines = path.read_text().splitlines()
    row = lines.index("h1:") + 1
    entries = lines[row].split()
    entries[1] = str(int(entries[1]) + 1)    # upper triangular entry: still unimodular
    lines[row] = " ".join(entries)
    path.write_text("\n".join(lines) + "\n")
    code = cli.main(["verify", "--claim", "tau.relations", "--data-dir", str(data_copy)])
    out = json.loads(capsys.readouterr().out)
    assert code == 1
    r = out["results"][0]
    assert r["status"] == "fail" and r["witness"]["passing"] == []


def test_missing_data_file(data_copy, capsys):
    (data_copy / "gamma1.pres").unlink()
    assert cli.main(["verify", "--claim", "gamma1.ab", "--data-dir", str(data_copy)]) == 3


def test_env_var_data_dir(data_copy):
    import os
    (data_copy / "gamma1.pres").unlink()
    env = dict(os.environ, **{data.ENV_VAR: str(data_copy)})
    assert run_cli("verify", "--claim", "gamma1.ab", env=env).returncode == 3


def test_text_format_and_output_file(tmp_path):
    out = tmp_path / "r.txt"
    assert cli.main(["verify", "--claim", "chern.n3", "--format", "text", "-o", str(out)]) == 0
    text = out.read_text()
    assert text.startswith("PASS") and "pass=1" in text


def test_all_registered_claims_listed():
    ids = cli.select(None, True, [3])
    assert len(ids) == len(cli.REGISTRY)
    for stem in ("gn.order.n3", "delta.ab.n3", "dm.index72", "chern.n3", "geometry.degrees.n3"):
        assert stem in ids
