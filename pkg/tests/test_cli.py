import io
import json
import subprocess
import sys

import numpy as np
import pytest

from qcl import cli
from qcl.config import get_tolerances


def run(argv, capsys, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def _matrix(doc):
    return np.array(doc["re"]) + 1j * np.array(doc["im"])


@pytest.fixture
def files(tmp_path, capsys):
    paths = {}
    for name, argv in {"bell": ["state", "bell"], "mm": ["state", "maxmixed", "--dim", "2"],
                       "k0": ["state", "pure", "--dim", "2", "--index", "0"],
                       "k1": ["state", "pure", "--amplitudes", "0,1"]}.items():
        p = tmp_path / f"{name}.json"
        assert cli.main(argv + ["--out", str(p)]) == 0
        paths[name] = str(p)
    capsys.readouterr()
    return paths


def test_state_kinds(capsys):
    code, out, _ = run(["state", "bell"], capsys)
    assert code == 0
    rho = _matrix(json.loads(out))
    assert np.allclose(rho[[0, 0, 3, 3], [0, 3, 0, 3]], 0.5)
    code, out, _ = run(["state", "werner", "--p", "0.25"], capsys)
    assert code == 0 and np.isclose(np.trace(_matrix(json.loads(out))).real, 1.0)


def test_state_from_spec_document(capsys, monkeypatch):
    spec = json.dumps({"kind": "pure", "params": {"amplitudes": [1, 1]}})
    code, out, _ = run(["state", "--spec", "-"], capsys, spec, monkeypatch)
    assert code == 0
    assert np.allclose(_matrix(json.loads(out)), np.full((2, 2), 0.5))


def test_mix_of_files(files, capsys):
    code, out, _ = run(["state", "mix", files["k0"], files["k1"], "--weights", "0.5,0.5"], capsys)
    assert code == 0
    assert np.allclose(_matrix(json.loads(out)), np.eye(2) / 2)


def test_neg_of_maximally_mixed_is_empty(files, capsys):
    code, out, _ = run(["op", "neg", files["mm"]], capsys)
    assert code == 0 and json.loads(out) == {"dim": 2, "kind": "empty"}


def test_member_of_preimage(files, tmp_path, capsys):
    pre = tmp_path / "pre.json"
    assert cli.main(["map", "tau-inv", files["mm"], "--shape", "2x2", "--out", str(pre)]) == 0
    code, out, _ = run(["op", "member", str(pre), files["bell"]], capsys)
    assert code == 0 and json.loads(out)["result"] is True


def test_join_and_leq(files, tmp_path, capsys):
    seg = tmp_path / "seg.json"
    assert cli.main(["op", "join", files["k0"], files["k1"], "--out", str(seg)]) == 0
    code, out, _ = run(["op", "leq", files["mm"], str(seg)], capsys)
    assert code == 0 and json.loads(out)["result"] is True
    code, out, _ = run(["op", "meet", files["k0"], files["k1"]], capsys)
    assert json.loads(out)["kind"] == "empty"


def test_maps_on_bell(files, capsys):
    code, out, _ = run(["map", "lambda-tau", files["bell"], "--shape", "2x2"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["kind"] == "vpoly" and len(doc["generators"]) == 1
    assert np.allclose(_matrix(doc["generators"][0]), np.eye(4) / 4)
    code, out, _ = run(["map", "classify", files["bell"], "--shape", "2x2"], capsys)
    assert json.loads(out)["verdict"] == "Entangled"
    code, out, _ = run(["map", "tau", files["bell"], "--shape", "2x2"], capsys)
    assert set(json.loads(out)) == {"tau1", "tau2"}
    code, out, _ = run(["map", "lambda", files["k0"], files["k1"]], capsys)
    assert code == 0 and json.loads(out)["kind"] == "vpoly"


def test_stdin_list_of_documents(files, capsys, monkeypatch):
    docs = [json.load(open(files["k0"])), json.load(open(files["k1"]))]
    code, out, _ = run(["op", "join"], capsys, json.dumps(docs), monkeypatch)
    assert code == 0 and len(json.loads(out)["generators"]) == 2


@pytest.mark.parametrize("argv", [
    ["state", "werner", "--p", "1.5"],
    ["state", "pure", "--amplitudes", "0,0"],
    ["op", "neg", "/nonexistent/file.json"],
    ["map", "classify", "{bell}"],
    ["op", "member", "{mm}", "{bell}"],
])
def test_usage_errors_are_structured(argv, files, capsys):
    argv = [a.format(**files) for a in argv]
    code, out, err = run(argv, capsys)
    assert code == 2
    assert set(json.loads(out)["error"]) == {"type", "message"}
    assert err.startswith("qcl: error:")


def test_malformed_json_input(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text('{"kind": "vpoly", "generators": [')
    code, out, _ = run(["op", "neg", str(p)], capsys)
    assert code == 2 and "error" in json.loads(out)


def test_bad_option_values_exit_2(capsys):
    for argv in (["suite", "--tol.psd", "-1"], ["suite", "--trials", "0"]):
        with pytest.raises(SystemExit) as exc:
            cli.main(argv)
        assert exc.value.code == 2
    for argv in (["suite", "--shape", "2by2"], ["suite", "--only", "no_such_prop"]):
        code, out, _ = run(argv, capsys)
        assert code == 2 and "error" in json.loads(out)


def test_tolerance_override_is_scoped(capsys):
    before = get_tolerances()
    code, out, _ = run(["suite", "--only", "mix_density", "--trials", "2", "--tol.psd", "1e-6"], capsys)
    assert code == 0 and json.loads(out)["tolerances"]["psd"] == 1e-6
    assert get_tolerances() == before


def test_suite_determinism_and_env_seed(capsys, monkeypatch):
    argv = ["suite", "--only", "mix_density", "partial_trace_linear", "--trials", "3", "--deterministic"]
    _, a, _ = run(argv + ["--seed", "5"], capsys)
    _, b, _ = run(argv + ["--seed", "5"], capsys)
    assert a == b
    monkeypatch.setenv("QCL_SEED", "5")
    _, c, _ = run(argv, capsys)
    assert c == a
    monkeypatch.setenv("QCL_SEED", "banana")
    code, _, _ = run(argv, capsys)
    assert code == 2


def test_module_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "qcl", "state", "maxmixed", "--dim", "3"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert np.allclose(_matrix(json.loads(res.stdout)), np.eye(3) / 3)
