import json
from importlib import resources

import jsonschema
import pytest

from flagorient.cli import EXIT_LIMIT, EXIT_MISMATCH, EXIT_OK, EXIT_PARSE, cached_weyl_group, main
from flagorient.rootsys import build_root_system, weyl_enumerate

SCHEMA = json.loads(resources.files("flagorient").joinpath("data/output_schema.json").read_text())


@pytest.fixture(autouse=True)
def isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("FLAGORIENT_CACHE", str(tmp_path / "cache"))
    return tmp_path / "cache"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "json")
    env = json.loads(out)
    jsonschema.validate(env, SCHEMA)
    return code, env


def test_orient_flag_examples(capsys):
    code, env = run_json(capsys, "orient", "flag", "--type", "G2", "--theta", "2")
    assert code == EXIT_OK and env["result"]["orientable"] is False
    assert env["result"]["failing"] == [1]
    code, env = run_json(capsys, "orient", "flag", "--type", "E8", "--theta", "")
    assert env["result"]["orientable"] is True
    code, env = run_json(capsys, "orient", "flag", "--type", "B3:complex", "--theta", "1")
    assert env["result"]["orientable"] is True and env["query"]["type"] == "B3:complex"
    code, env = run_json(capsys, "orient", "flag", "--type", "A3", "--theta", "all", "--variant", "reduced")
    assert env["result"]["criterion"] == "reduced" and env["result"]["vacuous"]


def test_orient_bundle_examples(capsys):
    _, env = run_json(capsys, "orient", "bundle", "--type", "A2", "--theta", "", "--H", "1,1", "--w", "",
                      "--sign", "-")
    assert env["result"]["orientable"] is True and env["query"]["sign"] == "stable"
    _, env = run_json(capsys, "orient", "bundle", "--type", "A2", "--theta", "", "--H", "1,1", "--w", "longest",
                      "--sign", "+")
    assert env["result"]["orientable"] is True and env["result"]["w"] == "s1.s2.s1"
    _, env = run_json(capsys, "orient", "bundle", "--type", "A2", "--theta", "2", "--H", "3,0", "--sign", "+",
                      "--scan-w")
    comps = env["result"]["components"]
    assert any(not c["orientable"] and c["fiber_dimension"] == 1 for c in comps)
    assert env["result"]["non_orientable_w"] == ["s1", "s2.s1"]


def test_negative_H_rejected(capsys):
    code, _, err = run(capsys, "orient", "bundle", "--type", "A2", "--theta", "", "--H=-1,1")
    assert code == EXIT_PARSE and "closed positive chamber" in err


@pytest.mark.parametrize("argv,needle", [
    (("orient", "flag", "--type", "X3", "--theta", "1"), "X3"),
    (("orient", "flag", "--type", "A3", "--theta", "7"), "out of range"),
    (("orient", "flag", "--type", "A3", "--theta", "1,x"), "'x'"),
    (("orient", "bundle", "--type", "A2", "--theta", "", "--H", "1,1", "--w", "s1.q"), "s1.q"),
    (("orient", "bundle", "--type", "A2", "--theta", "", "--H", "1,1", "--sign", "up"), "up"),
    (("classical", "B3:5"), "[1, 3]"),
])
def test_parse_errors_exit_1_naming_the_token(capsys, argv, needle):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_PARSE and needle in err


def test_usage_error_exits_1(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["orient", "flag", "--type", "A3"])
    assert exc.value.code == EXIT_PARSE


def test_weyl_limit_exit_3(capsys):
    code, _, err = run(capsys, "orient", "bundle", "--type", "E8", "--theta", "", "--H", "1,1,1,1,1,1,1,1",
                       "--scan-w")
    assert code == EXIT_LIMIT and "696729600" in err
    code, _, _ = run(capsys, "orient", "bundle", "--type", "A3", "--theta", "", "--H", "1,1,1", "--scan-w",
                     "--weyl-limit", "10")
    assert code == EXIT_LIMIT


def test_scan_csv(capsys):
    code, out, _ = run(capsys, "scan", "--type", "A3", "--format", "csv")
    lines = out.strip().splitlines()
    assert lines[0] == "theta_mask,orientable,failing_alphas,sums"
    assert len(lines) == 9
    orientable = {int(l.split(",")[0]) for l in lines[1:] if l.split(",")[1] == "true"}
    # Sigma, the full flag, {1,2}/{2,3} (RP^3) and {1,3} (Gr_2(4))
    assert orientable == {0, 3, 5, 6, 7}


def test_scan_d4_and_g2(capsys):
    from flagorient.classical import orientable_closed_form, theta_to_dims
    from flagorient.rootsys import ParabolicSubset

    _, env = run_json(capsys, "scan", "--type", "D4")
    rows = env["result"]["rows"]
    assert len(rows) == 16
    for r in rows[:-1]:
        fd = theta_to_dims("D", 4, ParabolicSubset.of(r["theta"]))
        assert r["orientable"] == orientable_closed_form(fd)
    _, env = run_json(capsys, "scan", "--type", "G2")
    verdicts = {r["theta_mask"]: r["orientable"] for r in env["result"]["rows"]}
    assert verdicts == {0: True, 1: False, 2: False, 3: True}


def test_tables_exit_codes(capsys):
    code, env = run_json(capsys, "tables", "--sigma", "F4")
    assert code == EXIT_OK and env["result"]["ok"]
    code, env = run_json(capsys, "tables", "--sigma", "B5")
    assert code == EXIT_OK
    # prose/table conflict rows are flagged but do not fail the run
    code, env = run_json(capsys, "tables", "--sigma", "D8")
    assert code == EXIT_OK and env["result"]["conflict_keys"]
    code, env = run_json(capsys, "tables", "--sigma", "E8")
    rows = {r["key"]: r["computed"] for r in env["result"]["rows"]}
    assert rows["T5.D7-in-E8"] == -21 and rows["T6.E7-in-E8"] == -27
    assert code == EXIT_MISMATCH and env["result"]["mismatch_keys"] == ["T5.D6-in-E.delta1@E8"]
    code, _, err = run(capsys, "tables", "--sigma", "A2")
    assert code == EXIT_PARSE


def test_classical_examples(capsys):
    _, env = run_json(capsys, "classical", "A4:2")
    assert env["result"]["orientable"] is False
    _, env = run_json(capsys, "classical", "B4:2")
    assert env["result"]["orientable"] is True
    code, env = run_json(capsys, "classical", "D5:3,l+", "--verify")
    assert code == EXIT_OK and env["result"]["agree"] is True
    code, env = run_json(capsys, "classical", "C4:1", "--cross-validate")
    assert code == EXIT_OK and env["result"]["cross_validate"] == []


def test_json_is_deterministic(capsys):
    argv = ("orient", "bundle", "--type", "B3", "--theta", "1", "--H", "1,0,2", "--sign", "+", "--scan-w")
    _, a = run_json(capsys, *argv)
    _, b = run_json(capsys, *argv)
    a.pop("timings"), b.pop("timings")
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_text_output(capsys):
    code, out, _ = run(capsys, "orient", "flag", "--type", "G2", "--theta", "2")
    assert "NOT orientable" in out and "alpha_1: sum = 3" in out


def test_weyl_cache_roundtrip_and_validation(isolated_cache):
    rs = build_root_system("B3")
    first = cached_weyl_group(rs, 10**6)
    path = isolated_cache / "weyl-B3.json"
    assert path.exists()
    second = cached_weyl_group(rs, 10**6)
    assert [e.images for e in second] == [e.images for e in first] == [e.images for e in weyl_enumerate(rs)]
    # a truncated cache entry is rejected and rebuilt
    data = json.loads(path.read_text())
    data["elements"] = data["elements"][:5]
    path.write_text(json.dumps(data))
    assert len(cached_weyl_group(rs, 10**6)) == 48
    assert len(json.loads(path.read_text())["elements"]) == 48
    # rank > 6 is never written to the cache
    cached_weyl_group(build_root_system("A7"), 10**6)
    assert not (isolated_cache / "weyl-A7.json").exists()


def test_module_entry_point():
    import subprocess
    import sys

    proc = subprocess.run([sys.executable, "-m", "flagorient", "classical", "A3:2"], capture_output=True, text=True)
    assert proc.returncode == 0 and "orientable" in proc.stdout
