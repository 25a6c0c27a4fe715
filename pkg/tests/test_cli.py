import json
from pathlib import Path

import pytest

from symsig import serial
from symsig.cli import builtin_scenarios, main, parse_entry, run_scenario
from symsig.fixtures import d1_pair, diagonal_lagrangian, disk2, fixture
from symsig.rings import LZ, Laurent
from symsig.structures import PoincarePair, validate_pair

GOLDEN = Path(__file__).parent / "fixtures" / "golden" / "random_pair_seed0_dim2.json"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, name, obj) -> str:
    p = tmp_path / name
    p.write_text(serial.dumps(obj))
    return str(p)


def test_random_pair_matches_golden_file(capsys):
    code, out, _ = run(capsys, "fixture", "random-pair", "--seed", "0", "--dim", "2")
    assert code == 0
    assert out == GOLDEN.read_text()
    P = serial.load(json.loads(GOLDEN.read_text()))
    assert isinstance(P, PoincarePair) and P.dim == 2 and validate_pair(P).ok


def test_random_pair_is_deterministic(capsys):
    a = run(capsys, "fixture", "random-pair", "--seed", "9", "--dim", "3")[1]
    b = run(capsys, "fixture", "random-pair", "--seed", "9", "--dim", "3")[1]
    assert a == b


@pytest.mark.parametrize("argv", [
    ("fixture", "random-pair", "--dim", "6"),
    ("fixture", "random-pair", "--dim", "2", "--max-rank", "9"),
    ("fixture", "no-such-fixture"),
    ("validate", "/nonexistent.json"),
])
def test_input_errors_exit_1(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 1 and err.startswith("error:")


def test_usage_error_exits_1(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["sigma-even"])
    assert exc.value.code == 1
    capsys.readouterr()


def test_validate_pass_and_fail(capsys, tmp_path):
    good = write(tmp_path, "good.json", d1_pair("t"))
    code, out, _ = run(capsys, "validate", good)
    assert code == 0 and json.loads(out)["ok"]
    P = d1_pair("t")
    bad = PoincarePair(P.boundary, P.ambient, P.inclusion, [{0: P.component(0, 0)}])
    code, out, _ = run(capsys, "validate", write(tmp_path, "bad.json", bad), "--format", "text")
    assert code == 2
    assert "FAIL      pair relation (degree 0)" in out


def test_sigma_commands(capsys, tmp_path):
    code, out, _ = run(capsys, "sigma-even", write(tmp_path, "d.json", disk2()), "--variant", "1")
    assert code == 0 and json.loads(out)["fingerprint"]["signatures"] == [0, 0]
    code, out, _ = run(capsys, "sigma-odd", write(tmp_path, "t.json", d1_pair("t")),
                       "--lagrangian", write(tmp_path, "k.json", diagonal_lagrangian()))
    assert code == 0 and json.loads(out)["representative"]["dim"] == 1


def test_glue_and_torus(capsys, tmp_path):
    t, e = write(tmp_path, "t.json", d1_pair("t")), write(tmp_path, "e.json", d1_pair("e"))
    code, out, _ = run(capsys, "glue", t, e)
    assert code == 0
    assert json.loads(out)["fingerprint"]["betti"] == [[1, 1], [0, 0]]
    from symsig.chain import ChainMap
    C = disk2().boundary
    w = ChainMap.identity(C.complex)
    code, out, _ = run(capsys, "torus", write(tmp_path, "c.json", C), "--map",
                       write(tmp_path, "w.json", w))
    assert code == 0 and json.loads(out)["fingerprint"]["betti"][0] == [1, 2, 1]


def test_witt_strict_exit_code(capsys, tmp_path):
    path = write(tmp_path, "phi.json", fixture("formation-paper"))
    code, out, _ = run(capsys, "witt", path)
    assert code == 0 and json.loads(out)["status"] == "inconclusive"
    code, _, _ = run(capsys, "witt", path, "--strict")
    assert code == 3


def test_out_flag_writes_file(capsys, tmp_path):
    target = tmp_path / "o.json"
    code, out, _ = run(capsys, "fixture", "disk2", "--out", str(target))
    assert code == 0 and out == ""
    assert serial.load(json.loads(target.read_text())) == disk2()


@pytest.mark.parametrize("name", builtin_scenarios())
def test_builtin_scenarios_pass(name):
    report = run_scenario(name)
    assert report["passed"], json.dumps(report, indent=1)[:2000]


def test_run_strict_and_text(capsys):
    code, out, _ = run(capsys, "run", "paper-circle-example", "--strict")
    assert code == 3
    code, out, _ = run(capsys, "run", "paper-circle-example", "--format", "text")
    assert code == 0 and out.startswith("scenario paper-circle-example: pass")


def test_run_reports_are_byte_identical(capsys):
    a = run(capsys, "run", "gluing-formula", "--seed", "4")[1]
    b = run(capsys, "run", "gluing-formula", "--seed", "4")[1]
    assert a == b and "seconds" not in a


def test_run_timing_is_opt_in(capsys):
    out = run(capsys, "run", "empty", "--timing")[1]
    assert json.loads(out)["passed"]


def test_failing_scenario_exits_2(capsys, tmp_path):
    scen = {"name": "wrong", "steps": [
        {"id": "p", "op": "fixture", "args": {"name": "d1-pair-t"}},
        {"id": "f", "op": "middle_form", "args": {"target": "@p"},
         "expect": {"equals_fixture": "form-diag-1-minus1"}},
        {"id": "g", "op": "fixture", "args": {"name": "disk2"}, "expect": {"dim": 3}}]}
    path = tmp_path / "wrong.json"
    path.write_text(json.dumps(scen))
    code, out, _ = run(capsys, "run", str(path))
    assert code == 2
    steps = json.loads(out)["runs"][0]["steps"]
    assert [s["status"] for s in steps] == ["pass", "pass", "fail"]


def test_scenario_with_cycle_is_rejected(capsys, tmp_path):
    scen = {"name": "cyc", "steps": [
        {"id": "a", "op": "middle_form", "args": {"target": "@b"}},
        {"id": "b", "op": "middle_form", "args": {"target": "@a"}}]}
    path = tmp_path / "cyc.json"
    path.write_text(json.dumps(scen))
    assert run(capsys, "run", str(path))[0] == 1


def test_parse_entry():
    t = Laurent.monomial(1)
    assert parse_entry(LZ, "t") == t
    assert parse_entry(LZ, "1 - t^-1") == 1 - Laurent.monomial(-1)
    assert parse_entry(LZ, "2t^2 + 3") == 2 * t * t + 3
