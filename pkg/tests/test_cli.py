import json
import shutil
import subprocess
import sys

import pytest

from conftest import FIXTURES
from wgcalc.cli import INPUT_ERROR, OK, OPEN, main
from wgcalc.examples import split_branch_diagram
from wgcalc.formats import diagram_to_dict, dump_sequence, parse
from wgcalc.graph import canonical_key, chain
from wgcalc.moves import OuterBlowup, build_sequence


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


def test_rigid_nodal_cubic(capsys):
    code, out = run_json(capsys, "rigid", "((9))")
    assert code == OK and out["surface_rigid"] is True and out["a1_sequence_length"] is None


def test_rigid_conic_has_witness(capsys):
    code, out = run_json(capsys, "--format", "short", "rigid", "[[4]]")
    assert code == OK and out["surface_rigid"] is False
    assert out["a1_sequence"]["steps"]
    end = parse(out["a1_end"])
    assert any(end.weight(v) == 0 and end.degree(v) <= 1 for v in end.vertices)


def test_enumerate_exit_codes(capsys):
    code, out = run_json(capsys, "enumerate", "[[0]]", "--pump=6")
    assert code == OK and out["classes"] == 1 and out["complete"] is True
    code, out = run_json(capsys, "enumerate", "[[0,-2]]", "--pump", "4", "--format", "short")
    assert code == OPEN and out["classes"] >= 4 and "[[0,0]]" in out["graphs"]


def test_validate_and_info(capsys):
    code, out = run_json(capsys, "validate", "[[-2,-1,-3]]")
    assert code == INPUT_ERROR and out["valid"] is False
    code, out = run_json(capsys, "validate", "--surface", "[[1]]")
    assert code == OK and out["valid"] is True
    code, out = run_json(capsys, "info", "[[-2,-2]]")
    assert out["discriminant"] == 3 and out["matrix"] == [[-2, 1], [1, -2]]
    assert out["inertia"] == {"plus": 0, "minus": 2, "zero": 0}


def test_minimal_model_policies(capsys):
    _, out = run_json(capsys, "minimal-model", "[[-1,-1,-3]]", "--format=short")
    assert canonical_key(parse(out["graph"])) == canonical_key(parse("[[0,-3]]"))
    _, out = run_json(capsys, "minimal-model", "[[-1,-1,-3]]", "--policy", "v1", "--format=short")
    assert canonical_key(parse(out["graph"])) == canonical_key(parse("[[0,-2]]"))
    assert out["contracted"] == ["v1"]


def test_standard_form_unique_and_triangulate(capsys):
    _, out = run_json(capsys, "standard-form", "[[2]]", "--format=short")
    assert out["graph"] == "[[0,0,-2]]" and out["zeros"] == 2
    _, out = run_json(capsys, "unique-minimal", "((0,0))")
    assert out == {"unique_minimal_model": True}
    _, out = run_json(capsys, "triangulate", "((-2,-1,-2,-1))")
    assert len(out["triangulation"]["triangles"]) == 2
    _, out = run_json(capsys, "triangulate", "((0,0))")
    assert out == {"triangulation": None}


def test_apply_and_dominate_from_files(capsys, tmp_path):
    g = chain([-1, 1])
    seq, _ = build_sequence(g, [])
    path = tmp_path / "seq.json"
    path.write_text(json.dumps({"steps": [{"op": "blowdown", "vertex": "v0"}, {"op": "outer_blowup", "at": "v1"}]}))
    code, out = run_json(capsys, "--format", "short", "apply", "[[-1,1]]", str(path))
    assert code == OK and out["trace"][1] == "[[2]]" and len(out["trace"]) == 3
    code, out = run_json(capsys, "dominate", "[[-1,1]]", str(path), "--minimize")
    assert code == OK and out["relatively_minimal"] is True
    assert sorted(v["w"] for v in out["top"]["vertices"]) == [-1, -1, 0]


def test_nodal_cubic_fixture_replays(capsys):
    code, out = run_json(capsys, "--format=short", "apply", "((9))", str(FIXTURES / "nodal_cubic.json"))
    assert code == OK
    assert canonical_key(parse(out["trace"][-1])) == canonical_key(parse("((0,0,-2,-2,-2,-2,-3))"))


def test_check_graph_lemma(capsys, tmp_path):
    path = tmp_path / "d.json"
    path.write_text(json.dumps(diagram_to_dict(split_branch_diagram())))
    code, out = run_json(capsys, "check-graph-lemma", str(path))
    assert code == OK and out["passed"] is True
    assert out["c"]["witnesses"][0]["vertex"] == "v"


def test_render(capsys):
    code, out = run(capsys, "render", "[[-1*,2]]")
    assert code == OK and out.startswith("graph G {") and "shape=box" in out


def test_examples(capsys):
    code, out = run_json(capsys, "examples")
    assert code == OK and any(e["name"] == "nodal-cubic" for e in out)
    code, out = run_json(capsys, "examples", "--verify")
    assert code == OK and out["failed"] == [] and out["checked"] > 30


@pytest.mark.parametrize(
    "argv",
    [
        ["rigid", "[[1,"],
        ["rigid", "[[-1,-2]]"],
        ["enumerate", "[[0]]", "--pump", "x"],
        ["frobnicate"],
        ["apply", "[[0]]", "/nonexistent/seq.json"],
    ],
)
def test_input_errors_exit_one(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    assert code == INPUT_ERROR
    if captured.out:
        assert "error" in json.loads(captured.out)


def test_apply_rejects_sequence_for_another_graph(capsys, tmp_path):
    seq, _ = build_sequence(chain([0]), [OuterBlowup("v0")])
    path = tmp_path / "seq.json"
    path.write_text(dump_sequence(seq))
    code, out = run_json(capsys, "apply", "[[1]]", str(path))
    assert code == INPUT_ERROR and out["kind"] == "SequenceError"


def test_stdin(monkeypatch, capsys):
    import io

    monkeypatch.setattr(sys, "stdin", io.StringIO("((9))"))
    code, out = run_json(capsys, "unique-minimal", "-")
    assert code == OK and out == {"unique_minimal_model": False}


def test_console_script():
    exe = shutil.which("wgcalc")
    cmd = [exe] if exe else [sys.executable, "-m", "wgcalc"]
    res = subprocess.run(cmd + ["rigid", "((9))"], capture_output=True, text=True, check=False)
    assert res.returncode == 0 and json.loads(res.stdout)["surface_rigid"] is True
