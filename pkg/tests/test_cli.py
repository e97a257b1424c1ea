import io
import json

from grady.cli import golden, run
from grady.gradedmat import GradingParams


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def write_params(tmp_path, name, params):
    path = tmp_path / name
    path.write_text(params.to_json())
    return str(path)


def test_gda_description():
    code, out, _ = call("gda", "D(2;-1)")
    assert code == 0
    info = json.loads(out)
    assert info["Delta"] == "H" and info["support"] == "Z2^2" and info["phi0"] == "symplectic"


def test_table_matches_golden_files():
    for which in ("m8", "d4"):
        code, out, _ = call("table", which)
        assert code == 0
        assert out == golden(f"table_{which}.txt").rstrip("\n") + "\n"
        code, out, _ = call("table", which, "--format", "json")
        assert code == 0
        assert json.loads(out) == json.loads(golden(f"table_{which}.json"))


def test_universal_group_command():
    code, out, _ = call("universal-group", "--gda", "D(2;+1)", "--q", "2", "--s", "1",
                        "--d", "a,b")
    assert (code, out.strip()) == (0, "Z2 x Z4 x Z")
    code, _, err = call("universal-group", "--gda", "D(2;+1)", "--q", "2", "--s", "1",
                        "--d", "a")
    assert code == 1 and err.startswith("error:")
    code, _, err = call("universal-group", "--gda", "D(2;+1)", "--q", "1", "--s", "0",
                        "--d", "ab", "--signs", "-1")
    assert code == 1 and len(err.strip().splitlines()) == 1


def test_build_and_fine(tmp_path):
    p = GradingParams("D(2;+1)", 2, 1, (((1, 0), 1), ((0, 1), 1)), 1)
    path = write_params(tmp_path, "p.json", p)
    code, out, _ = call("build", "-f", path)
    assert code == 0
    info = json.loads(out)
    assert info["verified"] and info["closed_forms"]
    assert info["census"] == {"1": 8, "2": 20, "4": 4}
    code, out, _ = call("fine", "-f", path)
    assert code == 0 and json.loads(out)["fine"] is True
    q = GradingParams("D(2;+1)", 2, 0, (((1, 0), 1), ((1, 0), 1)), 1)
    code, out, _ = call("fine", "-f", write_params(tmp_path, "q.json", q))
    info = json.loads(out)
    assert code == 0 and info["fine"] is False and info["refinement"]["components"] > 0


def test_equiv_on_permuted_degrees(tmp_path):
    p = GradingParams("D(2;+1)", 3, 0, (((1, 0), 1), ((0, 1), 1), ((0, 0), 1)), 1)
    q = GradingParams("D(2;+1)", 3, 0, (((0, 0), 1), ((1, 0), 1), ((0, 1), 1)), 1)
    r = GradingParams("D(2;+1)", 3, 0, (((1, 0), 1), ((1, 0), 1), ((0, 0), 1)), 1)
    a, b, c = (write_params(tmp_path, n, x) for n, x in (("a", p), ("b", q), ("c", r)))
    assert call("equiv", a, b)[:2] == (0, "equivalent\n")
    assert call("equiv", a, c)[:2] == (0, "not equivalent\n")


def test_enumerate_command():
    code, out, _ = call("enumerate", "--family", "orthogonal", "--size", "2")
    assert code == 0 and len(json.loads(out)) == 4
    code, out, _ = call("enumerate", "--family", "M(2m;R)", "--size", "2", "--signature", "2")
    assert code == 0 and [c["gda"] for c in json.loads(out)] == ["D(2;+1)"]
    code, _, err = call("enumerate", "--family", "nonsense", "--size", "2")
    assert code == 1 and "unknown family" in err


def test_error_exit_codes(tmp_path):
    code, _, err = call("gda", "D(2;x)")
    assert code == 1 and err.startswith("error: malformed label")
    assert call("frobnicate")[0] == 2
    assert call("table", "m9")[0] == 2
    assert call("build")[0] == 2
    code, _, err = call("build", "-f", str(tmp_path / "missing.json"))
    assert code == 1 and "cannot read" in err
    bad = tmp_path / "bad.json"
    bad.write_text("[1, 2]")
    assert call("build", "-f", str(bad))[0] == 1


def test_selftest_passes():
    code, out, _ = call("selftest")
    assert code == 0
    assert out.strip().splitlines()[-1].endswith("checks passed")
    assert "FAIL" not in out
