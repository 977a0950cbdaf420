import json
import shutil

import pytest

from pvvi.cli import (EXIT_GUARD, EXIT_OK, EXIT_USAGE, EXIT_VERIFY,
                      _parse_eps_list, main)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestBound:
    def test_builtin(self, capsys):
        code, out, _ = run(capsys, "bound", "po")
        assert code == EXIT_OK
        body = json.loads(out)
        assert body["bound"] == "732421875"

    def test_problem_file(self, capsys, tmp_path):
        path = tmp_path / "affine.json"
        path.write_text(json.dumps({
            "kind": "vop", "n": 1, "m": 1, "f": ["x1"], "g": [], "h": [],
            "convex": True, "acq": True}))
        code, out, _ = run(capsys, "bound", str(path))
        assert code == EXIT_OK
        assert json.loads(out)["bound"] == "1"

    def test_missing_file(self, capsys):
        code, out, err = run(capsys, "bound", "nope.json")
        assert code == EXIT_USAGE
        assert out == ""
        assert "no such file" in err

    def test_invalid_json_file(self, capsys, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        code, _, err = run(capsys, "bound", str(path))
        assert code == EXIT_USAGE
        assert "not valid JSON" in err


class TestValidate:
    def test_builtin(self, capsys):
        code, out, _ = run(capsys, "validate", "vop")
        assert code == EXIT_OK
        assert json.loads(out)["findings"] == []

    def test_no_probe(self, capsys, tmp_path):
        path = tmp_path / "concave.json"
        path.write_text(json.dumps({
            "kind": "vvi", "n": 1, "m": 1, "F": [["x1"]],
            "g": ["-x1^2 + 1"], "h": [], "convex": True, "acq": True}))
        code, out, _ = run(capsys, "validate", str(path), "--no-probe")
        assert code == EXIT_OK and json.loads(out)["findings"] == []
        code, out, _ = run(capsys, "validate", str(path))
        assert any("nonconvex" in f["message"]
                   for f in json.loads(out)["findings"])


class TestSweep:
    def test_stdout_csv_with_summary_on_stderr(self, capsys):
        code, out, err = run(capsys, "sweep", "po", "--grid", "4")
        assert code == EXIT_OK
        assert out.splitlines()[0] == "xi_1,xi_2,x_1,x_2,residual,active_set"
        assert "grid 4: 5 fibers," in err

    def test_out_file(self, capsys, tmp_path):
        path = tmp_path / "run.csv"
        code, out, err = run(capsys, "sweep", "po", "--grid", "4",
                             "--out", str(path))
        assert code == EXIT_OK
        assert f"wrote {path}" in out
        assert "grid 4:" in out and err == ""
        assert path.read_text().startswith("xi_1,xi_2,")

    def test_guard_exit_code(self, capsys, tmp_path):
        path = tmp_path / "wide.json"
        path.write_text(json.dumps({
            "kind": "vvi", "n": 1, "m": 1, "F": [["x1"]],
            "g": [f"x1 - {k}" for k in range(13)], "h": [],
            "convex": True, "acq": True}))
        code, _, err = run(capsys, "sweep", str(path), "--grid", "1")
        assert code == EXIT_GUARD
        assert "solver guard" in err


class TestComponents:
    def test_builtin_json_output(self, capsys):
        code, out, _ = run(capsys, "components", "po", "--grid", "8")
        assert code == EXIT_OK
        body = json.loads(out)
        assert body["eps"] == 0.5 and body["count"] >= 1

    def test_csv_input(self, capsys, tmp_path):
        run(capsys, "sweep", "po", "--grid", "8",
            "--out", str(tmp_path / "run.csv"))
        code, out, _ = run(capsys, "components", str(tmp_path / "run.csv"),
                           "--eps", "1.0")
        assert code == EXIT_OK
        assert json.loads(out)["eps"] == 1.0

    def test_missing_csv(self, capsys):
        code, _, err = run(capsys, "components", "nope.csv")
        assert code == EXIT_USAGE and "no such file" in err

    def test_eps_sweep_flag(self, capsys):
        code, out, _ = run(capsys, "components", "po", "--grid", "8",
                           "--eps-sweep", "0.5:1.0:0.25")
        assert code == EXIT_OK
        body = json.loads(out)
        assert [e for e, _ in body["eps_sweep"]] == [0.5, 0.75, 1.0]

    def test_bad_eps_sweep(self, capsys):
        code, _, err = run(capsys, "components", "po", "--grid", "4",
                           "--eps-sweep", "1.0:0.5:0.1")
        assert code == EXIT_USAGE and "eps-sweep" in err

    def test_parse_eps_list_forms(self):
        assert _parse_eps_list("0.5,1.5") == [0.5, 1.5]
        assert _parse_eps_list("0.1:0.3:0.1") == [0.1, 0.2, 0.3]
        assert len(_parse_eps_list("default")) == 40
        from pvvi.cli import ClientError

        with pytest.raises(ClientError):
            _parse_eps_list("a,b")
        with pytest.raises(ClientError):
            _parse_eps_list("1:2:3:4")


class TestFormula:
    def test_text_stdout(self, capsys):
        code, out, _ = run(capsys, "formula", "po")
        assert code == EXIT_OK
        assert out.startswith("# vars: x1, x2, y1, y2")
        assert "∀ Y(y1, y2)" in out

    def test_smt_target(self, capsys):
        code, out, _ = run(capsys, "formula", "vop", "--target", "pareto",
                           "--format", "smt")
        assert code == EXIT_OK
        assert "(set-logic NRA)" in out


class TestVerify:
    def test_unknown_example(self, capsys):
        code, _, err = run(capsys, "verify", "nosuch")
        assert code == EXIT_USAGE
        assert "unknown example" in err

    def test_file_not_matching_builtins(self, capsys, tmp_path):
        path = tmp_path / "other.json"
        path.write_text(json.dumps({
            "kind": "vvi", "n": 1, "m": 1, "F": [["x1"]], "g": [], "h": [],
            "convex": True, "acq": True}))
        code, _, err = run(capsys, "verify", str(path))
        assert code == EXIT_USAGE
        assert "matches neither" in err

    def test_po_fails_with_table(self, capsys):
        code, out, _ = run(capsys, "verify", "po", "--grid", "40")
        assert code == EXIT_VERIFY
        assert "overall: FAIL" in out
        fail_rows = [l for l in out.splitlines() if l.rstrip().endswith("FAIL")
                     and not l.startswith("overall")]
        assert len(fail_rows) == 1 and "components at eps=0.5" in fail_rows[0]

    def test_vop_passes_at_default_grid(self, capsys):
        code, out, _ = run(capsys, "verify", "vop")
        assert code == EXIT_OK
        assert "overall: PASS" in out

    def test_file_resolved_by_content(self, capsys, tmp_path):
        # a copy of the bundled problem file gets the bundled expectations
        import pvvi.data
        from importlib.resources import files

        src = files(pvvi.data) / "vop.vop.json"
        path = tmp_path / "copy.json"
        shutil.copyfile(str(src), path)
        code, out, _ = run(capsys, "verify", str(path), "--grid", "10")
        # coarse grid: outcome does not matter, resolution by hash does
        assert code in (EXIT_OK, EXIT_VERIFY)
        assert "fiber xi1=0.5" in out


class TestUsage:
    def test_requires_subcommand(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main([])
        assert exc.value.code == 2

    def test_exit_codes_are_distinct(self):
        assert len({EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_GUARD}) == 4
