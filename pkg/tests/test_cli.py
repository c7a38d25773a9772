import json

from leafmult.cli import main
from leafmult.manifest import ProblemManifest, load_trace

FLAT = {
    "variables": ["x", "y", "z"],
    "v1": ["1", "0", "0"],
    "v2": ["0", "1", "0"],
    "point": ["0", "0", "0"],
}


def write_manifest(tmp_path, name="m.json", **extra):
    data = dict(FLAT)
    data.update(extra)
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


class TestCheck:
    def test_ok(self, tmp_path, capsys):
        path = write_manifest(tmp_path)
        assert main(["check", "--manifest", path]) == 0
        out = capsys.readouterr().out
        assert "OK commutation" in out and "OK base point" in out

    def test_commutation_failure(self, tmp_path, capsys):
        path = write_manifest(tmp_path, v1=["y", "0", "0"], v2=["0", "x", "0"])
        assert main(["check", "--manifest", path]) == 2
        assert "FAIL commutation" in capsys.readouterr().out

    def test_singular_point(self, tmp_path, capsys):
        path = write_manifest(tmp_path, v1=["1", "0", "0"], v2=["2", "0", "0"])
        assert main(["check", "--manifest", path]) == 2
        assert "FAIL base point" in capsys.readouterr().out

    def test_parse_error(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        assert main(["check", "--manifest", str(path)]) == 1


class TestBound:
    def test_worked_example(self, tmp_path, capsys):
        trace = tmp_path / "trace.json"
        path = write_manifest(tmp_path, f="x*(x-y^2)", g="x*(x-2*y^2)")
        code = main(["bound", "--manifest", path, "--trace", str(trace)])
        out = capsys.readouterr().out
        assert code == 0
        assert "status: point-excluded" in out
        assert trace.exists()
        data = load_trace(trace)
        assert data["trace_version"] == 1
        assert data["report"]["bound"] >= 2

    def test_isolated(self, tmp_path, capsys):
        path = write_manifest(tmp_path, f="x", g="y")
        assert main(["bound", "--manifest", path]) == 0
        assert "certified upper bound: 1" in capsys.readouterr().out

    def test_budget_starved(self, tmp_path, capsys):
        path = write_manifest(tmp_path, f="x*(x-y^2)", g="x*(x-2*y^2)")
        code = main(["bound", "--manifest", path, "--budget", "3"])
        assert code == 3

    def test_missing_polynomials(self, tmp_path):
        path = write_manifest(tmp_path)
        assert main(["bound", "--manifest", path]) == 1

    def test_degenerate_inputs(self, tmp_path):
        path = write_manifest(tmp_path, f="x*(x-y^2)", g="x*(x-y^2)")
        assert main(["bound", "--manifest", path]) == 2


class TestVerify:
    def test_suites(self, capsys):
        assert main(["verify", "--suite", "poisson-lemma", "--count", "5"]) == 0
        assert "PASS poisson-lemma" in capsys.readouterr().out

    def test_vacuous(self, capsys):
        assert main(["verify", "--suite", "lt-facts", "--count", "0"]) == 0

    def test_unknown_suite(self):
        assert main(["verify", "--suite", "nope"]) == 1

    def test_from_trace_round_trip(self, tmp_path, capsys):
        trace = tmp_path / "trace.json"
        path = write_manifest(tmp_path, f="x*(x-y^2)", g="x*(x-2*y^2)")
        assert main(["bound", "--manifest", path, "--trace", str(trace)]) == 0
        capsys.readouterr()
        assert main(["verify", "--from-trace", str(trace)]) == 0
        out = capsys.readouterr().out
        assert "PASS" in out and "FAIL" not in out

    def test_from_trace_detects_tampering(self, tmp_path, capsys):
        trace = tmp_path / "trace.json"
        path = write_manifest(tmp_path, f="x*(x-y^2)", g="x*(x-2*y^2)")
        main(["bound", "--manifest", path, "--trace", str(trace)])
        data = json.loads(trace.read_text())
        data["report"]["bound"] = 0  # forge a tighter bound
        trace.write_text(json.dumps(data))
        capsys.readouterr()
        assert main(["verify", "--from-trace", str(trace)]) == 4


class TestAppendix:
    def test_single_sheet(self, tmp_path, capsys):
        path = write_manifest(tmp_path, f="x*(x-y^2)", ideal=["x"])
        assert main(["appendix", "--manifest", path]) == 0
        out = capsys.readouterr().out
        assert "witness H = t1" in out

    def test_hypothesis_failure(self, tmp_path):
        path = write_manifest(tmp_path, f="x", ideal=["x", "y"])
        assert main(["appendix", "--manifest", path]) == 2


class TestManifestRoundTrip:
    def test_round_trip(self, tmp_path):
        path = write_manifest(tmp_path, f="x*(x-y^2)", g="y",
                              options={"seed": 3})
        m = ProblemManifest.load(path)
        again = ProblemManifest.from_dict(m.to_dict())
        assert again.to_dict() == m.to_dict()
