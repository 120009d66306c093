import json

from polyfiber.cli import main
from polyfiber.report import analyze, render_json


class TestAnalyze:
    def test_broughton_shifted(self, capsys):
        rc = main(["analyze", "builtin:broughton-shifted", "--json"])
        assert rc == 0
        report = json.loads(capsys.readouterr().out)
        assert report["n_function"]["type"] == "2 **3** 2"
        assert report["euler"]["integral_N_dchi"] == -1

    def test_x_plus_y_verdict(self, capsys):
        rc = main(["analyze", "x+y", "--json"])
        assert rc == 0
        report = json.loads(capsys.readouterr().out)
        assert report["n_function"]["type"] == "1"
        assert report["certifier"]["verdict"] == "TrivialFibration"

    def test_degree7_builtin_includes_verification(self, capsys):
        rc = main(["analyze", "builtin:degree7", "--json"])
        assert rc == 0
        report = json.loads(capsys.readouterr().out)
        assert report["pair_verification"]["verified"] is True
        assert report["n_function"]["type"] == "3 **4** 3 **2** 1"

    def test_parse_error_exit_1(self, capsys):
        assert main(["analyze", "x +* y"]) == 1

    def test_unknown_builtin_exit_1(self):
        assert main(["analyze", "builtin:nope"]) == 1

    def test_inconclusive_exit_2(self, capsys):
        # A certified submersion none of the rules covers: sheared newone6.
        rc = main(["analyze", "(x^2+3*(x+y))*(x-(x+y)^2)^2 + (x-(x+y)^2)*((x+y)^2+2) + 1", "--json"])
        out = capsys.readouterr()
        assert rc == 2
        report = json.loads(out.out)
        assert report["certifier"]["verdict"] == "Inconclusive"

    def test_probes_flag(self, capsys):
        rc = main(["analyze", "builtin:broughton-shifted", "--json", "--probes", "5,-3"])
        assert rc == 0
        report = json.loads(capsys.readouterr().out)
        assert "5" in report["n_function"]["breakpoints"]

    def test_out_file(self, tmp_path, capsys):
        out = tmp_path / "report.json"
        rc = main(["analyze", "x+y", "--json", "--out", str(out)])
        assert rc == 0
        assert json.loads(out.read_text())["certifier"]["verdict"] == "TrivialFibration"

    def test_determinism_modulo_timing(self):
        a = analyze("builtin:broughton-shifted")
        b = analyze("builtin:broughton-shifted")
        a.pop("timing_ms")
        b.pop("timing_ms")
        assert render_json(a) == render_json(b)


class TestVerifyPair:
    def test_builtin_degree7(self, capsys):
        assert main(["verify-pair", "builtin:degree7", "--json"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["verified"] is True

    def test_tampered_certificate_fails(self, tmp_path, capsys):
        from polyfiber.fixtures import builtin_raw

        data = builtin_raw("degree7")
        payload = {"p": data["p"], "q": data["q"], "certificate": dict(data["certificate"])}
        payload["certificate"]["weights"] = ["2", "13"]
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps(payload))
        rc = main(["verify-pair", str(bad), "--json"])
        out = capsys.readouterr()
        assert rc == 1
        report = json.loads(out.out)
        assert report["verified"] is False and report["residual"]

    def test_identity_pair_file(self, tmp_path):
        payload = {
            "p": [[1, 0, "1"]],
            "q": [[0, 1, "1"]],
            "certificate": {
                "sign": 1,
                "weights": ["1"],
                "witnesses": [[[0, 0, "1"]]],
                "bezout": [[[[0, 0, "1"]], [[0, 0, "1"]]]],
            },
        }
        f = tmp_path / "pair.json"
        f.write_text(json.dumps(payload))
        assert main(["verify-pair", str(f)]) == 0

    def test_missing_file(self):
        assert main(["verify-pair", "/nonexistent/pair.json"]) == 1


class TestTrace:
    def test_circle_levels(self, tmp_path, capsys):
        out = tmp_path / "c.svg"
        rc = main(["trace", "x^2+y^2", "--levels", "1,2", "--out", str(out)])
        assert rc == 0
        svg = out.read_text()
        assert "<svg" in svg and svg.count("polyline") >= 2
        assert (tmp_path / "c.csv").exists()

    def test_builtin_broughton(self, tmp_path):
        out = tmp_path / "b.svg"
        rc = main(["trace", "builtin:broughton", "--levels=-1,0,1", "--out", str(out), "--steps", "800"])
        assert rc == 0
        assert "<svg" in out.read_text()

    def test_degree7_level_zero(self, tmp_path):
        out = tmp_path / "d.svg"
        rc = main(["trace", "builtin:degree7", "--levels", "0", "--out", str(out), "--steps", "600"])
        assert rc == 0
