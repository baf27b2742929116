import json

import pytest

from birkhoff import d2_from_k
from birkhoff.cli import main


REF_FLAGS = ["--mu", "0.00025", "--q", "0.025", "--Q", "0.00025", "--A", "0.00025"]


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def hamiltonian_payload(freqs=(1.0, 3.0), extra_terms=()):
    w1, w3 = freqs
    terms = [
        {"exponents": [2, 0, 0, 0], "re": w1 / 2, "im": 0.0},
        {"exponents": [0, 2, 0, 0], "re": w1 / 2, "im": 0.0},
        {"exponents": [0, 0, 2, 0], "re": w3 / 2, "im": 0.0},
        {"exponents": [0, 0, 0, 2], "re": w3 / 2, "im": 0.0},
    ]
    terms.extend(extra_terms)
    return {"dof": 2, "chart": "real", "frequencies": [w1, w3], "terms": terms}


class TestClosedFormCommand:
    def test_vertical_quartic_value(self, capsys):
        code, out, _ = run(capsys, ["closed-form", "--b5", "1", "--omega1", "1",
                                    "--omega3", "3"])
        assert code == 0
        payload = json.loads(out)
        assert payload["K0022"] == pytest.approx(-1.5)
        assert payload["K2200"] == 0.0

    def test_csv_format(self, capsys):
        code, out, _ = run(capsys, ["closed-form", "--b5", "1", "--omega1", "1",
                                    "--omega3", "3", "--format", "csv"])
        assert code == 0
        header, row = out.strip().splitlines()
        assert header == "K2200,K1111,K0022,D2"
        assert float(row.split(",")[2]) == pytest.approx(-1.5)

    def test_pole_exits_with_resonance_code(self, capsys):
        code, _, err = run(capsys, ["closed-form", "--a3", "1", "--omega1", "2",
                                    "--omega3", "1"])
        assert code == 4
        payload = json.loads(err)
        assert payload["error"] == "resonance"
        assert "omega1 = 2*omega3" in payload["relation"]


class TestNormalizeCommand:
    def test_quadratic_only_hamiltonian(self, capsys, tmp_path):
        path = tmp_path / "h.json"
        path.write_text(json.dumps(hamiltonian_payload()))
        code, out, _ = run(capsys, ["normalize", "--input", str(path)])
        assert code == 0
        payload = json.loads(out)
        assert payload["D2"] == 0.0
        assert payload["generating"]["terms"] == []
        assert payload["resonances"] == []

    def test_reported_determinant_recomposes_exactly(self, capsys, tmp_path):
        extra = [
            {"exponents": [3, 0, 0, 0], "re": 0.4, "im": 0.0},
            {"exponents": [1, 0, 2, 0], "re": -0.9, "im": 0.0},
            {"exponents": [4, 0, 0, 0], "re": 0.7, "im": 0.0},
        ]
        path = tmp_path / "h.json"
        path.write_text(json.dumps(hamiltonian_payload((1.07, 0.41), extra)))
        code, out, _ = run(capsys, ["normalize", "--input", str(path)])
        assert code == 0
        payload = json.loads(out)
        from birkhoff import Frequencies
        recomposed = d2_from_k(payload["K2200"], payload["K1111"],
                               payload["K0022"], Frequencies(1.07, 0.41))
        assert payload["D2"] == recomposed

    def test_resonant_hamiltonian_exits_with_offender(self, capsys, tmp_path):
        extra = [{"exponents": [2, 0, 0, 1], "re": 0.7, "im": 0.0}]
        path = tmp_path / "h.json"
        path.write_text(json.dumps(hamiltonian_payload((1.0, 2.0), extra)))
        code, _, err = run(capsys, ["normalize", "--input", str(path)])
        assert code == 4
        payload = json.loads(err)
        assert payload["error"] == "resonance"
        j, l, r, s = payload["exponents"]
        assert abs(1.0 * (l - j) + 2.0 * (s - r)) < 1e-9
        assert abs(payload["divisor"]) < 1e-9

    def test_missing_input_is_domain_error(self, capsys, tmp_path):
        code, _, err = run(capsys, ["normalize", "--input",
                                    str(tmp_path / "missing.json")])
        assert code == 3
        assert json.loads(err)["error"] == "domain"


class TestRtbpEvalCommand:
    def test_stable_point(self, capsys):
        code, out, _ = run(capsys, ["rtbp-eval", *REF_FLAGS, "--omega1", "0.3",
                                    "--omega3", "1"])
        assert code == 0
        payload = json.loads(out)
        assert payload["verdict"]["status"] == "stable"
        assert payload["coefficients"]["a1"] != 0.0

    def test_domain_error_exit_code(self, capsys):
        code, _, err = run(capsys, ["rtbp-eval", "--mu", "2.0", "--q", "0.5",
                                    "--Q", "0.5", "--A", "0", "--omega1", "0.3"])
        assert code == 3
        assert json.loads(err)["error"] == "domain"

    def test_usage_error_exit_code(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["rtbp-eval", "--mu", "0.1"])
        assert exc.value.code == 2


class TestRtbpScanCommand:
    def test_csv_shape_and_flags(self, capsys):
        code, out, _ = run(capsys, ["rtbp-scan", *REF_FLAGS, "--omega3", "1",
                                    "--grid", "0.05:0.95:181", "--format", "csv"])
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "omega1,D2,flag"
        assert len(lines) == 182
        flags = [ln.split(",")[2] for ln in lines[1:]]
        assert set(flags) <= {"ok", "pole", "degenerate"}
        assert "pole" in flags
        # all values parse as finite floats (no infinity tokens)
        for ln in lines[1:]:
            w, d2, _ = ln.split(",")
            assert abs(float(d2)) < float("inf")

    def test_determinant_blows_up_and_changes_sign_at_half(self, capsys):
        code, out, _ = run(capsys, ["rtbp-scan", *REF_FLAGS, "--omega3", "1",
                                    "--grid", "0.05:0.95:181", "--format", "csv"])
        assert code == 0
        rows = [ln.split(",") for ln in out.strip().splitlines()[1:]]
        parsed = [(float(w), float(v), f) for w, v, f in rows]
        below = [v for w, v, f in parsed if f == "ok" and w < 0.5]
        above = [v for w, v, f in parsed if f == "ok" and w > 0.5]
        assert below[-1] > 0 > above[0]
        assert abs(below[-1]) > 10 * abs(below[len(below) // 2])

    def test_byte_identical_reruns(self, capsys):
        argv = ["rtbp-scan", *REF_FLAGS, "--omega3", "1", "--grid", "0.1:0.9:50"]
        _, first, _ = run(capsys, argv)
        _, second, _ = run(capsys, argv)
        assert first == second

    def test_threaded_output_matches_serial(self, capsys, monkeypatch):
        argv = ["rtbp-scan", *REF_FLAGS, "--omega3", "1", "--grid", "0.1:0.9:50"]
        _, serial, _ = run(capsys, argv)
        monkeypatch.setenv("BIRKHOFF_D2_THREADS", "3")
        _, threaded, _ = run(capsys, argv)
        assert serial == threaded

    def test_json_format(self, capsys):
        code, out, _ = run(capsys, ["rtbp-scan", *REF_FLAGS, "--omega3", "1",
                                    "--grid", "0.1:0.9:5", "--format", "json"])
        assert code == 0
        payload = json.loads(out)
        assert len(payload) == 5
        assert set(payload[0]) == {"omega1", "D2", "flag"}

    def test_output_file(self, capsys, tmp_path):
        target = tmp_path / "scan.csv"
        code, out, _ = run(capsys, ["rtbp-scan", *REF_FLAGS, "--omega3", "1",
                                    "--grid", "0.1:0.9:5", "--output", str(target)])
        assert code == 0
        assert out == ""
        assert target.read_text().startswith("omega1,D2,flag")

    def test_bad_grid_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["rtbp-scan", *REF_FLAGS, "--grid", "nonsense"])
        assert exc.value.code == 2
