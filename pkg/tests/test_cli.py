import io
import json
import shutil
import subprocess
import sys

import numpy as np
import pytest

from golayzacz import GolayParams, generate, periodic_autocorr, profile_to_csv
from golayzacz.cli import main

A1_PARAMS = {"m": 5, "H": 4, "pi": [1, 2, 3, 4, 5], "c": [1, 2, 3, 0, 1, 2]}


def run(capsys, *argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def params_file(tmp_path):
    path = tmp_path / "params.json"
    path.write_text(json.dumps(A1_PARAMS))
    return str(path)


class TestGenerate:
    def test_json(self, capsys):
        code, out, _ = run(capsys, "generate", "--m", "5", "--H", "4", "--pi", "(143)", "--c", "0,0,0,0,0,0")
        assert code == 0
        d = json.loads(out)
        assert d["params"]["pi"] == [4, 2, 1, 3, 5]
        expected = generate(GolayParams(m=5, H=4, pi=(4, 2, 1, 3, 5), c=(0,) * 6))
        assert d["values"] == expected.values.tolist()

    def test_csv(self, capsys):
        code, out, _ = run(capsys, "generate", "--m", "3", "--pi", "1,2,3", "--H", "2", "--format", "csv")
        assert code == 0
        assert out.splitlines()[0] == "i,value"
        assert len(out.splitlines()) == 9

    def test_default_coefficients_zero(self, capsys):
        _, out, _ = run(capsys, "generate", "--m", "4", "--pi", "1,2,3,4")
        assert json.loads(out)["params"]["c"] == [0] * 5

    def test_out_file(self, capsys, tmp_path):
        path = tmp_path / "seq.json"
        code, out, _ = run(capsys, "generate", "--m", "4", "--pi", "1,2,3,4", "--out", str(path))
        assert code == 0 and out == ""
        assert json.loads(path.read_text())["kind"] == "phase"


class TestPairAndQam:
    def test_pair(self, capsys):
        code, out, _ = run(capsys, "pair", "--m", "4", "--H", "6", "--pi", "2,4,1,3", "--c-prime", "3")
        assert code == 0
        d = json.loads(out)
        assert d["complementary"] is True and d["c_prime"] == 3

    def test_qam(self, capsys, tmp_path):
        off = tmp_path / "off.json"
        off.write_text(json.dumps({"case": 3, "w": 2, "d": [[1, 1, 1]]}))
        code, out, _ = run(capsys, "qam", "--m", "5", "--pi", "1,2,3,4,5", "--q", "2",
                           "--offsets-file", str(off))
        assert code == 0
        d = json.loads(out)
        assert d["complementary"] is True
        assert len(d["A"]["re"]) == 32

    def test_qam_needs_q(self, capsys):
        code, _, err = run(capsys, "qam", "--m", "4", "--pi", "1,2,3,4")
        assert code == 2 and "qam needs" in err


class TestCorrelate:
    def test_constant_from_stdin(self, capsys, monkeypatch):
        seq = json.dumps({"kind": "phase", "H": 4, "values": [1] * 16})
        code, out, _ = run(capsys, "correlate", "--periodic", stdin=seq, monkeypatch=monkeypatch)
        assert code == 0
        rows = out.splitlines()
        assert rows[0] == "tau,re,im,abs"
        assert all(r.split(",")[3] == "16" for r in rows[1:])

    def test_round_trip(self, capsys, monkeypatch):
        _, gen, _ = run(capsys, "generate", "--json", "-", "--format", "json",
                        stdin=json.dumps(A1_PARAMS), monkeypatch=monkeypatch)
        code, out, _ = run(capsys, "correlate", stdin=gen, monkeypatch=monkeypatch)
        assert code == 0
        expected = profile_to_csv(periodic_autocorr(generate(GolayParams.from_dict(A1_PARAMS))))
        assert out == expected

    def test_tau_range_and_json(self, capsys, params_file):
        code, out, _ = run(capsys, "correlate", "--json", params_file, "--tau-range", "1:8", "--format", "json")
        d = json.loads(out)
        assert d["tau"] == list(range(1, 9))
        assert d["abs"] == [0] * 8
        assert [1, 8] in d["zacz"]

    def test_aperiodic_and_fft(self, capsys, params_file):
        _, ap, _ = run(capsys, "correlate", "--json", params_file, "--aperiodic")
        assert ap.splitlines()[1].split(",")[0] == "0"
        code, fft, _ = run(capsys, "correlate", "--json", params_file, "--method", "fft", "--format", "json")
        assert code == 0
        assert np.allclose(json.loads(fft)["abs"][1:9], 0, atol=1e-9)


class TestVerify:
    def test_a1(self, capsys, params_file):
        code, out, _ = run(capsys, "verify", "--cond", "A1", "--json", params_file)
        assert code == 0
        d = json.loads(out)
        assert d["holds"] is True
        assert d["checks"][0]["predicted"] == [[1, 8], [24, 31]]
        assert d["pi"] == [1, 2, 3, 4, 5]

    def test_all_matching(self, capsys, params_file):
        code, out, _ = run(capsys, "verify", "--json", params_file)
        assert code == 0
        assert "A1" in [c["cond"] for c in json.loads(out)["checks"]]

    def test_counterexample_exit_1(self, capsys, tmp_path):
        off = tmp_path / "off.json"
        off.write_text(json.dumps({"case": 2, "d": [[1, 3]]}))
        code, out, _ = run(capsys, "verify", "--cond", "A1", "--m", "5", "--pi", "1,2,3,4,5",
                           "--q", "2", "--offsets-file", str(off))
        assert code == 1
        assert json.loads(out)["holds"] is False

    def test_precondition_exit_2(self, capsys, params_file):
        code, out, err = run(capsys, "verify", "--cond", "B", "--json", params_file)
        assert code == 2 and out == ""
        assert "do not satisfy" in err

    def test_unreadable_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "verify", "--cond", "A1", "--json", str(tmp_path / "missing.json"))
        assert code == 2 and "cannot read parameter file" in err

    def test_malformed_json(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        code, _, err = run(capsys, "verify", "--cond", "A1", "--json", str(path))
        assert code == 2 and "malformed JSON" in err

    def test_domain_error(self, capsys):
        code, _, err = run(capsys, "generate", "--m", "4", "--H", "5", "--pi", "1,2,3,4")
        assert code == 2 and "invalid input" in err

    def test_no_params(self, capsys):
        code, _, err = run(capsys, "verify", "--cond", "A1")
        assert code == 2 and "no parameters" in err

    def test_usage_error(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["frobnicate"])
        assert info.value.code == 2


class TestSearchAndAudit:
    def test_search_stream(self, capsys):
        code, out, err = run(capsys, "search", "--m", "4", "--H", "2", "--cond", "A1")
        assert code == 0
        rows = [json.loads(line) for line in out.splitlines()]
        assert len(rows) == 64
        assert "candidates=64" in err

    def test_search_cap(self, capsys):
        code, _, err = run(capsys, "search", "--m", "6", "--H", "8", "--cap", "100")
        assert code == 2 and "search space too large" in err

    def test_search_out(self, capsys, tmp_path):
        path = tmp_path / "r.jsonl"
        code, out, _ = run(capsys, "search", "--m", "4", "--q", "2", "--cond", "A1", "--case", "1",
                           "--out", str(path))
        assert code == 0 and out == ""
        assert len(path.read_text().splitlines()) == 1024 * 16

    def test_audit(self, capsys):
        code, out, _ = run(capsys, "audit", "--m", "4", "--H", "4")
        assert code == 0
        assert json.loads(out)["passed"] is True


class TestSyncDemo:
    def test_spec_example(self, capsys):
        code, out, _ = run(capsys, "sync-demo", "--m", "6", "--cond", "A1", "--delay", "9",
                           "--noise", "0.1", "--seed", "7", "--trials", "100")
        assert code == 0
        d = json.loads(out)
        assert d["hits"] >= 99 and d["window"] == 17

    def test_b_family_has_no_window(self, capsys):
        code, _, err = run(capsys, "sync-demo", "--cond", "B")
        assert code == 2 and "origin" in err

    def test_qam(self, capsys):
        code, out, _ = run(capsys, "sync-demo", "--m", "6", "--q", "2", "--delay", "5", "--trials", "10")
        assert code == 0 and json.loads(out)["hits"] == 10


class TestDeterminism:
    def test_byte_identical(self, capsys):
        argv = ["sync-demo", "--m", "5", "--delay", "3", "--noise", "0.3", "--seed", "1", "--trials", "20"]
        _, a, _ = run(capsys, *argv)
        _, b, _ = run(capsys, *argv)
        assert a == b

    @pytest.mark.skipif(shutil.which("golayzacz") is None, reason="console script not installed")
    def test_console_script(self, params_file):
        cmd = ["golayzacz", "verify", "--cond", "A1", "--json", params_file]
        first = subprocess.run(cmd, capture_output=True)
        second = subprocess.run(cmd, capture_output=True)
        assert first.returncode == 0
        assert first.stdout == second.stdout
