"""
Integration tests for the RANK FLOW command line.

Runs main() end to end on the sample matrices in data/ and checks stdout,
the JSON documents and the exit status convention:
0 all contracts agree, 1 contract violation, 2 usage or parse error.
"""

import json
from pathlib import Path

import pytest

import src.fuzz_harness as fuzz_harness
from main import main
from src.fuzz_harness import TrialOutcome
from src.models import FuzzFailure

DATA_DIR = Path(__file__).parent.parent / "data"
CONFIG_DIR = Path(__file__).parent.parent / "config"


def data(name: str) -> str:
    return str(DATA_DIR / name)


class TestVerifyCommand:
    """End-to-end tests for verify and recheck."""

    def test_idempotent_example(self, capsys):
        code = main(["verify", "--matrix", data("diag_idempotent_q.txt"), "--f", "0 1", "--g", "1 -1"])
        out = capsys.readouterr().out
        assert code == 0
        assert "field: Q" in out
        assert "rank f(A) = 1" in out
        assert "M = x^2 - x" in out
        assert "rank M(A) = 0" in out
        assert "1 + 1 = 2 + 0: verified" in out

    def test_nilpotent_example(self, capsys):
        code = main(["verify", "--matrix", data("companion_x3_gf5.txt"), "--f", "0 1", "--g", "0 0 1"])
        out = capsys.readouterr().out
        assert code == 0
        assert "2 + 1 = 2 + 1: verified" in out

    def test_json_output(self, capsys):
        code = main(["verify", "--matrix", data("mixed_q.txt"), "--f", "-1 1", "--g", "0 1 1", "--json"])
        document = json.loads(capsys.readouterr().out)
        assert code == 0
        assert document["verified"] is True
        assert document["field"] == "Q"
        assert document["n"] == 3
        assert document["f"] == ["-1", "1"]
        ranks = document["ranks"]
        assert ranks["f"] + ranks["g"] == ranks["D"] + ranks["M"]

    def test_certificate_round_trip(self, tmp_path, capsys):
        cert_path = tmp_path / "cert.json"
        assert main(["verify", "--matrix", data("identity3_gf7.txt"), "--f", "0 1", "--g", "1 1",
                     "--cert-out", str(cert_path)]) == 0
        capsys.readouterr()

        assert main(["recheck", "--cert", str(cert_path)]) == 0
        assert capsys.readouterr().out.strip() == "verified"

    def test_tampered_certificate(self, tmp_path, capsys):
        cert_path = tmp_path / "cert.json"
        main(["verify", "--matrix", data("diag_idempotent_q.txt"), "--f", "0 1", "--g", "1 -1",
              "--cert-out", str(cert_path)])
        capsys.readouterr()

        document = json.loads(cert_path.read_text())
        document["ranks"]["M"] = 1
        cert_path.write_text(json.dumps(document))

        assert main(["recheck", "--cert", str(cert_path)]) == 1
        out = capsys.readouterr().out
        assert out.startswith("failed invariants:")
        assert "rank_M" in out

    def test_tampered_block(self, tmp_path, capsys):
        cert_path = tmp_path / "cert.json"
        main(["verify", "--matrix", data("diag_1_2_q.txt"), "--f", "0 1", "--g", "1 -1",
              "--cert-out", str(cert_path)])
        capsys.readouterr()

        document = json.loads(cert_path.read_text())
        document["B"][0][0] = "5"
        cert_path.write_text(json.dumps(document))

        assert main(["recheck", "--cert", str(cert_path)]) == 1
        assert "factorization" in capsys.readouterr().out

    def test_malformed_polynomial(self):
        code = main(["verify", "--matrix", data("diag_idempotent_q.txt"), "--f", "1 x", "--g", "1"])
        assert code == 2

    def test_missing_matrix_file(self):
        assert main(["verify", "--matrix", data("missing.txt"), "--f", "0 1", "--g", "1"]) == 2

    def test_malformed_certificate(self, tmp_path):
        cert_path = tmp_path / "cert.json"
        cert_path.write_text(json.dumps({"field": "Q", "n": 0}))
        assert main(["recheck", "--cert", str(cert_path)]) == 2

    def test_log_file(self, tmp_path, capsys):
        log_path = tmp_path / "run.log"
        main(["verify", "--matrix", data("diag_1_2_q.txt"), "--f", "0 1", "--g", "0 1",
              "--log-file", str(log_path)])
        assert "certificate over Q" in log_path.read_text()


class TestClassifyCommand:
    """End-to-end tests for classify."""

    def test_idempotent(self, capsys):
        code = main(["classify", "--matrix", data("diag_110_q.txt"), "--property", "idempotent"])
        report = json.loads(capsys.readouterr().out)
        assert code == 0
        assert report["property"] == "idempotent"
        assert report["direct_check"] is True
        assert report["consistent"] is True
        assert report["statements"][0]["holds"] is True

    def test_not_involutive(self, capsys):
        code = main(["classify", "--matrix", data("companion_x3_gf5.txt"), "--property", "involutive"])
        report = json.loads(capsys.readouterr().out)
        assert code == 0
        assert report["direct_check"] is False
        assert report["consistent"] is True

    def test_characteristic_two(self):
        assert main(["classify", "--matrix", data("identity2_gf2.txt"), "--property", "involutive"]) == 2

    def test_charfactors(self, capsys):
        code = main(["classify", "--matrix", data("diag_1_2_q.txt"), "--property", "charfactors",
                     "--factors", "-1 1 ; -2 1"])
        report = json.loads(capsys.readouterr().out)
        assert code == 0
        assert report["ranks"]["f1(A)"] == 1

    def test_charfactors_wrong_product(self):
        code = main(["classify", "--matrix", data("diag_1_2_q.txt"), "--property", "charfactors",
                     "--factors", "-1 1 ; -3 1"])
        assert code == 2

    def test_factors_without_charfactors(self):
        code = main(["classify", "--matrix", data("diag_1_2_q.txt"), "--property", "a3a5",
                     "--factors", "-1 1"])
        assert code == 2

    def test_app5(self, capsys):
        code = main(["classify", "--matrix", data("mixed_q.txt"), "--property", "app5"])
        assert code == 0
        assert json.loads(capsys.readouterr().out)["property"] == "app5"

    def test_unknown_property_rejected_by_parser(self):
        with pytest.raises(SystemExit) as info:
            main(["classify", "--matrix", data("diag_1_2_q.txt"), "--property", "orthogonal"])
        assert info.value.code == 2


class TestSpectralCommands:
    """End-to-end tests for minpoly, charpoly and rank."""

    def test_minpoly_identity(self, capsys):
        assert main(["minpoly", "--matrix", data("identity3_gf7.txt")]) == 0
        assert capsys.readouterr().out.strip() == "6 1"

    def test_minpoly_projection(self, capsys):
        assert main(["minpoly", "--matrix", data("diag_110_q.txt")]) == 0
        assert capsys.readouterr().out.strip() == "0 -1 1"

    def test_charpoly_nilpotent(self, capsys):
        assert main(["charpoly", "--matrix", data("companion_x3_gf5.txt")]) == 0
        assert capsys.readouterr().out.strip() == "0 0 0 1"

    def test_rank(self, capsys):
        assert main(["rank", "--matrix", data("mixed_q.txt")]) == 0
        assert capsys.readouterr().out.strip() == "3"

    def test_bad_field_in_file(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("field 6\n1 1\n1\n")
        assert main(["rank", "--matrix", str(path)]) == 2


class TestFuzzCommand:
    """End-to-end tests for fuzz."""

    def test_small_run(self, capsys):
        code = main(["fuzz", "--field", "7", "--n", "1..3", "--deg", "0..3", "--trials", "8", "--seed", "1"])
        out = capsys.readouterr().out
        assert code == 0
        assert "trials: 8" in out
        assert "failures: 0" in out

    def test_json_and_out(self, tmp_path, capsys):
        out_path = tmp_path / "report.json"
        code = main(["fuzz", "--field", "Q", "--n", "1..2", "--deg", "0..2", "--trials", "4",
                     "--workers", "2", "--json", "--out", str(out_path)])
        report = json.loads(capsys.readouterr().out)
        assert code == 0
        assert report["trials_run"] == 4
        assert report["config"]["field"] == "Q"
        assert json.loads(out_path.read_text())["trials_run"] == 4

    def test_config_file(self, capsys):
        code = main(["fuzz", "--config", str(CONFIG_DIR / "fuzz_default.yaml"), "--trials", "3", "--json"])
        report = json.loads(capsys.readouterr().out)
        assert code == 0
        assert report["config"]["trials"] == 3
        assert report["config"]["seed"] == 42

    def test_bad_field(self):
        assert main(["fuzz", "--field", "6", "--trials", "1"]) == 2

    def test_bad_trials(self):
        assert main(["fuzz", "--trials", "0"]) == 2

    def test_bad_generator(self):
        assert main(["fuzz", "--generators", "generic,orthogonal", "--trials", "1"]) == 2

    def test_failures_grouped_by_contract(self, monkeypatch, capsys):
        """Test that the text summary groups failing trials by contract."""
        def failing_trial(config, index):
            failures = [FuzzFailure(index, 'rank_C', {'n': 1})] if index % 2 else []
            return TrialOutcome(index, failures, {'rank_C': 1, 'theorem_identity': 1})

        monkeypatch.setattr(fuzz_harness, "run_trial", failing_trial)
        code = main(["fuzz", "--trials", "5"])
        out = capsys.readouterr().out
        assert code == 1
        assert "checks: 10 over 2 contracts" in out
        assert "failures: 2" in out
        assert "  rank_C: 2 (trials 1, 3)" in out
