"""CLI contract: payload shapes, exit codes, determinism, caching."""

import json
import subprocess
import sys
from pathlib import Path

from derhamz.cli import main

SRC = str(Path(__file__).resolve().parent.parent / "src")


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out


def run_json(capsys, *argv):
    code, out = run_cli(capsys, *argv)
    return code, json.loads(out)


class TestCohomologyCommand:
    def test_one_variable(self, capsys):
        code, doc = run_json(capsys, "cohomology", "-r", "1", "-n", "4")
        assert code == 0
        assert doc["schema_version"] == "1"
        assert doc["command"] == "cohomology"
        assert {"i": 1, "free_rank": 0, "invariant_factors": [4]} \
            in doc["results"]

    def test_rank_two(self, capsys):
        code, doc = run_json(capsys, "cohomology", "-r", "2", "-n", "4")
        rows = {row["i"]: row for row in doc["results"]}
        assert rows[1]["invariant_factors"] == [2, 4, 4]
        assert rows[2]["invariant_factors"] == [2]

    def test_degree_zero(self, capsys):
        code, doc = run_json(capsys, "cohomology", "-r", "1", "-n", "0")
        assert doc["results"][0] == {"i": 0, "free_rank": 1,
                                     "invariant_factors": []}

    def test_csv(self, capsys):
        code, out = run_cli(capsys, "cohomology", "-r", "1", "-n", "4", "--csv")
        assert code == 0
        assert out.splitlines()[0] == "i,free_rank,invariant_factors"
        assert "1,0,4" in out

    def test_latex(self, capsys):
        code, out = run_cli(capsys, "cohomology", "-r", "2", "-n", "4",
                            "--latex")
        assert code == 0
        assert r"\mathbb{Z}/2" in out and r"(\mathbb{Z}/4)^{2}" in out


class TestPagesCommand:
    def test_golden(self, capsys):
        code, doc = run_json(capsys, "pages", "-r", "2", "-n", "4", "-p", "2")
        assert code == 0
        dims = [page["dims"] for page in doc["results"]["pages"]]
        assert dims == [[3, 4, 1], [2, 2, 0], [0, 0, 0]]
        statuses = [page.get("identified_with", {}).get("status")
                    for page in doc["results"]["pages"][:2]]
        assert statuses == ["pass", "pass"]
        assert doc["results"]["pages"][2]["expected_zero"] is True

    def test_vanishing_page_one(self, capsys):
        code, doc = run_json(capsys, "pages", "-r", "1", "-n", "3", "-p", "2")
        assert doc["results"]["pages"][0]["dims"] == [0, 0]

    def test_degenerate_degree_zero(self, capsys):
        code, doc = run_json(capsys, "pages", "-r", "1", "-n", "0", "-p", "2")
        assert code == 0
        assert "degenerate" in doc["results"]["note"]

    def test_latex_unsupported(self, capsys):
        code, out = run_cli(capsys, "pages", "-r", "2", "-n", "4", "-p", "2",
                            "--latex")
        assert code == 2


class TestBasisCommand:
    def test_documented_orderings(self, capsys):
        code, doc = run_json(capsys, "basis", "-r", "1", "-n", "4", "-i", "1")
        assert doc["results"] == {"dim": 1,
                                  "elements": [{"alpha": [3], "T": [1]}]}
        code, doc = run_json(capsys, "basis", "-r", "2", "-n", "2", "-i", "1")
        assert [e["alpha"] for e in doc["results"]["elements"]] == \
            [[1, 0], [0, 1], [1, 0], [0, 1]]
        assert [e["T"] for e in doc["results"]["elements"]] == \
            [[1], [1], [2], [2]]
        code, doc = run_json(capsys, "basis", "-r", "2", "-n", "4", "-i", "3")
        assert doc["results"]["dim"] == 0

    def test_csv(self, capsys):
        code, out = run_cli(capsys, "basis", "-r", "2", "-n", "2", "-i", "1",
                            "--csv")
        assert code == 0
        assert out.splitlines()[0] == "index,alpha,T"
        assert out.splitlines()[1] == "0,1 0,1"


class TestVerifyCommand:
    def test_all_small(self, capsys):
        code, doc = run_json(capsys, "verify", "--all", "-r", "1", "-n", "6")
        assert code == 0
        assert doc["results"]["failed"] == 0

    def test_single_statement(self, capsys):
        code, doc = run_json(capsys, "verify", "--statement", "filtration",
                             "-r", "2", "-n", "6")
        assert code == 0
        assert all(rep["statement"] == "filtration"
                   for rep in doc["results"]["reports"])

    def test_failure_exit_code(self, capsys):
        code, doc = run_json(capsys, "verify", "--statement", "filtration",
                             "-r", "2", "-n", "8")
        assert code == 1
        assert doc["results"]["failed"] == 1
        failing = [rep for rep in doc["results"]["reports"]
                   if rep["status"] == "fail"]
        assert failing and "witness" in failing[0]

    def test_unknown_statement_exits_2(self, capsys):
        code = main(["verify", "--statement", "euler", "-r", "2", "-n", "4"])
        capsys.readouterr()
        assert code == 2

    def test_bounds_guard_exits_2(self, capsys):
        code = main(["verify", "--all", "-r", "9999", "-n", "9999"])
        capsys.readouterr()
        assert code == 2


class TestContracts:
    def test_json_roundtrip(self, capsys):
        _, out = run_cli(capsys, "cohomology", "-r", "2", "-n", "6")
        doc = json.loads(out)
        assert json.loads(json.dumps(doc)) == doc

    def test_byte_identical_repetition(self, capsys):
        _, first = run_cli(capsys, "verify", "--all", "-r", "1", "-n", "6")
        _, second = run_cli(capsys, "verify", "--all", "-r", "1", "-n", "6")
        assert first == second

    def test_byte_identical_across_processes(self):
        cmd = [sys.executable, "-m", "derhamz.cli",
               "cohomology", "-r", "2", "-n", "6"]
        runs = [subprocess.run(cmd, capture_output=True, check=True,
                               env={"PYTHONPATH": SRC, "PATH": "/usr/bin:/bin"})
                for _ in range(2)]
        assert runs[0].stdout == runs[1].stdout
        assert runs[0].stdout

    def test_cache_directory(self, capsys, tmp_path):
        args = ("cohomology", "-r", "2", "-n", "4", "--cache", str(tmp_path))
        _, first = run_cli(capsys, *args)
        files = list(tmp_path.iterdir())
        assert len(files) == 1
        _, second = run_cli(capsys, *args)
        assert first == second

    def test_unsafe_bounds_override(self, capsys):
        code, _ = run_json(capsys, "cohomology", "-r", "1", "-n", "17",
                           "--unsafe-bounds")
        assert code == 0

    def test_version(self, capsys):
        code = main(["--version"])
        out = capsys.readouterr().out
        assert code == 0 and out.strip()
