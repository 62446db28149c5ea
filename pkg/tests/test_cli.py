"""Command-line surface: output shapes, exit codes, file formats."""

import json
from fractions import Fraction

import pytest

from lyident import cli, evallab, freealg, pipeline
from lyident._data import data_text

F = Fraction


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestTypes:
    def test_degree5_lists_all_thirteen(self, capsys):
        code, out, _ = run(capsys, "types", "--degree", "5")
        lines = out.splitlines()
        assert code == 0 and len(lines) == 13
        assert lines[0].split() == ["1", "<--<--->>"]
        assert lines[12].split() == ["13", "[[[[--]-]-]-]"]

    def test_degree8_binary_block(self, capsys):
        code, out, _ = run(capsys, "types", "--degree", "8", "--class", "binary")
        lines = out.splitlines()
        assert code == 0 and len(lines) == 23
        assert lines[0].startswith("   1  ")
        assert lines[22].startswith("  23  ")

    def test_rendered_letters(self, capsys):
        code, out, _ = run(capsys, "types", "--degree", "8", "--class", "binary", "--render")
        lines = out.splitlines()
        assert lines[3].split(None, 1) == ["4", "[[[[a,b],c],[d,e]],[[f,g],h]]"]

    def test_degree1_single_leaf(self, capsys):
        code, out, _ = run(capsys, "types", "--degree", "1", "--render")
        assert code == 0 and out.splitlines() == ["   1  a"]

    def test_bad_degree_is_an_error(self, capsys):
        code, _, err = run(capsys, "types", "--degree", "0")
        assert code == 1 and "error" in err


class TestCounts:
    def test_table_values(self, capsys):
        code, out, _ = run(capsys, "counts", "--max-degree", "12")
        lines = out.splitlines()
        assert code == 0 and len(lines) == 13
        rows = [line.split() for line in lines[1:]]
        assert [int(r[1]) for r in rows] == [
            1, 1, 2, 5, 13, 38, 113, 354, 1128, 3688, 12229, 41161,
        ]
        n8 = rows[7]
        assert n8 == ["8", "354", "23", "0", "331", "2609145", "18144"]
        assert rows[0][6] == "-"  # no lifted generators below degree 4


class TestAnalyze:
    def test_degree4_report_deterministic(self, capsys, tmp_path):
        r1, r2 = tmp_path / "a.json", tmp_path / "b.json"
        code1, out1, _ = run(capsys, "analyze", "--degree", "4", "--char", "101",
                             "--report", str(r1))
        code2, out2, _ = run(capsys, "analyze", "--degree", "4", "--char", "101",
                             "--report", str(r2))
        assert code1 == code2 == 0
        assert r1.read_bytes() == r2.read_bytes()
        assert out1 == out2
        payload = json.loads(r1.read_text())
        assert payload["degree"] == 4 and payload["identities"] == 6
        assert len(payload["partitions"]) == 5
        assert all(p["contains"] is True for p in payload["partitions"])
        assert "seconds" not in json.dumps(payload)

    def test_timings_segregated(self, capsys, tmp_path):
        report, timings = tmp_path / "r.json", tmp_path / "t.json"
        code, _, _ = run(capsys, "analyze", "--degree", "4", "--char", "101",
                         "--partitions", "sign", "--report", str(report),
                         "--timings", str(timings))
        assert code == 0
        clocked = json.loads(timings.read_text())
        assert [p["partition"] for p in clocked["partitions"]] == ["1^4"]
        assert all("seconds" in p for p in clocked["partitions"])

    def test_jobs_match_sequential(self, capsys, tmp_path):
        seq, par = tmp_path / "seq.json", tmp_path / "par.json"
        code1, _, _ = run(capsys, "analyze", "--degree", "4", "--char", "101",
                          "--report", str(seq))
        code2, _, _ = run(capsys, "analyze", "--degree", "4", "--char", "101",
                          "--jobs", "3", "--report", str(par))
        assert code1 == code2 == 0
        assert seq.read_bytes() == par.read_bytes()

    def test_partition_list_selector(self, capsys, tmp_path):
        report = tmp_path / "r.json"
        code, out, _ = run(capsys, "analyze", "--degree", "4", "--char", "0",
                           "--partitions", "2^2,1^4", "--report", str(report))
        assert code == 0
        payload = json.loads(report.read_text())
        assert [p["partition"] for p in payload["partitions"]] == ["2^2", "1^4"]
        assert payload["characteristic"] == 0

    def test_resource_abort_exits_3(self, capsys, tmp_path):
        report = tmp_path / "r.json"
        code, _, err = run(capsys, "analyze", "--degree", "5", "--char", "101",
                           "--partitions", "sign", "--max-rows", "1",
                           "--report", str(report))
        assert code == 3
        assert "resource cap" in err
        payload = json.loads(report.read_text())
        assert payload["partitions"][0]["status"] == "aborted-rows"
        assert payload["partitions"][0]["contains"] is None

    def test_small_characteristic_rejected(self, capsys):
        code, _, err = run(capsys, "analyze", "--degree", "4", "--char", "3")
        assert code == 1 and "prime > 4" in err

    def test_non_prime_characteristic_rejected(self, capsys):
        code, _, err = run(capsys, "analyze", "--degree", "4", "--char", "100")
        assert code == 1 and "prime" in err

    def test_reference_match_and_mismatch(self, capsys, tmp_path, monkeypatch):
        report = tmp_path / "r.json"
        code, _, _ = run(capsys, "analyze", "--degree", "4", "--char", "101",
                         "--report", str(report))
        assert code == 0
        reference = report.read_text()

        monkeypatch.setattr(cli, "bundled_report", lambda *a: reference)
        code, out, _ = run(capsys, "analyze", "--degree", "4", "--char", "101")
        assert code == 0 and "matches the bundled reference report" in out

        monkeypatch.setattr(cli, "bundled_report", lambda *a: reference + "tampered")
        code, _, err = run(capsys, "analyze", "--degree", "4", "--char", "101")
        assert code == 2 and "MISMATCH" in err


class TestIdentity:
    def test_below_degree8(self, capsys):
        code, out, _ = run(capsys, "identity", "--degree", "7")
        assert code == 0
        assert out.strip() == "no such identity exists below degree 8"

    def test_above_degree8(self, capsys):
        code, _, err = run(capsys, "identity", "--degree", "9")
        assert code == 1 and "out of scope" in err

    def test_text_output(self, capsys):
        code, out, _ = run(capsys, "identity", "--degree", "8")
        lines = out.splitlines()
        assert code == 0
        assert lines[0] == ("sum over all sigma in S_8, with sign eps(sigma), "
                            "applied to the variables of:")
        assert lines[1].split(None, 2)[1:] == ["1", "[[[[a,b],c],[d,e]],[[f,g],h]]"]
        assert len(lines) == 9

    def test_file_output_round_trips(self, capsys, tmp_path):
        out_path = tmp_path / "identity.txt"
        code, _, _ = run(capsys, "identity", "--degree", "8", "--format", "file",
                         "--out", str(out_path))
        assert code == 0
        parsed = cli.parse_identity_text(out_path.read_text())
        assert parsed == cli.bundled_identity()
        assert out_path.read_text() == data_text("identity_d8.txt")

    def test_bundled_identity_terms(self):
        ident = cli.bundled_identity()
        assert ident.degree == 8 and ident.alternating
        assert ident.terms == (
            (4, F(1)), (7, F(-3, 2)), (9, F(-1)), (10, F(1)),
            (14, F(2)), (18, F(3)), (20, F(2)), (21, F(-2)),
        )


class TestIdentityFormat:
    def test_round_trip_every_field(self):
        ident = pipeline.ExplicitIdentity(6, ((2, F(5, 3)), (6, F(-1))))
        text = cli.identity_text(ident)
        assert cli.parse_identity_text(text) == ident

    def test_polynomial_file(self):
        text = "degree 3\nterm 2 123 1\nterm 2 132 -1\n"
        poly = cli.parse_identity_text(text)
        expected = freealg.expand([
            (F(1), (2, (2, 1, 2), 3)), (F(-1), (2, (2, 1, 3), 2)),
        ])
        assert poly == expected

    def test_comments_and_blanks_ignored(self):
        text = "# header\ndegree 8\n\ncharacteristic 0\nalternating true\nterm 335 12345678 1\n"
        assert cli.parse_identity_text(text).terms == ((4, F(1)),)

    def test_errors(self):
        with pytest.raises(ValueError, match="missing degree"):
            cli.parse_identity_text("term 1 12 1\n")
        with pytest.raises(ValueError, match="no terms"):
            cli.parse_identity_text("degree 3\n")
        with pytest.raises(ValueError, match="out of range"):
            cli.parse_identity_text("degree 3\nterm 99 123 1\n")
        with pytest.raises(ValueError, match="bad permutation"):
            cli.parse_identity_text("degree 3\nterm 2 122 1\n")
        with pytest.raises(ValueError, match="identity permutations on binary types"):
            cli.parse_identity_text("degree 3\nalternating true\nterm 1 123 1\n")
        with pytest.raises(ValueError, match="cannot parse"):
            cli.parse_identity_text("degree 3\nterm 2\n")
        with pytest.raises(ValueError, match="characteristic 0"):
            cli.parse_identity_text("degree 3\ncharacteristic 7\nterm 2 123 1\n")


class TestVerify:
    @pytest.fixture()
    def theorem_file(self, tmp_path):
        path = tmp_path / "identity.txt"
        path.write_text(data_text("identity_d8.txt"))
        return str(path)

    def test_passes_on_every_bundled_algebra(self, capsys, theorem_file):
        for name in evallab.BUNDLED:
            code, out, _ = run(capsys, "verify", "--identity", theorem_file,
                               "--algebra", name, "--trials", "3", "--seed", "7")
            assert code == 0 and out.startswith("PASS"), name

    def test_fail_reports_witness(self, capsys, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("degree 3\nterm 2 123 1\nterm 2 132 -1\n")
        code, out, _ = run(capsys, "verify", "--identity", str(path),
                           "--algebra", "cross_product", "--trials", "4", "--seed", "3")
        assert code == 2
        assert out.startswith("FAIL")
        assert "x1 = (" in out and "value = (" in out
        code2, out2, _ = run(capsys, "verify", "--identity", str(path),
                             "--algebra", "cross_product", "--trials", "4", "--seed", "3")
        assert out2 == out  # deterministic under a fixed seed

    def test_algebra_file_path(self, capsys, theorem_file, tmp_path):
        algebra = tmp_path / "algebra.json"
        algebra.write_text(data_text("algebras/nonlie_leibniz.json"))
        code, out, _ = run(capsys, "verify", "--identity", theorem_file,
                           "--algebra", str(algebra), "--trials", "2", "--seed", "0")
        assert code == 0 and out.startswith("PASS")

    def test_missing_file_is_error(self, capsys, theorem_file):
        code, _, err = run(capsys, "verify", "--identity", theorem_file,
                           "--algebra", "/nonexistent/algebra.json")
        assert code == 1 and "error" in err


class TestValidateAlgebra:
    def test_bundled_valid(self, capsys):
        for name in evallab.BUNDLED:
            code, out, _ = run(capsys, "validate-algebra", name)
            assert code == 0 and out.startswith("valid"), name

    def test_violations_reported(self, capsys, tmp_path):
        path = tmp_path / "nonjacobi.json"
        path.write_text(json.dumps({
            "dimension": 3,
            "construction": "lie",
            "bilinear": [[1, 2, 3, "1"], [2, 1, 3, "-1"], [1, 3, 1, "1"], [3, 1, 1, "-1"]],
        }))
        code, out, _ = run(capsys, "validate-algebra", str(path))
        assert code == 2
        assert "LY3 fails at (e1, e2, e3)" in out

    def test_rejected_construction_is_a_verdict(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"dimension": 1, "construction": "leibniz", "product": [[1, 1, 1, "1"]]}')
        code, out, _ = run(capsys, "validate-algebra", str(path))
        assert code == 2 and out.startswith("invalid")

    def test_garbage_json_is_an_error(self, capsys, tmp_path):
        path = tmp_path / "garbage.json"
        path.write_text("{nope")
        code, _, err = run(capsys, "validate-algebra", str(path))
        assert code == 1 and "error" in err
