import json

import pytest

from ovltest.cli import main
from ovltest.fast_ovl2 import full_distribution
from ovltest.naive_dist import enumerate_distribution


@pytest.fixture
def files(tmp_path):
    x = tmp_path / "x.txt"
    y = tmp_path / "y.csv"
    tied = tmp_path / "t.txt"
    x.write_text("# first sample\n1\n2\n")
    y.write_text("value\n3\n4\n")
    tied.write_text("1\n1\n")
    return x, y, tied


class TestTest:
    def test_text(self, files, capsys):
        x, y, _ = files
        assert main(["test", "--x", str(x), "--y", str(y), "--q", "1"]) == 0
        assert "1/3" in capsys.readouterr().out

    def test_json_matches_text(self, files, capsys):
        x, y, _ = files
        main(["test", "--x", str(x), "--y", str(y), "--q", "2", "--format", "json"])
        doc = json.loads(capsys.readouterr().out)
        main(["test", "--x", str(x), "--y", str(y), "--q", "2"])
        text = capsys.readouterr().out
        assert (doc["p_value"]["num"], doc["p_value"]["den"]) == (2, 3)
        assert "2/3" in text and doc["method"] == "fast"

    def test_bad_q(self, files, capsys):
        x, y, _ = files
        with pytest.raises(SystemExit) as exc:
            main(["test", "--x", str(x), "--y", str(y), "--q", "0"])
        assert exc.value.code == 2

    def test_ties(self, files, capsys):
        _, y, tied = files
        assert main(["test", "--x", str(tied), "--y", str(y), "--q", "1", "--ties", "reject"]) == 3
        assert "TieError" in capsys.readouterr().err
        assert main(["test", "--x", str(tied), "--y", str(y), "--q", "1", "--ties", "jitter:4"]) == 0

    def test_missing_file(self, files, tmp_path):
        _, y, _ = files
        assert main(["test", "--x", str(tmp_path / "nope"), "--y", str(y), "--q", "1"]) == 2

    def test_cache_dir(self, tmp_path, capsys):
        x, y = tmp_path / "a", tmp_path / "b"
        x.write_text("1\n5\n9\n")
        y.write_text("2\n3\n8\n10\n")
        args = ["test", "--x", str(x), "--y", str(y), "--q", "3", "--cache-dir", str(tmp_path / "c")]
        assert main(args) == 0
        assert (tmp_path / "c" / "ovl_q3_m3_n4.csv").exists()


class TestTable:
    def test_n2(self, capsys):
        assert main(["table", "--q", "2", "--n", "2"]) == 0
        assert capsys.readouterr().out == "value_num,value_den,cum_count\n0,1,4\n1,2,6\n"

    def test_n8_identical_to_naive(self, tmp_path, capsys):
        out = tmp_path / "t.csv"
        assert main(["table", "--q", "2", "--n", "8", "--out", str(out)]) == 0
        assert out.read_bytes() == enumerate_distribution(8, 8, 2).to_csv().encode()
        main(["table", "--q", "2", "--n", "8", "--method", "naive"])
        assert capsys.readouterr().out.encode() == out.read_bytes()

    def test_single_k(self, capsys):
        assert main(["table", "--q", "2", "--n", "1", "--k", "1"]) == 0
        header, row = capsys.readouterr().out.splitlines()
        rec = dict(zip(header.split(","), row.split(",")))
        assert (rec["p_num"], rec["p_den"]) == ("1", "1")

    def test_only_q2(self):
        assert main(["table", "--q", "1", "--n", "3"]) == 2

    def test_cache(self, tmp_path, capsys):
        assert main(["table", "--q", "2", "--n", "5", "--cache-dir", str(tmp_path)]) == 0
        cached = (tmp_path / "ovl_q2_m5_n5.csv").read_text()
        assert cached == full_distribution(5).to_csv()


class TestPower:
    def test_deterministic(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        common = ["power", "--f1", "mixed", "--n-list", "4,8", "--trials", "30", "--seed", "5"]
        assert main(common + ["--out", str(a)]) == 0
        assert main(common + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()
        assert len(a.read_text().splitlines()) == 5

    def test_one_trial(self, capsys):
        assert main(["power", "--f1", "normal:0,1.1", "--n-list", "8", "--trials", "1"]) == 0
        rows = capsys.readouterr().out.splitlines()[1:]
        assert {float(r.split(",")[3]) for r in rows} <= {0.0, 1.0}

    def test_bad_spec(self):
        assert main(["power", "--f1", "cauchy", "--n-list", "8", "--trials", "1"]) == 2


class TestBench:
    def test_fast_only(self, capsys):
        assert main(["bench", "--n-list", "10,500", "--methods", "fast", "--fast-reps", "2"]) == 0
        assert "500" in capsys.readouterr().out

    def test_naive_refused_large(self, capsys):
        assert main(["bench", "--n-list", "500", "--methods", "naive,fast", "--fast-reps", "1"]) == 0
        captured = capsys.readouterr()
        assert "refused" in captured.err and "--" in captured.out

    def test_small_both_agree(self, capsys):
        assert main(["bench", "--n-list", "6,7", "--naive-reps", "2", "--fast-reps", "2"]) == 0
