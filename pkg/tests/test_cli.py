import csv
import io
import json
from fractions import Fraction

import pytest

from fusionforge import cli


@pytest.fixture(autouse=True)
def no_cache_env(monkeypatch):
    monkeypatch.delenv(cli.CACHE_ENV, raising=False)


def run(capsys, *argv):
    code = cli.main(list(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def test_fusion_table_example(capsys):
    code, out, _ = run(capsys, "fusion-table", "--type", "A1", "--ell", "5", "--format", "json")
    assert code == 0
    data = json.loads(out)
    labels = data["table"]["labels"] if "table" in data else data["labels"]
    N = data["table"]["N"] if "table" in data else data["N"]
    assert labels == [[0], [1], [2], [3]]
    assert N[3][3] == [1, 0, 0, 0]


def test_stable_hom_example(capsys):
    code, out, _ = run(capsys, "stable-hom", "--ell", "5", "--m", "2", "--n", "2", "--k", "-3..3")
    assert code == 0
    assert json.loads(out)["row"] == [0, 0, 1, 1, 0, 0, 0]


def test_qdim_example(capsys):
    code, out, _ = run(capsys, "qdim", "--type", "A1", "--ell", "5", "--lambda", "4")
    assert code == 0
    q = json.loads(out)["qdim"]
    assert [Fraction(c) for c in q["exact"]] == [0] * 4 and q["display"] == 0.0
    code, out, _ = run(capsys, "qdim", "--type", "A2", "--ell", "5", "--lambda", "1,1")
    assert code == 0 and json.loads(out)["qdim"]["display"] != 0.0


@pytest.mark.parametrize(
    "argv",
    [
        ("no-such-verb",),
        ("qdim", "--ell", "5"),
        ("qdim", "--ell", "2", "--lambda", "1"),
        ("qdim", "--ell", "5", "--lambda", "x"),
        ("stable-hom", "--ell", "5", "--m", "2", "--n", "2", "--k", "3..a"),
        ("fusion-table", "--ell", "5", "--format", "text"),
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err


@pytest.mark.parametrize(
    "argv",
    [
        ("qdim", "--ell", "5", "--lambda", "-1"),
        ("fusion-table", "--type", "Q7", "--ell", "5"),
        ("resolve", "--ell", "5", "--m", "4", "--depth", "2"),
        ("vrbar", "--ell", "6"),
    ],
)
def test_domain_errors_exit_1(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 1 and err and not out


def test_malformed_input_file(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{ nope")
    code, _, err = run(capsys, "euler", "--ell", "5", "--input", str(bad))
    assert code == 2 and err
    code, _, _ = run(capsys, "negligible-check", "--ell", "5", "--input", str(tmp_path / "missing.json"))
    assert code == 2


def test_repeat_runs_byte_identical(capsys):
    argv = ("tilting-decompose", "--ell", "5", "--m", "3", "--n", "3")
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second and first[0] == 0


def test_cache_transparency_and_rebuild(capsys, tmp_path):
    argv = ("fusion-table", "--type", "A2", "--ell", "5", "--cache-dir", str(tmp_path))
    _, miss, _ = run(capsys, *argv)
    files = list(tmp_path.iterdir())
    assert len(files) == 1
    _, hit, _ = run(capsys, *argv)
    strip = lambda s: {k: v for k, v in json.loads(s).items() if k != "cache"}
    assert strip(miss) == strip(hit)
    files[0].write_text("{ corrupted")
    code, rebuilt, _ = run(capsys, *argv)
    assert code == 0 and strip(rebuilt) == strip(miss)
    assert json.loads(files[0].read_text())["schema"] == cli.CACHE_SCHEMA_VERSION


def test_cached_table_reports_hit_and_miss(tmp_path):
    t1, how1 = cli.cached_fusion_table("A1", 6, False, tmp_path)
    t2, how2 = cli.cached_fusion_table("A1", 6, False, tmp_path)
    assert (how1, how2) == ("miss", "hit") and t1 == t2
    assert cli.cached_fusion_table("A1", 6, False, None)[1] == "off"


def test_stale_schema_invalidated(tmp_path):
    cli.cached_fusion_table("A1", 5, False, tmp_path)
    path = next(tmp_path.iterdir())
    entry = json.loads(path.read_text())
    entry["schema"] = cli.CACHE_SCHEMA_VERSION + 1
    path.write_text(json.dumps(entry))
    assert cli.cached_fusion_table("A1", 5, False, tmp_path)[1] == "miss"


def test_env_overrides_cache_dir(capsys, tmp_path, monkeypatch):
    env_dir, flag_dir = tmp_path / "env", tmp_path / "flag"
    monkeypatch.setenv(cli.CACHE_ENV, str(env_dir))
    code, _, _ = run(capsys, "fusion-table", "--ell", "5", "--cache-dir", str(flag_dir))
    assert code == 0 and any(env_dir.iterdir()) and not flag_dir.exists()


def test_csv_and_markdown(capsys):
    code, out, _ = run(capsys, "stable-hom", "--ell", "5", "--m", "2", "--n", "2", "--k", "-1..0", "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert len(rows) >= 2
    code, out, _ = run(capsys, "alcove-list", "--type", "A2", "--ell", "5", "--format", "md")
    assert code == 0 and out.startswith("| ") and "|---" in out


def test_resolve_ncover_vrbar(capsys):
    code, out, _ = run(capsys, "resolve", "--ell", "5", "--m", "1", "--depth", "2")
    assert code == 0 and "17" in out
    code, out, _ = run(capsys, "ncover", "--ell", "5", "--n", "7")
    assert code == 0 and json.loads(out)["cover"] == {"7": 2, "11": 1}
    code, out, _ = run(capsys, "ncover", "--ell", "5", "--lambda", "1,1")
    assert code == 0 and json.loads(out)["cover"] == {"7": 2}
    code, out, _ = run(capsys, "vrbar", "--ell", "5", "--bound", "20")
    data = json.loads(out)
    assert code == 0 and data["dim"] == 2 and data["r_u_agrees"] is True


def test_euler_input(capsys, tmp_path):
    f = tmp_path / "x.json"
    f.write_text(json.dumps({"terms": {"0": [7]}}))
    code, out, _ = run(capsys, "euler", "--ell", "5", "--input", str(f), "--n", "7")
    data = json.loads(out)
    assert code == 0 and data["values"] == [{"N": 7, "a": 2, "b": 2}]
    f.write_text(json.dumps({"kind": "resolution_tail", "m": 1}))
    code, out, _ = run(capsys, "euler", "--ell", "5", "--input", str(f), "--n", "17")
    assert code == 0 and json.loads(out)["values"][0]["a"] == 0


def test_negligible_check_inputs(capsys, tmp_path):
    f = tmp_path / "m.json"
    f.write_text(json.dumps({"family": "projective", "n": 1}))
    code, out, _ = run(capsys, "negligible-check", "--ell", "5", "--input", str(f))
    assert code == 0 and json.loads(out)["negligible"] is True
    f.write_text(json.dumps({"family": "standard", "n": 7}))
    code, out, _ = run(capsys, "negligible-check", "--ell", "5", "--input", str(f))
    assert code == 0 and json.loads(out)["negligible"] is False
    # The Steinberg module at ell = 3 written out; [2] = -1 there.
    E = [["0", "-1", "0"], ["0", "0", "1"], ["0", "0", "0"]]
    F = [["0", "0", "0"], ["1", "0", "0"], ["0", "-1", "0"]]
    f.write_text(json.dumps({"dim": 3, "E": E, "F": F, "K_exponents": [2, 0, -2]}))
    code, out, _ = run(capsys, "negligible-check", "--ell", "3", "--input", str(f))
    data = json.loads(out)
    assert code == 0 and data["dim"] == 3 and data["negligible"] is True
    f.write_text(json.dumps({"dim": 2, "E": [["0", "2"], ["0", "0"]], "F": [["0", "0"], ["1", "0"]], "K_exponents": [1, -1]}))
    assert run(capsys, "negligible-check", "--ell", "3", "--input", str(f))[0] == 1
    f.write_text(json.dumps({"family": "nonsense", "n": 1}))
    assert run(capsys, "negligible-check", "--ell", "5", "--input", str(f))[0] == 2


def test_fuzz_coker_verb(capsys):
    code, out, _ = run(capsys, "fuzz-coker", "--ell", "3", "--trials", "3", "--seed", "7")
    data = json.loads(out)
    assert code == 0 and data["ok"] and data["trials"] == 3
