import json
import os
from fractions import Fraction

import pytest

from ddca import cli, interp, report
from ddca.cherednik import CherednikElement, get_algebra
from ddca.rings import ParamPoly
from ddca.spherical import (
    SphericalElement,
    TIndex,
    expand_in_t_basis,
    expansion_to_obj,
    sandwich,
    t_basis_elem,
)

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def run_cli(capsys, *argv):
    status = cli.main(list(argv))
    captured = capsys.readouterr()
    return status, captured.out, captured.err


def first_json(out):
    return json.loads(out.strip().splitlines()[0])


# ---------------------------------------------------------------------------
# JobSpec
# ---------------------------------------------------------------------------

def test_jobspec_rejects_bad_inputs():
    with pytest.raises(cli.UsageError):
        cli.JobSpec("frobnicate", {}).validate()
    with pytest.raises(cli.UsageError):
        cli.JobSpec("mul", {}, threads=0).validate()
    with pytest.raises(cli.UsageError):
        cli.JobSpec("tgen", {"n": 0}).validate()
    with pytest.raises(cli.UsageError):
        cli.JobSpec("content-check", {"trials": -1}).validate()
    with pytest.raises(cli.UsageError):
        cli.JobSpec("structure-constants", {"r": 2}).validate()
    with pytest.raises(cli.UsageError):
        cli.JobSpec("verify-guay", {"n": 3, "r": 2, "a": 1, "b": 2}).validate()


def test_jobspec_cache_dir_resolution(monkeypatch):
    parser = cli._build_parser()
    monkeypatch.delenv("DDCA_CACHE_DIR", raising=False)
    args = parser.parse_args(["content-check", "--trials", "1"])
    assert cli.JobSpec.from_args(args).cache_dir is None

    monkeypatch.setenv("DDCA_CACHE_DIR", "/tmp/ddca-tables")
    assert cli.JobSpec.from_args(args).cache_dir == "/tmp/ddca-tables"

    args = parser.parse_args(
        ["content-check", "--trials", "1", "--cache-dir", "elsewhere"]
    )
    assert cli.JobSpec.from_args(args).cache_dir == "elsewhere"

    args = parser.parse_args(["content-check", "--trials", "1", "--no-cache"])
    assert cli.JobSpec.from_args(args).cache_dir is None


# ---------------------------------------------------------------------------
# element commands
# ---------------------------------------------------------------------------

def test_mul_prints_the_product(capsys):
    alg = get_algebra(2, 1)
    a = CherednikElement.gen_y(alg, 1)
    b = CherednikElement.gen_x(alg, 1)
    status, out, _ = run_cli(
        capsys, "mul", json.dumps(a.to_obj()), json.dumps(b.to_obj())
    )
    assert status == 0
    assert first_json(out) == (a * b).to_obj()


def test_mul_with_numeric_parameters(capsys):
    sym = get_algebra(2, 1)
    num = get_algebra(
        2, 1, ParamPoly.const(Fraction(2)), ParamPoly.const(Fraction(1, 3))
    )
    a_obj = CherednikElement.gen_y(sym, 1).to_obj()
    b_obj = CherednikElement.gen_x(sym, 1).to_obj()
    status, out, _ = run_cli(
        capsys, "mul", "--t", "2", "--k", "1/3", json.dumps(a_obj), json.dumps(b_obj)
    )
    assert status == 0
    want = CherednikElement.gen_y(num, 1) * CherednikElement.gen_x(num, 1)
    assert first_json(out) == want.to_obj()


def test_mul_reads_at_file_arguments(tmp_path, capsys):
    alg = get_algebra(2, 2)
    a = CherednikElement.gen_x(alg, 1)
    b = CherednikElement.gen_x(alg, 2)
    path = tmp_path / "lhs.json"
    path.write_text(json.dumps(a.to_obj()))
    status, out, _ = run_cli(capsys, "mul", "@" + str(path), json.dumps(b.to_obj()))
    assert status == 0
    assert first_json(out) == (a * b).to_obj()


def test_mul_pretty_prints_the_repr(capsys):
    alg = get_algebra(2, 1)
    a = CherednikElement.gen_x(alg, 1)
    b = CherednikElement.gen_y(alg, 1)
    status, out, _ = run_cli(
        capsys, "mul", "--pretty", json.dumps(a.to_obj()), json.dumps(b.to_obj())
    )
    assert status == 0
    assert out.strip() == repr(a * b)


def test_sandwich_matches_library(capsys):
    alg = get_algebra(2, 2)
    elem = CherednikElement.gen_x(alg, 1)
    status, out, _ = run_cli(capsys, "sandwich", json.dumps(elem.to_obj()))
    assert status == 0
    assert first_json(out) == sandwich(elem).to_obj()


def test_tgen_scalar_matrix(capsys):
    status, out, _ = run_cli(
        capsys, "tgen", "--n", "3", "--r", "1", "--p", "0", "--q", "0", "--g", '[["1/2"]]'
    )
    assert status == 0
    want = SphericalElement.unit(get_algebra(3, 1)).scale(Fraction(3, 2))
    assert first_json(out) == want.to_obj()


def test_expand_roundtrips_a_basis_element(capsys):
    alg = get_algebra(6, 2)
    elem = t_basis_elem(alg, TIndex([(1, 0, (1, 2))]))
    status, out, _ = run_cli(capsys, "expand", json.dumps(elem.to_obj()))
    assert status == 0
    assert first_json(out) == expansion_to_obj(expand_in_t_basis(elem))


# ---------------------------------------------------------------------------
# structure constants
# ---------------------------------------------------------------------------

def test_structure_constants_single_pair_artifacts(tmp_path, capsys):
    base = str(tmp_path / "e12-e21")
    status, out, _ = run_cli(
        capsys,
        "structure-constants",
        "--r", "2",
        "--no-cache",
        "--m1", "[[0,0,[1,2],1]]",
        "--m2", "[[0,0,[2,1],1]]",
        "--out", base,
    )
    assert status == 0
    assert "wrote" in out

    table = interp.StructureConstantTable.from_obj(json.load(open(base + ".json")))
    assert table.entries[TIndex()] == ParamPoly.parse("-1/2*K")

    csv_lines = open(base + ".csv").read().splitlines()
    assert csv_lines[0] == "m1,m2,index,coefficient,degK"
    assert len(csv_lines) == len(table.entries) + 1
    assert open(base + ".png", "rb").read().startswith(PNG_MAGIC)


def test_structure_constants_batch_is_thread_independent(tmp_path, capsys):
    argv = ["structure-constants", "--r", "2", "--max-weight", "0", "--no-cache"]
    base1 = str(tmp_path / "run1")
    base2 = str(tmp_path / "run2")
    status1, _, _ = run_cli(capsys, *argv, "--threads", "1", "--out", base1)
    status2, _, _ = run_cli(capsys, *argv, "--threads", "2", "--out", base2)
    assert status1 == 0 and status2 == 0

    payload = json.load(open(base1 + ".json"))
    assert payload["format"] == "structure-table-batch/1"
    assert len(payload["tables"]) == 9  # three weight-0 singletons, both orders
    for ext in (".json", ".csv", ".png"):
        b1 = open(base1 + ext, "rb").read()
        b2 = open(base2 + ext, "rb").read()
        assert b1 == b2


def test_structure_constants_cache_via_environment(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("DDCA_CACHE_DIR", str(tmp_path))
    argv = [
        "structure-constants",
        "--r", "2",
        "--m1", "[[0,0,[1,2],1]]",
        "--m2", "[[0,0,[2,1],1]]",
    ]
    status, out1, _ = run_cli(capsys, *argv)
    assert status == 0
    cache = interp.table_cache_path(
        str(tmp_path), TIndex([(0, 0, (1, 2))]), TIndex([(0, 0, (2, 1))]), 2
    )
    assert os.path.exists(cache)

    status, out2, _ = run_cli(capsys, *argv)
    assert status == 0
    assert out2 == out1


def test_specialize_with_check(tmp_path, capsys):
    table = interp.structure_constants(
        TIndex([(0, 0, (1, 2))]), TIndex([(0, 0, (2, 1))]), 2
    )
    path = tmp_path / "table.json"
    path.write_text(json.dumps(table.to_obj()))
    status, out, _ = run_cli(capsys, "specialize", "@" + str(path), "--n", "6", "--check")
    assert status == 0
    assert first_json(out) == expansion_to_obj(table.specialize(6))


# ---------------------------------------------------------------------------
# verification suites
# ---------------------------------------------------------------------------

def test_verify_guay_single_tuple(capsys):
    status, out, _ = run_cli(
        capsys,
        "verify-guay",
        "--n", "3", "--r", "4",
        "--a", "1", "--b", "2", "--c", "2", "--d", "3",
    )
    assert status == 0
    assert first_json(out)["pass"] is True
    assert "1 checks, 0 failed" in out


def test_verify_guay_all_indices_small_rank(capsys):
    status, out, _ = run_cli(
        capsys, "verify-guay", "--n", "3", "--r", "2", "--all-indices", "--k-extraction"
    )
    assert status == 0
    payload = first_json(out)
    assert payload["pass"] is True
    # two admissible tuples at r=2 (no disjoint ones) plus the three
    # rank-extraction rows
    assert len(payload["rows"]) == 5
    assert "5 checks, 0 failed" in out


def test_verify_vl_writes_artifacts(tmp_path, capsys):
    base = str(tmp_path / "vl")
    status, _, _ = run_cli(
        capsys, "verify-vl", "--l", "2", "--r", "4", "--max-degree", "2", "--out", base
    )
    assert status == 0
    payload = json.load(open(base + ".json"))
    assert payload["pass"] is True
    assert any(row[2] == "skipped" for row in payload["rows"])

    csv_lines = open(base + ".csv").read().splitlines()
    assert csv_lines[0] == "identity,params,status,detail"
    assert len(csv_lines) == len(payload["rows"]) + 1
    assert open(base + ".png", "rb").read().startswith(PNG_MAGIC)


def test_content_check(capsys):
    status, out, _ = run_cli(capsys, "content-check", "--trials", "5", "--seed", "11")
    assert status == 0
    payload = first_json(out)
    assert payload["pass"] is True
    assert len(payload["rows"]) == 5
    assert "5 checks, 0 failed" in out


# ---------------------------------------------------------------------------
# exit codes
# ---------------------------------------------------------------------------

def test_usage_error_is_exit_2(capsys):
    status, _, err = run_cli(capsys, "mul", "{not json", "{}")
    assert status == 2
    assert "usage error" in err

    status, _, err = run_cli(capsys, "verify-guay", "--n", "3", "--r", "2")
    assert status == 2
    assert "usage error" in err


def test_unknown_command_is_exit_2():
    with pytest.raises(SystemExit) as exc:
        cli.main(["frobnicate"])
    assert exc.value.code == 2


def test_domain_error_is_exit_3(capsys):
    a = CherednikElement.gen_x(get_algebra(2, 1), 1)
    b = CherednikElement.gen_x(get_algebra(3, 1), 1)
    status, _, err = run_cli(
        capsys, "mul", json.dumps(a.to_obj()), json.dumps(b.to_obj())
    )
    assert status == 3
    assert "ParamMismatch" in err

    status, _, err = run_cli(
        capsys,
        "verify-guay",
        "--n", "3", "--r", "4",
        "--a", "1", "--b", "1", "--c", "2", "--d", "3",
    )
    assert status == 3
    assert "IndexConstraintViolated" in err


def test_io_error_is_exit_4(tmp_path, capsys):
    status, _, err = run_cli(
        capsys,
        "tgen",
        "--n", "2", "--r", "1", "--p", "1", "--q", "0", "--g", "[[1]]",
        "--out", str(tmp_path / "missing" / "base"),
    )
    assert status == 4
    assert "i/o error" in err


# ---------------------------------------------------------------------------
# report artifacts
# ---------------------------------------------------------------------------

def test_report_files_are_deterministic(tmp_path):
    rows = [
        ("alpha", '{"n":2}', "pass", ""),
        ("beta", '{"n":2}', "FAIL", '{"diff":1}'),
        ("gamma", '{"n":2}', "skipped", "needs omega_0"),
    ]
    report.write_report_csv(str(tmp_path / "a.csv"), rows)
    report.write_report_csv(str(tmp_path / "b.csv"), rows)
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    assert (tmp_path / "a.csv").read_text().startswith("identity,params,status,detail\n")

    report.render_report_figure(str(tmp_path / "a.png"), rows, "demo")
    report.render_report_figure(str(tmp_path / "b.png"), rows, "demo")
    assert (tmp_path / "a.png").read_bytes() == (tmp_path / "b.png").read_bytes()

    # long reports switch to the status-count rendering
    report.render_report_figure(str(tmp_path / "many.png"), rows * 20, "demo")
    assert (tmp_path / "many.png").read_bytes().startswith(PNG_MAGIC)
