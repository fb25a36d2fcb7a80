"""End-to-end command-line checks: output text, file round-trips, exit codes."""

import json
from pathlib import Path

import pytest

from declustr import design_from_json, deserialize_layout, serialize_layout
from declustr.cli import TRADEOFF_CSV_HEADER, run

DATA = Path(__file__).parent / "data"
REFERENCE_DESIGN = str(DATA / "design_3_8_4_1.json")
BIBD_DESIGN = str(DATA / "design_2_5_4_3.json")


def cli(capsys, *argv):
    code = run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture(scope="module")
def layout_file(tmp_path_factory, reference_layout):
    path = tmp_path_factory.mktemp("cli") / "layout.json"
    path.write_text(serialize_layout(reference_layout))
    return str(path)


# ------------------------------------------------------------------ design

def test_design_validate_table(capsys):
    code, out, err = cli(capsys, "design", "validate", "--file", REFERENCE_DESIGN)
    assert code == 0
    assert out == "valid 3-(8,4,1) design, 14 blocks\n"
    assert err == ""


def test_design_validate_csv(capsys):
    code, out, _ = cli(
        capsys, "design", "validate", "--file", BIBD_DESIGN, "--format", "csv"
    )
    assert code == 0
    assert out.splitlines() == ["t,n,k,lambda,blocks", "2,5,4,3,5"]


def test_design_validate_json(capsys):
    code, out, _ = cli(
        capsys, "design", "validate", "--file", REFERENCE_DESIGN, "--format", "json"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload == {
        "valid": True,
        "t": 3,
        "n": 8,
        "k": 4,
        "lambda": 1,
        "block_count": 14,
    }


def test_design_validate_rejects_bad_design(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    obj = json.loads(Path(REFERENCE_DESIGN).read_text())
    obj["lambda"] = 2
    bad.write_text(json.dumps(obj))
    code, out, err = cli(capsys, "design", "validate", "--file", str(bad))
    assert code == 1
    assert out == ""
    assert err.startswith("error:")


def test_design_validate_missing_file(capsys, tmp_path):
    code, _, err = cli(
        capsys, "design", "validate", "--file", str(tmp_path / "nope.json")
    )
    assert code == 1
    assert err.startswith("error:")


def test_design_validate_not_json(capsys, tmp_path):
    garbled = tmp_path / "garbled.json"
    garbled.write_text("{not json")
    code, _, err = cli(capsys, "design", "validate", "--file", str(garbled))
    assert code == 1
    assert "not valid JSON" in err


def test_design_complete_writes_file(capsys, tmp_path):
    out_path = tmp_path / "complete.json"
    code, out, _ = cli(
        capsys,
        "design", "complete", "--n", "7", "--k", "5", "--t", "4",
        "--out", str(out_path),
    )
    assert code == 0
    assert "4-(7,5,3) design, 21 blocks" in out
    assert f"wrote {out_path}" in out
    design = design_from_json(json.loads(out_path.read_text()))
    assert (design.t, design.n, design.k, design.lam) == (4, 7, 5, 3)


def test_design_hadamard_table_and_file(capsys, tmp_path):
    out_path = tmp_path / "had.json"
    code, out, _ = cli(
        capsys, "design", "hadamard", "--n", "8", "--out", str(out_path)
    )
    assert code == 0
    assert "3-(8,4,1) design, 14 blocks" in out
    reread = design_from_json(json.loads(out_path.read_text()))
    assert len(reread.blocks) == 14


def test_design_hadamard_rejects_bad_n(capsys):
    code, _, err = cli(capsys, "design", "hadamard", "--n", "12")
    assert code == 1
    assert err.startswith("error:")


def test_design_reduce(capsys):
    code, out, _ = cli(
        capsys, "design", "reduce", "--file", REFERENCE_DESIGN, "--s", "2"
    )
    assert code == 0
    assert "2-(8,4,3) design, 14 blocks" in out


def test_design_reduce_bad_strength(capsys):
    code, _, err = cli(
        capsys, "design", "reduce", "--file", REFERENCE_DESIGN, "--s", "4"
    )
    assert code == 1
    assert err.startswith("error:")


# ------------------------------------------------------------------- group

def test_group_build_table(capsys):
    code, out, _ = cli(capsys, "group", "build", "--code", "rdp", "--p", "3")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "full family of rdp p=3 (k=4, delta=2, r=2): 12 arrangements, m=24"
    assert len(lines) == 13


def test_group_build_json(capsys):
    code, out, _ = cli(
        capsys,
        "group", "build", "--code", "rs", "--k", "5", "--delta", "2",
        "--format", "json",
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["m"] == 20
    assert len(payload["arrangements"]) == 20
    assert payload["family"] == "full"


def test_group_build_needs_code_parameters(capsys):
    code, _, err = cli(capsys, "group", "build", "--code", "rdp")
    assert code == 2
    assert err.startswith("usage error:")
    code, _, err = cli(capsys, "group", "build", "--code", "rs", "--k", "5")
    assert code == 2


def test_group_build_rejects_unknown_family(capsys):
    code, _, _ = cli(
        capsys, "group", "build", "--code", "rdp", "--p", "3", "--family", "zigzag"
    )
    assert code == 2


def test_group_verify_balanced_table(capsys):
    code, out, _ = cli(capsys, "group", "verify", "--code", "rdp", "--p", "3")
    assert code == 0
    assert "balanced: yes" in out
    assert "tau_1: 16 of m=24" in out
    assert "tau_2: 24 of m=24" in out
    assert out.count("pass") == 4


def test_group_verify_single_family_csv(capsys):
    code, out, _ = cli(
        capsys,
        "group", "verify", "--code", "rdp", "--p", "3",
        "--family", "single", "--format", "csv",
    )
    assert code == 0
    lines = out.splitlines()
    assert "c1,pass" in lines and "c2,pass" in lines
    assert "c3,fail" in lines and "c4,fail" in lines
    assert "balanced,no" in lines
    # a full-delta loss reads every survivor completely, so tau_2 is still
    # defined; tau_1 depends on which column fails and is not
    assert "tau_1," in lines and "tau_2,2" in lines


def test_group_verify_bad_max_s(capsys):
    code, _, err = cli(
        capsys, "group", "verify", "--code", "rdp", "--p", "3", "--max-s", "5"
    )
    assert code == 1
    assert err.startswith("error:")


# ------------------------------------------------------------------ layout

def test_layout_build_table_and_file(capsys, tmp_path):
    out_path = tmp_path / "built.json"
    code, out, _ = cli(
        capsys,
        "layout", "build", "--design", REFERENCE_DESIGN,
        "--code", "rdp", "--p", "3", "--out", str(out_path),
    )
    assert code == 0
    assert (
        "layout: n=8 disks, 14 groups, 7 column-units/disk, M=168 rows/disk" in out
    )
    layout = deserialize_layout(out_path.read_text())
    assert layout.rows_per_disk == 168


def test_layout_build_csv(capsys):
    code, out, _ = cli(
        capsys,
        "layout", "build", "--design", REFERENCE_DESIGN,
        "--code", "rdp", "--p", "3", "--format", "csv",
    )
    assert code == 0
    assert out.splitlines() == [
        "n,groups,column_units_per_disk,rows_per_disk",
        "8,14,7,168",
    ]


def test_layout_build_mismatched_code(capsys):
    code, _, err = cli(
        capsys,
        "layout", "build", "--design", REFERENCE_DESIGN,
        "--code", "rs", "--k", "5", "--delta", "2",
    )
    assert code == 1
    assert err.startswith("error:")


def test_layout_rotate_flow(capsys, tmp_path):
    base = tmp_path / "base.json"
    rotated = tmp_path / "rotated.json"
    code, _, _ = cli(
        capsys,
        "layout", "build", "--design", BIBD_DESIGN,
        "--code", "rs", "--k", "4", "--delta", "1",
        "--family", "single", "--out", str(base),
    )
    assert code == 0

    code, out, _ = cli(capsys, "layout", "inspect", "--layout", str(base))
    assert code == 0
    assert "parity units per disk: 0..4 (non-uniform)" in out

    code, out, _ = cli(
        capsys, "layout", "rotate", "--layout", str(base), "--out", str(rotated)
    )
    assert code == 0
    assert "layout: n=5 disks, 25 groups, 20 column-units/disk, M=20 rows/disk" in out

    code, out, _ = cli(capsys, "layout", "inspect", "--layout", str(rotated))
    assert code == 0
    assert "parity units per disk: 5 (uniform)" in out
    assert "data disks: 3.8" in out
    assert "parity disks: 1.3" in out


def test_layout_rotate_rejects_two_parity_columns(capsys, layout_file):
    code, _, err = cli(capsys, "layout", "rotate", "--layout", layout_file)
    assert code == 1
    assert err.startswith("error:")


def test_layout_inspect_reference(capsys, layout_file):
    code, out, _ = cli(capsys, "layout", "inspect", "--layout", layout_file)
    assert code == 0
    lines = out.splitlines()
    assert "disks: 8" in lines
    assert "groups: 14" in lines
    assert "rows per disk (M): 168" in lines
    assert "column-units per disk: 7" in lines
    assert "parity units per disk: 84 (uniform)" in lines
    assert "data disks: 4.0" in lines
    assert "parity disks: 4.0" in lines


def test_layout_inspect_json(capsys, layout_file):
    code, out, _ = cli(
        capsys, "layout", "inspect", "--layout", layout_file, "--format", "json"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["rows_per_disk"] == 168
    assert payload["parity_units_per_disk"] == [84] * 8
    assert payload["parity_uniform"] is True
    assert payload["data_disks"] == "4"
    assert payload["parity_disks"] == "4"


# ----------------------------------------------------------------- analyze

def test_analyze_workload_table(capsys, layout_file):
    code, out, _ = cli(
        capsys, "analyze", "workload", "--layout", layout_file, "--fail", "0,1"
    )
    assert code == 0
    assert "uniform: yes" in out
    assert "fraction of each surviving disk read: 11/21" in out
    assert "closed form: 88 (matches)" in out


def test_analyze_workload_csv(capsys, layout_file):
    code, out, _ = cli(
        capsys,
        "analyze", "workload", "--layout", layout_file,
        "--fail", "0,1", "--format", "csv",
    )
    assert code == 0
    assert out.splitlines() == ["disk,units_read"] + [
        f"{disk},88" for disk in range(2, 8)
    ]


def test_analyze_workload_json(capsys, layout_file):
    code, out, _ = cli(
        capsys,
        "analyze", "workload", "--layout", layout_file,
        "--fail", "3", "--format", "json",
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["failed"] == [3]
    assert payload["uniform"] is True
    assert payload["closed_form"] == 48
    assert payload["fraction"] == "2/7"
    assert set(payload["reads"].values()) == {48}


def test_analyze_workload_bad_fail_list(capsys, layout_file):
    code, _, err = cli(
        capsys, "analyze", "workload", "--layout", layout_file, "--fail", "a,b"
    )
    assert code == 2
    assert err.startswith("usage error:")


def test_analyze_workload_too_many_failures(capsys, layout_file):
    code, _, err = cli(
        capsys, "analyze", "workload", "--layout", layout_file, "--fail", "0,1,2"
    )
    assert code == 1
    assert err.startswith("error:")


def test_analyze_tradeoff_fixture_csv(capsys):
    argv = (
        "analyze", "tradeoff", "--n", "20", "--fixture", "fig13", "--format", "csv"
    )
    code, out, _ = cli(capsys, *argv)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == TRADEOFF_CSV_HEADER
    assert len(lines) == 19
    assert lines[8] == "10,4,42.1,67.8,4.0,19"
    assert lines[18] == "20,1,94.7,100.0,2.0,1"
    code, again, _ = cli(capsys, *argv)
    assert code == 0
    assert again == out  # byte-identical across runs


def test_analyze_tradeoff_rows_json(capsys):
    code, out, _ = cli(
        capsys,
        "analyze", "tradeoff", "--n", "20",
        "--row", "10:4", "--row", "3:1", "--format", "json",
    )
    assert code == 0
    payload = json.loads(out)
    assert payload[0]["k"] == 10
    assert payload[0]["pct_one_failure"] == 42.1
    assert payload[0]["depth_over_m"] == 19
    assert payload[1]["k"] == 3
    assert payload[1]["depth_over_m"] == 171


def test_analyze_tradeoff_usage_errors(capsys):
    code, _, err = cli(capsys, "analyze", "tradeoff", "--n", "20")
    assert code == 2
    code, _, _ = cli(
        capsys,
        "analyze", "tradeoff", "--n", "20",
        "--fixture", "fig13", "--row", "10:4",
    )
    assert code == 2
    code, _, _ = cli(capsys, "analyze", "tradeoff", "--n", "20", "--row", "10")
    assert code == 2
    code, _, _ = cli(
        capsys, "analyze", "tradeoff", "--n", "20", "--fixture", "nope"
    )
    assert code == 2


def test_analyze_counterexample_table(capsys):
    code, out, _ = cli(
        capsys,
        "analyze", "counterexample", "--design", REFERENCE_DESIGN,
        "--code", "rdp", "--p", "3", "--family", "single", "--fail", "0,1",
    )
    assert code == 0
    assert "disk 4: 5 column-units accessed" in out
    assert "disk 6: 1 column-units accessed" in out
    assert "uniform: no" in out
    grid_row = out.splitlines()[2]
    assert grid_row.split() == ["0", "D*", "D*", "P1*", "P2*", "-", "-", "-", "-"]


def test_analyze_counterexample_balanced_csv(capsys):
    code, out, _ = cli(
        capsys,
        "analyze", "counterexample", "--design", REFERENCE_DESIGN,
        "--code", "rdp", "--p", "3", "--fail", "0,1", "--format", "csv",
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "disk,column_units_accessed,entries_read"
    assert lines[1:] == [f"{disk},5,88" for disk in range(2, 8)]


# ---------------------------------------------------------------- simulate

def test_simulate_exhaustive_doubles(capsys, layout_file):
    code, out, _ = cli(
        capsys,
        "simulate", "--layout", layout_file, "--exhaustive", "2", "--seed", "7",
    )
    assert code == 0
    assert out == "28/28 recovered, uniform reads 88/disk\n"


def test_simulate_exhaustive_singles(capsys, layout_file):
    code, out, _ = cli(
        capsys, "simulate", "--layout", layout_file, "--exhaustive", "1"
    )
    assert code == 0
    assert out == "8/8 recovered, uniform reads 48/disk\n"


def test_simulate_exhaustive_csv(capsys, layout_file):
    code, out, _ = cli(
        capsys,
        "simulate", "--layout", layout_file, "--exhaustive", "2",
        "--format", "csv",
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "failed,recovered,min_reads,max_reads"
    assert len(lines) == 29
    assert lines[1] == "0 1,yes,88,88"


def test_simulate_exhaustive_json(capsys, layout_file):
    code, out, _ = cli(
        capsys,
        "simulate", "--layout", layout_file, "--exhaustive", "2",
        "--format", "json",
    )
    assert code == 0
    payload = json.loads(out)
    assert (payload["passed"], payload["total"]) == (28, 28)
    assert payload["reads_per_disk"] == 88
    assert len(payload["sets"]) == 28


def test_simulate_single_failure_table(capsys, layout_file):
    code, out, _ = cli(capsys, "simulate", "--layout", layout_file, "--fail", "3")
    assert code == 0
    assert "recovered: yes" in out
    assert len(out.splitlines()) == 9  # header + 7 survivors + verdict


def test_simulate_fail_xor_exhaustive(capsys, layout_file):
    code, _, err = cli(capsys, "simulate", "--layout", layout_file)
    assert code == 2
    assert err.startswith("usage error:")
    code, _, _ = cli(
        capsys,
        "simulate", "--layout", layout_file, "--fail", "3", "--exhaustive", "1",
    )
    assert code == 2


def test_simulate_jobs_flag_and_env(capsys, layout_file, monkeypatch):
    argv = ("simulate", "--layout", layout_file, "--exhaustive", "2")
    _, serial, _ = cli(capsys, *argv, "--jobs", "1")
    _, parallel, _ = cli(capsys, *argv, "--jobs", "4")
    assert serial == parallel
    monkeypatch.setenv("DECLUSTR_JOBS", "4")
    code, from_env, _ = cli(capsys, *argv)
    assert code == 0
    assert from_env == serial
    monkeypatch.setenv("DECLUSTR_JOBS", "lots")
    code, _, err = cli(capsys, *argv)
    assert code == 2
    assert "DECLUSTR_JOBS" in err


def test_simulate_jobs_must_be_positive(capsys, layout_file):
    code, _, err = cli(
        capsys,
        "simulate", "--layout", layout_file, "--exhaustive", "2", "--jobs", "0",
    )
    assert code == 2
    assert err.startswith("usage error:")


def test_simulate_sweep_too_deep(capsys, layout_file):
    code, _, err = cli(
        capsys, "simulate", "--layout", layout_file, "--exhaustive", "3"
    )
    assert code == 1
    assert err.startswith("error:")


def test_simulate_non_uniform_sweep(capsys, tmp_path):
    skewed = tmp_path / "skewed.json"
    cli(
        capsys,
        "layout", "build", "--design", REFERENCE_DESIGN,
        "--code", "rdp", "--p", "3", "--family", "single", "--out", str(skewed),
    )
    code, out, _ = cli(
        capsys, "simulate", "--layout", str(skewed), "--exhaustive", "2"
    )
    assert code == 0
    assert "28/28 recovered, reads " in out
    assert "/disk" in out


# -------------------------------------------------------------- exit codes

def test_unknown_command_is_usage_error(capsys):
    assert cli(capsys, "bogus")[0] == 2
    assert cli(capsys)[0] == 2
    assert cli(capsys, "design")[0] == 2


def test_missing_required_flag_is_usage_error(capsys):
    assert cli(capsys, "analyze", "tradeoff")[0] == 2
    assert cli(capsys, "design", "validate")[0] == 2
