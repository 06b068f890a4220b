"""End-to-end checks of the bsmm command line tool.

BSMM_BIN points at the built executable, BSMM_SCHEMAS at the schema directory.
"""

import csv
import io
import json
import os
import pathlib
import subprocess

import jsonschema
import pytest
from referencing import Registry, Resource

BIN = os.environ.get("BSMM_BIN", "bsmm")
SCHEMAS = pathlib.Path(os.environ.get("BSMM_SCHEMAS", pathlib.Path(__file__).parents[2] / "schemas"))


def _registry():
    resources = []
    for path in SCHEMAS.glob("*.schema.json"):
        schema = json.loads(path.read_text())
        resources.append((schema["$id"], Resource.from_contents(schema)))
    return Registry().with_resources(resources)


REGISTRY = _registry()


def validate(doc, schema_name):
    schema = json.loads((SCHEMAS / schema_name).read_text())
    jsonschema.Draft202012Validator(schema, registry=REGISTRY).validate(doc)


def run(*args, check=True):
    proc = subprocess.run([BIN, *map(str, args)], capture_output=True, text=True)
    if check and proc.returncode != 0:
        raise AssertionError(f"bsmm {' '.join(map(str, args))} exited {proc.returncode}: {proc.stderr}")
    return proc


def run_json(*args):
    return json.loads(run(*args).stdout)


@pytest.fixture
def band(tmp_path):
    path = tmp_path / "band.mtx"
    run("gen-band", "-n", 256, "-b", 8, "--seed", 3, "-o", path)
    return path


@pytest.fixture
def identity(tmp_path):
    path = tmp_path / "identity.mtx"
    n = 40
    lines = ["%%MatrixMarket matrix coordinate real general", f"{n} {n} {n}"]
    lines += [f"{i} {i} 1" for i in range(1, n + 1)]
    path.write_text("\n".join(lines) + "\n")
    return path


@pytest.fixture
def clustered(tmp_path):
    path = tmp_path / "clustered.mtx"
    run("gen-clustered", "-k", 2, "--rows-per-cluster", 64, "--density", 1.0, "--cols", 128, "--disjoint",
        "--shuffle", "interleave", "-o", path, "--labels-out", tmp_path / "labels.txt")
    return path


def test_convert_identity_reports_diagonal_blocks(identity, tmp_path):
    out = tmp_path / "identity.bcsr"
    stats = run_json("convert", identity, "--dims", "16x8", "-o", out, "--per-row")
    validate(stats, "block_stats.schema.json")
    # rows 0-15 touch block columns 0,1; rows 16-31 touch 2,3; rows 32-39 touch 4
    assert stats["blocks_per_row"] == [2, 2, 1]
    assert stats["n_e"] == 5
    assert stats["bounds"] == {"lower": 1, "upper": 15}
    assert out.read_bytes()[:8] == b"BSMMBCSR"


def test_convert_empty_matrix(tmp_path):
    path = tmp_path / "empty.mtx"
    path.write_text("%%MatrixMarket matrix coordinate real general\n5 5 0\n")
    stats = run_json("convert", path)
    validate(stats, "block_stats.schema.json")
    assert stats["n_e"] == 0
    assert stats["padding_ratio"] == 0


def test_malformed_file_fails_with_diagnostic(tmp_path):
    path = tmp_path / "bad.mtx"
    path.write_text("%%MatrixMarket matrix coordinate real general\n2 2 1\n9 1 1\n")
    proc = run("stats", path, check=False)
    assert proc.returncode != 0
    assert "line 3" in proc.stderr


def test_reorder_band_keeps_identity(band):
    report = run_json("reorder", band)
    validate(report, "reorder_report.schema.json")
    assert report["ratio"] == 1.0
    assert report["row_permutation_identity"]


def test_reorder_clustered_halves_blocks(clustered, tmp_path):
    perm = tmp_path / "perm.txt"
    reordered = tmp_path / "reordered.mtx"
    report = run_json("reorder", clustered, "--tau", 0.5, "--perm-out", perm, "--matrix-out", reordered)
    validate(report, "reorder_report.schema.json")
    assert report["ratio"] == pytest.approx(2.0)
    order = [int(x) for x in perm.read_text().split()]
    assert order == list(range(0, 128, 2)) + list(range(1, 128, 2))
    assert run_json("stats", reordered)["n_e"] == report["after"]["n_e"]


def test_reorder_tau_zero_distinct_rows_is_identity(identity):
    report = run_json("reorder", identity, "--tau", 0, "--no-keep-best")
    assert report["row_permutation_identity"]
    assert not report["keep_best"]


def test_reorder_rows_cols_mode(clustered):
    report = run_json("reorder", clustered, "--mode", "rows-cols", "--tau", 0.5)
    validate(report, "reorder_report.schema.json")
    assert report["mode"] == "rows-cols"


def test_spmm_identity_returns_b(identity, tmp_path):
    b = tmp_path / "b.txt"
    rows = [[(i * 7 + j) % 5 - 2.5 for j in range(3)] for i in range(40)]
    b.write_text("40 3\n" + "\n".join(" ".join(str(v) for v in r) for r in rows) + "\n")
    c = tmp_path / "c.txt"
    record = run_json("spmm", identity, "--dense", b, "--result", c, "--verify", "--repeats", 2)
    validate(record, "bench_record.schema.json")
    assert record["verified"]
    values = c.read_text().split()
    assert values[:2] == ["40", "3"]
    assert [float(v) for v in values[2:]] == [v for r in rows for v in r]


@pytest.mark.parametrize("n", [1, 8, 19])
@pytest.mark.parametrize("precision", ["f32", "f64"])
def test_spmm_verify_passes(clustered, n, precision):
    record = run_json("--precision", precision, "spmm", clustered, "-N", n, "--verify", "--repeats", 3,
                      "--tau", 0.5)
    validate(record, "bench_record.schema.json")
    assert record["verified"]
    assert record["max_rel_error"] <= (1e-5 if precision == "f32" else 1e-12)
    assert record["N"] == n
    assert record["repeats"] == 3
    assert record["tile_mma_calls"] == record["after"]["n_e"] * -(-n // 8)
    assert record["gflops"] > 0
    assert record["padded_gflops"] >= record["gflops"]


def test_spmm_dense_grid_variant_counts(band):
    on = run_json("spmm", band, "--repeats", 1, "--skip-empty", "on")
    off = run_json("spmm", band, "--repeats", 1, "--skip-empty", "off")
    assert on["tile_mma_calls"] == on["after"]["n_e"]
    assert off["tile_mma_calls"] == 16 * 32
    assert not off["skip_empty"]


def test_spmm_csv_output(band):
    rows = list(csv.DictReader(io.StringIO(run("spmm", band, "--repeats", 2, "--output", "csv").stdout)))
    assert len(rows) == 1
    assert int(rows[0]["n_e_after"]) > 0
    assert rows[0]["dims"] == "16x8"


def test_bench_sweep_and_fit(tmp_path):
    out = tmp_path / "sweep.csv"
    records = run_json("bench", "--band-n", 1024, "--bandwidths", "8,16,32,64", "--repeats", 3, "--csv", out)
    for r in records:
        validate(r, "measurement.schema.json")
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 8
    assert list(rows[0].keys())[:4] == ["n_e", "t_total_s", "cv", "label"]
    on = [r for r in rows if r["label"].startswith("skip-on")]
    off = [r for r in rows if r["label"].startswith("skip-off")]
    ne_on = [int(r["n_e"]) for r in on]
    assert ne_on == sorted(ne_on) and len(set(ne_on)) == 4
    assert ne_on == [int(r["n_e"]) for r in off]
    assert all(int(r["repeats"]) == 3 for r in rows)
    assert all(int(r["tile_mma_calls"]) == int(r["grid_blocks"]) for r in off)

    models = run_json("fit-model", out)
    validate(models, "perf_model.schema.json")
    assert {m["label"] for m in models["models"]} == {"skip-on/16x8/N8", "skip-off/16x8/N8"}
    only = run_json("fit-model", out, "--label", "skip-on/16x8/N8")
    assert len(only["models"]) == 1


def test_bench_matrix_list(band, clustered):
    records = run_json("bench", "--matrices", f"{band},{clustered}", "--variants", "on", "--repeats", 1)
    assert [r["matrix"] for r in records] == [str(band), str(clustered)]


def test_fit_model_exact_line(tmp_path):
    path = tmp_path / "line.csv"
    path.write_text("n_e,t_total_s,cv,label\n1,7,0,x\n2,9,0,x\n3,11,0,x\n")
    model = run_json("fit-model", path)["models"][0]
    assert model["t_e"] == pytest.approx(2.0)
    assert model["t_init"] == pytest.approx(5.0)
    assert model["r2"] == pytest.approx(1.0)


def test_fit_model_rejects_single_point(tmp_path):
    path = tmp_path / "one.csv"
    path.write_text("n_e,t_total_s,cv,label\n5,1.0,0,x\n")
    proc = run("fit-model", path, check=False)
    assert proc.returncode != 0
    assert "at least 3" in proc.stderr


def test_generators_are_deterministic(tmp_path):
    for cmd in (["gen-band", "-n", 100, "-b", 5, "--seed", 9],
                ["gen-clustered", "-k", 3, "--seed", 9, "--jitter", 0.1],
                ["gen-random", "--rows", 50, "--cols", 70, "--density", 0.1, "--seed", 9]):
        assert run(*cmd).stdout == run(*cmd).stdout


def test_gen_random_density_endpoints():
    empty = run("gen-random", "--rows", 10, "--cols", 10, "--density", 0).stdout
    full = run("gen-random", "--rows", 10, "--cols", 10, "--density", 1).stdout
    assert empty.splitlines()[1] == "10 10 0"
    assert full.splitlines()[1] == "10 10 100"


def test_clustered_labels_written(clustered, tmp_path):
    labels = [int(x) for x in (tmp_path / "labels.txt").read_text().split()]
    assert labels == [i % 2 for i in range(128)]


def test_suitesparse_urls_lists_matrices():
    out = run("suitesparse-urls").stdout
    assert "cop20k_A" in out and "mip1" in out
    assert all(line.split()[1].startswith("https://") for line in out.splitlines())


def test_bad_flags_rejected(band):
    assert run("spmm", band, "--skip-empty", "maybe", check=False).returncode != 0
    assert run("reorder", band, "--tau", 1.5, check=False).returncode != 0
    assert run("convert", band, "--dims", "0x8", check=False).returncode != 0
