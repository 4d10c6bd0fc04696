import csv
import os

import numpy as np
import pytest

from robustpac.cli import main
from robustpac.harness import (
    ExperimentConfig,
    load_csv,
    parse_config_file,
    read_dataset_csv,
    run_experiment,
    split_across_machines,
    write_dataset_csv,
)
from robustpac.harness.experiment import aggregate, RowResult
from robustpac.core import Dataset

TINY = dict(name="tiny", p=5, n_total=200, epochs=3, lambdas=(0.1,), seeds=(0, 1), epsilon=0.25)


def write(path, lines):
    path.write_text("\n".join(lines) + "\n")
    return str(path)


@pytest.fixture
def cancer_like(tmp_path):
    # id + 9 integer features + class (2 benign / 4 malignant), '?' marks missing
    rng = np.random.default_rng(0)
    lines = ["id," + ",".join(f"f{j}" for j in range(1, 10)) + ",class"]
    missing_rows = set(rng.choice(699, 16, replace=False))
    for i in range(699):
        cls = int(rng.choice([2, 4]))
        feats = [str(int(v)) for v in rng.integers(1, 11, 9)]
        if i in missing_rows:
            feats[5] = "?"
        lines.append(",".join([str(1000 + i)] + feats + [str(cls)]))
    return write(tmp_path / "cancer.csv", lines)


def test_load_csv_with_missing_tokens(cancer_like):
    d = load_csv(cancer_like, label_col="class", positive_token="4", missing="?")
    assert len(d) == 683
    assert d.p == 10  # the id column is kept unless dropped
    assert set(np.unique(d.y)) <= {-1, 1}
    assert np.allclose(d.X.mean(axis=0), 0, atol=1e-12)
    dropped = load_csv(cancer_like, label_col="class", positive_token="4", missing="?", drop_cols=("id",))
    assert dropped.p == 9


def test_load_csv_one_hot(tmp_path):
    path = write(tmp_path / "cat.csv", ["colour,size,label", "red,1.0,yes", "blue,2.0,no",
                                         "green,3.0,yes", "red,4.0,no"])
    d = load_csv(path, positive_token="yes", standardize=False)
    assert d.p == 4  # 3 colour indicators (blue, green, red) + size
    assert np.array_equal(d.X[0], [0, 0, 1, 1.0])
    assert np.array_equal(d.y, [1, -1, 1, -1])


@pytest.mark.parametrize("lines, match", [
    ([], "empty"),
    (["a,b,label", "1,2,1", "1,2"], "line 3"),
    (["a,label", "1,x", "2,y", "3,z"], "not binary"),
    (["a,label", "1,x", "2,y"], "positive token"),
    (["a,b", "1,2"], "label column"),
])
def test_load_csv_errors(tmp_path, lines, match):
    path = tmp_path / "bad.csv"
    path.write_text("\n".join(lines))
    with pytest.raises(ValueError, match=match):
        load_csv(str(path))


def test_dataset_csv_roundtrip(tmp_path, small_noisy):
    path = str(tmp_path / "d.csv")
    write_dataset_csv(small_noisy, path)
    assert read_dataset_csv(path) == small_noisy


@pytest.mark.parametrize("n, k, sizes", [(10, 3, [4, 3, 3]), (20_000, 2, [10_000] * 2),
                                         (20_000, 4, [5000] * 4)])
def test_split_sizes(n, k, sizes):
    d = Dataset(np.arange(n, dtype=float)[:, None], np.ones(n))
    parts = split_across_machines(d, k, seed=1)
    assert [len(s) for s in parts.shards] == sizes
    assert sorted(parts.union().X[:, 0]) == list(range(n))


def test_split_errors():
    d = Dataset(np.zeros((3, 1)), np.ones(3))
    for k in (1, 4):
        with pytest.raises(ValueError):
            split_across_machines(d, k)


def read_bytes(path):
    with open(path, "rb") as fh:
        return fh.read()


def test_experiment_deterministic_across_threads(tmp_path):
    a = ExperimentConfig(**TINY, out=str(tmp_path / "a"), threads=1)
    b = ExperimentConfig(**TINY, out=str(tmp_path / "b"), threads=2)
    run_experiment(a)
    run_experiment(b)
    for name in ("report.csv", "rows.csv", os.path.join("traces", "trace_tiny_lam0.1_seed1.csv")):
        assert read_bytes(os.path.join(a.out, name)) == read_bytes(os.path.join(b.out, name))


def test_report_columns_and_relcc(tmp_path):
    cfg = ExperimentConfig(**TINY, out=str(tmp_path))
    report, rows = run_experiment(cfg)
    with open(tmp_path / "report.csv") as fh:
        header = next(csv.reader(fh))
    assert header == ["dataset", "lambda", "seed_count", "acc_naive_mean", "acc_naive_std",
                      "acc_ws_mean", "acc_ws_std", "relcc_mean", "relcc_std"]
    for r in rows:
        assert r.relcc == r.ws_units / r.naive_units
        assert r.naive_units == 6 * 100
    assert report[0].seed_count == 2
    assert report[0].relcc[0] == pytest.approx(np.mean([r.relcc for r in rows]))


def test_empty_protocols_gives_empty_report(tmp_path):
    cfg = ExperimentConfig(**{**TINY, "protocols": ()}, out=str(tmp_path))
    report, rows = run_experiment(cfg)
    assert report == [] and rows == []
    assert (tmp_path / "report.csv").read_text().count("\n") == 1


def test_naive_only_leaves_ws_columns_blank(tmp_path):
    cfg = ExperimentConfig(**{**TINY, "protocols": ("naive",)}, out=str(tmp_path))
    report, _ = run_experiment(cfg)
    assert report[0].csv_row()[5:] == ["", "", "", ""]


def test_failed_cells_are_recorded(tmp_path):
    # lam = 0.3 >= epsilon makes the WS cell invalid; the other cell still runs
    cfg = ExperimentConfig(**{**TINY, "lambdas": (0.1, 0.3), "seeds": (0,)}, out=str(tmp_path))
    report, rows = run_experiment(cfg)
    assert [r.lam for r in report] == [0.1]
    assert "ValueError" in (tmp_path / "failures.csv").read_text()


def test_aggregate_population_std():
    rows = [RowResult("x", 0.1, s, acc_naive=v, acc_ws=v, relcc=v) for s, v in enumerate([1.0, 3.0])]
    (r,) = aggregate(rows)
    assert r.acc_naive == (2.0, 1.0)


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(protocols=("ws", "boost"))
    with pytest.raises(ValueError):
        ExperimentConfig(k=1)
    with pytest.raises(ValueError):
        ExperimentConfig(n_total=4001)
    with pytest.raises(ValueError):
        ExperimentConfig(dataset="csv")


def test_parse_config_file(tmp_path):
    path = write(tmp_path / "exp.cfg", ["# comment", "preset = syn3", "lambdas = 0.05, 0.1",
                                          "seeds = 3,4", "epsilon = 0.2  # trailing", "threads=2"])
    cfg = parse_config_file(path)
    assert (cfg.name, cfg.p, cfg.n_total, cfg.k) == ("syn3", 100, 20_000, 4)
    assert cfg.lambdas == (0.05, 0.1) and cfg.seeds == (3, 4)
    assert cfg.epsilon == 0.2 and cfg.threads == 2
    bad = write(tmp_path / "bad.cfg", ["colour = red"])
    with pytest.raises(ValueError, match="unknown key"):
        parse_config_file(bad)


def test_csv_dataset_experiment(tmp_path, cancer_like):
    cfg = ExperimentConfig(name="cancer", dataset="csv", csv_path=cancer_like, label_col="class",
                           positive_token="4", missing="?", epochs=3, lambdas=(0.0,), seeds=(0,),
                           epsilon=0.5, out=str(tmp_path))
    _, rows = run_experiment(cfg)
    assert rows[0].error is None
    assert rows[0].naive_units == 11 * (683 // 2)


def test_cli_gen_and_run(tmp_path, capsys):
    data = tmp_path / "syn.csv"
    assert main(["gen", "--p", "4", "--n", "100", "--lambda", "0.1", "--out", str(data)]) == 0
    d = read_dataset_csv(str(data))
    assert len(d) == 100 and d.p == 4
    out = tmp_path / "run"
    cfg = write(tmp_path / "exp.cfg", ["name = tiny", "p = 5", "n_total = 200", "epochs = 3"])
    assert main(["run", "--config", cfg, "--lambdas", "0.1", "--seeds", "0", "--out", str(out),
                 "--figures"]) == 0
    for name in ("report.csv", "rows.csv", "report.png", "traces.png"):
        assert (out / name).exists()
    assert capsys.readouterr().out.startswith("wrote 100 examples")


def test_cli_bounds(capsys):
    assert main(["bounds", "--op", "lb_2machine_1round", "--epsilon", "0.1", "--d", "10"]) == 0
    assert capsys.readouterr().out.splitlines() == ["bound,value", "lb_2machine_1round,4.8"]
    assert main(["bounds", "--epsilon", "0.1", "--lambda", "0.2"]) == 1
    assert main(["bounds", "--op", "sample_complexity", "--epsilon", "0.1", "--log2H", "10"]) == 0
    assert capsys.readouterr().out.strip().endswith("sample_complexity,795")


def test_cli_report_merges(tmp_path, capsys):
    for sub, seed in (("a", 0), ("b", 1)):
        run_experiment(ExperimentConfig(**{**TINY, "seeds": (seed,)}, out=str(tmp_path / sub)))
    out = tmp_path / "merged"
    assert main(["report", str(tmp_path / "a"), str(tmp_path / "b"), "--out", str(out)]) == 0
    with open(out / "report.csv") as fh:
        assert len(list(csv.DictReader(fh))) == 2
    with open(out / "traces.csv") as fh:
        sources = {r["source"] for r in csv.DictReader(fh)}
    assert sources == {"tiny_lam0.1_seed0", "tiny_lam0.1_seed1"}
    assert (out / "report.png").stat().st_size > 0 and (out / "traces.png").stat().st_size > 0
    assert main(["report", str(out / "rows.csv"), "--out", str(out)]) == 2
