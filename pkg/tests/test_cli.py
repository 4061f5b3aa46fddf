import json
import pathlib

import pytest
from fastapi.testclient import TestClient

from metricscope.api import create_app
from metricscope.cli import main
from metricscope.workspace import Session

DATA = pathlib.Path(__file__).resolve().parent.parent / "data"
CARS = str(DATA / "cars.csv")


def run(args, capsys=None):
    code = main(args)
    return code


class TestQueryCommand:
    def test_cars_q1_csv(self, tmp_path):
        out = tmp_path / "r.csv"
        code = run(
            ["query", "--dataset", CARS, "--metric", "euclidean",
             "--center-cod", "4", "--k", "51", "--out", str(out)]
        )
        assert code == 0
        lines = out.read_text().strip().split("\n")
        assert lines[0] == "cod,distance"
        assert len(lines) == 52
        cod, dist = lines[1].split(",")
        assert cod == "4"
        assert float(dist) == 0.0

    def test_k_zero_exit_2(self, tmp_path, capsys):
        code = run(
            ["query", "--dataset", CARS, "--metric", "euclidean",
             "--center-cod", "4", "--k", "0", "--out", str(tmp_path / "r.csv")]
        )
        assert code == 2
        assert "k must be >= 1" in capsys.readouterr().err

    def test_missing_dataset_exit_2(self, tmp_path, capsys):
        code = run(
            ["query", "--dataset", str(tmp_path / "nope.csv"), "--metric", "euclidean",
             "--center-cod", "1", "--k", "1"]
        )
        assert code == 2

    def test_radius_query(self, tmp_path):
        out = tmp_path / "r.csv"
        code = run(
            ["query", "--dataset", CARS, "--metric", "euclidean",
             "--center-cod", "4", "--radius", "100", "--out", str(out)]
        )
        assert code == 0
        for line in out.read_text().strip().split("\n")[1:]:
            assert float(line.split(",")[1]) <= 100.0

    def test_weighted_metric_flags(self, tmp_path):
        out = tmp_path / "r.csv"
        code = run(
            ["query", "--dataset", CARS, "--metric", "weighted_minkowski",
             "--p", "4", "--weights", "1,0,1,1,1,0,1,1",
             "--center-cod", "4", "--k", "51", "--out", str(out)]
        )
        assert code == 0

    def test_raw_center_vector(self, tmp_path):
        out = tmp_path / "r.csv"
        code = run(
            ["query", "--dataset", CARS, "--metric", "euclidean",
             "--center", "20,6,250,15,100,3000,76,1", "--k", "5", "--out", str(out)]
        )
        assert code == 0
        assert len(out.read_text().strip().split("\n")) == 6


class TestProjectCommand:
    def test_two_row_dataset(self, tmp_path):
        src = tmp_path / "two.csv"
        src.write_text("a,b,COD\n0,0,1\n3,4,2\n")
        out = tmp_path / "p.csv"
        code = run(
            ["project", "--dataset", str(src), "--metric", "euclidean",
             "--seed", "7", "--out", str(out)]
        )
        assert code == 0
        lines = out.read_text().strip().split("\n")
        assert lines[0] == "cod,x,y,z"
        rows = {ln.split(",")[0]: [float(v) for v in ln.split(",")[1:]] for ln in lines[1:]}
        xs = sorted([rows["1"][0], rows["2"][0]])
        assert xs == [0.0, 5.0]
        assert rows["1"][1:] == [0.0, 0.0]
        assert rows["2"][1:] == [0.0, 0.0]

    def test_meta_sidecar(self, tmp_path):
        out, meta = tmp_path / "p.csv", tmp_path / "p.json"
        code = run(
            ["project", "--dataset", CARS, "--metric", "euclidean", "--seed", "42",
             "--out", str(out), "--meta-out", str(meta)]
        )
        assert code == 0
        sidecar = json.loads(meta.read_text())
        assert len(sidecar["pivots"]) == 3
        assert sidecar["stress"] >= 0.0
        assert sidecar["seed"] == 42

    def test_deterministic(self, tmp_path):
        outs = []
        for name in ("a.csv", "b.csv"):
            out = tmp_path / name
            assert run(["project", "--dataset", CARS, "--metric", "euclidean",
                        "--seed", "42", "--out", str(out)]) == 0
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]


class TestViewsCommand:
    @pytest.mark.parametrize(
        "extra",
        [
            ["--technique", "parallel_coordinates"],
            ["--technique", "scatter", "--x-attr", "MPG", "--y-attr", "WEIGHT"],
            ["--technique", "table_lens", "--sort-attr", "CYLINDERS", "--direction", "desc"],
            ["--technique", "star"],
        ],
    )
    def test_renders_svg(self, tmp_path, extra):
        out = tmp_path / "v.svg"
        code = run(["views", "--dataset", CARS, *extra, "--out", str(out)])
        assert code == 0
        text = out.read_text()
        assert text.startswith("<svg")
        assert text.rstrip().endswith("</svg>")

    def test_svg_golden_stability(self, tmp_path):
        a, b = tmp_path / "a.svg", tmp_path / "b.svg"
        args = ["views", "--dataset", CARS, "--technique", "star"]
        assert run(args + ["--out", str(a)]) == 0
        assert run(args + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_scatter_missing_attrs_exit_2(self, tmp_path):
        code = run(["views", "--dataset", CARS, "--technique", "scatter",
                    "--out", str(tmp_path / "v.svg")])
        assert code == 2


class TestValidateMetricCommand:
    def test_euclidean_clean(self, capsys):
        assert run(["validate-metric", "--dataset", CARS, "--metric", "euclidean",
                    "--sample", "30"]) == 0
        assert "no axiom violations" in capsys.readouterr().out

    def test_exp_weighted_flagged(self, capsys):
        assert run(["validate-metric", "--dataset", CARS, "--metric", "exp_weighted",
                    "--p", "2", "--weights", "3,3,3,3,3,3,3,3", "--sample", "25"]) == 0
        assert "NOT a metric" in capsys.readouterr().out


class TestApiCliParity:
    def test_query_parity(self, tmp_path, cars_csv):
        out = tmp_path / "r.csv"
        assert run(["query", "--dataset", CARS, "--metric", "euclidean",
                    "--center-cod", "4", "--k", "51", "--out", str(out)]) == 0
        cli_entries = [
            (int(ln.split(",")[0]), float(ln.split(",")[1]))
            for ln in out.read_text().strip().split("\n")[1:]
        ]

        session = Session(seed=42)
        session.add_dataset(cars_csv, dataset_id="cars")
        client = TestClient(create_app(session))
        r = client.post("/queries", json={
            "dataset": "cars", "metric": {"name": "euclidean"},
            "center": {"cod": 4}, "knn": {"k": 51},
        })
        api_entries = [(e["cod"], e["distance"]) for e in r.json()["entries"]]
        assert cli_entries == api_entries

    def test_projection_parity(self, tmp_path, cars_csv):
        session = Session(seed=42)
        session.add_dataset(cars_csv, dataset_id="cars")
        client = TestClient(create_app(session))
        api = client.post("/queries", json={
            "dataset": "cars", "metric": {"name": "euclidean"},
            "center": {"cod": 4}, "knn": {"k": 40},
        }).json()
        proj = client.get(f"/workspaces/{api['workspace_id']}/projection").json()

        cods_file = tmp_path / "cods.txt"
        cods_file.write_text("\n".join(str(e["cod"]) for e in api["entries"]))
        out = tmp_path / "p.csv"
        assert run(["project", "--dataset", CARS, "--metric", "euclidean",
                    "--cods", str(cods_file), "--seed", str(api["seed"]),
                    "--out", str(out)]) == 0
        cli_coords = {
            int(ln.split(",")[0]): tuple(float(v) for v in ln.split(",")[1:])
            for ln in out.read_text().strip().split("\n")[1:]
        }
        api_coords = {c["cod"]: (c["x"], c["y"], c["z"]) for c in proj["coords"]}
        assert cli_coords == api_coords
