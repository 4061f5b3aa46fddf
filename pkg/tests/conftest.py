import pathlib

import numpy as np
import pytest

from metricscope.dataset import load_dataset

DATA_DIR = pathlib.Path(__file__).resolve().parent.parent / "data"


@pytest.fixture(scope="session")
def cars_csv() -> str:
    return (DATA_DIR / "cars.csv").read_text()


@pytest.fixture(scope="session")
def agro_csv() -> str:
    return (DATA_DIR / "agro.csv").read_text()


@pytest.fixture(scope="session")
def cars(cars_csv):
    return load_dataset(cars_csv, dataset_id="cars")


@pytest.fixture(scope="session")
def agro(agro_csv):
    return load_dataset(agro_csv, dataset_id="agro")


@pytest.fixture
def make_random_dataset():
    """Factory: (rows, dims, seed) -> Dataset with CODs 1..rows."""

    def factory(rows: int, dims: int, seed: int = 0, scale: float = 10.0):
        rng = np.random.default_rng(seed)
        values = rng.uniform(-scale, scale, size=(rows, dims))
        lines = [",".join(f"{v:.6f}" for v in row) + f",{i + 1}" for i, row in enumerate(values)]
        return load_dataset("\n".join(lines), dataset_id=f"rand-{rows}x{dims}-{seed}")

    return factory
