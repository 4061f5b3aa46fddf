"""Generate the bundled benchmark datasets deterministically.

data/cars.csv  -- 406 road-test records, 8 attributes + COD. Car 4 is a
                  heavy high-power American V8 from 1970; car 369 is an
                  economical Japanese car from 1981. Attributes are
                  correlated through the cylinder class the way the real
                  road-test tables are.
data/agro.csv  -- 410 monthly agrometeorological records (5 regions x 82
                  months), 9 attributes + COD (CODs 21..430). Vegetation
                  index is anti-correlated with temperature; the
                  evapotranspiration block follows temperature.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

OUT_DIR = Path(__file__).resolve().parent.parent / "data"

CARS_HEADER = "MPG,CYLINDERS,DISPLACEMENT,ACCELERATION,HORSEPOWER,WEIGHT,YEAR,ORIGIN,COD"
AGRO_HEADER = (
    "PRECIPITATION,MAX_TEMP,MIN_TEMP,NDVI,WRSI,AVG_TEMP,ETP,ETR,ETM,COD"
)


def make_cars(rng: np.random.Generator) -> list[str]:
    rows = []
    # cylinder classes with (share, displacement, horsepower, weight, mpg) centers
    classes = [
        (4, 0.51, 110.0, 80.0, 2300.0, 29.0),
        (6, 0.21, 280.0, 135.0, 3300.0, 19.0),
        (8, 0.28, 330.0, 160.0, 4200.0, 14.5),
    ]
    shares = np.array([c[1] for c in classes])
    for cod in range(1, 407):
        cls = classes[rng.choice(3, p=shares / shares.sum())]
        cyl, _, disp_c, hp_c, wt_c, mpg_c = cls
        year = int(rng.integers(70, 83))
        origin = int(rng.choice([1, 2, 3], p=[0.62, 0.20, 0.18])) if cyl == 4 else 1
        disp = max(60.0, rng.normal(disp_c, disp_c * 0.18))
        hp = max(45.0, rng.normal(hp_c, hp_c * 0.18) + (disp - disp_c) * 0.2)
        wt = max(1500.0, rng.normal(wt_c, wt_c * 0.08) + (disp - disp_c) * 3.0)
        mpg = max(9.0, rng.normal(mpg_c, 2.5) - (wt - wt_c) * 0.002 + (year - 76) * 0.4)
        acc = max(8.0, rng.normal(16.0, 2.0) - (hp - hp_c) * 0.03)
        if cod == 4:  # non-economic American V8, 1970
            cyl, year, origin = 8, 70, 1
            disp, hp, wt, mpg, acc = 455.0, 225.0, 4425.0, 10.0, 10.0
        if cod == 369:  # economical Japanese car, 1981
            cyl, year, origin = 4, 81, 2
            disp, hp, wt, mpg, acc = 89.0, 62.0, 1845.0, 37.7, 15.8
        rows.append(
            f"{mpg:.1f},{cyl},{disp:.1f},{acc:.1f},{hp:.1f},{wt:.1f},{year},{origin},{cod}"
        )
    return rows


def make_agro(rng: np.random.Generator) -> list[str]:
    rows = []
    region_bias = rng.normal(0.0, 1.0, size=5)
    cod = 21
    for region in range(5):
        for month in range(82):
            season = np.sin(2 * np.pi * (month % 12) / 12.0)
            avg_t = 23.0 + 4.0 * season + region_bias[region] + rng.normal(0, 0.8)
            max_t = avg_t + 6.5 + rng.normal(0, 0.7)
            min_t = avg_t - 6.0 + rng.normal(0, 0.7)
            precip = max(0.0, 120.0 + 90.0 * season + rng.normal(0, 35.0))
            ndvi = min(0.95, max(0.1, 0.62 - 0.04 * (avg_t - 23.0) + rng.normal(0, 0.05)))
            wrsi = min(1.0, max(0.2, 0.75 + 0.0015 * (precip - 120.0) + rng.normal(0, 0.06)))
            etp = max(20.0, 95.0 + 9.0 * (avg_t - 23.0) + rng.normal(0, 6.0))
            etr = max(10.0, etp * wrsi + rng.normal(0, 5.0))
            etm = max(10.0, etp - rng.normal(8.0, 4.0))
            rows.append(
                f"{precip:.1f},{max_t:.2f},{min_t:.2f},{ndvi:.3f},{wrsi:.3f},"
                f"{avg_t:.2f},{etp:.1f},{etr:.1f},{etm:.1f},{cod}"
            )
            cod += 1
    return rows


def main():
    OUT_DIR.mkdir(exist_ok=True)
    rng = np.random.default_rng(20100901)
    cars = [CARS_HEADER] + make_cars(rng)
    (OUT_DIR / "cars.csv").write_text("\n".join(cars) + "\n")
    agro = [AGRO_HEADER] + make_agro(rng)
    (OUT_DIR / "agro.csv").write_text("\n".join(agro) + "\n")
    print(f"wrote {OUT_DIR / 'cars.csv'} ({len(cars) - 1} rows)")
    print(f"wrote {OUT_DIR / 'agro.csv'} ({len(agro) - 1} rows)")


if __name__ == "__main__":
    main()
