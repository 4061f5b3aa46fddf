"""Deterministic SVG export of view models (golden-file friendly).

Coordinates are formatted with a fixed '%.4f' so output is byte-stable
across platforms and runs.
"""

from __future__ import annotations

from .errors import UnsupportedError
from .views import ViewModel

WIDTH = 800
HEIGHT = 500
MARGIN = 40


def _f(v: float) -> str:
    return f"{v:.4f}"


def _header() -> str:
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">\n'
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>\n'
    )


def render_svg(vm: ViewModel) -> str:
    if vm.technique == "parallel_coordinates":
        return _parallel(vm)
    if vm.technique == "scatter":
        return _scatter(vm)
    if vm.technique == "table_lens":
        return _table_lens(vm)
    if vm.technique == "star":
        return _star(vm)
    raise UnsupportedError(f"no SVG renderer for technique {vm.technique!r}")


def _parallel(vm: ViewModel) -> str:
    axes = vm.axis_meta["axes"]
    n = len(axes)
    xs = [MARGIN + i * (WIDTH - 2 * MARGIN) / max(n - 1, 1) for i in range(n)]
    out = [_header()]
    for i, ax in enumerate(axes):
        out.append(
            f'<line x1="{_f(xs[i])}" y1="{MARGIN}" x2="{_f(xs[i])}" '
            f'y2="{HEIGHT - MARGIN}" stroke="#999"/>\n'
            f'<text x="{_f(xs[i])}" y="{HEIGHT - MARGIN + 16}" font-size="10" '
            f'text-anchor="middle">{ax["label"]}</text>\n'
        )
    for item in vm.items:
        pts = " ".join(
            f"{_f(xs[i])},{_f(HEIGHT - MARGIN - v * (HEIGHT - 2 * MARGIN))}"
            for i, v in enumerate(item["polyline"])
        )
        out.append(f'<polyline points="{pts}" fill="none" stroke="#2a6" stroke-opacity="0.6"/>\n')
    out.append("</svg>\n")
    return "".join(out)


def _scatter(vm: ViewModel) -> str:
    xm, ym = vm.axis_meta["x"], vm.axis_meta["y"]
    xr = xm["max"] - xm["min"] or 1.0
    yr = ym["max"] - ym["min"] or 1.0
    out = [_header()]
    out.append(
        f'<text x="{WIDTH // 2}" y="{HEIGHT - 8}" font-size="11" text-anchor="middle">{xm["label"]}</text>\n'
        f'<text x="12" y="{HEIGHT // 2}" font-size="11" text-anchor="middle" '
        f'transform="rotate(-90 12 {HEIGHT // 2})">{ym["label"]}</text>\n'
    )
    for item in vm.items:
        px = MARGIN + (item["x"] - xm["min"]) / xr * (WIDTH - 2 * MARGIN)
        py = HEIGHT - MARGIN - (item["y"] - ym["min"]) / yr * (HEIGHT - 2 * MARGIN)
        out.append(f'<circle cx="{_f(px)}" cy="{_f(py)}" r="3" fill="#26c" fill-opacity="0.7"/>\n')
    out.append("</svg>\n")
    return "".join(out)


def _table_lens(vm: ViewModel) -> str:
    cols = vm.axis_meta["columns"]
    n = len(cols)
    row_h = (HEIGHT - 2 * MARGIN) / max(len(vm.items), 1)
    col_w = (WIDTH - 2 * MARGIN) / n
    out = [_header()]
    for i, col in enumerate(cols):
        out.append(
            f'<text x="{_f(MARGIN + (i + 0.5) * col_w)}" y="{MARGIN - 8}" font-size="10" '
            f'text-anchor="middle">{col["label"]}</text>\n'
        )
    for r, item in enumerate(vm.items):
        y = MARGIN + r * row_h
        for i, v in enumerate(item["bars"]):
            out.append(
                f'<rect x="{_f(MARGIN + i * col_w)}" y="{_f(y)}" '
                f'width="{_f(v * (col_w - 2))}" height="{_f(max(row_h - 1, 0.5))}" fill="#c62"/>\n'
            )
    out.append("</svg>\n")
    return "".join(out)


def _star(vm: ViewModel) -> str:
    cx, cy = WIDTH / 2, HEIGHT / 2
    scale = (min(WIDTH, HEIGHT) - 2 * MARGIN) / 2
    out = [_header()]
    for ax in vm.axis_meta["axes"]:
        out.append(
            f'<line x1="{_f(cx)}" y1="{_f(cy)}" x2="{_f(cx + ax["ux"] * scale)}" '
            f'y2="{_f(cy - ax["uy"] * scale)}" stroke="#bbb"/>\n'
            f'<text x="{_f(cx + ax["ux"] * scale * 1.05)}" y="{_f(cy - ax["uy"] * scale * 1.05)}" '
            f'font-size="10" text-anchor="middle">{ax["label"]}</text>\n'
        )
    for item in vm.items:
        out.append(
            f'<circle cx="{_f(cx + item["x"] * scale / 2)}" cy="{_f(cy - item["y"] * scale / 2)}" '
            f'r="3" fill="#62c" fill-opacity="0.7"/>\n'
        )
    out.append("</svg>\n")
    return "".join(out)
