"""Tiny self-contained SVG line plots (no plotting stack dependency).

Renders the ROC comparison figure: one panel per false-positive universe,
one polyline per metric, fixed palette and layout, deterministic output for
identical inputs.
"""

from __future__ import annotations

PALETTE = (
    "#1f77b4",
    "#ff7f0e",
    "#2ca02c",
    "#d62728",
    "#9467bd",
    "#8c564b",
    "#e377c2",
    "#7f7f7f",
)

_PANEL = 320  # plot-area side in px
_MARGIN_LEFT = 58
_MARGIN_TOP = 34
_PANEL_GAP = 96
_LEGEND_H = 26


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _panel(
    x0: int, y0: int, title: str, series: dict[str, tuple], colors: dict[str, str]
) -> list[str]:
    parts = []
    parts.append(
        f'<rect x="{x0}" y="{y0}" width="{_PANEL}" height="{_PANEL}" '
        'fill="none" stroke="#333" stroke-width="1"/>'
    )
    parts.append(
        f'<text x="{x0 + _PANEL / 2:.0f}" y="{y0 - 12}" text-anchor="middle" '
        f'font-size="13" font-family="sans-serif">{title}</text>'
    )
    # axis ticks every 0.2
    for i in range(6):
        frac = i / 5.0
        px = x0 + frac * _PANEL
        py = y0 + _PANEL - frac * _PANEL
        parts.append(
            f'<line x1="{_fmt(px)}" y1="{y0 + _PANEL}" x2="{_fmt(px)}" '
            f'y2="{y0 + _PANEL + 4}" stroke="#333"/>'
        )
        parts.append(
            f'<text x="{_fmt(px)}" y="{y0 + _PANEL + 16}" text-anchor="middle" '
            f'font-size="10" font-family="sans-serif">{frac:.1f}</text>'
        )
        parts.append(
            f'<line x1="{x0 - 4}" y1="{_fmt(py)}" x2="{x0}" y2="{_fmt(py)}" '
            'stroke="#333"/>'
        )
        parts.append(
            f'<text x="{x0 - 7}" y="{_fmt(py + 3)}" text-anchor="end" '
            f'font-size="10" font-family="sans-serif">{frac:.1f}</text>'
        )
    parts.append(
        f'<text x="{x0 + _PANEL / 2:.0f}" y="{y0 + _PANEL + 32}" '
        'text-anchor="middle" font-size="11" font-family="sans-serif">'
        "false positive rate</text>"
    )
    parts.append(
        f'<text x="{x0 - 40}" y="{y0 + _PANEL / 2:.0f}" text-anchor="middle" '
        f'font-size="11" font-family="sans-serif" '
        f'transform="rotate(-90 {x0 - 40} {y0 + _PANEL / 2:.0f})">'
        "true positive rate</text>"
    )
    # chance diagonal
    parts.append(
        f'<line x1="{x0}" y1="{y0 + _PANEL}" x2="{x0 + _PANEL}" y2="{y0}" '
        'stroke="#bbb" stroke-dasharray="4,4"/>'
    )
    for name, (xs, ys) in series.items():
        color = colors[name]
        pts = " ".join(
            f"{_fmt(x0 + x * _PANEL)},{_fmt(y0 + _PANEL - y * _PANEL)}"
            for x, y in zip(xs, ys)
        )
        parts.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" '
            'stroke-width="1.5"/>'
        )
    return parts


def render_roc_svg(panels: dict[str, dict[str, tuple]]) -> str:
    """SVG document with one ROC panel per entry of `panels`.

    panels maps a panel title to {series name: (fpr array, tpr array)};
    series order decides legend order and palette assignment.
    """
    n_panels = max(1, len(panels))
    width = _MARGIN_LEFT + n_panels * _PANEL + (n_panels - 1) * _PANEL_GAP + 30
    names = []
    for series in panels.values():
        for name in series:
            if name not in names:
                names.append(name)
    legend_rows = (len(names) + 3) // 4
    height = _MARGIN_TOP + _PANEL + 56 + legend_rows * _LEGEND_H

    colors = {name: PALETTE[i % len(PALETTE)] for i, name in enumerate(names)}
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    for i, (title, series) in enumerate(panels.items()):
        x0 = _MARGIN_LEFT + i * (_PANEL + _PANEL_GAP)
        parts.extend(_panel(x0, _MARGIN_TOP, title, series, colors))

    legend_y = _MARGIN_TOP + _PANEL + 52
    for idx, name in enumerate(names):
        row, col = divmod(idx, 4)
        lx = _MARGIN_LEFT + col * 190
        ly = legend_y + row * _LEGEND_H
        color = colors[name]
        parts.append(
            f'<line x1="{lx}" y1="{ly}" x2="{lx + 22}" y2="{ly}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        parts.append(
            f'<text x="{lx + 28}" y="{ly + 4}" font-size="11" '
            f'font-family="sans-serif">{name}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
