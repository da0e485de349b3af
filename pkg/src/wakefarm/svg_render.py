"""Static SVG renders: farm layout maps and small line charts.

Layout geometry is emitted in site coordinates (metres) inside a single
transform group, so tests and downstream tools can parse shapes back into
physical units directly.
"""

from __future__ import annotations

import math
from typing import Sequence

from .cable_routing import CableTree, minimum_spanning_tree
from .energy_economics import FarmLayout
from .wake_engine import WakeParams, _flow_unit_vectors, wake_radius

PRIMARY_CONE = "#d62728"  # most frequent sector
SECONDARY_CONE = "#1f77b4"  # second sector


def _fmt(x: float) -> str:
    return f"{x:.3f}"


def render_layout_svg(
    layout: FarmLayout,
    wake: WakeParams,
    dominant_thetas: Sequence[float] = (),
    deficits: Sequence[float] | None = None,
    tree: CableTree | None = None,
    cone_length: float = 2500.0,
    title: str = "",
    size: int = 900,
) -> str:
    """Layout map: boundary, cable tree, capacity-scaled turbine markers,
    substation, and wake cones for the top wind sectors (first red, second
    blue).  Cone half-width at distance x equals the wake radius there.
    A lone turbine has no interactions, so no cones are drawn for it.
    """
    b = layout.boundary
    margin = 60.0
    scale = (size - 2 * margin) / max(b.width, b.height)
    tx = margin - b.x_min * scale
    ty = (size - margin) + b.y_min * scale  # flips site y (north-up) into SVG space

    out: list[str] = []
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">'
    )
    out.append(f'<rect width="{size}" height="{size}" fill="#ffffff"/>')
    if title:
        out.append(
            f'<text x="{margin}" y="{margin * 0.6}" font-size="16" '
            f'font-family="sans-serif">{title}</text>'
        )
    out.append(f'<g transform="matrix({scale} 0 0 {-scale} {_fmt(tx)} {_fmt(ty)})">')
    out.append(
        f'<rect class="boundary" x="{_fmt(b.x_min)}" y="{_fmt(b.y_min)}" '
        f'width="{_fmt(b.width)}" height="{_fmt(b.height)}" fill="none" '
        f'stroke="#444444" stroke-width="{_fmt(2.0 / scale)}" stroke-dasharray="'
        f'{_fmt(8.0 / scale)},{_fmt(5.0 / scale)}"/>'
    )

    if len(layout.turbines) >= 2:
        for rank, theta in enumerate(list(dominant_thetas)[:2]):
            color = PRIMARY_CONE if rank == 0 else SECONDARY_CONE
            css = "wake-cone wake-cone-primary" if rank == 0 else "wake-cone wake-cone-secondary"
            flow, cross = _flow_unit_vectors(float(theta))
            for t in layout.turbines:
                r0 = t.spec.rotor_diameter / 2.0
                r1 = wake_radius(cone_length, t.spec.rotor_diameter, wake.k)
                sx, sy = t.x, t.y
                ex, ey = sx + flow[0] * cone_length, sy + flow[1] * cone_length
                pts = [
                    (sx + cross[0] * r0, sy + cross[1] * r0),
                    (sx - cross[0] * r0, sy - cross[1] * r0),
                    (ex - cross[0] * r1, ey - cross[1] * r1),
                    (ex + cross[0] * r1, ey + cross[1] * r1),
                ]
                path = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in pts)
                out.append(
                    f'<polygon class="{css}" points="{path}" fill="{color}" '
                    f'fill-opacity="0.12" stroke="{color}" stroke-opacity="0.35" '
                    f'stroke-width="{_fmt(1.0 / scale)}"/>'
                )

    if tree is None:
        points = [(t.x, t.y) for t in layout.turbines] + [tuple(layout.substation)]
        tree = minimum_spanning_tree(points, substation_index=len(points) - 1)
    for i, j in tree.edges:
        (x1, y1), (x2, y2) = tree.nodes[i], tree.nodes[j]
        out.append(
            f'<line class="cable" x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" '
            f'y2="{_fmt(y2)}" stroke="#777777" stroke-width="{_fmt(1.5 / scale)}"/>'
        )

    for idx, t in enumerate(layout.turbines):
        r = 30.0 * math.sqrt(t.spec.rated_power)
        label = t.spec.name
        if deficits is not None:
            label += f" deficit {deficits[idx]:.3f}"
        out.append(
            f'<circle class="turbine" cx="{_fmt(t.x)}" cy="{_fmt(t.y)}" r="{_fmt(r)}" '
            f'fill="#2ca02c" fill-opacity="0.85" stroke="#145214" '
            f'stroke-width="{_fmt(1.0 / scale)}"><title>{label}</title></circle>'
        )

    sx, sy = layout.substation
    half = 160.0
    out.append(
        f'<rect class="substation" x="{_fmt(sx - half)}" y="{_fmt(sy - half)}" '
        f'width="{_fmt(2 * half)}" height="{_fmt(2 * half)}" fill="#ff7f0e" '
        f'stroke="#8c4500" stroke-width="{_fmt(1.0 / scale)}"/>'
    )
    out.append("</g>")

    # scale bar in screen space
    bar_km = 1.0
    while bar_km * 1e3 * scale < 40.0:
        bar_km *= 5.0
    bar_px = bar_km * 1e3 * scale
    y_bar = size - margin / 2.0
    out.append(
        f'<line class="scale-bar" x1="{margin}" y1="{y_bar}" x2="{_fmt(margin + bar_px)}" '
        f'y2="{y_bar}" stroke="#000000" stroke-width="2"/>'
    )
    out.append(
        f'<text x="{_fmt(margin + bar_px + 8)}" y="{_fmt(y_bar + 4)}" font-size="13" '
        f'font-family="sans-serif">{bar_km:g} km</text>'
    )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_line_chart(
    xs: Sequence[float],
    ys: Sequence[float],
    title: str,
    x_label: str,
    y_label: str,
    width: int = 640,
    height: int = 420,
) -> str:
    """Minimal line chart with point markers and axis tick labels."""
    if len(xs) != len(ys) or not xs:
        raise ValueError("xs and ys must be equal-length and non-empty")
    ml, mr, mt, mb = 80.0, 25.0, 45.0, 55.0
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    pad = 0.06 * (y_hi - y_lo)
    y_lo, y_hi = y_lo - pad, y_hi + pad

    def px(x: float) -> float:
        return ml + (x - x_lo) / (x_hi - x_lo) * (width - ml - mr)

    def py(y: float) -> float:
        return height - mb - (y - y_lo) / (y_hi - y_lo) * (height - mt - mb)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="#ffffff"/>',
        f'<text x="{width / 2}" y="25" text-anchor="middle" font-size="15" '
        f'font-family="sans-serif">{title}</text>',
        f'<line x1="{ml}" y1="{height - mb}" x2="{width - mr}" y2="{height - mb}" '
        f'stroke="#000"/>',
        f'<line x1="{ml}" y1="{mt}" x2="{ml}" y2="{height - mb}" stroke="#000"/>',
        f'<text x="{(ml + width - mr) / 2}" y="{height - 12}" text-anchor="middle" '
        f'font-size="13" font-family="sans-serif">{x_label}</text>',
        f'<text x="18" y="{(mt + height - mb) / 2}" text-anchor="middle" font-size="13" '
        f'font-family="sans-serif" transform="rotate(-90 18 {(mt + height - mb) / 2})">'
        f"{y_label}</text>",
    ]
    for i in range(5):
        yv = y_lo + i * (y_hi - y_lo) / 4.0
        out.append(
            f'<text x="{ml - 8}" y="{_fmt(py(yv) + 4)}" text-anchor="end" font-size="11" '
            f'font-family="sans-serif">{yv:.1f}</text>'
        )
    for x in xs:
        out.append(
            f'<text x="{_fmt(px(x))}" y="{height - mb + 18}" text-anchor="middle" '
            f'font-size="11" font-family="sans-serif">{x:g}</text>'
        )
    poly = " ".join(f"{_fmt(px(x))},{_fmt(py(y))}" for x, y in zip(xs, ys))
    out.append(f'<polyline points="{poly}" fill="none" stroke="#1f77b4" stroke-width="2"/>')
    for x, y in zip(xs, ys):
        out.append(f'<circle cx="{_fmt(px(x))}" cy="{_fmt(py(y))}" r="4" fill="#1f77b4"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
