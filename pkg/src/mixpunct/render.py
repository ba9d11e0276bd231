"""Deterministic lattice diagrams (ASCII and self-contained SVG).

Colour code: red for Z-strings (e), blue for X-strings (m) and X-loops,
solid dark lines for rough boundary, dashed for smooth boundary.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from xml.sax.saxutils import escape

from .defects import Puncture
from .planar_code import ROUGH, CodeGeometry, Edge

__all__ = ["Scene", "render_ascii", "render_svg", "render"]

OVERLAY_CHARS = {"e": "r", "m": "b", "loop": "o"}
OVERLAY_COLOURS = {"e": "#d62728", "m": "#1f77b4", "loop": "#1f77b4"}
LEGEND = (
    "legend: + vertex  . removed vertex  -| edge  z Z-measured (rough)  "
    "x X-measured (smooth)  r e-string  b m-string  o X-loop  1-4 puncture"
)


@dataclass
class Scene:
    """Everything a diagram shows."""

    geometry: CodeGeometry
    punctures: list[Puncture] = field(default_factory=list)
    overlays: dict[str, set[Edge]] = field(default_factory=dict)
    title: str = ""


def _overlay_at(scene: Scene, e: Edge) -> str | None:
    for kind in ("loop", "m", "e"):
        if e in scene.overlays.get(kind, ()):
            return kind
    return None


def render_ascii(scene: Scene) -> str:
    g = scene.geometry
    grid = [[" "] * (2 * g.cols + 1) for _ in range(2 * g.rows + 1)]
    z_edges = set().union(*(p.z_edges for p in scene.punctures)) if scene.punctures else set()
    x_edges = set().union(*(p.x_edges for p in scene.punctures)) if scene.punctures else set()
    rough = set().union(*(p.rough_vertices for p in scene.punctures)) if scene.punctures else set()
    for i in range(g.rows + 1):
        for j in range(g.cols + 1):
            present = g.has_vertex((i, j)) and (i, j) not in rough
            grid[2 * i][2 * j] = "+" if present else "."
    for e in g.edges:
        kind, i, j = e
        r, c = (2 * i, 2 * j + 1) if kind == "h" else (2 * i + 1, 2 * j)
        ov = _overlay_at(scene, e)
        if ov:
            ch = OVERLAY_CHARS[ov]
        elif e in z_edges:
            ch = "z"
        elif e in x_edges:
            ch = "x"
        else:
            ch = "-" if kind == "h" else "|"
        grid[r][c] = ch
    for p in scene.punctures:
        label = p.id[-1]
        for i, j in p.cells:
            grid[2 * i + 1][2 * j + 1] = label
    lines = ["".join(row).rstrip() for row in grid]
    head = [scene.title] if scene.title else []
    return "\n".join(head + lines + [LEGEND]) + "\n"


CELL = 32
PAD = 24


def _xy(v) -> tuple[int, int]:
    i, j = v
    return PAD + j * CELL, PAD + i * CELL


def _line(a, b, colour: str, width: int, dash: str | None = None) -> str:
    (x1, y1), (x2, y2) = _xy(a), _xy(b)
    extra = f' stroke-dasharray="{dash}"' if dash else ""
    return (
        f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="{colour}" '
        f'stroke-width="{width}"{extra}/>'
    )


def render_svg(scene: Scene) -> str:
    g = scene.geometry
    w = 2 * PAD + g.cols * CELL
    h = 2 * PAD + g.rows * CELL + 16
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
        f'<rect x="0" y="0" width="{w}" height="{h}" fill="#ffffff"/>',
    ]
    if scene.title:
        out.append(f'<title>{escape(scene.title)}</title>')
    for p in scene.punctures:
        (x, y) = _xy(p.anchor)
        out.append(
            f'<rect x="{x}" y="{y}" width="{p.width * CELL}" height="{p.height * CELL}" '
            f'fill="#dddddd" stroke="none"/>'
        )
    for e in g.edges:
        a, b = CodeGeometry.endpoints(e)
        out.append(_line(a, b, "#bbbbbb", 1))
    # outer frame: rough sides solid, smooth sides dashed
    corners = {"top": ((0, 0), (0, g.cols)), "bottom": ((g.rows, 0), (g.rows, g.cols)),
               "left": ((0, 0), (g.rows, 0)), "right": ((0, g.cols), (g.rows, g.cols))}
    for side, (a, b) in corners.items():
        rough = getattr(g.boundary, side) == ROUGH
        out.append(_line(a, b, "#222222", 3, None if rough else "6,4"))
    for p in scene.punctures:
        for e, kind in p.boundary_segments():
            a, b = CodeGeometry.endpoints(e)
            out.append(_line(a, b, "#222222", 3, None if kind == ROUGH else "6,4"))
        cx = PAD + p.anchor[1] * CELL + p.width * CELL // 2
        cy = PAD + p.anchor[0] * CELL + p.height * CELL // 2 + 4
        out.append(f'<text x="{cx}" y="{cy}" font-size="11" text-anchor="middle">{escape(p.id)}</text>')
    for kind in ("e", "m", "loop"):
        for e in sorted(scene.overlays.get(kind, ())):
            a, b = CodeGeometry.endpoints(e)
            out.append(_line(a, b, OVERLAY_COLOURS[kind], 3, "2,2" if kind == "loop" else None))
    out.append(
        f'<text x="{PAD}" y="{h - 6}" font-size="10">red: e-string  blue: m-string / X-loop  '
        f'solid: rough  dashed: smooth</text>'
    )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render(scene: Scene, fmt: str = "ascii") -> str:
    if fmt == "ascii":
        return render_ascii(scene)
    if fmt == "svg":
        return render_svg(scene)
    raise ValueError(f"unknown format {fmt!r}")
