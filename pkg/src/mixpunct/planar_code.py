"""Unrotated planar code: qubits on the edges of a square lattice.

Coordinates are in cell units. A ``rows x cols`` patch has vertices
``(i, j)`` with ``0 <= i <= rows``, ``0 <= j <= cols`` and cells (plaquettes)
``(i, j)`` with ``0 <= i < rows``, ``0 <= j < cols``. Edges are
``("h", i, j)`` from vertex ``(i, j)`` to ``(i, j + 1)`` and ``("v", i, j)``
from ``(i, j)`` to ``(i + 1, j)``.

Each side is rough or smooth. A rough side drops its border edges and the
vertices on it, leaving dangling edges and weight-3 plaquettes; a smooth side
keeps the border edges and carries weight-3 vertices. Vertex generators are
X-type and detect ``e`` (ends of Z-strings); plaquette generators are Z-type
and detect ``m`` (ends of X-strings). Z-strings therefore terminate on rough
sides and X-strings on smooth sides.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property

import numpy as np

from .pauli_gf2 import PauliOperator, StabilizerTableau, measure_and_repair

__all__ = [
    "BoundaryType",
    "BoundarySpec",
    "CodeGeometry",
    "Edge",
    "build_geometry",
    "vertex_stabilizer",
    "plaquette_stabilizer",
    "ground_state",
    "all_boundary_specs",
]

Edge = tuple[str, int, int]
Site = tuple[int, int]

SIDES = ("top", "bottom", "left", "right")


class BoundaryType(str, Enum):
    ROUGH = "rough"
    SMOOTH = "smooth"


ROUGH = BoundaryType.ROUGH
SMOOTH = BoundaryType.SMOOTH


@dataclass(frozen=True)
class BoundarySpec:
    top: BoundaryType = ROUGH
    bottom: BoundaryType = ROUGH
    left: BoundaryType = SMOOTH
    right: BoundaryType = SMOOTH

    def __post_init__(self):
        for side in SIDES:
            object.__setattr__(self, side, BoundaryType(getattr(self, side)))

    def sides(self, kind: BoundaryType) -> list[str]:
        return [s for s in SIDES if getattr(self, s) == kind]

    def to_dict(self) -> dict[str, str]:
        return {s: getattr(self, s).value for s in SIDES}


def all_boundary_specs() -> list[BoundarySpec]:
    """The 16 per-side assignments, in a fixed order."""
    return [BoundarySpec(*combo) for combo in itertools.product((ROUGH, SMOOTH), repeat=4)]


class GeometryError(ValueError):
    pass


@dataclass(frozen=True)
class CodeGeometry:
    """Immutable lattice description.

    Attributes:
        rows, cols: number of cell rows and columns.
        boundary: per-side boundary types.
        edges: present edges in qubit-index order.
        vertices: vertex sites carrying an X-type generator.
        plaquettes: cell sites carrying a Z-type generator.
    """

    rows: int
    cols: int
    boundary: BoundarySpec
    edges: tuple[Edge, ...]
    vertices: tuple[Site, ...]
    plaquettes: tuple[Site, ...]
    qubit_index: dict[Edge, int] = field(compare=False, repr=False)

    @property
    def n_qubits(self) -> int:
        return len(self.edges)

    @cached_property
    def _vertex_set(self) -> frozenset[Site]:
        return frozenset(self.vertices)

    def has_vertex(self, v: Site) -> bool:
        return v in self._vertex_set

    def has_edge(self, e: Edge) -> bool:
        return e in self.qubit_index

    def qubit(self, e: Edge) -> int:
        try:
            return self.qubit_index[e]
        except KeyError:
            raise GeometryError(f"edge {e} is not part of the lattice") from None

    @staticmethod
    def edges_of_vertex(v: Site) -> list[Edge]:
        i, j = v
        return [("h", i, j - 1), ("h", i, j), ("v", i - 1, j), ("v", i, j)]

    @staticmethod
    def edges_of_cell(c: Site) -> list[Edge]:
        i, j = c
        return [("h", i, j), ("h", i + 1, j), ("v", i, j), ("v", i, j + 1)]

    @staticmethod
    def endpoints(e: Edge) -> tuple[Site, Site]:
        kind, i, j = e
        return ((i, j), (i, j + 1)) if kind == "h" else ((i, j), (i + 1, j))

    @staticmethod
    def cells_of_edge(e: Edge) -> list[Site]:
        kind, i, j = e
        return [(i - 1, j), (i, j)] if kind == "h" else [(i, j - 1), (i, j)]

    def in_patch(self, c: Site) -> bool:
        return 0 <= c[0] < self.rows and 0 <= c[1] < self.cols

    def vertex_edges(self, v: Site) -> list[Edge]:
        return [e for e in self.edges_of_vertex(v) if e in self.qubit_index]

    def cell_edges(self, c: Site) -> list[Edge]:
        return [e for e in self.edges_of_cell(c) if e in self.qubit_index]

    def z_string(self, edges) -> PauliOperator:
        return PauliOperator.z_type(self.n_qubits, (self.qubit(e) for e in edges))

    def x_string(self, edges) -> PauliOperator:
        return PauliOperator.x_type(self.n_qubits, (self.qubit(e) for e in edges))

    @cached_property
    def independent_generators(self) -> list[PauliOperator]:
        """All vertex and plaquette generators minus the one global redundancy.

        With no smooth side the product of all plaquettes is the identity, and
        with no rough side so is the product of all vertices; the last
        plaquette (resp. vertex) is dropped in those cases.
        """
        verts = list(self.vertices)
        plaqs = list(self.plaquettes)
        if not self.boundary.sides(SMOOTH):
            plaqs = plaqs[:-1]
        if not self.boundary.sides(ROUGH):
            verts = verts[:-1]
        return [vertex_stabilizer(self, v) for v in verts] + [plaquette_stabilizer(self, p) for p in plaqs]

    @property
    def n_logical(self) -> int:
        return self.n_qubits - len(self.independent_generators)

    def logical_z(self) -> PauliOperator | None:
        """Z-string across the patch between the two rough sides, if opposite."""
        b = self.boundary
        if b.top == b.bottom == ROUGH and b.left == b.right == SMOOTH:
            return self.z_string([("v", i, 0) for i in range(self.rows)])
        if b.left == b.right == ROUGH and b.top == b.bottom == SMOOTH:
            return self.z_string([("h", 0, j) for j in range(self.cols)])
        return None

    def to_dict(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "boundary": self.boundary.to_dict(),
            "qubits": [[kind, i, j] for kind, i, j in self.edges],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> CodeGeometry:
        g = build_geometry(data["rows"], data["cols"], BoundarySpec(**data["boundary"]))
        if "qubits" in data and [list(e) for e in g.edges] != [list(e) for e in data["qubits"]]:
            raise GeometryError("qubit index map does not match the stated dimensions")
        return g


def build_geometry(rows: int, cols: int, boundary: BoundarySpec | None = None) -> CodeGeometry:
    """Enumerate edges, vertices and plaquettes of a ``rows x cols`` patch."""
    if rows < 2 or cols < 2:
        raise GeometryError(f"patch must be at least 2x2 cells, got {rows}x{cols}")
    boundary = boundary or BoundarySpec()
    rough = set(boundary.sides(ROUGH))

    def on_rough_side(v: Site) -> bool:
        i, j = v
        return (
            ("top" in rough and i == 0)
            or ("bottom" in rough and i == rows)
            or ("left" in rough and j == 0)
            or ("right" in rough and j == cols)
        )

    edges: list[Edge] = []
    for i in range(rows + 1):
        for j in range(cols):
            if ("top" in rough and i == 0) or ("bottom" in rough and i == rows):
                continue
            edges.append(("h", i, j))
    for i in range(rows):
        for j in range(cols + 1):
            if ("left" in rough and j == 0) or ("right" in rough and j == cols):
                continue
            edges.append(("v", i, j))
    # order by doubled coordinate so indices follow the drawing row by row
    edges.sort(key=lambda e: (2 * e[1] + (e[0] == "v"), 2 * e[2] + (e[0] == "h")))
    index = {e: q for q, e in enumerate(edges)}
    vertices = tuple(
        (i, j) for i in range(rows + 1) for j in range(cols + 1) if not on_rough_side((i, j))
    )
    plaquettes = tuple((i, j) for i in range(rows) for j in range(cols))
    return CodeGeometry(rows, cols, boundary, tuple(edges), vertices, plaquettes, index)


def vertex_stabilizer(g: CodeGeometry, v: Site) -> PauliOperator:
    """X-product over the present edges incident to vertex ``v``."""
    if not g.has_vertex(v):
        raise GeometryError(f"unknown vertex {v}")
    return g.x_string(g.vertex_edges(v))


def plaquette_stabilizer(g: CodeGeometry, p: Site) -> PauliOperator:
    """Z-product over the present edges bounding cell ``p``."""
    if not g.in_patch(p):
        raise GeometryError(f"unknown plaquette {p}")
    return g.z_string(g.cell_edges(p))


def ground_state(g: CodeGeometry, rng: np.random.Generator) -> StabilizerTableau:
    """Reference ground state with every generator at +1.

    Prepared from ``|0...0>`` (every plaquette and the Z-type logical already
    at +1) by measuring each vertex generator and repairing -1 outcomes. The
    repair keeps everything that commuted with the measurement, so the result
    does not depend on ``rng``. When the patch encodes a logical qubit, its
    Z-string logical between the rough sides is fixed at +1.
    """
    state = StabilizerTableau.zero_state(g.n_qubits)
    for v in g.vertices:
        _, state = measure_and_repair(state, vertex_stabilizer(g, v), rng)
    return state
