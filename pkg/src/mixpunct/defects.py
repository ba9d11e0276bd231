"""Punctures on the planar code: creation, strings, loops, charge readout, motion.

A puncture is a rectangle of cells turned into a hole by single-qubit
measurements. Its data are

* ``rough_vertices``: vertex generators no longer enforced (``e`` condenses),
* ``hole_cells``: plaquette generators no longer enforced (``m`` condenses),
* ``z_edges``: edges with both endpoints rough, measured in Z,
* ``x_edges``: edges between two hole cells, measured in X.

A rough puncture has every vertex rough, a smooth puncture every cell in the
hole, and a mixed puncture is rough along its top and right sides and smooth
along its bottom and left sides, so the boundary type changes at the
top-left and bottom-right corners.

The enclosing X-loop (product of the vertex generators over the puncture's
cells) reads ``(-1)**(#e inside)`` and the Z-loop (product of its plaquettes)
reads ``(-1)**(#m inside)``.

Motion extends the hole by one cell and contracts the rear. Every measurement
that would leave a wrong sign is repaired with the generator it displaced
(see :func:`~mixpunct.pauli_gf2.measure_and_repair`), which keeps every
operator that commutes with the measurement, so charge is transported and
results do not depend on the random draws.
"""

from __future__ import annotations

import copy
from collections import deque
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Iterable, Literal

import numpy as np

from .pauli_gf2 import (
    PauliOperator,
    StabilizerTableau,
    apply_pauli,
    expectation,
    measure,
    measure_and_repair,
    multiply,
)
from .planar_code import (
    ROUGH,
    SMOOTH,
    BoundaryType,
    CodeGeometry,
    Edge,
    Site,
    ground_state,
    plaquette_stabilizer,
    vertex_stabilizer,
)

__all__ = [
    "Puncture",
    "PunctureCode",
    "StringOperator",
    "DefectError",
    "ClearanceError",
    "CondensationError",
    "LoopCrossingError",
    "DIRECTIONS",
]

PunctureKind = Literal["rough", "smooth", "mixed"]
AnyonType = Literal["e", "m"]

DIRECTIONS: dict[str, tuple[int, int]] = {
    "up": (-1, 0),
    "down": (1, 0),
    "left": (0, -1),
    "right": (0, 1),
}

CHARGE_LABELS = {(1, 1): "1", (-1, 1): "e", (1, -1): "m", (-1, -1): "eps"}


class DefectError(ValueError):
    pass


class ClearanceError(DefectError):
    pass


class CondensationError(DefectError):
    pass


class LoopCrossingError(DefectError):
    pass


def _cells(anchor: Site, height: int, width: int) -> frozenset[Site]:
    r0, c0 = anchor
    return frozenset((r0 + i, c0 + j) for i in range(height) for j in range(width))


@dataclass(frozen=True)
class Puncture:
    """Rectangular hole defect.

    ``anchor`` is the top-left cell; ``orientation`` counts quarter turns of
    the boundary pattern and stays 0 (rotation is not an operation here).
    """

    id: str
    anchor: Site
    height: int = 1
    width: int = 1
    kind: PunctureKind = "mixed"
    orientation: int = 0

    def __post_init__(self):
        if self.height < 1 or self.width < 1:
            raise DefectError("puncture needs at least one cell")
        if self.kind not in ("rough", "smooth", "mixed"):
            raise DefectError(f"unknown puncture kind {self.kind!r}")

    @cached_property
    def cells(self) -> frozenset[Site]:
        return _cells(self.anchor, self.height, self.width)

    @cached_property
    def corner_vertices(self) -> frozenset[Site]:
        r0, c0 = self.anchor
        return frozenset(
            (r0 + i, c0 + j) for i in range(self.height + 1) for j in range(self.width + 1)
        )

    @cached_property
    def rough_vertices(self) -> frozenset[Site]:
        r0, c0 = self.anchor
        if self.kind == "rough":
            return self.corner_vertices
        if self.kind == "smooth":
            return frozenset()
        top = {(r0, c0 + j) for j in range(self.width + 1)}
        right = {(r0 + i, c0 + self.width) for i in range(self.height + 1)}
        return frozenset(top | right)

    @cached_property
    def hole_cells(self) -> frozenset[Site]:
        return frozenset() if self.kind == "rough" else self.cells

    @cached_property
    def z_edges(self) -> frozenset[Edge]:
        rv = self.rough_vertices
        return frozenset(e for e in self._edges() if all(v in rv for v in CodeGeometry.endpoints(e)))

    @cached_property
    def x_edges(self) -> frozenset[Edge]:
        hc = self.hole_cells
        return frozenset(
            e
            for e in self._edges()
            if e not in self.z_edges and all(c in hc for c in CodeGeometry.cells_of_edge(e))
        )

    @cached_property
    def measured_edges(self) -> frozenset[Edge]:
        return self.z_edges | self.x_edges

    def _edges(self) -> set[Edge]:
        out: set[Edge] = set()
        for c in self.cells:
            out.update(CodeGeometry.edges_of_cell(c))
        return out

    def boundary_segments(self) -> list[tuple[Edge, BoundaryType]]:
        """Perimeter edges clockwise from the top-left corner, with their type.

        A perimeter edge is rough when it is measured in Z (strings of X
        cannot cross it) and smooth otherwise.
        """
        r0, c0 = self.anchor
        h, w = self.height, self.width
        ring: list[Edge] = []
        ring += [("h", r0, c0 + j) for j in range(w)]
        ring += [("v", r0 + i, c0 + w) for i in range(h)]
        ring += [("h", r0 + h, c0 + j) for j in reversed(range(w))]
        ring += [("v", r0 + i, c0) for i in reversed(range(h))]
        return [(e, ROUGH if e in self.z_edges else SMOOTH) for e in ring]

    def type_changes(self) -> int:
        types = [t for _, t in self.boundary_segments()]
        return sum(1 for a, b in zip(types, types[1:] + types[:1]) if a != b)

    def shifted(self, direction: str) -> Puncture:
        dr, dc = DIRECTIONS[direction]
        return replace(self, anchor=(self.anchor[0] + dr, self.anchor[1] + dc))

    def grown(self, direction: str) -> Puncture:
        """Rectangle covering this puncture and its shift by one cell."""
        dr, dc = DIRECTIONS[direction]
        r0, c0 = self.anchor
        return replace(
            self,
            anchor=(r0 + min(dr, 0), c0 + min(dc, 0)),
            height=self.height + abs(dr),
            width=self.width + abs(dc),
        )

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "anchor": list(self.anchor),
            "height": self.height,
            "width": self.width,
            "kind": self.kind,
        }


@dataclass(frozen=True)
class StringOperator:
    """Open string of Z (``e``) on primal edges or X (``m``) across dual edges."""

    anyon_type: AnyonType
    path: tuple[Edge, ...]
    endpoints: tuple[str, str]

    def pauli(self, g: CodeGeometry) -> PauliOperator:
        return g.z_string(self.path) if self.anyon_type == "e" else g.x_string(self.path)


def _chebyshev_gap(a: Iterable[Site], b: Iterable[Site]) -> int:
    return min(max(abs(p[0] - q[0]), abs(p[1] - q[1])) for p in a for q in b) - 1


def _odd_nodes(items) -> list:
    count: dict = {}
    for node in items:
        count[node] = count.get(node, 0) + 1
    return sorted(n for n, k in count.items() if k % 2)


class PunctureCode:
    """A planar code state together with the punctures cut into it.

    Methods replace :attr:`state` with new tableaux; :meth:`copy` gives an
    independent instance. ``log`` records strings, loops and moves in order.
    """

    def __init__(
        self,
        geometry: CodeGeometry,
        rng: np.random.Generator,
        state: StabilizerTableau | None = None,
    ):
        self.geometry = geometry
        self.rng = rng
        self.state = state if state is not None else ground_state(geometry, rng)
        self.punctures: dict[str, Puncture] = {}
        self.log: list[dict] = []

    def copy(self) -> PunctureCode:
        other = PunctureCode.__new__(PunctureCode)
        other.geometry = self.geometry
        other.rng = self.rng
        other.state = self.state
        other.punctures = dict(self.punctures)
        other.log = copy.deepcopy(self.log)
        return other

    # -- bookkeeping ------------------------------------------------------

    def _check_placement(self, p: Puncture, ignore: str | None = None) -> None:
        g = self.geometry
        for r, c in p.cells:
            if not (1 <= r <= g.rows - 2 and 1 <= c <= g.cols - 2):
                raise ClearanceError(f"puncture {p.id} at {p.anchor} is within one cell of the outer boundary")
        for other in self.punctures.values():
            if other.id in (ignore, p.id):
                continue
            if _chebyshev_gap(p.cells, other.cells) < 1:
                raise ClearanceError(f"puncture {p.id} at {p.anchor} is too close to {other.id}")

    def _measure_fixed(self, op: PauliOperator) -> None:
        _, self.state = measure_and_repair(self.state, op, self.rng)

    def _deform(self, old: Puncture | None, new: Puncture | None) -> None:
        """Move the hole structure from ``old`` to ``new`` by measurements."""
        g = self.geometry
        oz = old.z_edges if old else frozenset()
        ox = old.x_edges if old else frozenset()
        ov = old.rough_vertices if old else frozenset()
        oc = old.hole_cells if old else frozenset()
        nz = new.z_edges if new else frozenset()
        nx = new.x_edges if new else frozenset()
        nv = new.rough_vertices if new else frozenset()
        nc = new.hole_cells if new else frozenset()
        for e in sorted(nz - oz):
            self._measure_fixed(g.z_string([e]))
        for e in sorted(nx - ox):
            self._measure_fixed(g.x_string([e]))
        for v in sorted(ov - nv):
            self._measure_fixed(vertex_stabilizer(g, v))
        for c in sorted(oc - nc):
            self._measure_fixed(plaquette_stabilizer(g, c))

    # -- creation ---------------------------------------------------------

    def create_puncture(
        self,
        pid: str,
        region: Iterable[Site],
        kind: PunctureKind = "mixed",
    ) -> Puncture:
        """Cut a rectangular hole of the given kind; it starts with vacuum charge."""
        cells = sorted(set(region))
        if not cells:
            raise DefectError("empty region")
        if pid in self.punctures:
            raise DefectError(f"duplicate puncture id {pid!r}")
        rmin = min(r for r, _ in cells)
        cmin = min(c for _, c in cells)
        h = max(r for r, _ in cells) - rmin + 1
        w = max(c for _, c in cells) - cmin + 1
        p = Puncture(pid, (rmin, cmin), h, w, kind)
        if p.cells != frozenset(cells):
            raise DefectError("puncture regions must be filled rectangles")
        self._check_placement(p)
        self._deform(None, p)
        self.punctures[pid] = p
        self.log.append({"op": "create", "puncture": p.to_dict()})
        return p

    def remove_puncture(self, pid: str) -> None:
        """Re-measure the hole's generators; fails if it holds charge."""
        p = self.punctures.pop(pid)
        self._deform(p, None)
        self.log.append({"op": "remove", "id": pid})

    # -- strings ----------------------------------------------------------

    def _blocked_edges(self) -> set[Edge]:
        out: set[Edge] = set()
        for p in self.punctures.values():
            out |= p.measured_edges
        return out

    def _missing_vertices(self, side: str | None = None) -> set[Site]:
        g = self.geometry
        out = set()
        for i in range(g.rows + 1):
            for j in range(g.cols + 1):
                v = (i, j)
                if g.has_vertex(v):
                    continue
                on = {
                    "top": i == 0,
                    "bottom": i == g.rows,
                    "left": j == 0,
                    "right": j == g.cols,
                }
                if side is None or on[side]:
                    out.add(v)
        return out

    def _outer_cells(self, side: str | None = None) -> set[Site]:
        g = self.geometry
        out: set[Site] = set()
        sides = [side] if side else ["top", "bottom", "left", "right"]
        for s in sides:
            if getattr(g.boundary, s) != SMOOTH:
                continue
            if s == "top":
                out |= {(-1, j) for j in range(g.cols)}
            elif s == "bottom":
                out |= {(g.rows, j) for j in range(g.cols)}
            elif s == "left":
                out |= {(i, -1) for i in range(g.rows)}
            else:
                out |= {(i, g.cols) for i in range(g.rows)}
        return out

    def _endpoint_nodes(self, anyon: AnyonType, end: str) -> set[Site]:
        g = self.geometry
        if end in self.punctures:
            p = self.punctures[end]
            nodes = set(p.rough_vertices if anyon == "e" else p.hole_cells)
            if not nodes:
                raise CondensationError(f"puncture {end} does not condense {anyon}")
            return nodes
        if end not in ("top", "bottom", "left", "right"):
            raise DefectError(f"unknown endpoint {end!r}")
        wanted = ROUGH if anyon == "e" else SMOOTH
        if getattr(g.boundary, end) != wanted:
            raise CondensationError(f"{end} side is {getattr(g.boundary, end).value}; {anyon} does not condense there")
        return self._missing_vertices(end) if anyon == "e" else self._outer_cells(end)

    def route_string(self, anyon: AnyonType, start: str, end: str) -> StringOperator:
        """Shortest string between two endpoints (puncture ids or outer sides).

        Breadth-first search over unmeasured edges with a fixed neighbour
        order, avoiding every other puncture; the route is deterministic.
        """
        g = self.geometry
        sources = self._endpoint_nodes(anyon, start)
        targets = self._endpoint_nodes(anyon, end)
        blocked = self._blocked_edges()
        forbidden: set[Site] = set()
        for p in self.punctures.values():
            forbidden |= p.rough_vertices if anyon == "e" else p.hole_cells
        if anyon == "e":
            forbidden |= self._missing_vertices()
        else:
            forbidden |= self._outer_cells()
        forbidden -= sources | targets

        def steps(node: Site):
            i, j = node
            if anyon == "e":
                cand = [((i - 1, j), ("v", i - 1, j)), ((i + 1, j), ("v", i, j)),
                        ((i, j - 1), ("h", i, j - 1)), ((i, j + 1), ("h", i, j))]
            else:
                cand = [((i - 1, j), ("h", i, j)), ((i + 1, j), ("h", i + 1, j)),
                        ((i, j - 1), ("v", i, j)), ((i, j + 1), ("v", i, j + 1))]
            for nxt, e in cand:
                if g.has_edge(e) and e not in blocked:
                    yield nxt, e

        if sources & targets:
            raise DefectError(f"string endpoints {start} and {end} coincide")
        parent: dict[Site, tuple[Site, Edge] | None] = {s: None for s in sources}
        queue = deque(sorted(sources))
        found = None
        while queue:
            node = queue.popleft()
            if node in targets:
                found = node
                break
            if node in forbidden:
                continue
            for nxt, e in steps(node):
                if nxt not in parent:
                    parent[nxt] = (node, e)
                    queue.append(nxt)
        if found is None:
            raise DefectError(f"no {anyon}-string route from {start} to {end}")
        path: list[Edge] = []
        node = found
        while parent[node] is not None:
            node, e = parent[node]
            path.append(e)
        return StringOperator(anyon, tuple(reversed(path)), (start, end))

    def string_operator(self, anyon: AnyonType, path: Iterable[Edge]) -> PauliOperator:
        """Pauli for an explicit string path, checking its endpoints.

        Endpoints in the bulk are allowed (they host excitations); endpoints
        on a boundary that does not condense ``anyon`` raise
        :class:`CondensationError`.
        """
        g = self.geometry
        path = list(path)
        blocked = self._blocked_edges()
        for e in path:
            if not g.has_edge(e):
                raise DefectError(f"edge {e} is not in the lattice")
            if e in blocked:
                raise DefectError(f"edge {e} lies inside a puncture")
        if anyon == "e":
            ends = _odd_nodes(v for e in path for v in CodeGeometry.endpoints(e))
            condensing: set[Site] = set()
            for p in self.punctures.values():
                condensing |= p.rough_vertices
            for v in ends:
                if not g.has_vertex(v) or v in condensing:
                    continue
                if self._vertex_on_smooth_boundary(v):
                    raise CondensationError(f"e-string ends on smooth boundary at vertex {v}")
            return g.z_string(path)
        if anyon == "m":
            ends = _odd_nodes(c for e in path for c in CodeGeometry.cells_of_edge(e))
            condensing = set()
            for p in self.punctures.values():
                condensing |= p.hole_cells
            for c in ends:
                if not g.in_patch(c) or c in condensing:
                    continue
                if self._cell_on_rough_boundary(c):
                    raise CondensationError(f"m-string ends on rough boundary at cell {c}")
            return g.x_string(path)
        raise DefectError(f"unknown anyon type {anyon!r}")

    def _vertex_on_smooth_boundary(self, v: Site) -> bool:
        g = self.geometry
        if len(g.vertex_edges(v)) < 4:
            return True
        return any(v in p.corner_vertices for p in self.punctures.values())

    def _cell_on_rough_boundary(self, c: Site) -> bool:
        g = self.geometry
        if len(g.cell_edges(c)) < 4:
            return True
        blocked = self._blocked_edges()
        return any(e in blocked for e in g.cell_edges(c))

    def local_generators(self) -> list[PauliOperator]:
        """Generators of the deformed code: surviving vertex and plaquette
        operators plus the single-qubit measurements that cut the holes."""
        g = self.geometry
        rough = set().union(*(p.rough_vertices for p in self.punctures.values()))
        holes = set().union(*(p.hole_cells for p in self.punctures.values()))
        out = [vertex_stabilizer(g, v) for v in g.vertices if v not in rough]
        out += [plaquette_stabilizer(g, c) for c in g.plaquettes if c not in holes]
        for pid in sorted(self.punctures):
            p = self.punctures[pid]
            out += [g.z_string([e]) for e in sorted(p.z_edges)]
            out += [g.x_string([e]) for e in sorted(p.x_edges)]
        return out

    # -- loops and charge -------------------------------------------------

    def loop_operator(self, detect: AnyonType, region: Iterable[Site]) -> PauliOperator:
        """Closed loop around a set of cells.

        ``detect="e"`` gives the X-loop (product of vertex generators on the
        region's vertices), ``detect="m"`` the Z-loop (product of the region's
        plaquettes). The region must contain whole punctures only.
        """
        g = self.geometry
        cells = set(region)
        verts = {(r + dr, c + dc) for r, c in cells for dr in (0, 1) for dc in (0, 1)}
        for p in self.punctures.values():
            inside = p.cells & cells
            if inside and inside != p.cells:
                raise LoopCrossingError(f"loop cuts through puncture {p.id}")
            if not inside and (p.rough_vertices & verts):
                raise LoopCrossingError(f"loop touches the rough boundary of puncture {p.id}")
        op = PauliOperator.identity(g.n_qubits)
        if detect == "e":
            for v in sorted(verts):
                if g.has_vertex(v):
                    op = multiply(op, vertex_stabilizer(g, v))
        elif detect == "m":
            for c in sorted(cells):
                op = multiply(op, plaquette_stabilizer(g, c))
        else:
            raise DefectError(f"unknown detection type {detect!r}")
        return op

    def puncture_loops(self, pid: str) -> tuple[PauliOperator, PauliOperator]:
        """(X-loop, Z-loop) around a single puncture."""
        p = self.punctures[pid]
        return self.loop_operator("e", p.cells), self.loop_operator("m", p.cells)

    def enclosed_charge(self, pid: str) -> str:
        """``"1"``, ``"e"``, ``"m"``, ``"eps"`` or ``"superposed"``."""
        xl, zl = self.puncture_loops(pid)
        key = (expectation(self.state, xl), expectation(self.state, zl))
        return CHARGE_LABELS.get(key, "superposed")

    def expectation(self, op: PauliOperator) -> int:
        return expectation(self.state, op)

    def measure(self, op: PauliOperator, rng: np.random.Generator | None = None) -> int:
        outcome, self.state = measure(self.state, op, rng or self.rng)
        return outcome

    def postselect(self, op: PauliOperator, outcome: int) -> None:
        """Project onto the ``outcome`` eigenspace (must have nonzero weight)."""
        _, self.state = measure_and_repair(self.state, op, self.rng, target=outcome)

    def apply(self, op: PauliOperator, note: dict | None = None) -> None:
        self.state = apply_pauli(self.state, op)
        if note is not None:
            self.log.append(note)

    def apply_string(self, s: StringOperator) -> None:
        self.apply(
            self.string_operator(s.anyon_type, s.path),
            {"op": "string", "anyon": s.anyon_type, "path": [list(e) for e in s.path],
             "endpoints": list(s.endpoints)},
        )

    def populate(self, pid: str, anyon: AnyonType, side: str) -> StringOperator:
        """Drag one anyon from an outer side into the puncture."""
        s = self.route_string(anyon, side, pid)
        self.apply_string(s)
        return s

    # -- motion -----------------------------------------------------------

    def move_puncture(self, pid: str, direction: str) -> Puncture:
        """One-cell translation: extend into the new cell, then contract the rear."""
        if direction not in DIRECTIONS:
            raise DefectError(f"unknown direction {direction!r}")
        p = self.punctures[pid]
        big = p.grown(direction)
        new = p.shifted(direction)
        self._check_placement(big, ignore=pid)
        self._deform(p, big)
        self._deform(big, new)
        self.punctures[pid] = new
        self.log.append({"op": "move", "id": pid, "direction": direction, "anchor": list(new.anchor)})
        assert new.orientation == p.orientation
        return new

    def move_along(self, pid: str, directions: Iterable[str]) -> Puncture:
        p = self.punctures[pid]
        for d in directions:
            p = self.move_puncture(pid, d)
        return p

    def path_is_clear(self, pid: str, directions: Iterable[str]) -> bool:
        """Dry run of :meth:`move_along` checking clearances only."""
        p = self.punctures[pid]
        try:
            for d in directions:
                self._check_placement(p.grown(d), ignore=pid)
                p = p.shifted(d)
        except ClearanceError:
            return False
        return True
