"""Four-puncture qubit: preparation, braiding, fusion and readout.

Two pairs (p1, p2) and (p3, p4) of mixed punctures carry one logical qubit.
Each pair holds the superposition ``|ee> + s|mm>`` fixed by the pair operator
``W = S^e S^m`` (product of an e-string and an m-string joining the pair), so
the logical Z eigenstates are ``W12 = W34 = +1`` (|++>) and ``W12 = W34 = -1``
(|-->). Logical X is the product of the X-loops around p1 and p3.
"""

from __future__ import annotations

import dataclasses
from collections import deque
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .defects import DIRECTIONS, ClearanceError, DefectError, Puncture, PunctureCode, StringOperator
from .pauli_gf2 import PauliOperator, multiply, states_equal
from .planar_code import BoundarySpec, build_geometry

__all__ = [
    "DEFAULT_ANCHORS",
    "PAIRS",
    "EXCHANGES",
    "LogicalLabel",
    "PunctureQuartet",
    "BraidRecord",
    "build_quartet",
    "prepare_pair",
    "prepare_quartet",
    "logical_x",
    "logical_z",
    "read_logical",
    "plan_braid",
    "braid",
    "branch_signs",
    "fusion_loops",
    "fuse_pairs",
    "shot_rng",
    "sample_fusion",
    "fusion_counts",
    "sample_branches",
]

DEFAULT_SIZE = (12, 12)
DEFAULT_ANCHORS = {"p1": (3, 3), "p2": (7, 3), "p3": (3, 7), "p4": (7, 7)}
PAIRS = (("p1", "p2"), ("p3", "p4"))
FUSION_GROUPS = (("p1", "p3"), ("p2", "p4"))
EXCHANGES = (("p1", "p2"), ("p1", "p3"), ("p1", "p4"), ("p2", "p3"), ("p2", "p4"), ("p3", "p4"))
OPPOSITE = {"up": "down", "down": "up", "left": "right", "right": "left"}


class LogicalLabel(str, Enum):
    PLUS_PLUS = "++"
    MINUS_MINUS = "--"
    ODD = "odd"  # W12 and W34 disagree, outside the code space
    SUPERPOSED = "superposed"


@dataclass
class PunctureQuartet:
    """Bookkeeping for the four punctures and their pair operators."""

    ids: tuple[str, ...]
    strings: dict[tuple[str, str], tuple[StringOperator, StringOperator]]
    pair_ops: dict[tuple[str, str], PauliOperator] = field(repr=False)

    @property
    def pairs(self) -> tuple[tuple[str, str], ...]:
        return tuple(self.strings)

    @property
    def w12(self) -> PauliOperator:
        return self.pair_ops[PAIRS[0]]

    @property
    def w34(self) -> PauliOperator:
        return self.pair_ops[PAIRS[1]]


def build_quartet(
    rows: int = DEFAULT_SIZE[0],
    cols: int = DEFAULT_SIZE[1],
    boundary: BoundarySpec | None = None,
    anchors: dict[str, tuple[int, int]] | None = None,
    size: tuple[int, int] = (1, 1),
    rng: np.random.Generator | None = None,
) -> tuple[PunctureCode, PunctureQuartet]:
    """Ground state with four fresh (vacuum) mixed punctures and routed pair strings."""
    anchors = anchors or DEFAULT_ANCHORS
    if set(anchors) != {"p1", "p2", "p3", "p4"}:
        raise DefectError("a quartet needs anchors for p1, p2, p3 and p4")
    g = build_geometry(rows, cols, boundary)
    code = PunctureCode(g, rng if rng is not None else np.random.default_rng(0))
    h, w = size
    for pid in sorted(anchors):
        r, c = anchors[pid]
        code.create_puncture(pid, [(r + i, c + j) for i in range(h) for j in range(w)])
    strings = {}
    ops = {}
    for a, b in PAIRS:
        se = code.route_string("e", a, b)
        sm = code.route_string("m", a, b)
        strings[(a, b)] = (se, sm)
        ops[(a, b)] = multiply(se.pauli(g), sm.pauli(g))
    return code, PunctureQuartet(tuple(sorted(anchors)), strings, ops)


def prepare_pair(code: PunctureCode, quartet: PunctureQuartet, pair: tuple[str, str], sign: int) -> None:
    """Put a vacuum pair into ``|ee> + sign |mm>``.

    Drags an e-pair in along the routed e-string, measures W, and on the wrong
    outcome applies the X-loop around the first puncture (it anticommutes with
    W and fixes every other generator).
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    for pid in pair:
        if code.enclosed_charge(pid) != "1":
            raise DefectError(f"puncture {pid} is not in the vacuum sector")
    se, _ = quartet.strings[pair]
    code.apply_string(se)
    w = quartet.pair_ops[pair]
    outcome = code.measure(w)
    if outcome != sign:
        code.apply(code.puncture_loops(pair[0])[0], {"op": "repair", "id": pair[0]})
    code.log.append({"op": "prepare", "pair": list(pair), "sign": sign})


def prepare_quartet(code: PunctureCode, quartet: PunctureQuartet, signs: tuple[int, int] = (1, 1)) -> None:
    for pair, s in zip(PAIRS, signs):
        prepare_pair(code, quartet, pair, s)


def logical_x(code: PunctureCode) -> PauliOperator:
    return multiply(code.puncture_loops("p1")[0], code.puncture_loops("p3")[0])


def logical_z(quartet: PunctureQuartet) -> PauliOperator:
    return quartet.w12


def read_logical(code: PunctureCode, quartet: PunctureQuartet) -> LogicalLabel:
    s = (code.expectation(quartet.w12), code.expectation(quartet.w34))
    if 0 in s:
        return LogicalLabel.SUPERPOSED
    if s == (1, 1):
        return LogicalLabel.PLUS_PLUS
    if s == (-1, -1):
        return LogicalLabel.MINUS_MINUS
    return LogicalLabel.ODD


# -- braiding ------------------------------------------------------------


def _ring(mover: Puncture, target: Puncture, margin: int) -> list[tuple[int, int]]:
    """Anchors of the closed ring around ``target``, counterclockwise as drawn."""
    tr, tc = target.anchor
    top = tr - margin - mover.height
    bottom = tr + target.height + margin
    left = tc - margin - mover.width
    right = tc + target.width + margin
    ring = [(r, left) for r in range(top, bottom)]
    ring += [(bottom, c) for c in range(left, right)]
    ring += [(r, right) for r in range(bottom, top, -1)]
    ring += [(top, c) for c in range(right, left, -1)]
    return ring


def _step(a: tuple[int, int], b: tuple[int, int]) -> str:
    d = (b[0] - a[0], b[1] - a[1])
    for name, off in DIRECTIONS.items():
        if tuple(off) == d:
            return name
    raise DefectError(f"anchors {a} and {b} are not adjacent")


def _clear(code: PunctureCode, p: Puncture, direction: str, pid: str) -> bool:
    try:
        code._check_placement(p.grown(direction), ignore=pid)
    except ClearanceError:
        return False
    return True


def plan_braid(code: PunctureCode, moving: str, around: str, margin: int = 1) -> list[str]:
    """Directions that carry ``moving`` once around ``around`` and back home.

    Route (breadth-first, clearance-checked) from the home anchor to the
    nearest anchor of the ring, traverse the ring, then retrace the route.
    Raises :class:`ClearanceError` before anything is simulated if no such
    path exists.
    """
    if moving == around:
        raise DefectError("a puncture cannot braid around itself")
    for pid in (moving, around):
        if pid not in code.punctures:
            raise DefectError(f"unknown puncture {pid!r}")
    mover = code.punctures[moving]
    ring = _ring(mover, code.punctures[around], margin)

    def at(a):
        return dataclasses.replace(mover, anchor=a)

    home = mover.anchor
    targets = set(ring)
    prev = {home: None}
    queue = deque([home])
    found = None
    while queue:
        a = queue.popleft()
        if a in targets:
            found = a
            break
        for d, (dr, dc) in DIRECTIONS.items():
            b = (a[0] + dr, a[1] + dc)
            if b not in prev and _clear(code, at(a), d, moving):
                prev[b] = (a, d)
                queue.append(b)
    if found is None:
        raise ClearanceError(f"no clear route from {moving} to the ring around {around}")
    route = []
    a = found
    while prev[a] is not None:
        a, d = prev[a]
        route.append(d)
    route.reverse()

    k = ring.index(found)
    cycle = ring[k:] + ring[:k] + [found]
    loop = [_step(cycle[i], cycle[i + 1]) for i in range(len(cycle) - 1)]
    back = [OPPOSITE[d] for d in reversed(route)]
    plan = route + loop + back
    if not code.path_is_clear(moving, plan):
        raise ClearanceError(f"the ring around {around} violates clearance for {moving}")
    return plan


@dataclass
class BraidRecord:
    moving: str
    around: str
    directions: list[str]


def braid(code: PunctureCode, moving: str, around: str, margin: int = 1) -> BraidRecord:
    plan = plan_braid(code, moving, around, margin)
    home = code.punctures[moving].anchor
    code.move_along(moving, plan)
    if code.punctures[moving].anchor != home:
        raise DefectError("braid did not return the puncture to its anchor")
    code.log.append({"op": "braid", "moving": moving, "around": around, "steps": len(plan)})
    return BraidRecord(moving, around, plan)


def _branch_loops(code: PunctureCode) -> tuple[PauliOperator, PauliOperator]:
    return code.puncture_loops("p1")[0], code.puncture_loops("p3")[0]


def branch_signs(before: PunctureCode, after: PunctureCode, quartet: PunctureQuartet) -> np.ndarray:
    """Relative sign each string configuration picked up between two states.

    Ordered ``ee|ee, ee|mm, mm|ee, mm|mm``. Each branch is isolated by
    post-selecting the X-loops around p1 and p3; those projections must agree
    (as stabilizer states) before and after, otherwise the operation did more
    than rephase branches and :class:`DefectError` is raised. The phases then
    follow from the change of ``<W12>`` and ``<W34>``.
    """
    for c12 in (-1, 1):
        for c34 in (-1, 1):
            pair = []
            for code in (before, after):
                c = code.copy()
                l1, l3 = _branch_loops(c)
                c.postselect(l1, c12)
                c.postselect(l3, c34)
                pair.append(c.state)
            if not states_equal(*pair):
                raise DefectError("branch content changed; not a pure rephasing")
    ratios = []
    for w in (quartet.w12, quartet.w34):
        s0, s1 = before.expectation(w), after.expectation(w)
        if s0 == 0 or s1 == 0:
            raise DefectError("pair operator is not fixed; branch phases undefined")
        ratios.append(s1 * s0)
    r12, r34 = ratios
    return np.array([1, r34, r12, r12 * r34], dtype=int)


# -- fusion ----------------------------------------------------------------


def fusion_loops(code: PunctureCode, group: tuple[str, str]) -> tuple[PauliOperator, PauliOperator]:
    """(X-loop, Z-loop) around the bounding box of two punctures."""
    cells = set().union(*(code.punctures[p].cells for p in group))
    r0 = min(r for r, _ in cells)
    r1 = max(r for r, _ in cells)
    c0 = min(c for _, c in cells)
    c1 = max(c for _, c in cells)
    region = [(r, c) for r in range(r0, r1 + 1) for c in range(c0, c1 + 1)]
    return code.loop_operator("e", region), code.loop_operator("m", region)


def _fusion_label(x: int, z: int) -> str:
    return {(1, 1): "1", (-1, -1): "psi"}.get((x, z), "other")


def fuse_pairs(
    code: PunctureCode, rng: np.random.Generator | None = None, groups=FUSION_GROUPS
) -> tuple[str, str]:
    """Measure the combined charge of (p1, p3) and (p2, p4); mutates ``code``."""
    labels = []
    for group in groups:
        xl, zl = fusion_loops(code, group)
        x = code.measure(xl, rng)
        z = code.measure(zl, rng)
        labels.append(_fusion_label(x, z))
    return tuple(labels)


def shot_rng(seed: int, shot: int) -> np.random.Generator:
    """Independent per-shot stream derived from the master seed."""
    return np.random.default_rng(np.random.SeedSequence([seed, shot]))


def sample_fusion(code: PunctureCode, shots: int, seed: int) -> list[tuple[str, str]]:
    """Per-shot ``(outcome13, outcome24)`` over independent copies of ``code``."""
    ops = [op for group in FUSION_GROUPS for op in fusion_loops(code, group)]
    records = []
    for shot in range(shots):
        rng = shot_rng(seed, shot)
        c = code.copy()
        vals = [c.measure(op, rng) for op in ops]
        records.append((_fusion_label(vals[0], vals[1]), _fusion_label(vals[2], vals[3])))
    return records


def fusion_counts(records) -> dict[str, int]:
    keys = [f"{a},{b}" for a in ("1", "psi") for b in ("1", "psi")] + ["other"]
    counts = dict.fromkeys(keys, 0)
    for a, b in records:
        key = f"{a},{b}"
        counts[key if key in counts else "other"] += 1
    return counts


def sample_branches(code: PunctureCode, shots: int, seed: int) -> dict[str, int]:
    """Counts of the string configuration read by the X-loops around p1 and p3."""
    ops = _branch_loops(code)
    name = {-1: "ee", 1: "mm"}
    counts = {f"{a}|{b}": 0 for a in ("ee", "mm") for b in ("ee", "mm")}
    for shot in range(shots):
        rng = shot_rng(seed, shot)
        c = code.copy()
        v1, v3 = (c.measure(op, rng) for op in ops)
        counts[f"{name[v1]}|{name[v3]}"] += 1
    return counts
