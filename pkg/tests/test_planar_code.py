import itertools

import numpy as np
import pytest

from mixpunct.pauli_gf2 import commutes, expectation
from mixpunct.planar_code import (
    ROUGH,
    BoundarySpec,
    CodeGeometry,
    GeometryError,
    all_boundary_specs,
    build_geometry,
    ground_state,
    plaquette_stabilizer,
    vertex_stabilizer,
)

from oracles import gf2_rank


def _expected_logicals(b: BoundarySpec) -> int:
    """Segments of equal type around the perimeter: k = segments / 2 - 1."""
    cycle = [b.top, b.right, b.bottom, b.left]
    changes = sum(1 for i in range(4) if cycle[i] != cycle[(i + 1) % 4])
    return max(changes // 2 - 1, 0)


def _symplectic_rows(ops):
    return [op.x | (op.z << op.n_qubits) for op in ops]


@pytest.mark.parametrize("rows,cols", [(3, 2), (3, 3), (2, 2), (4, 5)])
def test_default_counts(rows, cols):
    g = build_geometry(rows, cols)
    # top/bottom rough: horizontal edges only on interior rows, all vertical edges
    assert g.n_qubits == (rows - 1) * cols + rows * (cols + 1)
    assert len(g.vertices) == (rows - 1) * (cols + 1)
    assert len(g.plaquettes) == rows * cols
    assert g.n_logical == 1


def test_sweep_commutation_rank_and_logical_count():
    for rows, cols in itertools.product(range(2, 7), repeat=2):
        for b in all_boundary_specs():
            g = build_geometry(rows, cols, b)
            gens = g.independent_generators
            for a, c in itertools.combinations(gens, 2):
                assert commutes(a, c)
            assert gf2_rank(_symplectic_rows(gens)) == len(gens)
            assert g.n_logical == _expected_logicals(b), (rows, cols, b)


def test_sixteen_specs():
    specs = all_boundary_specs()
    assert len(specs) == len(set(specs)) == 16


def test_dropped_generator_is_the_product_of_the_rest():
    g = build_geometry(3, 3, BoundarySpec("rough", "rough", "rough", "rough"))
    all_plaq = [plaquette_stabilizer(g, p) for p in g.plaquettes]
    prod = all_plaq[0]
    for p in all_plaq[1:]:
        prod = prod * p
    assert prod.is_identity()


def test_stabilizer_weights():
    g = build_geometry(4, 4)
    weights = {len(g.vertex_edges(v)) for v in g.vertices}
    assert weights == {3, 4}  # smooth left/right sides carry weight-3 vertices
    plaq = {len(g.cell_edges(p)) for p in g.plaquettes}
    assert plaq == {3, 4}  # rough top/bottom sides carry weight-3 plaquettes


def test_ground_state_fixes_generators_and_is_seed_independent():
    g = build_geometry(4, 4)
    s0 = ground_state(g, np.random.default_rng(0))
    s1 = ground_state(g, np.random.default_rng(12345))
    assert s0 == s1
    for v in g.vertices:
        assert expectation(s0, vertex_stabilizer(g, v)) == 1
    for p in g.plaquettes:
        assert expectation(s0, plaquette_stabilizer(g, p)) == 1
    assert expectation(s0, g.logical_z()) == 1


def test_logical_z_commutes_and_is_not_a_stabilizer():
    g = build_geometry(3, 4)
    lz = g.logical_z()
    assert all(commutes(lz, s) for s in g.independent_generators)
    rows = _symplectic_rows(g.independent_generators)
    assert gf2_rank(rows + _symplectic_rows([lz])) == len(rows) + 1


def test_json_round_trip():
    g = build_geometry(3, 5, BoundarySpec(top="smooth", left="rough"))
    again = CodeGeometry.from_dict(g.to_dict())
    assert again == g
    assert again.to_json() == g.to_json()
    bad = g.to_dict()
    bad["qubits"] = bad["qubits"][1:]
    with pytest.raises(GeometryError):
        CodeGeometry.from_dict(bad)


def test_rejects_tiny_and_unknown_sites():
    with pytest.raises(GeometryError):
        build_geometry(1, 4)
    g = build_geometry(2, 2)
    with pytest.raises(GeometryError):
        vertex_stabilizer(g, (0, 0))  # on the rough top side
    with pytest.raises(GeometryError):
        plaquette_stabilizer(g, (2, 0))
    with pytest.raises(GeometryError):
        g.qubit(("h", 0, 0))


def test_boundary_spec_coerces_strings():
    b = BoundarySpec("rough", "smooth", "smooth", "rough")
    assert b.top is ROUGH and b.sides(ROUGH) == ["top", "right"]
    with pytest.raises(ValueError):
        BoundarySpec("bumpy")
