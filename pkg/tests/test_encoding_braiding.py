import itertools

import numpy as np
import pytest

from mixpunct.anyon_algebra import oracle_braid, oracle_fuse_probabilities, oracle_prepare
from mixpunct.defects import ClearanceError, DefectError
from mixpunct.encoding_braiding import (
    EXCHANGES,
    LogicalLabel,
    braid,
    branch_signs,
    build_quartet,
    fuse_pairs,
    fusion_counts,
    fusion_loops,
    logical_x,
    logical_z,
    plan_braid,
    prepare_pair,
    prepare_quartet,
    read_logical,
    sample_branches,
    sample_fusion,
    shot_rng,
)
from mixpunct.pauli_gf2 import commutes, states_equal


@pytest.fixture(scope="module")
def base():
    return build_quartet()


@pytest.fixture(scope="module")
def prepared(base):
    code0, quartet = base
    out = {}
    for signs in itertools.product((1, -1), repeat=2):
        c = code0.copy()
        prepare_quartet(c, quartet, signs)
        out[signs] = c
    return out, quartet


def test_pair_operators_are_well_formed(base):
    code, q = base
    assert q.w12.is_hermitian() and q.w34.is_hermitian()
    assert commutes(q.w12, q.w34)
    for w in (q.w12, q.w34):
        # W commutes with every generator of the deformed code
        assert all(commutes(w, g) for g in code.local_generators())
    assert q.pairs == (("p1", "p2"), ("p3", "p4"))
    assert all(code.enclosed_charge(p) == "1" for p in q.ids)


def test_prepare_pair_state(base):
    code0, q = base
    for sign in (1, -1):
        c = code0.copy()
        prepare_pair(c, q, ("p1", "p2"), sign)
        assert c.expectation(q.w12) == sign
        for pid in ("p1", "p2"):
            xl, zl = c.puncture_loops(pid)
            assert c.expectation(xl) == 0 and c.expectation(zl) == 0
        # still fresh pair and loop products fixed
        assert c.enclosed_charge("p3") == "1"
        x1, x2 = c.puncture_loops("p1")[0], c.puncture_loops("p2")[0]
        assert c.expectation(x1 * x2) == 1
        # measuring W again is deterministic
        assert c.measure(q.w12) == sign


def test_prepare_pair_requires_vacuum(base):
    code0, q = base
    c = code0.copy()
    prepare_pair(c, q, ("p1", "p2"), 1)
    with pytest.raises(DefectError):
        prepare_pair(c, q, ("p1", "p2"), 1)
    with pytest.raises(ValueError):
        prepare_pair(code0.copy(), q, ("p1", "p2"), 0)


def test_branch_decomposition(prepared):
    states, q = prepared
    c = states[(1, 1)].copy()
    x1, z1 = c.puncture_loops("p1")
    c.postselect(x1, -1)
    assert c.expectation(z1) == 1
    assert c.enclosed_charge("p1") == "e"
    assert c.enclosed_charge("p2") == "e"
    assert c.enclosed_charge("p3") == "superposed"


@pytest.mark.parametrize("signs,label", [((1, 1), "++"), ((-1, -1), "--"), ((1, -1), "odd"), ((-1, 1), "odd")])
def test_read_logical(prepared, signs, label):
    states, q = prepared
    assert read_logical(states[signs], q) == LogicalLabel(label)
    if signs[0] == signs[1]:
        assert states[signs].expectation(q.w12 * q.w34) == 1


def test_superposed_label(prepared):
    states, q = prepared
    c = states[(1, 1)].copy()
    c.measure(logical_x(c), np.random.default_rng(0))
    assert read_logical(c, q) == LogicalLabel.SUPERPOSED


# -- braids ---------------------------------------------------------------


@pytest.mark.parametrize("exchange", EXCHANGES)
@pytest.mark.parametrize("signs", [(1, 1), (-1, -1)])
def test_every_exchange_matches_the_oracle(prepared, exchange, signs):
    states, q = prepared
    ref = states[signs]
    c = ref.copy()
    braid(c, *exchange)
    predicted = oracle_braid(oracle_prepare(*signs), exchange)
    target = next(s for s in ((1, 1), (-1, -1)) if np.allclose(predicted, oracle_prepare(*s)))
    assert states_equal(c.state, states[target].state)
    expected_signs = np.real(predicted / oracle_prepare(*signs)).astype(int)
    assert np.array_equal(branch_signs(ref, c, q), expected_signs)
    assert c.punctures[exchange[0]].anchor == ref.punctures[exchange[0]].anchor


@pytest.mark.parametrize("signs", [(1, 1), (-1, -1)])
def test_braid_equals_static_logical_x(prepared, signs):
    states, q = prepared
    dyn = states[signs].copy()
    braid(dyn, "p1", "p3")
    static = states[signs].copy()
    static.apply(logical_x(static))
    assert states_equal(dyn.state, static.state)


def test_path_independence(prepared):
    states, q = prepared
    a = states[(1, 1)].copy()
    braid(a, "p1", "p3")
    b = states[(1, 1)].copy()
    # wider loop: up to row 1, out to column 10, back along row 5
    b.move_along("p1", ["right"] * 2 + ["up"] * 2 + ["right"] * 5 + ["down"] * 4
                 + ["left"] * 5 + ["up"] * 2 + ["left"] * 2)
    assert b.punctures["p1"].anchor == (3, 3)
    assert states_equal(a.state, b.state)


def test_loop_enclosing_nothing_is_trivial(prepared):
    states, q = prepared
    c = states[(1, 1)].copy()
    c.move_along("p1", ["up", "up", "left", "down", "down", "right"])
    assert states_equal(c.state, states[(1, 1)].state)


def test_double_braid_is_identity(prepared):
    states, q = prepared
    c = states[(-1, -1)].copy()
    braid(c, "p2", "p4")
    assert read_logical(c, q) == LogicalLabel.PLUS_PLUS
    braid(c, "p2", "p4")
    assert states_equal(c.state, states[(-1, -1)].state)


def test_plan_is_counterclockwise_and_closed(base):
    code, q = base
    plan = plan_braid(code, "p1", "p3")
    moves = {"up": (-1, 0), "down": (1, 0), "left": (0, -1), "right": (0, 1)}
    pos = [(3, 3)]
    for d in plan:
        pos.append((pos[-1][0] + moves[d][0], pos[-1][1] + moves[d][1]))
    assert pos[-1] == pos[0]
    # shoelace sum in (column, row) coordinates; rows grow downward, so a loop
    # that is counterclockwise on screen comes out negative
    area = sum(c0 * r1 - c1 * r0 for (r0, c0), (r1, c1) in zip(pos, pos[1:]))
    assert area < 0
    assert abs(area) == 2 * 4 * 4


def test_braid_clearance_is_checked_first():
    code, q = build_quartet(anchors={"p1": (2, 2), "p2": (5, 2), "p3": (2, 5), "p4": (5, 5)}, rows=12, cols=12)
    before = code.state
    with pytest.raises(ClearanceError):
        braid(code, "p1", "p3")
    assert states_equal(before, code.state)
    with pytest.raises(DefectError):
        plan_braid(code, "p1", "p1")


# -- logical operators ----------------------------------------------------


def test_logical_operator_algebra(prepared):
    states, q = prepared
    c = states[(1, 1)]
    lx, lz = logical_x(c), logical_z(q)
    assert not commutes(lx, lz)
    assert (lx * lx).is_identity() and (lz * lz).is_identity()
    z_applied = c.copy()
    z_applied.apply(lz)
    assert states_equal(z_applied.state, c.state)
    m = states[(-1, -1)].copy()
    m.apply(lz)
    assert states_equal(m.state, states[(-1, -1)].state)  # -1 eigenvalue is a global phase
    assert m.expectation(lz) == -1


# -- fusion ---------------------------------------------------------------


def test_fusion_loops_commute_with_pair_operators_jointly(prepared):
    states, q = prepared
    c = states[(1, 1)]
    xl, zl = fusion_loops(c, ("p1", "p3"))
    assert commutes(xl, zl)
    assert c.expectation(xl) == 0 and c.expectation(zl) == 0
    assert c.expectation(xl * zl) == 1


@pytest.mark.parametrize("signs", list(itertools.product((1, -1), repeat=2)))
def test_fusion_frequencies_match_oracle(prepared, signs):
    states, q = prepared
    shots = 2000
    counts = fusion_counts(sample_fusion(states[signs], shots, seed=3))
    expected = oracle_fuse_probabilities(oracle_prepare(*signs))
    for key, p in expected.items():
        assert abs(counts[key] / shots - p) <= 3 * np.sqrt(p * (1 - p) / shots) + 1e-12
    assert counts["1,psi"] == counts["psi,1"] == counts["other"] == 0


@pytest.mark.parametrize("c12,c34,outcome", [(-1, -1, "1"), (-1, 1, "psi"), (1, -1, "psi"), (1, 1, "1")])
def test_fusion_on_branch_states_is_deterministic(prepared, c12, c34, outcome):
    states, q = prepared
    c = states[(1, 1)].copy()
    c.postselect(c.puncture_loops("p1")[0], c12)
    c.postselect(c.puncture_loops("p3")[0], c34)
    for seed in range(4):
        assert fuse_pairs(c.copy(), np.random.default_rng(seed)) == (outcome, outcome)


def test_fuse_pairs_mutates_and_collapses(prepared):
    states, q = prepared
    c = states[(1, 1)].copy()
    first = fuse_pairs(c, np.random.default_rng(5))
    assert first in (("1", "1"), ("psi", "psi"))
    assert fuse_pairs(c, np.random.default_rng(6)) == first


def test_sampling_is_reproducible(prepared):
    states, q = prepared
    a = sample_fusion(states[(1, 1)], 50, seed=11)
    b = sample_fusion(states[(1, 1)], 50, seed=11)
    assert a == b
    assert sample_fusion(states[(1, 1)], 1, seed=11) == a[:1]
    assert shot_rng(1, 2).integers(1 << 30) == shot_rng(1, 2).integers(1 << 30)


def test_branch_frequencies_are_uniform(prepared):
    states, q = prepared
    shots = 2000
    counts = sample_branches(states[(1, 1)], shots, seed=2)
    for branch, n in counts.items():
        assert abs(n / shots - 0.25) <= 3 * np.sqrt(0.25 * 0.75 / shots), branch
