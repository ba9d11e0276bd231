import cmath
import itertools

import numpy as np
import pytest

from mixpunct.anyon_algebra import (
    BRANCHES,
    ISING,
    TORIC,
    braid_matrix,
    equal_up_to_phase,
    fusion_basis_change,
    matrix_to_json,
    oracle_braid,
    oracle_fuse_probabilities,
    oracle_prepare,
    toric_r_checks,
)

TOL = 1e-12


def test_ising_fusion_rules():
    assert ISING.fuse("sigma", "sigma") == {"1": 1, "psi": 1}
    assert ISING.fuse("psi", "sigma") == {"sigma": 1}
    assert ISING.fuse("psi", "psi") == {"1": 1}
    assert ISING.is_commutative() and ISING.is_unital()
    with pytest.raises(KeyError):
        ISING.fuse("sigma", "tau")


def test_toric_fusion_rules():
    assert TORIC.fuse("e", "m") == {"eps": 1}
    for a in TORIC.charges:
        assert TORIC.fuse(a, a) == {"1": 1}  # every toric charge is its own antiparticle
    assert TORIC.is_commutative() and TORIC.is_unital()


def test_toric_r_symbols_against_hand_table():
    # exchange phase of a with b is -1 exactly when a carries charge and b carries flux
    hand = {
        ("e", "m"): -1, ("e", "eps"): -1, ("eps", "m"): -1, ("eps", "eps"): -1,
    }
    for a, b in itertools.product(TORIC.charges, repeat=2):
        assert TORIC.r_symbols[(a, b)] == hand.get((a, b), 1)


def test_toric_relations_report():
    report = toric_r_checks()
    assert len(report) == 5
    assert all(r["ok"] for r in report)
    assert {r["relation"]: r["expected"] for r in report}["R_em R_me"] == -1


def test_f_matrix_properties():
    f = ISING.f_symbols["sigma4"]
    eye = np.eye(2)
    assert np.allclose(f @ f.conj().T, eye, atol=TOL, rtol=0)
    assert np.allclose(f, f.conj().T, atol=TOL, rtol=0)
    assert np.allclose(f @ f, eye, atol=TOL, rtol=0)


def test_braid_matrix_is_phase_times_x():
    b = braid_matrix()
    w = cmath.exp(-1j * np.pi / 4)
    assert np.allclose(b, [[0, w], [w, 0]], atol=TOL, rtol=0)
    assert abs(b[0, 1] - w) < TOL
    assert np.allclose(b.conj().T @ b, np.eye(2), atol=TOL, rtol=0)
    assert np.allclose(b @ b, -1j * np.eye(2), atol=TOL, rtol=0)


def test_braid_matrix_by_hand():
    # R^2 = exp(-i pi/4) diag(1, -1); conjugating Z by the Hadamard-like F gives X
    r2 = cmath.exp(-1j * np.pi / 4) * np.diag([1, -1])
    h = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    assert np.allclose(braid_matrix(), h @ r2 @ h, atol=TOL, rtol=0)


def test_braid_matrix_rejects_singular_and_non_ising():
    with pytest.raises(np.linalg.LinAlgError):
        braid_matrix(ISING, np.ones((2, 2)))
    with pytest.raises(ValueError):
        braid_matrix(TORIC)


def test_oracle_prepare():
    assert np.allclose(oracle_prepare(1, 1), [0.5] * 4)
    for s in itertools.product((1, -1), repeat=2):
        assert np.isclose(np.linalg.norm(oracle_prepare(*s)), 1)


def test_oracle_braid_between_pairs_flips_middle_branches():
    out = oracle_braid(oracle_prepare(1, 1), ("p1", "p3"))
    assert np.allclose(out, [0.5, -0.5, -0.5, 0.5])
    assert np.allclose(out, oracle_prepare(-1, -1))


@pytest.mark.parametrize("pair", [("p1", "p2"), ("p3", "p4"), ("p2", "p1")])
def test_oracle_same_pair_braid_is_trivial(pair):
    for s in itertools.product((1, -1), repeat=2):
        assert np.allclose(oracle_braid(oracle_prepare(*s), pair), oracle_prepare(*s))


def test_oracle_inter_pair_braids_agree():
    ref = oracle_braid(oracle_prepare(1, -1), ("p1", "p3"))
    for pair in [("p1", "p4"), ("p2", "p3"), ("p2", "p4"), ("p4", "p2")]:
        assert np.allclose(oracle_braid(oracle_prepare(1, -1), pair), ref)


def test_oracle_fusion_probabilities():
    probs = oracle_fuse_probabilities(oracle_prepare(1, 1))
    assert probs == pytest.approx({"1,1": 0.5, "psi,psi": 0.5}, abs=TOL)
    for s in itertools.product((1, -1), repeat=2):
        assert sum(oracle_fuse_probabilities(oracle_prepare(*s)).values()) == pytest.approx(1)
    # a single string configuration fuses deterministically
    branch = np.zeros(4, dtype=complex)
    branch[BRANCHES.index("ee|mm")] = 1
    assert oracle_fuse_probabilities(branch) == pytest.approx({"1,1": 0, "psi,psi": 1})


def test_fusion_basis_change_equals_f():
    assert np.allclose(fusion_basis_change(), ISING.f_symbols["sigma4"], atol=TOL, rtol=0)


def test_equal_up_to_phase():
    a = oracle_prepare(1, -1)
    assert equal_up_to_phase(a, 1j * a)
    assert not equal_up_to_phase(a, oracle_prepare(1, 1))


def test_matrix_json_precision():
    b = braid_matrix()
    out = matrix_to_json(b)
    for row, jrow in zip(b, out):
        for z, (re, im) in zip(row, jrow):
            assert re == float(f"{re:.15g}") and im == float(f"{im:.15g}")
            assert abs(complex(re, im) - z) < 1e-14
    assert abs(out[0][1][0] - np.sqrt(0.5)) < 1e-14
