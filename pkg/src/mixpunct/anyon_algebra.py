"""Ising and Z2 toric anyon data, plus the string-diagram oracle.

The oracle tracks the four-puncture state as four amplitudes over the string
configurations ``ee|ee``, ``ee|mm``, ``mm|ee``, ``mm|mm`` (content of pair
(p1, p2) before the bar, of pair (p3, p4) after). It never touches the
lattice; braid phases come from the toric monodromies ``R_ab R_ba``.
"""

from __future__ import annotations

import cmath
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "AnyonModel",
    "ising_model",
    "toric_model",
    "ISING",
    "TORIC",
    "braid_matrix",
    "toric_r_checks",
    "BRANCHES",
    "oracle_prepare",
    "oracle_braid",
    "oracle_fuse_probabilities",
    "fusion_basis_change",
    "equal_up_to_phase",
    "matrix_to_json",
]

TOL = 1e-12


@dataclass(frozen=True)
class AnyonModel:
    """Finite anyon model.

    Attributes:
        name: label.
        charges: charge labels, vacuum first.
        fusion: ``(a, b) -> {c: N_ab^c}`` with only nonzero multiplicities.
        f_symbols: named basis-change matrices.
        r_symbols: ``(a, b) -> R_ab`` scalars, or ``(a, b, c) -> R_ab^c`` per channel.
    """

    name: str
    charges: tuple[str, ...]
    fusion: dict[tuple[str, str], dict[str, int]]
    f_symbols: dict[str, np.ndarray] = field(default_factory=dict)
    r_symbols: dict[tuple, complex] = field(default_factory=dict)

    @property
    def vacuum(self) -> str:
        return self.charges[0]

    def fuse(self, a: str, b: str) -> Counter:
        """Fusion outcomes of ``a x b`` as a multiset."""
        for c in (a, b):
            if c not in self.charges:
                raise KeyError(f"unknown charge {c!r} in model {self.name}")
        return Counter(self.fusion.get((a, b), {}))

    def is_commutative(self) -> bool:
        return all(self.fuse(a, b) == self.fuse(b, a) for a in self.charges for b in self.charges)

    def is_unital(self) -> bool:
        one = self.vacuum
        return all(self.fuse(one, a) == Counter({a: 1}) for a in self.charges)

    def monodromy(self, a: str, b: str) -> complex:
        """Full-braid phase ``R_ab R_ba`` for Abelian charges."""
        return self.r_symbols[(a, b)] * self.r_symbols[(b, a)]


def ising_model() -> AnyonModel:
    fusion = {
        ("1", "1"): {"1": 1},
        ("1", "sigma"): {"sigma": 1},
        ("sigma", "1"): {"sigma": 1},
        ("1", "psi"): {"psi": 1},
        ("psi", "1"): {"psi": 1},
        ("sigma", "sigma"): {"1": 1, "psi": 1},
        ("sigma", "psi"): {"sigma": 1},
        ("psi", "sigma"): {"sigma": 1},
        ("psi", "psi"): {"1": 1},
    }
    f_sigma = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
    r = cmath.exp(-1j * np.pi / 8)
    r_symbols = {
        ("sigma", "sigma", "1"): r,
        ("sigma", "sigma", "psi"): r * 1j,
        ("psi", "psi"): -1 + 0j,
        ("psi", "sigma"): -1j,
        ("sigma", "psi"): -1j,
    }
    return AnyonModel("ising", ("1", "sigma", "psi"), fusion, {"sigma4": f_sigma}, r_symbols)


def toric_model() -> AnyonModel:
    """Z2 quantum double. Charges are (electric, magnetic) bits."""
    bits = {"1": (0, 0), "e": (1, 0), "m": (0, 1), "eps": (1, 1)}
    names = {v: k for k, v in bits.items()}
    fusion = {}
    r_symbols = {}
    for a, (a1, a2) in bits.items():
        for b, (b1, b2) in bits.items():
            fusion[(a, b)] = {names[(a1 ^ b1, a2 ^ b2)]: 1}
            r_symbols[(a, b)] = complex((-1) ** (a1 * b2))
    return AnyonModel("toric", ("1", "e", "m", "eps"), fusion, {}, r_symbols)


ISING = ising_model()
TORIC = toric_model()


def _r_sigma_sigma(model: AnyonModel) -> np.ndarray:
    return np.diag([model.r_symbols[("sigma", "sigma", "1")], model.r_symbols[("sigma", "sigma", "psi")]])


def braid_matrix(model: AnyonModel = ISING, f: np.ndarray | None = None) -> np.ndarray:
    """``F R^2 F^-1`` on the two-dimensional four-sigma fusion space."""
    if model.name != "ising":
        raise ValueError("braid_matrix is defined for the Ising model")
    f = model.f_symbols["sigma4"] if f is None else f
    if abs(np.linalg.det(f)) < TOL:
        raise np.linalg.LinAlgError("F matrix is singular")
    r = _r_sigma_sigma(model)
    return f @ r @ r @ np.linalg.inv(f)


def toric_r_checks(model: AnyonModel = TORIC) -> list[dict]:
    """The exchange relations of the toric code anyons, evaluated from ``r_symbols``."""
    r = model.r_symbols
    relations = [
        ("R_ee", r[("e", "e")], 1),
        ("R_mm", r[("m", "m")], 1),
        ("R_eps_eps", r[("eps", "eps")], -1),
        ("R_em R_me", r[("e", "m")] * r[("m", "e")], -1),
        ("R_e_eps R_eps_e", r[("e", "eps")] * r[("eps", "e")], -1),
    ]
    return [
        {"relation": name, "value": complex(v), "expected": exp, "ok": v == exp}
        for name, v, exp in relations
    ]


BRANCHES = ("ee|ee", "ee|mm", "mm|ee", "mm|mm")
_PAIR_OF = {"p1": 0, "p2": 0, "p3": 1, "p4": 1}


def oracle_prepare(s12: int, s34: int) -> np.ndarray:
    """Amplitudes of ``(|ee> + s12|mm>)(|ee> + s34|mm>) / 2`` over BRANCHES."""
    return 0.5 * np.array([1, s34, s12, s12 * s34], dtype=complex)


def oracle_braid(state: np.ndarray, exchange: tuple[str, str], model: AnyonModel = TORIC) -> np.ndarray:
    """Full braid of two punctures: each branch picks up ``R_ab R_ba``."""
    i, j = exchange
    out = np.array(state, dtype=complex)
    for k, branch in enumerate(BRANCHES):
        contents = [branch[0], branch[3]]
        out[k] *= model.monodromy(contents[_PAIR_OF[i]], contents[_PAIR_OF[j]])
    return out


def _fusion_states() -> dict[str, np.ndarray]:
    s = 1 / np.sqrt(2)
    return {
        "1,1": np.array([s, 0, 0, s], dtype=complex),
        "psi,psi": np.array([0, s, s, 0], dtype=complex),
    }


# Branches whose (p1, p3) and (p2, p4) contents fuse to 1 (equal pair contents) or psi.
_FUSION_SECTORS = {"1,1": (0, 3), "psi,psi": (1, 2)}


def oracle_fuse_probabilities(state: np.ndarray) -> dict[str, float]:
    """Outcome distribution of fusing (p1, p3) and (p2, p4).

    Each fusion outcome is a projector onto two of the branches, so the
    probability is the weight of the state in that pair of branches.
    """
    state = np.asarray(state, dtype=complex)
    return {k: float(np.sum(np.abs(state[list(idx)]) ** 2)) for k, idx in _FUSION_SECTORS.items()}


def fusion_basis_change() -> np.ndarray:
    """Overlaps <fusion outcome | encoded state>; rows (1,1), (psi,psi), columns |++>, |-->."""
    fs = _fusion_states()
    cols = [oracle_prepare(1, 1), oracle_prepare(-1, -1)]
    return np.array([[np.vdot(fs[k], c) for c in cols] for k in ("1,1", "psi,psi")])


def equal_up_to_phase(a: np.ndarray, b: np.ndarray, tol: float = TOL) -> bool:
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    return abs(abs(np.vdot(a, b)) - np.linalg.norm(a) * np.linalg.norm(b)) < tol


def _num(x: float) -> float:
    return float(f"{x:.15g}")


def matrix_to_json(m: np.ndarray) -> list:
    """Nested ``[re, im]`` pairs at 15 significant digits."""
    return [[[_num(z.real), _num(z.imag)] for z in row] for row in np.asarray(m, dtype=complex)]
