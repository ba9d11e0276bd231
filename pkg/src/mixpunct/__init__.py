"""Mixed-boundary punctures on the planar code, simulated as stabilizer states."""

from .anyon_algebra import ISING, TORIC, AnyonModel, braid_matrix, toric_r_checks
from .defects import Puncture, PunctureCode
from .encoding_braiding import (
    LogicalLabel,
    PunctureQuartet,
    braid,
    build_quartet,
    fuse_pairs,
    logical_x,
    logical_z,
    prepare_quartet,
    read_logical,
)
from .pauli_gf2 import PauliOperator, StabilizerTableau, states_equal
from .planar_code import BoundarySpec, CodeGeometry, build_geometry

__version__ = "0.1.0"

__all__ = [
    "AnyonModel",
    "BoundarySpec",
    "CodeGeometry",
    "ISING",
    "LogicalLabel",
    "PauliOperator",
    "Puncture",
    "PunctureCode",
    "PunctureQuartet",
    "StabilizerTableau",
    "TORIC",
    "braid",
    "braid_matrix",
    "build_geometry",
    "build_quartet",
    "fuse_pairs",
    "logical_x",
    "logical_z",
    "prepare_quartet",
    "read_logical",
    "states_equal",
    "toric_r_checks",
]
