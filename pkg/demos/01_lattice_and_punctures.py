"""A planar code, one mixed puncture, and the charges it can hold.

Run: python demos/01_lattice_and_punctures.py
"""

import numpy as np

from mixpunct import PunctureCode, build_geometry
from mixpunct.cli import cmd_render
from mixpunct.config import ExperimentConfig

# Rough top and bottom, smooth left and right: one logical qubit.
g = build_geometry(8, 8)
print(f"8x8 planar code: {g.n_qubits} qubits, {len(g.independent_generators)} generators, "
      f"{g.n_logical} logical qubit")

code = PunctureCode(g, np.random.default_rng(0))
code.create_puncture("p", [(3, 3)])
print("fresh mixed puncture holds", code.enclosed_charge("p"))

# Half its boundary is rough and half smooth, so it absorbs both e and m.
for anyon, side in (("e", "top"), ("m", "left"), ("e", "bottom")):
    code.populate("p", anyon, side)
    print(f"  string of {anyon} from the {side} side -> puncture holds {code.enclosed_charge('p')}")

# Moving the puncture is code deformation; it carries its charge along.
code.move_along("p", ["right", "right", "down"])
print("after moving to", code.punctures["p"].anchor, "it still holds", code.enclosed_charge("p"))

print()
print(cmd_render(ExperimentConfig(), "fresh"))
