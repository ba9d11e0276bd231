"""Braiding a puncture around one from the other pair flips the logical qubit.

Run: python demos/03_braiding.py
"""

from mixpunct import braid, braid_matrix, build_quartet, logical_x, prepare_quartet, read_logical, states_equal
from mixpunct.encoding_braiding import EXCHANGES

code0, quartet = build_quartet()
basis = {}
for signs in ((1, 1), (-1, -1)):
    basis[signs] = code0.copy()
    prepare_quartet(basis[signs], quartet, signs)

for moving, around in EXCHANGES:
    finals = []
    for signs, ref in basis.items():
        c = ref.copy()
        braid(c, moving, around)
        finals.append(f"{read_logical(ref, quartet).value} -> {read_logical(c, quartet).value}")
    print(f"{moving} around {around}: " + ", ".join(finals))

# The same flip written down directly as a product of two puncture loops.
dyn = basis[(1, 1)].copy()
braid(dyn, "p1", "p3")
static = basis[(1, 1)].copy()
static.apply(logical_x(static))
print("braid equals static logical X:", states_equal(dyn.state, static.state))

print("Ising braid matrix B (a phase times X):\n", braid_matrix().round(6))
