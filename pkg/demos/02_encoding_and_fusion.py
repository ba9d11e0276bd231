"""Four punctures encode one qubit; fusing across pairs is a coin toss.

Run: python demos/02_encoding_and_fusion.py
"""

import itertools

from mixpunct import build_quartet, prepare_quartet, read_logical
from mixpunct.anyon_algebra import fusion_basis_change, oracle_fuse_probabilities, oracle_prepare
from mixpunct.encoding_braiding import fusion_counts, sample_branches, sample_fusion

code0, quartet = build_quartet()
print("punctures:", {p: code0.punctures[p].anchor for p in quartet.ids})
print("pairs:", quartet.pairs)

shots = 2000
for signs in itertools.product((1, -1), repeat=2):
    code = code0.copy()
    prepare_quartet(code, quartet, signs)
    counts = fusion_counts(sample_fusion(code, shots, seed=7))
    oracle = oracle_fuse_probabilities(oracle_prepare(*signs))
    print(f"W12={signs[0]:+d} W34={signs[1]:+d} ({read_logical(code, quartet).value:>3}): "
          f"(1,1) {counts['1,1'] / shots:.3f}  (psi,psi) {counts['psi,psi'] / shots:.3f}  "
          f"anticorrelated {counts['1,psi'] + counts['psi,1']}  oracle {oracle}")

print("|F|^2 from the oracle basis change:\n", abs(fusion_basis_change()) ** 2)

# The state is an equal superposition of four string configurations.
code = code0.copy()
prepare_quartet(code, quartet, (1, 1))
print("branch frequencies:", {b: n / shots for b, n in sample_branches(code, shots, seed=7).items()})
