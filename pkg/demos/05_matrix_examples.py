"""
4x4 matrices as tensors: PSD, separable, block positive
=======================================================

In the symmetric-matrix model of the 2 (x) 2 tensor square, three cones
nest strictly: products of PSD pairs, then PSD, then block positive. Two
matrices exhibit both gaps, each with a certificate small enough to check
by hand.
"""

from aoulab import (
    BELL,
    SWAP,
    block_positive,
    ldlt_psd,
    partial_transpose,
    psd_example_suite,
)

print("Bell:")
for row in BELL.data:
    print("  ", row)
print("Swap = partial transpose of Bell:", partial_transpose(BELL).data == SWAP.data)

# Swap fails PSD with an explicit negative direction
res = ldlt_psd(SWAP)
print("\nSwap PSD:", res.is_psd, " witness:", res.witness)

# and that same direction, pushed through the partial transpose, separates
# Bell from the separable cone even though Bell is PSD
suite = {rep.label: rep for rep in psd_example_suite()}
for label in ("bell", "swap", "identity"):
    verdicts = suite[label].verdicts
    print(label, {cone: v.claim for cone, v in verdicts.items()})

# block positivity is decided by shifting along the one quadric that
# vanishes on simple tensors and testing PSD exactly
for name, m in (("bell", BELL), ("swap", SWAP)):
    rep = block_positive(m)
    print(name, "block positive:", rep.verdict, " shift:", rep.evidence.shift)
