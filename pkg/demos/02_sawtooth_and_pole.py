# Two cuts: a sawtooth, then a function with a pole just inside a partition
# that is not active there.
#
# The approximant is a weighted sum of the partitions, with the weight of
# partition n equal to 1 on interval n and 0 elsewhere.  A partition with
# zero weight is never evaluated, so a pole that lies outside its own
# interval does not leak into the result.

import numpy as np

from tanhconnect import assemble, error_profile, evaluate
from tanhconnect.approximant import auxiliary, evaluate_fform
from tanhconnect.catalog import pole_example, sawtooth

saw = assemble(sawtooth())
print("sawtooth S^-1 =")
print(saw.aux.inverse)

# The auxiliary functions F = S^-1 psi are (x - 1, -1/2, -1/2) for every x.
print("F(0.7) =", auxiliary(saw, 0.7))

# At each cut the value is the mean of the two one-sided limits.
for c in saw.spec.cuts:
    print(f"Omega({c}) = {evaluate(saw, c)}")

grid = np.linspace(0, 3, 10_000)
print("sawtooth max abs error:", error_profile(saw, grid).summary.max_abs)

# The third partition has a pole at x = 0.5, inside the second interval.
pole = assemble(pole_example())
print()
print("Omega(0.5)      =", evaluate(pole, 0.5))
print("psi_1(0.5)      =", pole.spec.partitions[1](0.5))
with np.errstate(all="ignore"):
    print("F-form at 0.5   =", evaluate_fform(pole, 0.5), "(sums every partition, so it sees the pole)")

prof = error_profile(pole, np.linspace(-1, 1, 10_000), exclude=[(0.5, 1e-3)])
print(f"max relative error away from 0.5: {prof.summary.max_rel:.3g}")
