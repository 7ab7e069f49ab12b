# A single jump: the sign function moved to x = 375 on a wide domain.
#
# One cut means two partition intervals and a 2x2 matrix S of interval
# averages of the connector.  Away from the cut the connector is exactly +-1
# in double precision, so the approximant reproduces the step bit for bit.

import numpy as np

from tanhconnect import assemble, error_profile, evaluate, weights
from tanhconnect.catalog import sign_step

a = assemble(sign_step())
print("S =")
print(a.smatrix.entries)
print("S^-1 =")
print(a.aux.inverse)

# Weights of the two partitions at a few points.  They always add up to one
# and are 0/1 indicators except right at the cut, where both are 1/2.
xs = np.array([-1000.0, 0.0, 375.0 - 1e-9, 375.0, 375.0 + 1e-9, 1000.0])
for x, c in zip(xs, weights(a, xs).T):
    print(f"x = {float(x)!r:<16} weights = {c}  Omega = {evaluate(a, x):+.1f}")

# Error against the original step on a 10^4-point grid.
grid = np.linspace(-1000, 1000, 10_000)
s = error_profile(a, grid).summary
print(f"max relative error {s.max_rel:.3g} over {s.counted} points")
