# A rectangle of height 1/(2h) and half-width h around b has unit area.
# Its approximant should integrate to one and, multiplied by a smooth f,
# integrate to roughly f(b).

from tanhconnect.approximant import auxiliary
from tanhconnect.showcase import REFERENCE_DELTA, check_unit_mass, delta_approximant, sift

d = REFERENCE_DELTA
a = delta_approximant(d)
print(f"b = {d.b!r}, h = {d.h}, cuts = {d.cuts}")

# The auxiliary functions are constants: (0, 1/(4h), -1/(4h)).
print("F =", auxiliary(a, d.b))

i1, e_i = check_unit_mass(d, approximant=a)
print(f"integral of Omega       = {i1!r}  (error {e_i:.4g})")

for f in ("sin(x)", "exp(x)", "cos(3*x)"):
    i2, e2 = sift(d, f, approximant=a)
    print(f"integral of Omega*{f:<9} = {i2:.10f}  (relative error {e2:.4g})")
