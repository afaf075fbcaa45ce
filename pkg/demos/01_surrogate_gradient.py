"""The core trick: one forward map, a different backward map.

The hysteresis rectifier outputs exactly what the plain rectifier outputs,
but its backward rule passes gradient wherever the pre-activation exceeds
-alpha. The interval (-alpha, 0] is the band: output is zero there, yet
gradient still flows, which is what gives a nearly-dead unit a way back.
"""

import numpy as np

from helu import activations as act

alpha = 0.05
spec = act.helu(alpha)
z = np.array([-0.10, -0.05, -0.03, -0.001, 0.0, 0.5])
ones = np.ones_like(z)

print(f"hysteresis rectifier, alpha = {alpha}")
print(f"{'z':>8} {'forward':>8} {'backward':>9} {'relu bwd':>9}")
for zi, f, b, r in zip(
    z,
    act.forward(spec, z),
    act.backward(spec, z, ones),
    act.backward(act.relu(), z, ones),
):
    band = "  <- band" if -alpha < zi <= 0.0 else ""
    print(f"{zi:8.3f} {f:8.3f} {b:9.3f} {r:9.3f}{band}")

print()
print("Forward is bitwise identical to relu for any alpha:")
rng = np.random.default_rng(0)
big = rng.standard_normal(10**6)
for a in (0.0, 0.05, 2.0):
    same = act.forward(act.helu(a), big).tobytes() == act.forward(act.relu(), big).tobytes()
    print(f"  alpha={a:<5} identical over 10^6 random inputs: {same}")

print()
print("Backward at z=-alpha is 0 (boundary belongs to the dead side),")
print("one float above -alpha it passes the upstream gradient unchanged:")
for probe in (-alpha, float(np.nextafter(-alpha, 0.0))):
    g = act.backward(spec, np.array([probe]), np.array([2.5]))[0]
    print(f"  z={probe:.17g}: backward(upstream=2.5) = {g}")
