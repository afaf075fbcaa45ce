"""Finite differences agree with every backward rule except where they must not.

For the smooth activations the central difference of the forward map is
the ground truth and the backward rule matches it to high precision. For
the hysteresis rectifier the two *disagree inside the band by design*:
the forward map is flat there (difference quotient exactly 0) while the
backward rule returns 1. The harness classifies those points as
EXPECTED-MISMATCH rather than failures.
"""

from helu import activations as act
from helu import gradcheck

for label in ("sigmoid", "swish", "gelu", "gelu-tanh", "elu", "relu", "helu:0.05"):
    spec = act.parse_activation(label)
    report = gradcheck.check_activation(spec, n_points=500, seed=1, n_band_points=60)
    print(
        f"{label:>10}: ok={report.count(gradcheck.OK):3d} "
        f"expected-mismatch={report.count(gradcheck.EXPECTED_MISMATCH):3d} "
        f"mismatch={report.count(gradcheck.MISMATCH)} "
        f"skipped={report.count(gradcheck.SKIPPED)} passed={report.passed}"
    )

print()
print("a few of the certified band points for helu:0.05:")
report = gradcheck.check_activation(act.helu(0.05), n_points=0, seed=1, n_band_points=5)
for p in report.points:
    print(f"  z={p.z:+.5f}  fd={p.fd}  backward={p.analytic}  -> {p.status}")
