"""Induce unit death on purpose, then watch the band rescue some units.

The protocol: short warm-up, then every hidden bias is shoved down by a
constant and training continues at an aggressive learning rate. Units
whose pre-activations stay negative for every input are dead under the
plain rectifier: zero output, zero gradient, frozen forever. The
hysteresis rule keeps feeding gradient to units within its band, so a
slice of them climbs back.
"""

from helu import experiments

seeds = 5
report = experiments.exp_dying_relu(seeds=seeds)

print(f"death-induction protocol v{experiments.PROTOCOL_VERSION}, {seeds} paired seeds")
for key, value in sorted(report.protocol.items()):
    print(f"  {key} = {value}")
print()
print(f"{'arm':>10} {'dead fraction':>14} {'accuracy':>9}")
for dead_arm, acc_arm in zip(report.dead_arms, report.acc_arms):
    print(f"{dead_arm.label:>10} {dead_arm.mean:8.3f} +- {dead_arm.std:.3f} {acc_arm.mean:9.3f}")
print()
for key, value in report.flags.items():
    print(f"flag {key} = {value}")
print()
print("gelu never dies by this definition (its output is only exactly zero")
print("at z=0), which is the usual argument for smooth activations; the")
print("hysteresis arm narrows the gap while keeping the rectifier kernel.")
