"""Canned desk-scale studies: dying-unit induction and alpha sensitivity.

The death-induction protocol is this artifact's own construction (the
phenomenon it stresses is only described qualitatively elsewhere), so it
is explicit and versioned here: train normally for a short warm-up, then
shift every hidden bias by a fixed negative constant and keep training at
an aggressive learning rate. Units whose pre-activations end up negative
for every input stop learning under the plain rectifier; the hysteresis
rule keeps feeding gradient to those within its band, giving them a path
back. Comparisons are paired: arms for one seed share initial parameters,
dataset and batch order, so the only difference is the backward mask.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import numpy as np

from . import data, diagnostics, nn
from .activations import ActivationSpec, parse_activation
from .sweep import child_seed, mean_std, splitmix64

PROTOCOL_VERSION = 2

DEFAULT_ALPHAS = (0.0, 0.001, 0.01, 0.05, 0.1, 1.0, 2.0)
SMALL_ALPHA_CUTOFF = 0.5  # arms at or below this count as "small alpha"


@dataclass(frozen=True)
class DyingProtocol:
    """Protocol v2, tuned until the plain-rectifier arm reliably loses units.

    Features are standardized so pre-activations sit at a scale where the
    0.05 hysteresis band is a meaningful fraction of a unit's spread.
    """

    n: int = 256
    d: int = 8
    k: int = 4
    spread: float = 1.0
    standardize: bool = True
    feature_scale: float = 0.25  # shrinks pre-activations so the band matters
    hidden: tuple[int, ...] = (32,)
    learning_rate: float = 0.1  # 10x the default
    momentum: float = 0.9
    epochs: int = 24
    batch_size: int = 32
    warmup_epochs: int = 2
    bias_shift: float = 0.2


@dataclass(frozen=True)
class SpiralsSetup:
    n: int = 400
    k: int = 3
    noise: float = 0.15
    hidden: tuple[int, ...] = (32, 32)
    learning_rate: float = 0.05
    momentum: float = 0.9
    epochs: int = 150
    batch_size: int = 32
    train_fraction: float = 0.75


@dataclass
class ArmResult:
    label: str
    values: list[float]  # per-seed raw values, never summarized away
    mean: float
    std: float


def _arm(label: str, values) -> ArmResult:
    m, s = mean_std(values)
    return ArmResult(label, [float(v) for v in values], m, s)


@dataclass
class ExperimentReport:
    experiment: str
    n_seeds: int
    protocol: dict
    dead_arms: list[ArmResult] = field(default_factory=list)
    acc_arms: list[ArmResult] = field(default_factory=list)
    flags: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(
            {
                "experiment": self.experiment,
                "protocol_version": PROTOCOL_VERSION,
                "n_seeds": self.n_seeds,
                "protocol": self.protocol,
                "dead_fraction": [asdict(a) for a in self.dead_arms],
                "accuracy": [asdict(a) for a in self.acc_arms],
                "flags": self.flags,
            },
            sort_keys=True,
            indent=2,
        )

    def runs_csv(self) -> str:
        lines = ["arm,seed_index,dead_fraction,accuracy"]
        for dead_arm, acc_arm in zip(self.dead_arms, self.acc_arms):
            for j, (dv, av) in enumerate(zip(dead_arm.values, acc_arm.values)):
                lines.append(f"{dead_arm.label},{j},{dv:.17g},{av:.17g}")
        return "\n".join(lines) + "\n"

    def summary_csv(self) -> str:
        lines = ["arm,n,dead_mean,dead_std,acc_mean,acc_std"]
        for dead_arm, acc_arm in zip(self.dead_arms, self.acc_arms):
            lines.append(
                f"{dead_arm.label},{len(dead_arm.values)},{dead_arm.mean:.17g},"
                f"{dead_arm.std:.17g},{acc_arm.mean:.17g},{acc_arm.std:.17g}"
            )
        return "\n".join(lines) + "\n"


def _run_seed(base_seed: int, j: int) -> int:
    # Shared across arms: pairing is the whole point.
    return child_seed(base_seed, 0, j)


def _data_seed(run_seed: int) -> int:
    return splitmix64(run_seed ^ 0xDA7A)


def _induction_run(spec: ActivationSpec, run_seed: int, proto: DyingProtocol):
    """One arm of the induction protocol; returns (dead_fraction, accuracy, loss curve)."""
    ds = data.gen_blobs(proto.n, proto.d, proto.k, proto.spread, _data_seed(run_seed))
    if proto.standardize:
        ds = data.standardize(ds)
    if proto.feature_scale != 1.0:
        ds = data.Dataset(ds.features * proto.feature_scale, ds.labels, ds.n_classes)
    model = nn.init([proto.d, *proto.hidden, proto.k], run_seed, spec)
    cfg = nn.TrainConfig(
        learning_rate=proto.learning_rate,
        momentum=proto.momentum,
        epochs=proto.epochs,
        batch_size=proto.batch_size,
        seed=run_seed,
    )
    rng = np.random.default_rng(run_seed)
    losses = []
    for epoch in range(proto.epochs):
        if epoch == proto.warmup_epochs:
            for layer in model.layers[:-1]:
                layer.bias -= proto.bias_shift
        order = rng.permutation(ds.n)
        batch_losses = []
        for start in range(0, ds.n, proto.batch_size):
            idx = order[start : start + proto.batch_size]
            batch_losses.append(nn.train_step(model, ds.features[idx], ds.labels[idx], cfg))
        losses.append(float(np.mean(batch_losses)))
    _, pre_acts = nn.model_forward(model, ds.features)
    dead = diagnostics.dead_fraction(pre_acts, spec).total_dead_fraction
    return dead, nn.evaluate(model, ds), losses


def exp_dying_relu(
    seeds: int = 10,
    base_seed: int = 0,
    lr_aggressive: float | None = None,
    protocol: DyingProtocol | None = None,
) -> ExperimentReport:
    """Paired comparison of end-of-training dead-unit fractions.

    Arms: relu, helu:0 (must equal relu bitwise), helu:0.05, gelu.
    """
    proto = protocol or DyingProtocol()
    if lr_aggressive is not None:
        proto = DyingProtocol(**{**asdict(proto), "learning_rate": lr_aggressive})
    arm_labels = ["relu", "helu:0", "helu:0.05", "gelu"]
    dead = {a: [] for a in arm_labels}
    acc = {a: [] for a in arm_labels}
    curves = {a: [] for a in arm_labels}
    for j in range(seeds):
        run_seed = _run_seed(base_seed, j)
        for label in arm_labels:
            d, a, c = _induction_run(parse_activation(label), run_seed, proto)
            dead[label].append(d)
            acc[label].append(a)
            curves[label].append(c)
    relu_mean = mean_std(dead["relu"])[0]
    helu_mean = mean_std(dead["helu:0.05"])[0]
    report = ExperimentReport(
        experiment="dying-relu",
        n_seeds=seeds,
        protocol=asdict(proto),
        dead_arms=[_arm(a, dead[a]) for a in arm_labels],
        acc_arms=[_arm(a, acc[a]) for a in arm_labels],
    )
    report.flags = {
        "protocol_valid_relu_dead_positive": relu_mean > 0.0,
        "helu_dead_le_relu": helu_mean <= relu_mean,
        "helu0_bitwise_equals_relu": curves["relu"] == curves["helu:0"],
    }
    return report


def exp_alpha_sensitivity(
    alphas=DEFAULT_ALPHAS,
    seeds: int = 10,
    base_seed: int = 0,
    setup: SpiralsSetup | None = None,
) -> ExperimentReport:
    """Accuracy per alpha on the spirals task, arms paired per seed.

    Flags whether the largest-alpha arm falls below the best small-alpha
    arm (the collapse direction) and whether the best arm is non-inferior
    to the plain rectifier within two pooled standard deviations.
    """
    setup = setup or SpiralsSetup()
    arm_labels = ["relu"] + [f"helu:{a:g}" for a in alphas]
    acc = {a: [] for a in arm_labels}
    dead = {a: [] for a in arm_labels}
    for j in range(seeds):
        run_seed = _run_seed(base_seed, j)
        ds = data.gen_spirals(setup.n, setup.k, setup.noise, _data_seed(run_seed))
        train_ds, test_ds = data.split(ds, setup.train_fraction, _data_seed(run_seed))
        for label in arm_labels:
            spec = parse_activation(label)
            model = nn.init([2, *setup.hidden, setup.k], run_seed, spec)
            cfg = nn.TrainConfig(
                learning_rate=setup.learning_rate,
                momentum=setup.momentum,
                epochs=setup.epochs,
                batch_size=setup.batch_size,
                seed=run_seed,
            )
            trace = nn.train(model, train_ds, cfg, eval_dataset=test_ds)
            acc[label].append(trace.rows[-1].test_acc)
            dead[label].append(trace.rows[-1].dead_fraction)
    helu_arms = arm_labels[1:]
    means = {a: mean_std(acc[a])[0] for a in arm_labels}
    stds = {a: mean_std(acc[a])[1] for a in arm_labels}
    best_arm = max(helu_arms, key=lambda a: means[a])
    small = [a for a, alpha in zip(helu_arms, alphas) if alpha <= SMALL_ALPHA_CUTOFF]
    large = [a for a, alpha in zip(helu_arms, alphas) if alpha > SMALL_ALPHA_CUTOFF]
    pooled = float(np.sqrt(0.5 * (stds["relu"] ** 2 + stds[best_arm] ** 2)))
    flags = {
        "best_helu_arm": best_arm,
        "non_inferior_to_relu": means[best_arm] >= means["relu"] - 2.0 * pooled,
        "pooled_std": pooled,
    }
    if small and large:
        best_small = max(small, key=lambda a: means[a])
        worst_large = min(large, key=lambda a: means[a])
        flags["large_alpha_underperforms"] = means[worst_large] < means[best_small]
        flags["best_small_alpha_arm"] = best_small
    report = ExperimentReport(
        experiment="alpha-sweep",
        n_seeds=seeds,
        protocol=asdict(setup),
        dead_arms=[_arm(a, dead[a]) for a in arm_labels],
        acc_arms=[_arm(a, acc[a]) for a in arm_labels],
        flags=flags,
    )
    return report
