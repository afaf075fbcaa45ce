"""Seeded sweep grid: activations x seeds, each cell an independent run.

Cell (i, j) trains with ``child_seed(base, i, j)`` where the derivation is
three chained splitmix64 steps: ``mix(mix(mix(base) ^ i) ^ j)``. A cell's
seed depends only on (base, i, j), so growing the grid never perturbs
existing cells. All cells of one sweep share the dataset (it comes from
``data.seed``, not from the child seed); the child seed drives model init
and batch shuffling.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import activations, diagnostics, nn
from .config import ExperimentConfig, make_dataset

_M64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    """One splitmix64 output step (Steele/Lea/Vigna constants)."""
    x = (x + 0x9E3779B97F4A7C15) & _M64
    z = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9 & _M64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & _M64
    return (z ^ (z >> 31)) & _M64


def child_seed(base: int, i: int, j: int) -> int:
    return splitmix64(splitmix64(splitmix64(base & _M64) ^ (i & _M64)) ^ (j & _M64))


RUNS_HEADER = "activation,seed_index,child_seed,final_loss,train_acc,test_acc,dead_fraction,band_fraction"
SUMMARY_HEADER = "activation,n,test_acc_mean,test_acc_std,dead_fraction_mean,dead_fraction_std,note"


@dataclass
class CellResult:
    activation: str
    seed_index: int
    child_seed: int
    final_loss: float
    train_acc: float
    test_acc: float
    dead_fraction: float
    band_fraction: float

    def csv_row(self) -> str:
        return ",".join(
            [
                self.activation,
                str(self.seed_index),
                str(self.child_seed),
                f"{self.final_loss:.17g}",
                f"{self.train_acc:.17g}",
                f"{self.test_acc:.17g}",
                f"{self.dead_fraction:.17g}",
                f"{self.band_fraction:.17g}",
            ]
        )


def run_cell(cfg: ExperimentConfig, activation_label: str, i: int, j: int) -> CellResult:
    """Train one grid cell to completion and report its final metrics."""
    spec = activations.parse_activation(activation_label)
    train_ds, test_ds = make_dataset(cfg)
    seed = child_seed(cfg.train.seed, i, j)
    model = nn.init([train_ds.features.shape[1], *cfg.model_hidden, train_ds.n_classes], seed, spec)
    train_cfg = nn.TrainConfig(
        learning_rate=cfg.train.learning_rate,
        momentum=cfg.train.momentum,
        weight_decay=cfg.train.weight_decay,
        epochs=cfg.train.epochs,
        batch_size=cfg.train.batch_size,
        seed=seed,
    )
    trace = nn.train(model, train_ds, train_cfg, eval_dataset=test_ds)
    last = trace.rows[-1]
    return CellResult(
        activation=activation_label,
        seed_index=j,
        child_seed=seed,
        final_loss=last.loss,
        train_acc=last.train_acc,
        test_acc=last.test_acc,
        dead_fraction=last.dead_fraction,
        band_fraction=last.band_fraction,
    )


def run_sweep(cfg: ExperimentConfig, n_seeds: int, jobs: int = 1) -> list[CellResult]:
    """Run every (activation, seed) cell; results in deterministic grid order."""
    grid = cfg.sweep if cfg.sweep else [cfg.activation]
    cells = [(label, i, j) for i, label in enumerate(grid) for j in range(n_seeds)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(run_cell, cfg, label, i, j) for label, i, j in cells]
            return [f.result() for f in futures]
    return [run_cell(cfg, label, i, j) for label, i, j in cells]


def mean_std(values) -> tuple[float, float]:
    """Mean and sample standard deviation; std is 0 by convention at n=1."""
    arr = np.asarray(values, dtype=np.float64)
    std = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
    return float(arr.mean()), std


def summarize(results: list[CellResult], grid: list[str]) -> list[str]:
    """One summary row per grid cell: mean +- sample std over its seeds."""
    rows = []
    for label in grid:
        cell = [r for r in results if r.activation == label]
        acc_m, acc_s = mean_std([r.test_acc for r in cell])
        dead_m, dead_s = mean_std([r.dead_fraction for r in cell])
        note = "n=1" if len(cell) == 1 else ""
        rows.append(
            f"{label},{len(cell)},{acc_m:.17g},{acc_s:.17g},{dead_m:.17g},{dead_s:.17g},{note}"
        )
    return rows
