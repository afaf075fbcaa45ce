"""Dying-unit and hysteresis-band instrumentation.

A hidden unit counts as dead when its activation output is exactly zero
for every sample of a fixed evaluation set (for rectifier-family kinds
that means pre-activation <= 0 throughout). The definition is over a
concrete sample set, not asymptotic, so it is directly testable.

The band interval is (-alpha, 0]: pre-activations there produce zero
output while the hysteresis backward rule still passes gradient.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import activations
from .errors import EmptyDataError

DEFAULT_BINS = 101
DEFAULT_RANGE = (-5.0, 5.0)


@dataclass
class DeadNeuronReport:
    per_layer_dead_fraction: list[float]
    total_dead_fraction: float
    n_samples: int
    epoch: int

    def to_json(self) -> str:
        return json.dumps(
            {
                "epoch": self.epoch,
                "n_samples": self.n_samples,
                "per_layer_dead_fraction": self.per_layer_dead_fraction,
                "total_dead_fraction": self.total_dead_fraction,
            },
            sort_keys=True,
        )


@dataclass
class PreActivationHistogram:
    bin_edges: np.ndarray
    counts: np.ndarray
    band_fraction: float

    def to_json(self) -> str:
        return json.dumps(
            {
                "bin_edges": self.bin_edges.tolist(),
                "counts": self.counts.tolist(),
                "band_fraction": self.band_fraction,
            },
            sort_keys=True,
        )

    def csv_rows(self):
        """(bin_left, bin_right, count) per bin, for external plotting."""
        return [
            (float(self.bin_edges[i]), float(self.bin_edges[i + 1]), int(self.counts[i]))
            for i in range(len(self.counts))
        ]


def dead_fraction(
    pre_activations: list[np.ndarray],
    activation: activations.ActivationSpec,
    epoch: int = 0,
) -> DeadNeuronReport:
    """Per-layer and total dead-unit fractions from [n x units] pre-activations."""
    if not pre_activations or any(z.shape[0] == 0 for z in pre_activations):
        raise EmptyDataError("dead_fraction needs at least one sample per layer")
    n_samples = pre_activations[0].shape[0]
    per_layer = []
    dead_units = 0
    total_units = 0
    for z in pre_activations:
        out = activations.forward(activation, z)
        dead = np.all(out == 0.0, axis=0)
        per_layer.append(float(np.mean(dead)))
        dead_units += int(np.count_nonzero(dead))
        total_units += dead.size
    return DeadNeuronReport(
        per_layer_dead_fraction=per_layer,
        total_dead_fraction=dead_units / total_units,
        n_samples=n_samples,
        epoch=epoch,
    )


def grad_mask_occupancy(pre_activations: np.ndarray, alpha: float) -> tuple[float, float, float]:
    """Fractions (live, band, dead): z > 0, -alpha < z <= 0, z <= -alpha.

    The three buckets partition every element, so the fractions sum to one.
    """
    z = np.asarray(pre_activations)
    n = z.size
    if n == 0:
        raise EmptyDataError("grad_mask_occupancy needs at least one value")
    live = int(np.count_nonzero(z > 0))
    dead = int(np.count_nonzero(z <= -alpha))
    band = n - live - dead
    return live / n, band / n, dead / n


def grad_dead_fraction(pre_activations: np.ndarray, alpha: float) -> float:
    """Fraction of units whose *gradient mask* is zero for all samples.

    A unit is gradient-dead at shift alpha when z <= -alpha for every
    sample; monotone non-increasing in alpha by the mask subset property.
    """
    z = np.asarray(pre_activations)
    if z.ndim != 2 or z.shape[0] == 0:
        raise EmptyDataError("grad_dead_fraction needs an [n x units] array")
    return float(np.mean(np.all(z <= -alpha, axis=0)))


def histogram(
    pre_activations: np.ndarray,
    n_bins: int = DEFAULT_BINS,
    value_range: tuple[float, float] = DEFAULT_RANGE,
    alpha: float = 0.0,
) -> PreActivationHistogram:
    """Uniform-bin histogram; out-of-range values clamp into the end bins."""
    z = np.asarray(pre_activations).ravel()
    if z.size == 0:
        raise EmptyDataError("histogram needs at least one value")
    lo, hi = value_range
    edges = np.linspace(lo, hi, n_bins + 1)
    width = (hi - lo) / n_bins
    idx = np.clip(np.floor((z - lo) / width).astype(np.int64), 0, n_bins - 1)
    counts = np.bincount(idx, minlength=n_bins)
    band = grad_mask_occupancy(z, alpha)[1] if alpha > 0 else 0.0
    return PreActivationHistogram(bin_edges=edges, counts=counts, band_fraction=band)


def layer_rows(
    pre_activations: list[np.ndarray],
    activation: activations.ActivationSpec,
    alpha: float,
    epoch: int,
):
    """Rows (epoch, layer, dead_fraction, band_fraction) for CSV emission."""
    report = dead_fraction(pre_activations, activation, epoch=epoch)
    rows = []
    for layer, (z, dead) in enumerate(zip(pre_activations, report.per_layer_dead_fraction)):
        band = grad_mask_occupancy(z, alpha)[1]
        rows.append((epoch, layer, dead, band))
    return rows
