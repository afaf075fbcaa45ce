"""Activation-kernel microbenchmarks.

The efficiency claim under test is an ordering, not an absolute number:
rectifier-family kernels (a sign test, no transcendental evaluation) cost
less per element than tanh-based kernels, and the hysteresis variant costs
exactly what the plain rectifier costs because its forward pass *is* the
rectifier kernel. Timings are wall clock around the tight elementwise call
only; buffers are allocated up front, a checksum of every output is kept
so the work cannot be skipped, and the median over repetitions is the
headline statistic. Strictly single-threaded; CPU pinning is the runner's
business.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass

import numpy as np

from . import activations, nn
from .activations import ActivationSpec
from .errors import MeasurementUnreliableError
from .ioutil import atomic_write_text

WARMUP_REPS = 3
MIN_ELEMENTS = 10_000
MIN_REPS = 10

CSV_HEADER = "kernel,n,reps,min_ns,median_ns,mean_ns,p95_ns,gelem_s,float_width"


@dataclass
class BenchRecord:
    kernel: str
    n_elements: int
    reps: int
    min_ns: float  # all *_ns figures are ns per element
    median_ns: float
    mean_ns: float
    p95_ns: float
    throughput_gelem_per_s: float
    float_width: int
    checksum: float

    def csv_row(self) -> str:
        return ",".join(
            [
                self.kernel,
                str(self.n_elements),
                str(self.reps),
                f"{self.min_ns:.6g}",
                f"{self.median_ns:.6g}",
                f"{self.mean_ns:.6g}",
                f"{self.p95_ns:.6g}",
                f"{self.throughput_gelem_per_s:.6g}",
                str(self.float_width),
            ]
        )

    def to_json(self) -> str:
        d = dict(self.__dict__)
        return json.dumps(d, sort_keys=True)


def timer_resolution_ns() -> float:
    """Smallest positive step the wall clock can resolve."""
    best = float("inf")
    for _ in range(200):
        t0 = time.perf_counter_ns()
        t1 = time.perf_counter_ns()
        while t1 == t0:
            t1 = time.perf_counter_ns()
        best = min(best, t1 - t0)
    return best


def _stats(times_ns: np.ndarray, n: int, kernel: str, reps: int, width: int, checksum: float) -> BenchRecord:
    per_el = times_ns / n
    median = float(np.median(per_el))
    return BenchRecord(
        kernel=kernel,
        n_elements=n,
        reps=reps,
        min_ns=float(per_el.min()),
        median_ns=median,
        mean_ns=float(per_el.mean()),
        p95_ns=float(np.percentile(per_el, 95)),
        throughput_gelem_per_s=1.0 / median,
        float_width=width,
        checksum=checksum,
    )


def _check_resolution(times_ns: np.ndarray) -> None:
    res = timer_resolution_ns()
    rep = float(np.median(times_ns))
    if res > 0.01 * rep:
        raise MeasurementUnreliableError(
            f"timer resolution {res:.0f} ns exceeds 1% of a {rep:.0f} ns rep"
        )


def bench_forward(
    spec: ActivationSpec, n: int, reps: int, float_width: int = 64, seed: int = 0
) -> BenchRecord:
    """Time the forward kernel on a seeded standard-normal buffer."""
    if n < MIN_ELEMENTS:
        raise ValueError(f"n must be >= {MIN_ELEMENTS} to amortize call overhead, got {n}")
    if reps < MIN_REPS:
        raise ValueError(f"reps must be >= {MIN_REPS}, got {reps}")
    if float_width not in (32, 64):
        raise ValueError(f"float_width must be 32 or 64, got {float_width}")
    dtype = np.float32 if float_width == 32 else np.float64
    z = np.random.default_rng(seed).standard_normal(n).astype(dtype)
    out = np.empty_like(z)
    kernel = activations.forward_kernel(spec)
    for _ in range(WARMUP_REPS):
        kernel(z, out=out)
    checksum = 0.0
    times = np.empty(reps)
    for r in range(reps):
        t0 = time.perf_counter_ns()
        kernel(z, out=out)
        t1 = time.perf_counter_ns()
        times[r] = t1 - t0
        checksum += float(out.sum())
    _check_resolution(times)
    return _stats(times, n, spec.label(), reps, float_width, checksum)


def bench_train_step(
    activation: ActivationSpec,
    model_shape,
    batch: int,
    reps: int,
    seed: int = 0,
) -> BenchRecord:
    """Time forward+backward+update for a fixed MLP.

    n_elements counts activation slots per step (batch x total hidden
    units), so ns/element is comparable across model shapes.
    """
    if reps < MIN_REPS:
        raise ValueError(f"reps must be >= {MIN_REPS}, got {reps}")
    dims = list(model_shape)
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((batch, dims[0]))
    labels = rng.integers(0, dims[-1], size=batch)
    model = nn.init(dims, seed, activation)
    config = nn.TrainConfig(epochs=1, batch_size=batch, seed=seed)
    for _ in range(WARMUP_REPS):
        nn.train_step(model, x, labels, config)
    n_elements = batch * sum(dims[1:-1])
    checksum = 0.0
    times = np.empty(reps)
    for r in range(reps):
        t0 = time.perf_counter_ns()
        loss = nn.train_step(model, x, labels, config)
        t1 = time.perf_counter_ns()
        times[r] = t1 - t0
        checksum += loss
    _check_resolution(times)
    return _stats(times, n_elements, f"train[{activation.label()}]", reps, 64, checksum)


def write_csv(records, path) -> None:
    atomic_write_text(path, "\n".join([CSV_HEADER] + [r.csv_row() for r in records]) + "\n")


def write_jsonl(records, path) -> None:
    atomic_write_text(path, "\n".join(r.to_json() for r in records) + "\n")
