"""Dense-array primitives every other module builds on.

A "tensor" here is a plain numpy ndarray: row-major (C order), float64 by
default. Float32 buffers appear only where the benchmark module asks for
them. Arrays are treated as immutable after construction except for the
optimizer's explicit in-place parameter updates.

``matmul`` does not call BLAS: it accumulates over the inner dimension in
fixed left-to-right order so results are bitwise reproducible and equal to
a naive triple loop. Reproducibility, not speed, is the contract.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable

import numpy as np

from .errors import DimensionError

DEFAULT_DTYPE = np.float64


def tensor(values, dtype=DEFAULT_DTYPE) -> np.ndarray:
    """Build a C-contiguous array of the given dtype from nested values."""
    return np.ascontiguousarray(np.asarray(values, dtype=dtype))


def zeros(shape, dtype=DEFAULT_DTYPE) -> np.ndarray:
    return np.zeros(shape, dtype=dtype)


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product with deterministic summation order.

    Accumulates ``sum_k outer(a[:, k], b[k, :])`` for k = 0..K-1, so each
    output element sees exactly the additions of the naive triple loop, in
    the same order, with the same roundings.
    """
    if a.ndim != 2 or b.ndim != 2:
        raise DimensionError(
            f"matmul needs rank-2 operands, got shapes {a.shape} and {b.shape}"
        )
    if a.shape[1] != b.shape[0]:
        raise DimensionError(
            f"matmul inner dimensions disagree: {a.shape} x {b.shape}"
        )
    m, k = a.shape
    n = b.shape[1]
    out = np.zeros((m, n), dtype=np.result_type(a, b))
    for i in range(k):
        out += a[:, i, np.newaxis] * b[np.newaxis, i, :]
    return out


def ewise_map(t: np.ndarray, f: Callable[[float], float]) -> np.ndarray:
    """Apply a scalar function elementwise, preserving shape and dtype."""
    flat = np.fromiter((f(v) for v in t.flat), dtype=t.dtype, count=t.size)
    return flat.reshape(t.shape)


def ewise_zip(a: np.ndarray, b: np.ndarray, f: Callable[[float, float], float]) -> np.ndarray:
    """Combine two same-shaped arrays with a scalar function."""
    if a.shape != b.shape:
        raise DimensionError(f"ewise_zip shapes differ: {a.shape} vs {b.shape}")
    flat = np.fromiter(
        (f(x, y) for x, y in zip(a.flat, b.flat)), dtype=a.dtype, count=a.size
    )
    return flat.reshape(a.shape)


def reduce_sum(t: np.ndarray, axis: int | None = None) -> np.ndarray:
    """Sum over one axis (dropping it) or over everything (axis=None)."""
    _check_axis(t, axis)
    return np.add.reduce(t, axis=axis)


def reduce_mean(t: np.ndarray, axis: int | None = None) -> np.ndarray:
    _check_axis(t, axis)
    n = t.size if axis is None else t.shape[axis]
    return np.add.reduce(t, axis=axis) / n


def _check_axis(t: np.ndarray, axis: int | None) -> None:
    if axis is not None and not -t.ndim <= axis < t.ndim:
        raise DimensionError(f"axis {axis} out of range for shape {t.shape}")


def reshape(t: np.ndarray, shape: Iterable[int]) -> np.ndarray:
    shape = tuple(shape)
    if int(np.prod(shape, dtype=np.int64)) != t.size:
        raise DimensionError(f"cannot reshape {t.shape} (size {t.size}) to {shape}")
    return t.reshape(shape)


def bias_add(x: np.ndarray, bias: np.ndarray) -> np.ndarray:
    """Matrix + row-vector bias, the only broadcast this package permits."""
    if x.ndim != 2 or bias.ndim != 1 or x.shape[1] != bias.shape[0]:
        raise DimensionError(f"bias_add shapes incompatible: {x.shape} + {bias.shape}")
    return x + bias
