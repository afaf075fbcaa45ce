"""Dataset ingestion and synthetic task generators at desk scale.

Generators are deterministic per seed and class-balanced within one
sample. File formats kept deliberately small: CSV (RFC-4180 subset, no
quoted commas) and the big-endian IDX image/label pair used by MNIST-style
datasets.
"""

from __future__ import annotations

import csv
import struct
from dataclasses import dataclass

import numpy as np

from .errors import DataError, ParseError

IDX_IMAGES_MAGIC = 0x00000803
IDX_LABELS_MAGIC = 0x00000801


@dataclass
class Dataset:
    features: np.ndarray  # [n x d] float64
    labels: np.ndarray  # [n] int64
    n_classes: int

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=np.float64)
        self.labels = np.asarray(self.labels, dtype=np.int64)
        n = self.features.shape[0]
        if n < 1:
            raise DataError("dataset needs at least one sample")
        if self.labels.shape != (n,):
            raise DataError(f"labels shape {self.labels.shape} != ({n},)")
        if not np.all(np.isfinite(self.features)):
            raise DataError("dataset features contain non-finite values")
        if self.labels.min() < 0 or self.labels.max() >= self.n_classes:
            raise DataError(
                f"labels outside [0, {self.n_classes}): "
                f"{int(self.labels.min())}..{int(self.labels.max())}"
            )

    @property
    def n(self) -> int:
        return self.features.shape[0]


def _balanced_counts(n: int, k: int) -> list[int]:
    base, extra = divmod(n, k)
    return [base + (1 if c < extra else 0) for c in range(k)]


def gen_blobs(n: int, d: int, k: int, spread: float, seed: int) -> Dataset:
    """k Gaussian blobs around uniform random centers in [-4, 4]^d.

    spread=0 collapses each class onto its center point.
    """
    rng = np.random.default_rng(seed)
    centers = rng.uniform(-4.0, 4.0, size=(k, d))
    feats, labels = [], []
    for c, count in enumerate(_balanced_counts(n, k)):
        feats.append(centers[c] + spread * rng.standard_normal((count, d)))
        labels.append(np.full(count, c))
    return Dataset(np.concatenate(feats), np.concatenate(labels), k)


def gen_spirals(n: int, k: int, noise: float, seed: int) -> Dataset:
    """k interleaved spiral arms in the plane; not linearly separable.

    Each arm sweeps 1.25 turns with radius growing 0.6 to 3, so arms wrap
    around each other and no half-plane separates any pair of classes.
    """
    rng = np.random.default_rng(seed)
    feats, labels = [], []
    for c, count in enumerate(_balanced_counts(n, k)):
        t = np.linspace(0.0, 1.0, count)
        radius = 3.0 * (0.2 + 0.8 * t)
        theta = 2.0 * np.pi * (1.25 * t + c / k)
        pts = np.stack([radius * np.cos(theta), radius * np.sin(theta)], axis=1)
        feats.append(pts + noise * rng.standard_normal(pts.shape))
        labels.append(np.full(count, c))
    return Dataset(np.concatenate(feats), np.concatenate(labels), k)


def load_csv(path, label_column: str) -> Dataset:
    """Header row names columns; the label column holds integer classes."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}: empty file, no header at line 1") from None
        if label_column not in header:
            raise DataError(f"{path}: no column {label_column!r} in header {header}")
        label_idx = header.index(label_column)
        feats, labels = [], []
        for line_no, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise ParseError(
                    f"{path}: line {line_no}: {len(row)} fields, header has {len(header)}"
                )
            try:
                labels.append(int(row[label_idx]))
                feats.append([float(v) for i, v in enumerate(row) if i != label_idx])
            except ValueError as exc:
                raise ParseError(f"{path}: line {line_no}: {exc}") from None
    if not feats:
        raise DataError(f"{path}: no data rows")
    labels = np.asarray(labels)
    if labels.min() < 0:
        raise DataError(f"{path}: negative class label {int(labels.min())}")
    return Dataset(np.asarray(feats), labels, int(labels.max()) + 1)


def _read_idx_header(blob: bytes, path, magic_expected: int, n_dims: int):
    want = 4 * (1 + n_dims)
    if len(blob) < want:
        raise ParseError(f"{path}: truncated header, {len(blob)} bytes < {want}")
    magic = struct.unpack_from(">I", blob, 0)[0]
    if magic != magic_expected:
        raise ParseError(
            f"{path}: bad magic at byte 0: 0x{magic:08x}, expected 0x{magic_expected:08x}"
        )
    return struct.unpack_from(f">{n_dims}I", blob, 4), want


def load_idx(images_path, labels_path) -> Dataset:
    """MNIST-format IDX pair: big-endian headers, one byte per pixel/label.

    Pixels are scaled to [0, 1]; images flatten to rows*cols features.
    """
    with open(images_path, "rb") as fh:
        img_blob = fh.read()
    with open(labels_path, "rb") as fh:
        lab_blob = fh.read()
    (n_img, rows, cols), img_off = _read_idx_header(img_blob, images_path, IDX_IMAGES_MAGIC, 3)
    (n_lab,), lab_off = _read_idx_header(lab_blob, labels_path, IDX_LABELS_MAGIC, 1)
    if n_img != n_lab:
        raise DataError(f"{n_img} images but {n_lab} labels")
    n_pixels = n_img * rows * cols
    if len(img_blob) - img_off < n_pixels:
        raise ParseError(
            f"{images_path}: expected {n_pixels} pixel bytes from byte {img_off}, "
            f"file has {len(img_blob) - img_off}"
        )
    if len(lab_blob) - lab_off < n_lab:
        raise ParseError(
            f"{labels_path}: expected {n_lab} label bytes from byte {lab_off}, "
            f"file has {len(lab_blob) - lab_off}"
        )
    pixels = np.frombuffer(img_blob, dtype=np.uint8, count=n_pixels, offset=img_off)
    features = pixels.reshape(n_img, rows * cols).astype(np.float64) / 255.0
    labels = np.frombuffer(lab_blob, dtype=np.uint8, count=n_lab, offset=lab_off).astype(np.int64)
    return Dataset(features, labels, int(labels.max()) + 1)


def split(dataset: Dataset, train_fraction: float, seed: int) -> tuple[Dataset, Dataset]:
    """Seeded permutation split; the two parts are disjoint and exhaustive."""
    if not 0.0 < train_fraction < 1.0:
        raise DataError(f"train_fraction must be in (0, 1), got {train_fraction}")
    perm = np.random.default_rng(seed).permutation(dataset.n)
    n_train = int(train_fraction * dataset.n)
    tr, te = perm[:n_train], perm[n_train:]
    return (
        Dataset(dataset.features[tr], dataset.labels[tr], dataset.n_classes),
        Dataset(dataset.features[te], dataset.labels[te], dataset.n_classes),
    )


def standardize(dataset: Dataset) -> Dataset:
    """Explicit opt-in transform: per-column mean 0, variance 1.

    Zero-variance columns are centered and left unscaled.
    """
    mean = dataset.features.mean(axis=0)
    std = dataset.features.std(axis=0)
    std[std == 0.0] = 1.0
    return Dataset((dataset.features - mean) / std, dataset.labels, dataset.n_classes)
