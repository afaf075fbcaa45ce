"""Finite-difference checking of activation backward rules.

Central differences of the forward map are the independent oracle. For
kinds whose backward rule is the true derivative, oracle and rule must
agree to a relative tolerance. For the hysteresis rectifier they must
*disagree* inside the band: the forward map is flat there (difference
quotient exactly 0) while the backward rule returns 1. Those points are
classified EXPECTED_MISMATCH, not failures; anything else off-tolerance is
a real MISMATCH. Points within ``kink_radius`` of a non-differentiable
point are skipped.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import activations
from .activations import ActivationSpec, Kind

OK = "OK"
EXPECTED_MISMATCH = "EXPECTED-MISMATCH"
MISMATCH = "MISMATCH"
SKIPPED = "SKIPPED"


@dataclass
class GradcheckPoint:
    z: float
    fd: float
    analytic: float
    status: str


@dataclass
class GradcheckReport:
    spec: ActivationSpec
    h: float
    rel_tol: float
    kink_radius: float
    points: list[GradcheckPoint] = field(default_factory=list)

    def count(self, status: str) -> int:
        return sum(p.status == status for p in self.points)

    @property
    def unexpected(self) -> list[GradcheckPoint]:
        return [p for p in self.points if p.status == MISMATCH]

    @property
    def passed(self) -> bool:
        return not self.unexpected


def central_difference(spec: ActivationSpec, z: np.ndarray, h: float) -> np.ndarray:
    """(f(z+h) - f(z-h)) / 2h, elementwise, on the forward map."""
    f = activations.forward_kernel(spec)
    return (f(z + h) - f(z - h)) / (2.0 * h)


def kinks(spec: ActivationSpec) -> tuple[float, ...]:
    """Non-differentiable points of the forward map / backward rule."""
    if spec.kind is Kind.RELU:
        return (0.0,)
    if spec.kind is Kind.HELU:
        return (0.0, -spec.alpha)
    if spec.kind is Kind.ELU:
        return (0.0,)
    return ()


def relative_error(fd: float, analytic: float) -> float:
    return abs(fd - analytic) / max(abs(analytic), abs(fd), 1e-12)


def check_activation(
    spec: ActivationSpec,
    n_points: int = 1000,
    seed: int = 0,
    h: float = 1e-4,
    rel_tol: float = 1e-5,
    kink_radius: float = 1e-3,
    z_range: tuple[float, float] = (-5.0, 5.0),
    n_band_points: int = 0,
) -> GradcheckReport:
    """Sample z values and compare backward against central differences.

    ``n_band_points`` extra samples are drawn inside the hysteresis band
    (helu only), where uniform sampling would rarely land; those are the
    points the band contract is certified on.
    """
    rng = np.random.default_rng(seed)
    zs = rng.uniform(z_range[0], z_range[1], size=n_points)
    if n_band_points and spec.kind is Kind.HELU and spec.alpha > 2 * kink_radius:
        band = rng.uniform(-spec.alpha + kink_radius, -kink_radius, size=n_band_points)
        zs = np.concatenate([zs, band])
    fds = central_difference(spec, zs, h)
    analytic = activations.backward(spec, zs, np.ones_like(zs))

    report = GradcheckReport(spec=spec, h=h, rel_tol=rel_tol, kink_radius=kink_radius)
    kink_pts = kinks(spec)
    in_band = (
        (lambda z: -spec.alpha < z <= 0.0) if spec.kind is Kind.HELU else (lambda z: False)
    )
    for z, fd, an in zip(zs, fds, analytic):
        z, fd, an = float(z), float(fd), float(an)
        if any(abs(z - kp) <= kink_radius for kp in kink_pts):
            status = SKIPPED
        elif in_band(z):
            # The mechanism under test: flat forward, gradient still flowing.
            status = EXPECTED_MISMATCH if (fd == 0.0 and an == 1.0) else MISMATCH
        else:
            status = OK if relative_error(fd, an) <= rel_tol else MISMATCH
        report.points.append(GradcheckPoint(z, fd, an, status))
    return report
