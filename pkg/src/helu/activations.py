"""Activation zoo with decoupled forward and backward rules.

Every activation is a pair (forward map, backward map). For most kinds the
backward map is the analytic derivative of the forward map. The hysteresis
rectifier deliberately breaks that link: its forward output is bitwise
identical to the plain rectifier (same kernel, every input, every alpha),
but its backward rule passes the upstream gradient wherever the saved
pre-activation exceeds ``-alpha``. Pre-activations in the band
``(-alpha, 0]`` therefore produce zero output yet still receive gradient,
which is what lets a unit that has drifted slightly negative recover
instead of dying.

Backward rules consume the saved *pre-activation* z, never the activation
output: the hysteresis mask is a function of z.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erf, expit

from .errors import DimensionError, DomainError

SQRT_2 = math.sqrt(2.0)
SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)
INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)
GELU_TANH_CUBIC = 0.044715


class Kind(enum.Enum):
    RELU = "relu"
    HELU = "helu"
    ELU = "elu"
    SIGMOID = "sigmoid"
    SWISH = "swish"
    GELU_EXACT = "gelu"
    GELU_TANH = "gelu-tanh"


# Kinds whose backward rule is the true derivative of the forward map.
TRUE_DERIVATIVE_KINDS = (
    Kind.SIGMOID,
    Kind.ELU,
    Kind.SWISH,
    Kind.GELU_EXACT,
    Kind.GELU_TANH,
)


@dataclass(frozen=True)
class ActivationSpec:
    """Tagged activation identity: kind plus alpha where meaningful.

    alpha is the hysteresis shift for HELU (must be >= 0; negative shifts
    are rejected, not explored) and the negative-branch scale for ELU
    (default 1.0). Other kinds ignore it.
    """

    kind: Kind
    alpha: float = 0.0

    def __post_init__(self):
        if self.kind in (Kind.HELU, Kind.ELU) and not self.alpha >= 0.0:
            raise ValueError(f"{self.kind.value} requires alpha >= 0, got {self.alpha}")

    def label(self) -> str:
        """Canonical CLI/config spelling, e.g. ``helu:0.05``."""
        if self.kind is Kind.HELU:
            return f"helu:{self.alpha:g}"
        if self.kind is Kind.ELU and self.alpha != 1.0:
            return f"elu:{self.alpha:g}"
        return self.kind.value


def relu() -> ActivationSpec:
    return ActivationSpec(Kind.RELU)


def helu(alpha: float) -> ActivationSpec:
    return ActivationSpec(Kind.HELU, float(alpha))


def elu(alpha: float = 1.0) -> ActivationSpec:
    return ActivationSpec(Kind.ELU, float(alpha))


def sigmoid() -> ActivationSpec:
    return ActivationSpec(Kind.SIGMOID)


def swish() -> ActivationSpec:
    return ActivationSpec(Kind.SWISH)


def gelu_exact() -> ActivationSpec:
    return ActivationSpec(Kind.GELU_EXACT)


def gelu_tanh() -> ActivationSpec:
    return ActivationSpec(Kind.GELU_TANH)


def parse_activation(text: str) -> ActivationSpec:
    """Parse the CLI/config form: relu | helu:<alpha> | elu[:<alpha>] |
    sigmoid | swish | gelu | gelu-tanh."""
    name, sep, arg = text.strip().partition(":")
    if name == "helu":
        if not sep:
            raise ValueError("helu needs an explicit alpha, e.g. helu:0.05")
        return helu(_parse_alpha(arg, text))
    if name == "elu":
        return elu(_parse_alpha(arg, text)) if sep else elu()
    if sep:
        raise ValueError(f"activation {name!r} takes no alpha argument: {text!r}")
    table = {
        "relu": relu,
        "sigmoid": sigmoid,
        "swish": swish,
        "gelu": gelu_exact,
        "gelu-tanh": gelu_tanh,
    }
    if name not in table:
        raise ValueError(f"unknown activation {text!r}")
    return table[name]()


def _parse_alpha(arg: str, full: str) -> float:
    try:
        return float(arg)
    except ValueError:
        raise ValueError(f"bad alpha in activation spec {full!r}") from None


# ---------------------------------------------------------------------------
# Forward kernels. Each takes (z, out=None) and preserves the input dtype,
# so the benchmark module can run them on float32 buffers. HELU maps to the
# *same function object* as RELU: forward identity is structural.
# ---------------------------------------------------------------------------


def _relu_kernel(z, out=None):
    return np.maximum(z, 0.0, out=out)


def _sigmoid_kernel(z, out=None):
    return expit(z, out=out) if out is not None else expit(z)


def _swish_kernel(z, out=None):
    s = expit(z)
    return np.multiply(z, s, out=out)


def _gelu_exact_kernel(z, out=None):
    cdf = 0.5 * (1.0 + erf(z * (1.0 / SQRT_2)))
    return np.multiply(z, cdf, out=out)


def _gelu_tanh_kernel(z, out=None):
    inner = np.tanh(SQRT_2_OVER_PI * (z + GELU_TANH_CUBIC * z * z * z))
    inner += 1.0
    inner *= 0.5
    return np.multiply(z, inner, out=out)


def _make_elu_kernel(alpha: float):
    def _elu_kernel(z, out=None):
        result = np.where(z > 0, z, alpha * np.expm1(z))
        if out is None:
            return result
        out[...] = result
        return out

    return _elu_kernel


def forward_kernel(spec: ActivationSpec):
    """Raw elementwise forward kernel ``f(z, out=None) -> array``.

    No input validation; this is what the microbenchmarks time.
    """
    if spec.kind in (Kind.RELU, Kind.HELU):
        return _relu_kernel
    if spec.kind is Kind.ELU:
        return _make_elu_kernel(spec.alpha)
    return {
        Kind.SIGMOID: _sigmoid_kernel,
        Kind.SWISH: _swish_kernel,
        Kind.GELU_EXACT: _gelu_exact_kernel,
        Kind.GELU_TANH: _gelu_tanh_kernel,
    }[spec.kind]


def forward(spec: ActivationSpec, z: np.ndarray) -> np.ndarray:
    """Elementwise forward map. Rejects non-finite inputs."""
    z = np.asarray(z)
    if not np.all(np.isfinite(z)):
        bad = np.flatnonzero(~np.isfinite(z))
        head = ", ".join(str(i) for i in bad[:10])
        more = "" if bad.size <= 10 else f" (+{bad.size - 10} more)"
        raise DomainError(f"non-finite input at flat indices [{head}]{more}")
    return forward_kernel(spec)(z)


def backward(spec: ActivationSpec, z: np.ndarray, upstream: np.ndarray) -> np.ndarray:
    """Elementwise backward map applied to the upstream gradient.

    z is the saved pre-activation. For HELU the rule is the shifted mask
    ``(z > -alpha) * upstream`` (z = -alpha maps to 0); for RELU the mask is
    ``z > 0`` with the derivative at 0 defined as 0, so HELU at alpha=0 is
    bitwise identical to RELU. Every other kind multiplies upstream by the
    analytic derivative evaluated at z.
    """
    z = np.asarray(z)
    upstream = np.asarray(upstream)
    if z.shape != upstream.shape:
        raise DimensionError(
            f"backward shapes differ: z {z.shape} vs upstream {upstream.shape}"
        )
    k = spec.kind
    if k is Kind.HELU:
        return (z > -spec.alpha) * upstream
    if k is Kind.RELU:
        return (z > 0) * upstream
    if k is Kind.SIGMOID:
        s = expit(z)
        return s * (1.0 - s) * upstream
    if k is Kind.ELU:
        return np.where(z > 0, 1.0, spec.alpha * np.exp(z)) * upstream
    if k is Kind.SWISH:
        s = expit(z)
        return s * (1.0 + z * (1.0 - s)) * upstream
    if k is Kind.GELU_EXACT:
        cdf = 0.5 * (1.0 + erf(z * (1.0 / SQRT_2)))
        pdf = INV_SQRT_2PI * np.exp(-0.5 * z * z)
        return (cdf + z * pdf) * upstream
    if k is Kind.GELU_TANH:
        u = SQRT_2_OVER_PI * (z + GELU_TANH_CUBIC * z * z * z)
        t = np.tanh(u)
        du = SQRT_2_OVER_PI * (1.0 + 3.0 * GELU_TANH_CUBIC * z * z)
        return (0.5 * (1.0 + t) + 0.5 * z * (1.0 - t * t) * du) * upstream
    raise ValueError(f"unhandled activation kind {k!r}")


def gelu_tanh_approx(z: float) -> float:
    """Scalar tanh approximation of GELU, constant 0.044715 as printed."""
    if not math.isfinite(z):
        raise DomainError(f"non-finite input {z!r}")
    return 0.5 * z * (1.0 + math.tanh(SQRT_2_OVER_PI * (z + GELU_TANH_CUBIC * z**3)))
