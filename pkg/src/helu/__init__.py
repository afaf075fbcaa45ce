"""helu: a micro-framework for activations with decoupled forward/backward rules.

The core object of study is the hysteresis rectifier: forward identical to
the plain rectifier, backward mask shifted to -alpha, so units whose
pre-activations hover just below zero keep receiving gradient instead of
dying. Around it: a tape autograd engine built for exactly this kind of
surrogate rule, small MLP training, dead-unit diagnostics, and activation
kernel microbenchmarks.
"""

from .activations import (
    ActivationSpec,
    Kind,
    backward,
    elu,
    forward,
    forward_kernel,
    gelu_exact,
    gelu_tanh,
    gelu_tanh_approx,
    helu,
    parse_activation,
    relu,
    sigmoid,
    swish,
)
from .autograd import Tape
from .bench import BenchRecord, bench_forward, bench_train_step
from .data import Dataset, gen_blobs, gen_spirals, load_csv, load_idx, split, standardize
from .diagnostics import (
    DeadNeuronReport,
    PreActivationHistogram,
    dead_fraction,
    grad_mask_occupancy,
    histogram,
)
from .experiments import exp_alpha_sensitivity, exp_dying_relu
from .gradcheck import check_activation
from .nn import (
    LinearLayer,
    MlpModel,
    TrainConfig,
    TrainingTrace,
    evaluate,
    forward_loss,
    init,
    load_checkpoint,
    save_checkpoint,
    sgd_step,
    train,
)

__version__ = "0.1.0"

__all__ = [
    "ActivationSpec",
    "BenchRecord",
    "Dataset",
    "DeadNeuronReport",
    "Kind",
    "LinearLayer",
    "MlpModel",
    "PreActivationHistogram",
    "Tape",
    "TrainConfig",
    "TrainingTrace",
    "backward",
    "bench_forward",
    "bench_train_step",
    "check_activation",
    "dead_fraction",
    "elu",
    "evaluate",
    "exp_alpha_sensitivity",
    "exp_dying_relu",
    "forward",
    "forward_kernel",
    "forward_loss",
    "gelu_exact",
    "gelu_tanh",
    "gelu_tanh_approx",
    "gen_blobs",
    "gen_spirals",
    "grad_mask_occupancy",
    "helu",
    "histogram",
    "init",
    "load_checkpoint",
    "load_csv",
    "load_idx",
    "parse_activation",
    "relu",
    "save_checkpoint",
    "sgd_step",
    "sigmoid",
    "split",
    "standardize",
    "swish",
    "train",
]
