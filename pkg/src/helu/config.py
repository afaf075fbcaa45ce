"""Experiment configuration: flat key=value files with dotted sections.

Example::

    task=spirals
    model.shape=32,32
    activation=helu:0.05
    train.lr=0.01
    train.epochs=30
    data.n=400
    sweep=relu,helu:0.001,helu:0.05
    output_dir=out

CLI flags override file values. The fully resolved configuration is
serialized next to every output so any result is reconstructible from its
own artifacts.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields

from . import activations, data, nn
from .errors import ConfigError

TASKS = ("blobs", "spirals", "csv", "idx")


@dataclass
class DataConfig:
    n: int = 400
    d: int = 2
    k: int = 3
    spread: float = 1.0
    noise: float = 0.15
    seed: int = 7
    train_fraction: float = 0.75
    standardize: bool = False
    csv_path: str = ""
    label_column: str = "label"
    images_path: str = ""
    labels_path: str = ""


@dataclass
class ExperimentConfig:
    task: str = "spirals"
    model_hidden: list[int] = field(default_factory=lambda: [32, 32])
    activation: str = "relu"
    train: nn.TrainConfig = field(default_factory=nn.TrainConfig)
    data: DataConfig = field(default_factory=DataConfig)
    sweep: list[str] = field(default_factory=list)
    output_dir: str = "out"

    def activation_spec(self) -> activations.ActivationSpec:
        return activations.parse_activation(self.activation)

    def resolved_text(self) -> str:
        """Canonical key=value dump, one line per key, sorted."""
        items = {
            "task": self.task,
            "model.shape": ",".join(str(w) for w in self.model_hidden),
            "activation": self.activation,
            "sweep": ",".join(self.sweep),
            "output_dir": self.output_dir,
            "train.lr": f"{self.train.learning_rate:g}",
            "train.momentum": f"{self.train.momentum:g}",
            "train.weight_decay": f"{self.train.weight_decay:g}",
            "train.epochs": str(self.train.epochs),
            "train.batch_size": str(self.train.batch_size),
            "train.seed": str(self.train.seed),
        }
        for f in fields(DataConfig):
            v = getattr(self.data, f.name)
            items[f"data.{f.name}"] = str(v).lower() if isinstance(v, bool) else str(v)
        return "\n".join(f"{k}={items[k]}" for k in sorted(items)) + "\n"


def _parse_bool(v: str) -> bool:
    if v.lower() in ("true", "1", "yes"):
        return True
    if v.lower() in ("false", "0", "no"):
        return False
    raise ValueError(f"not a boolean: {v!r}")


def parse_kv_text(text: str) -> dict[str, str]:
    """Parse key=value lines; blank lines and #-comments are ignored."""
    out = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"line {line_no}: expected key=value, got {raw!r}")
        out[key.strip()] = value.strip()
    return out


def build_config(kv: dict[str, str]) -> ExperimentConfig:
    cfg = ExperimentConfig()
    train_kw = {}
    for key, value in kv.items():
        try:
            _apply_key(cfg, train_kw, key, value)
        except ValueError as exc:
            raise ConfigError(f"bad value for {key!r}: {exc}") from None
    if train_kw:
        base = {f.name: getattr(cfg.train, f.name) for f in fields(nn.TrainConfig)}
        base.update(train_kw)
        try:
            cfg.train = nn.TrainConfig(**base)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    if cfg.task not in TASKS:
        raise ConfigError(f"task must be one of {TASKS}, got {cfg.task!r}")
    activations.parse_activation(cfg.activation)  # fail fast on a bad spec
    for item in cfg.sweep:
        activations.parse_activation(item)
    return cfg


_TRAIN_KEYS = {
    "lr": ("learning_rate", float),
    "momentum": ("momentum", float),
    "weight_decay": ("weight_decay", float),
    "epochs": ("epochs", int),
    "batch_size": ("batch_size", int),
    "seed": ("seed", int),
}

_DATA_TYPES = {f.name: f.type for f in fields(DataConfig)}


def _apply_key(cfg: ExperimentConfig, train_kw: dict, key: str, value: str) -> None:
    if key == "task":
        cfg.task = value
    elif key == "model.shape":
        cfg.model_hidden = [int(w) for w in value.split(",") if w]
        if not cfg.model_hidden:
            raise ValueError("model.shape needs at least one hidden width")
    elif key == "activation":
        cfg.activation = value
    elif key == "sweep":
        cfg.sweep = [item.strip() for item in value.split(",") if item.strip()]
    elif key == "output_dir":
        cfg.output_dir = value
    elif key.startswith("train."):
        sub = key[len("train.") :]
        if sub not in _TRAIN_KEYS:
            raise ConfigError(f"unknown config key {key!r}")
        name, cast = _TRAIN_KEYS[sub]
        train_kw[name] = cast(value)
    elif key.startswith("data."):
        sub = key[len("data.") :]
        if sub not in _DATA_TYPES:
            raise ConfigError(f"unknown config key {key!r}")
        current = getattr(cfg.data, sub)
        if isinstance(current, bool):
            setattr(cfg.data, sub, _parse_bool(value))
        else:
            setattr(cfg.data, sub, type(current)(value))
    else:
        raise ConfigError(f"unknown config key {key!r}")


def load_config(path=None, overrides: dict[str, str] | None = None) -> ExperimentConfig:
    """Read a config file (optional) and apply CLI overrides on top."""
    kv: dict[str, str] = {}
    if path is not None:
        with open(path) as fh:
            kv.update(parse_kv_text(fh.read()))
    if overrides:
        kv.update({k: v for k, v in overrides.items() if v is not None})
    return build_config(kv)


def make_dataset(cfg: ExperimentConfig) -> tuple[data.Dataset, data.Dataset]:
    """Build the task's dataset and split it into train/test."""
    d = cfg.data
    if cfg.task == "blobs":
        ds = data.gen_blobs(d.n, d.d, d.k, d.spread, d.seed)
    elif cfg.task == "spirals":
        ds = data.gen_spirals(d.n, d.k, d.noise, d.seed)
    elif cfg.task == "csv":
        if not d.csv_path:
            raise ConfigError("task=csv needs data.csv_path")
        ds = data.load_csv(d.csv_path, d.label_column)
    elif cfg.task == "idx":
        if not d.images_path or not d.labels_path:
            raise ConfigError("task=idx needs data.images_path and data.labels_path")
        ds = data.load_idx(d.images_path, d.labels_path)
    else:
        raise ConfigError(f"unknown task {cfg.task!r}")
    if d.standardize:
        ds = data.standardize(ds)
    return data.split(ds, d.train_fraction, d.seed)
