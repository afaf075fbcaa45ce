import pytest

from helu import config as cfg_mod
from helu.errors import ConfigError
from helu.sweep import child_seed, splitmix64


class TestKvParsing:
    def test_defaults(self):
        cfg = cfg_mod.build_config({})
        assert cfg.task == "spirals"
        assert cfg.model_hidden == [32, 32]
        assert cfg.activation == "relu"
        assert cfg.train.learning_rate == 0.01
        assert cfg.train.momentum == 0.9

    def test_dotted_sections(self):
        text = """
# comment line
task=blobs
model.shape=8,4
activation=helu:0.1
train.lr=0.2
train.epochs=5
data.n=64
data.standardize=true
sweep=relu,helu:0.05
output_dir=results
"""
        cfg = cfg_mod.build_config(cfg_mod.parse_kv_text(text))
        assert cfg.task == "blobs"
        assert cfg.model_hidden == [8, 4]
        assert cfg.activation == "helu:0.1"
        assert cfg.train.learning_rate == 0.2
        assert cfg.train.epochs == 5
        assert cfg.data.n == 64
        assert cfg.data.standardize is True
        assert cfg.sweep == ["relu", "helu:0.05"]
        assert cfg.output_dir == "results"

    def test_unknown_key(self):
        with pytest.raises(ConfigError, match="unknown config key"):
            cfg_mod.build_config({"train.beta": "0.9"})
        with pytest.raises(ConfigError):
            cfg_mod.build_config({"nonsense": "1"})

    def test_bad_value(self):
        with pytest.raises(ConfigError):
            cfg_mod.build_config({"train.lr": "fast"})
        with pytest.raises(ConfigError):
            cfg_mod.build_config({"train.lr": "-1"})

    def test_bad_task(self):
        with pytest.raises(ConfigError):
            cfg_mod.build_config({"task": "imagenet"})

    def test_bad_activation_fails_fast(self):
        with pytest.raises(ValueError):
            cfg_mod.build_config({"activation": "helu"})
        with pytest.raises(ValueError):
            cfg_mod.build_config({"sweep": "relu,bogus"})

    def test_missing_equals(self):
        with pytest.raises(ConfigError, match="line 1"):
            cfg_mod.parse_kv_text("not a kv line")

    def test_overrides_beat_file(self, tmp_path):
        p = tmp_path / "c.cfg"
        p.write_text("activation=relu\ntrain.epochs=9\n")
        cfg = cfg_mod.load_config(p, {"activation": "swish"})
        assert cfg.activation == "swish"
        assert cfg.train.epochs == 9

    def test_resolved_text_round_trips(self):
        cfg = cfg_mod.build_config({"task": "blobs", "train.lr": "0.05", "data.k": "5"})
        text = cfg.resolved_text()
        again = cfg_mod.build_config(
            {k: v for k, v in cfg_mod.parse_kv_text(text).items() if v != ""}
        )
        assert again == cfg
        assert text.splitlines() == sorted(text.splitlines())  # sorted dump
        assert "train.lr=0.05" in text


class TestMakeDataset:
    def test_blobs_and_spirals(self):
        cfg = cfg_mod.build_config({"task": "blobs", "data.n": "40", "data.d": "3", "data.k": "2"})
        tr, te = cfg_mod.make_dataset(cfg)
        assert tr.features.shape[1] == 3
        assert tr.n + te.n == 40
        cfg = cfg_mod.build_config({"task": "spirals", "data.n": "40"})
        tr, te = cfg_mod.make_dataset(cfg)
        assert tr.features.shape[1] == 2

    def test_csv_task_requires_path(self):
        cfg = cfg_mod.build_config({"task": "csv"})
        with pytest.raises(ConfigError):
            cfg_mod.make_dataset(cfg)

    def test_standardize_applied(self):
        cfg = cfg_mod.build_config(
            {"task": "blobs", "data.n": "200", "data.standardize": "true"}
        )
        tr, te = cfg_mod.make_dataset(cfg)
        import numpy as np

        merged = np.concatenate([tr.features, te.features])
        assert abs(merged.mean()) < 0.1


class TestSeedDerivation:
    def test_splitmix64_known_vector(self):
        # First output of the reference splitmix64 stream seeded with 0.
        assert splitmix64(0) == 0xE220A8397B1DCDAF

    def test_child_seed_deterministic_and_spread(self):
        seeds = {child_seed(42, i, j) for i in range(8) for j in range(8)}
        assert len(seeds) == 64
        assert child_seed(42, 3, 5) == child_seed(42, 3, 5)

    def test_grid_extension_leaves_cells_alone(self):
        before = [child_seed(7, i, j) for i in range(2) for j in range(3)]
        # add a grid column (i=2): existing (i, j) seeds are untouched
        after = [child_seed(7, i, j) for i in range(2) for j in range(3)]
        assert before == after
