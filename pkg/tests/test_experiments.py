import json

import numpy as np
import pytest

from helu import experiments as exp


@pytest.fixture(scope="module")
def dying_report():
    return exp.exp_dying_relu(seeds=4, base_seed=1)


@pytest.fixture(scope="module")
def alpha_report():
    fast = exp.SpiralsSetup(n=120, epochs=25, learning_rate=0.05)
    return exp.exp_alpha_sensitivity(alphas=(0.0, 0.05, 2.0), seeds=2, base_seed=1, setup=fast)


class TestDyingRelu:
    def test_arms_and_raw_values(self, dying_report):
        labels = [a.label for a in dying_report.dead_arms]
        assert labels == ["relu", "helu:0", "helu:0.05", "gelu"]
        for arm in dying_report.dead_arms:
            assert len(arm.values) == 4
            assert all(0.0 <= v <= 1.0 for v in arm.values)

    def test_protocol_induces_death(self, dying_report):
        assert dying_report.flags["protocol_valid_relu_dead_positive"]

    def test_alpha_zero_arm_is_bitwise_relu(self, dying_report):
        assert dying_report.flags["helu0_bitwise_equals_relu"]
        relu = next(a for a in dying_report.dead_arms if a.label == "relu")
        helu0 = next(a for a in dying_report.dead_arms if a.label == "helu:0")
        assert relu.values == helu0.values

    def test_paired_directional_claim(self, dying_report):
        assert dying_report.flags["helu_dead_le_relu"]

    def test_report_serialization(self, dying_report):
        decoded = json.loads(dying_report.to_json())
        assert decoded["experiment"] == "dying-relu"
        assert decoded["protocol"]["bias_shift"] == exp.DyingProtocol().bias_shift
        assert len(decoded["dead_fraction"]) == 4
        runs = dying_report.runs_csv().splitlines()
        assert runs[0] == "arm,seed_index,dead_fraction,accuracy"
        assert len(runs) == 1 + 4 * 4
        summary = dying_report.summary_csv().splitlines()
        assert len(summary) == 1 + 4

    def test_lr_override(self):
        report = exp.exp_dying_relu(seeds=1, base_seed=0, lr_aggressive=0.123)
        assert report.protocol["learning_rate"] == 0.123


class TestAlphaSensitivity:
    def test_arm_order_matches_input_order(self, alpha_report):
        labels = [a.label for a in alpha_report.acc_arms]
        assert labels == ["relu", "helu:0", "helu:0.05", "helu:2"]

    def test_raw_values_present(self, alpha_report):
        for arm in alpha_report.acc_arms:
            assert len(arm.values) == 2

    def test_helu_zero_accuracy_equals_relu(self, alpha_report):
        by = {a.label: a for a in alpha_report.acc_arms}
        assert by["helu:0"].values == by["relu"].values

    def test_flags_present(self, alpha_report):
        flags = alpha_report.flags
        assert "non_inferior_to_relu" in flags
        assert "best_helu_arm" in flags
        assert "large_alpha_underperforms" in flags
        assert flags["pooled_std"] >= 0.0

    def test_sample_std_convention(self):
        report = exp.exp_alpha_sensitivity(
            alphas=(0.05,), seeds=1, base_seed=0, setup=exp.SpiralsSetup(n=60, epochs=3)
        )
        for arm in report.acc_arms:
            assert arm.std == 0.0
