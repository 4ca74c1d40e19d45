"""Configuration files, precedence, and settings validation."""

import pytest

from toxkg.config import (
    ExperimentSettings,
    build_settings,
    parse_hidden_sizes,
    read_config,
)
from toxkg.classifier import TrainConfig


def test_parse_hidden_sizes():
    assert parse_hidden_sizes("128,64") == (128, 64)
    assert parse_hidden_sizes(" 32 , 16 ") == (32, 16)
    assert parse_hidden_sizes("") == ()
    assert parse_hidden_sizes("8") == (8,)
    with pytest.raises(ValueError):
        parse_hidden_sizes("0,4")
    with pytest.raises(ValueError):
        parse_hidden_sizes("abc")


def test_read_config_parses_assignments(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text(
        "# experiment settings\n"
        "\n"
        "learning_rate = 0.05\n"
        "hidden_sizes = 32,16\n"
        "t_max=7\n"
    )
    assert read_config(str(path)) == {
        "learning_rate": "0.05",
        "hidden_sizes": "32,16",
        "t_max": "7",
    }


def test_read_config_rejects_lines_without_assignment(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("learning_rate 0.05\n")
    with pytest.raises(ValueError, match="bad.cfg:1"):
        read_config(str(path))


def test_build_settings_defaults():
    settings = build_settings()
    assert settings.train == TrainConfig()
    assert settings.t_max == 30
    assert settings.threshold == 0.5
    assert settings.beta == 1.0
    assert settings.sweep_step == 0.01
    assert settings.roc_step == 0.01


def test_build_settings_precedence_defaults_file_overrides():
    file_values = {
        "learning_rate": "0.05",
        "batch_size": "64",
        "t_max": "7",
        "loss_weight_kg": "none",
        "hidden_sizes": "32,16",
    }
    settings = build_settings(file_values,
                              overrides={"batch_size": 32, "threshold": 0.3,
                                         "patience": None})
    assert settings.train.learning_rate == 0.05   # from the file
    assert settings.train.batch_size == 32        # override beats the file
    assert settings.train.patience == 5           # None override = unset
    assert settings.train.loss_weight_kg is None  # "none" parses to None
    assert settings.train.hidden_sizes == (32, 16)
    assert settings.t_max == 7
    assert settings.threshold == 0.3
    assert settings.beta == 1.0                   # untouched default


def test_build_settings_rejects_unknown_keys():
    with pytest.raises(ValueError, match="unknown configuration key"):
        build_settings({"learning_rat": "0.05"})
    with pytest.raises(ValueError, match="unknown configuration key"):
        build_settings(overrides={"momentum": 0.9})


def test_build_settings_reports_uncastable_values():
    with pytest.raises(ValueError, match="batch_size"):
        build_settings({"batch_size": "many"})


def test_experiment_settings_validation():
    with pytest.raises(ValueError):
        ExperimentSettings(train=TrainConfig(), t_max=0)
    with pytest.raises(ValueError):
        ExperimentSettings(train=TrainConfig(), threshold=1.5)
    with pytest.raises(ValueError):
        ExperimentSettings(train=TrainConfig(), beta=0.0)
    with pytest.raises(ValueError):
        ExperimentSettings(train=TrainConfig(), sweep_step=0.0)
    with pytest.raises(ValueError):
        ExperimentSettings(train=TrainConfig(), roc_step=2.0)
