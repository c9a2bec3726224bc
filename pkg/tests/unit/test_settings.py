"""Unit tests for Settings module default values, presets and overrides."""

from pathlib import Path

import pytest

from fuzzyrec.domain.exceptions.exception import ConfigurationException
from fuzzyrec.infrastructure.config.settings import (
    AtomConfig,
    DataConfig,
    EvalConfig,
    Settings,
    TrainConfig,
    load_settings,
)


class TestTrainConfigDefaults:
    """Test TrainConfig default values."""

    def test_train_config_defaults(self):
        """Test the default hyperparameters."""
        config = TrainConfig()
        assert config.k == 4
        assert config.learning_rate == 0.05
        assert config.epochs == 300
        assert config.lambda_ == 0.2
        assert config.seed == 0

    def test_train_config_full_batch_by_default(self):
        """Test that training is full-batch unless batch_size is set."""
        config = TrainConfig()
        assert config.batch_size == "full"
        assert config.is_full_batch

    def test_train_config_adam_constants(self):
        """Test the Adam constants."""
        config = TrainConfig()
        assert (config.adam_beta1, config.adam_beta2, config.adam_eps) == (0.9, 0.999, 1e-8)


class TestTrainConfigValidation:
    """Test TrainConfig validation constraints."""

    def test_lambda_accepted_by_alias(self):
        """Test that 'lambda' populates lambda_."""
        assert TrainConfig(**{"lambda": 0.7}).lambda_ == 0.7

    def test_k_must_be_positive(self):
        """Test that k=0 raises a validation error."""
        with pytest.raises(ValueError):
            TrainConfig(k=0)

    def test_learning_rate_must_be_positive(self):
        """Test that a zero learning rate raises a validation error."""
        with pytest.raises(ValueError):
            TrainConfig(learning_rate=0.0)

    def test_negative_lambda_rejected(self):
        """Test that lambda below 0 raises a validation error."""
        with pytest.raises(ValueError):
            TrainConfig(lambda_=-0.1)

    def test_batch_size_parsing(self):
        """Test the accepted batch_size spellings."""
        assert TrainConfig(batch_size="FULL").is_full_batch
        assert TrainConfig(batch_size="64").batch_size == 64
        assert not TrainConfig(batch_size=32).is_full_batch

    def test_batch_size_must_be_positive(self):
        """Test that batch_size 0 raises a validation error."""
        with pytest.raises(ValueError):
            TrainConfig(batch_size=0)

    def test_unknown_field_rejected(self):
        """Test that unknown keys are forbidden."""
        with pytest.raises(ValueError):
            TrainConfig(momentum=0.9)


class TestSectionParsers:
    """Test comma-separated values accepted from flags and files."""

    def test_split_ratios_from_string(self):
        """Test that ratios may be given as a comma list."""
        assert DataConfig(split_ratios="0.8,0.1,0.1").split_ratios == (0.8, 0.1, 0.1)

    def test_split_ratios_must_sum_to_one(self):
        """Test that ratios not summing to 1 are rejected."""
        with pytest.raises(ValueError):
            DataConfig(split_ratios=(0.5, 0.5, 0.5))

    def test_percentiles_from_string(self):
        """Test that percentiles may be given as a comma list."""
        assert AtomConfig(percentiles="10,50,90").percentiles == (10, 50, 90)

    def test_percentiles_range(self):
        """Test that percentiles outside (0, 100] are rejected."""
        for bad in ("0,50", "50,101"):
            with pytest.raises(ValueError):
                AtomConfig(percentiles=bad)

    def test_ks_from_string(self):
        """Test that ks may be given as a comma list."""
        assert EvalConfig(ks="1,5,10").ks == (1, 5, 10)

    def test_ks_must_be_positive(self):
        """Test that k=0 is rejected."""
        with pytest.raises(ValueError):
            EvalConfig(ks=(0, 5))

    def test_display_threshold_bounds(self):
        """Test that the display threshold stays in [0, 1]."""
        with pytest.raises(ValueError):
            EvalConfig(display_threshold=1.5)


class TestMovieLensFiles:
    """Test MovieLens path resolution."""

    def test_files_default_to_directory(self, tmp_path):
        """Test that the three files are looked up in movielens_dir."""
        ratings, users, movies = DataConfig(movielens_dir=tmp_path).movielens_files()
        assert ratings == tmp_path / "ratings.dat"
        assert users == tmp_path / "users.dat"
        assert movies == tmp_path / "movies.dat"

    def test_explicit_path_wins(self, tmp_path):
        """Test that an explicit path overrides the directory default."""
        config = DataConfig(movielens_dir=tmp_path, ratings_path=tmp_path / "r.dat")
        assert config.movielens_files()[0] == tmp_path / "r.dat"

    def test_missing_paths(self):
        """Test that no directory and no paths is a configuration error."""
        with pytest.raises(ConfigurationException):
            DataConfig().movielens_files()


class TestPresets:
    """Test the per-dataset presets."""

    def test_synthetic_preset(self):
        """Test the synthetic experiment hyperparameters."""
        settings = Settings.synthetic_preset()
        assert settings.data.dataset == "synthetic"
        assert (settings.train.epochs, settings.train.lambda_) == (300, 0.2)
        assert settings.train.restarts == 8

    def test_movielens_preset(self):
        """Test the MovieLens experiment hyperparameters."""
        settings = Settings.preset("movielens")
        assert settings.data.dataset == "movielens"
        assert (settings.train.epochs, settings.train.lambda_) == (150, 0.1)
        assert settings.train.k == 4
        assert settings.train.restarts == 1

    def test_unknown_preset(self):
        """Test that an unknown dataset raises ConfigurationException."""
        with pytest.raises(ConfigurationException):
            Settings.preset("netflix")


class TestOverrides:
    """Test Settings.with_overrides."""

    def test_flat_and_dotted_keys(self):
        """Test that flat and dotted keys reach their sections."""
        settings = Settings().with_overrides({"epochs": 7, "eval.runs": 3, "lambda": 0.5})
        assert settings.train.epochs == 7
        assert settings.train.lambda_ == 0.5
        assert settings.eval.runs == 3

    def test_none_values_ignored(self):
        """Test that unset flags leave values untouched."""
        settings = Settings().with_overrides({"epochs": None})
        assert settings.train.epochs == 300

    def test_original_not_modified(self):
        """Test that overrides return a copy."""
        settings = Settings()
        settings.with_overrides({"k": 8})
        assert settings.train.k == 4

    def test_unknown_key(self):
        """Test that an unknown key raises ConfigurationException."""
        with pytest.raises(ConfigurationException):
            Settings().with_overrides({"temperature": 0.1})

    def test_unknown_dotted_key(self):
        """Test that a key in the wrong section raises ConfigurationException."""
        with pytest.raises(ConfigurationException):
            Settings().with_overrides({"eval.epochs": 3})

    def test_invalid_value(self):
        """Test that an invalid value raises ConfigurationException."""
        with pytest.raises(ConfigurationException):
            Settings().with_overrides({"epochs": 0})

    def test_flat_view(self):
        """Test that flat() lists every key once, lambda by its alias."""
        flat = Settings().flat()
        assert flat["lambda"] == 0.2
        assert flat["batch_size"] == "full"
        assert flat["ks"] == [5, 10]


class TestLoadSettings:
    """Test load_settings with files and overrides."""

    def test_defaults_to_synthetic(self):
        """Test that no file and no overrides give the synthetic preset."""
        assert load_settings().data.dataset == "synthetic"

    def test_sectioned_yaml(self, tmp_path):
        """Test that a sectioned YAML file is applied on top of its dataset's preset."""
        path = tmp_path / "config.yaml"
        path.write_text("data:\n  dataset: movielens\ntrain:\n  epochs: 42\n")
        settings = load_settings(path)
        assert settings.data.dataset == "movielens"
        assert settings.train.epochs == 42
        assert settings.train.lambda_ == 0.1

    def test_flat_yaml(self, tmp_path):
        """Test that flat YAML keys are accepted."""
        path = tmp_path / "config.yaml"
        path.write_text("k: 8\nlambda: 0.3\nks: [1, 5]\n")
        settings = load_settings(path)
        assert (settings.train.k, settings.train.lambda_) == (8, 0.3)
        assert settings.eval.ks == (1, 5)

    def test_overrides_beat_file(self, tmp_path):
        """Test that command-line overrides win over the file."""
        path = tmp_path / "config.yaml"
        path.write_text("epochs: 42\n")
        assert load_settings(path, {"epochs": 5}).train.epochs == 5

    def test_dataset_argument_picks_preset(self):
        """Test that an explicit dataset chooses the preset."""
        assert load_settings(dataset="movielens").train.epochs == 150

    def test_missing_file(self, tmp_path):
        """Test that a missing file raises ConfigurationException."""
        with pytest.raises(ConfigurationException):
            load_settings(tmp_path / "absent.yaml")

    def test_non_mapping_file(self, tmp_path):
        """Test that a YAML list raises ConfigurationException."""
        path = tmp_path / "config.yaml"
        path.write_text("- 1\n- 2\n")
        with pytest.raises(ConfigurationException):
            load_settings(path)

    def test_unknown_key_in_file(self, tmp_path):
        """Test that unknown keys in the file raise ConfigurationException."""
        path = tmp_path / "config.yaml"
        path.write_text("model: qwen\n")
        with pytest.raises(ConfigurationException):
            load_settings(Path(path))


class TestEnvironmentOverrides:
    """Test FUZZYREC_ environment variables through load_settings."""

    def test_nested_variable_reaches_train(self, monkeypatch):
        """Test that FUZZYREC_TRAIN__EPOCHS replaces the preset value."""
        monkeypatch.setenv("FUZZYREC_TRAIN__EPOCHS", "10")
        settings = load_settings()
        assert settings.train.epochs == 10
        assert settings.train.lambda_ == 0.2

    def test_lambda_by_alias(self, monkeypatch):
        """Test that the lambda alias works from the environment."""
        monkeypatch.setenv("FUZZYREC_TRAIN__LAMBDA", "0.3")
        assert load_settings().train.lambda_ == 0.3

    def test_environment_applies_to_movielens_preset(self, monkeypatch):
        """Test that the environment sits on top of whichever preset is chosen."""
        monkeypatch.setenv("FUZZYREC_EVAL__RUNS", "3")
        settings = load_settings(dataset="movielens")
        assert settings.eval.runs == 3
        assert settings.train.epochs == 150

    def test_environment_picks_dataset(self, monkeypatch):
        """Test that FUZZYREC_DATA__DATASET chooses the preset."""
        monkeypatch.setenv("FUZZYREC_DATA__DATASET", "movielens")
        assert load_settings().train.epochs == 150

    def test_file_beats_environment(self, monkeypatch, tmp_path):
        """Test that a config file wins over the environment."""
        monkeypatch.setenv("FUZZYREC_TRAIN__EPOCHS", "10")
        path = tmp_path / "config.yaml"
        path.write_text("epochs: 42\n")
        assert load_settings(path).train.epochs == 42

    def test_flags_beat_environment(self, monkeypatch):
        """Test that command-line overrides win over the environment."""
        monkeypatch.setenv("FUZZYREC_TRAIN__EPOCHS", "10")
        assert load_settings(overrides={"epochs": 5}).train.epochs == 5

    def test_unset_environment_changes_nothing(self, monkeypatch):
        """Test that without variables the preset is returned unchanged."""
        monkeypatch.delenv("FUZZYREC_TRAIN__EPOCHS", raising=False)
        assert load_settings().train.model_dump() == Settings.synthetic_preset().train.model_dump()

    def test_invalid_environment_value(self, monkeypatch):
        """Test that an invalid variable raises ConfigurationException."""
        monkeypatch.setenv("FUZZYREC_TRAIN__EPOCHS", "0")
        with pytest.raises(ConfigurationException):
            load_settings()
