"""Configuration settings."""

from pathlib import Path
from typing import Any, Dict, Literal, Optional, Tuple, Union

import yaml
from pydantic import Field, ValidationError, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict, SettingsError

from fuzzyrec.domain.exceptions.exception import ConfigurationException

class TrainConfig(BaseSettings):
    """Rule-network training configuration."""

    k: int = Field(default=4, ge=1)
    learning_rate: float = Field(default=0.05, gt=0.0)
    epochs: int = Field(default=300, ge=1)
    lambda_: float = Field(default=0.2, ge=0.0, alias="lambda")
    batch_size: Union[int, Literal["full"]] = "full"
    seed: int = 0
    adam_beta1: float = Field(default=0.9, ge=0.0, lt=1.0)
    adam_beta2: float = Field(default=0.999, ge=0.0, lt=1.0)
    adam_eps: float = Field(default=1e-8, gt=0.0)
    init_scale: float = Field(default=0.5, gt=0.0)
    restarts: int = Field(default=1, ge=1)
    shuffle: bool = True
    chunk_size: int = Field(default=16384, ge=1)
    log_every: int = Field(default=25, ge=1)

    model_config = SettingsConfigDict(
        env_prefix="FUZZYREC_TRAIN_", populate_by_name=True, extra="forbid"
    )

    @field_validator("batch_size", mode="before")
    @classmethod
    def _parse_batch_size(cls, value: Any) -> Union[int, str]:
        if isinstance(value, str):
            if value.strip().lower() == "full":
                return "full"
            value = int(value)
        if int(value) < 1:
            raise ValueError("batch_size must be positive or 'full'")
        return int(value)

    @property
    def is_full_batch(self) -> bool:
        return self.batch_size == "full"


class DataConfig(BaseSettings):
    """Dataset selection, paths and splitting."""

    dataset: Literal["synthetic", "movielens"] = "synthetic"
    movielens_dir: Optional[Path] = None
    ratings_path: Optional[Path] = None
    users_path: Optional[Path] = None
    movies_path: Optional[Path] = None
    synthetic_path: Optional[Path] = None
    synthetic_samples: int = Field(default=1_000_209, ge=10)
    synthetic_users: int = Field(default=6040, ge=1)
    synthetic_items: int = Field(default=3883, ge=1)
    synthetic_overlap: bool = False
    rating_threshold: float = 4.0
    split_ratios: Tuple[float, float, float] = (0.7, 0.1, 0.2)

    model_config = SettingsConfigDict(env_prefix="FUZZYREC_DATA_", extra="forbid")

    @field_validator("split_ratios", mode="before")
    @classmethod
    def _parse_ratios(cls, value: Any) -> Tuple[float, float, float]:
        if isinstance(value, str):
            value = [float(part) for part in value.split(",")]
        ratios = tuple(float(v) for v in value)
        if len(ratios) != 3 or any(r <= 0 for r in ratios) or abs(sum(ratios) - 1.0) > 1e-9:
            raise ValueError("split_ratios must be three positive numbers summing to 1")
        return ratios

    def movielens_files(self) -> Tuple[Path, Path, Path]:
        """Resolve ratings/users/movies paths, defaulting to files in movielens_dir."""
        base = self.movielens_dir
        ratings = self.ratings_path or (base / "ratings.dat" if base else None)
        users = self.users_path or (base / "users.dat" if base else None)
        movies = self.movies_path or (base / "movies.dat" if base else None)
        if ratings is None or users is None or movies is None:
            raise ConfigurationException(
                "MovieLens needs movielens_dir or ratings_path, users_path and movies_path"
            )
        return Path(ratings), Path(users), Path(movies)


class AtomConfig(BaseSettings):
    """Atom catalog construction."""

    percentiles: Tuple[int, ...] = (10, 25, 50, 75, 90)
    select_thresholds: bool = True
    selection_epochs: Optional[int] = Field(default=None, ge=1)
    degenerate_weight: float = Field(default=1e-3, ge=0.0)

    model_config = SettingsConfigDict(env_prefix="FUZZYREC_ATOMS_", extra="forbid")

    @field_validator("percentiles", mode="before")
    @classmethod
    def _parse_percentiles(cls, value: Any) -> Tuple[int, ...]:
        if isinstance(value, str):
            value = [int(part) for part in value.split(",") if part.strip()]
        percentiles = tuple(int(v) for v in value)
        if not percentiles or any(not 0 < p <= 100 for p in percentiles):
            raise ValueError("percentiles must be integers in (0, 100]")
        return percentiles


class EvalConfig(BaseSettings):
    """Evaluation and baseline configuration."""

    ks: Tuple[int, ...] = (5, 10)
    runs: int = Field(default=10, ge=1)
    candidates: Literal["rated", "all"] = "rated"
    threads: Optional[int] = Field(default=None, ge=1)
    display_threshold: float = Field(default=0.1, ge=0.0, le=1.0)
    baseline_epochs: int = Field(default=20, ge=1)
    baseline_reg_items: float = Field(default=10.0, ge=0.0)
    baseline_reg_users: float = Field(default=15.0, ge=0.0)

    model_config = SettingsConfigDict(env_prefix="FUZZYREC_EVAL_", extra="forbid")

    @field_validator("ks", mode="before")
    @classmethod
    def _parse_ks(cls, value: Any) -> Tuple[int, ...]:
        if isinstance(value, str):
            value = [int(part) for part in value.split(",") if part.strip()]
        ks = tuple(int(v) for v in value)
        if not ks or any(k <= 0 for k in ks):
            raise ValueError("ks must be positive integers")
        return ks


_SECTIONS = {
    "train": TrainConfig,
    "data": DataConfig,
    "atoms": AtomConfig,
    "eval": EvalConfig,
}


class Settings(BaseSettings):
    """Application settings."""

    train: TrainConfig = TrainConfig()
    data: DataConfig = DataConfig()
    atoms: AtomConfig = AtomConfig()
    eval: EvalConfig = EvalConfig()

    model_config = SettingsConfigDict(env_prefix="FUZZYREC_", env_nested_delimiter="__")

    @classmethod
    def synthetic_preset(cls) -> "Settings":
        """Hyperparameters used for the synthetic rule-recovery experiment."""
        return cls(
            train=TrainConfig(k=4, learning_rate=0.05, epochs=300, lambda_=0.2, restarts=8),
            data=DataConfig(dataset="synthetic"),
        )

    @classmethod
    def movielens_preset(cls) -> "Settings":
        """Hyperparameters used for the MovieLens 1M experiment."""
        return cls(
            train=TrainConfig(k=4, learning_rate=0.05, epochs=150, lambda_=0.1),
            data=DataConfig(dataset="movielens"),
        )

    @classmethod
    def preset(cls, dataset: str) -> "Settings":
        if dataset == "synthetic":
            return cls.synthetic_preset()
        if dataset == "movielens":
            return cls.movielens_preset()
        raise ConfigurationException(f"Unknown dataset: {dataset}")

    def with_overrides(self, overrides: Dict[str, Any]) -> "Settings":
        """
        Return a copy with keys replaced.

        Keys may be flat (`epochs`, `lambda`) or dotted (`train.epochs`).
        None values are ignored so unset CLI flags leave the config untouched.

        Raises:
            ConfigurationException: On unknown keys or invalid values
        """
        sections = {name: getattr(self, name).model_dump(by_alias=True) for name in _SECTIONS}
        for key, value in overrides.items():
            if value is None:
                continue
            section, field_name = _locate_key(key)
            sections[section][field_name] = value
        try:
            return Settings(**{name: _SECTIONS[name](**data) for name, data in sections.items()})
        except (ValidationError, ValueError) as e:
            raise ConfigurationException(f"Invalid configuration: {e}") from e

    def flat(self) -> Dict[str, Any]:
        """All keys in flat form (used for manifests and printing)."""
        merged: Dict[str, Any] = {}
        for name in _SECTIONS:
            merged.update(getattr(self, name).model_dump(by_alias=True, mode="json"))
        return merged


def _locate_key(key: str) -> Tuple[str, str]:
    if "." in key:
        section, field_name = key.split(".", 1)
        if section in _SECTIONS and _has_field(_SECTIONS[section], field_name):
            return section, _canonical(_SECTIONS[section], field_name)
        raise ConfigurationException(f"Unknown configuration key: {key}")
    for section, config_cls in _SECTIONS.items():
        if _has_field(config_cls, key):
            return section, _canonical(config_cls, key)
    raise ConfigurationException(f"Unknown configuration key: {key}")


def _has_field(config_cls: type, key: str) -> bool:
    for name, info in config_cls.model_fields.items():
        if key in (name, info.alias):
            return True
    return False


def _canonical(config_cls: type, key: str) -> str:
    for name, info in config_cls.model_fields.items():
        if key in (name, info.alias):
            return info.alias or name
    return key


def load_settings(
    config_path: Optional[Path] = None,
    overrides: Optional[Dict[str, Any]] = None,
    dataset: Optional[str] = None,
) -> Settings:
    """
    Build settings from preset, then environment, then config file, then overrides.

    Environment variables use the nested form, e.g. FUZZYREC_TRAIN__EPOCHS=10.

    Args:
        config_path: Optional YAML file with flat or sectioned keys
        overrides: Flag values (None entries are ignored)
        dataset: Dataset whose preset seeds the defaults

    Raises:
        ConfigurationException: If the file cannot be read, holds unknown keys,
            or the environment holds invalid values
    """
    overrides = dict(overrides or {})
    env_values = environment_overrides()
    file_values: Dict[str, Any] = {}
    if config_path is not None:
        try:
            with open(config_path, "r") as f:
                loaded = yaml.safe_load(f) or {}
        except (OSError, yaml.YAMLError) as e:
            raise ConfigurationException(f"Failed to read config {config_path}: {e}") from e
        if not isinstance(loaded, dict):
            raise ConfigurationException(f"Config {config_path} must be a mapping")
        file_values = _flatten(loaded)

    chosen = (
        dataset
        or overrides.get("dataset")
        or file_values.get("dataset")
        or file_values.get("data.dataset")
        or env_values.get("data.dataset")
        or "synthetic"
    )
    settings = Settings.preset(chosen)
    settings = settings.with_overrides(env_values)
    settings = settings.with_overrides(file_values)
    return settings.with_overrides(overrides)


def environment_overrides() -> Dict[str, Any]:
    """Dotted keys for every field set through FUZZYREC_ environment variables."""
    try:
        env = Settings()
    except (ValidationError, SettingsError, ValueError) as e:
        raise ConfigurationException(f"Invalid environment configuration: {e}") from e
    values: Dict[str, Any] = {}
    for name in _SECTIONS:
        section = getattr(env, name)
        data = section.model_dump(by_alias=True)
        for field_name in section.model_fields_set:
            key = type(section).model_fields[field_name].alias or field_name
            values[f"{name}.{key}"] = data[key]
    return values


def _flatten(values: Dict[str, Any]) -> Dict[str, Any]:
    flat: Dict[str, Any] = {}
    for key, value in values.items():
        if key in _SECTIONS and isinstance(value, dict):
            for inner, inner_value in value.items():
                flat[f"{key}.{inner}"] = inner_value
        else:
            flat[key] = value
    return flat
