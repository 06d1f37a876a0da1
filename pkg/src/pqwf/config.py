"""Experiment configuration (JSON file) with the reference defaults baked in."""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field
from pathlib import Path

from .dwt import BOUNDARY_MODES
from .signal_gen import ALL_CLASSES, DatasetSpec, DisturbanceClass, ParameterRanges

DEFAULT_CONFIG: dict = {
    "dataset": {
        "signals_per_class": 700,
        "classes": [c.code for c in ALL_CLASSES],
        "master_seed": 1159,
        "fundamental_hz": 50.0,
        "sampling_hz": 3200.0,
        "duration_cycles": 10,
        "snr_db": None,
        "ranges": ParameterRanges().to_dict(),
    },
    "dwt": {"levels": 3, "boundary": "periodic"},
    "split": {"train_per_class": 600, "test_per_class": 100, "seed": 600100},
    "classifiers": {
        "enabled": ["knn", "svm", "rf"],
        "knn": {"k": 1},
        "svm": {
            "C": 10.0,
            "gamma": 0.2,
            "tol": 1e-3,
            "max_iter": 100000,
            # "auto": grid-search on a validation split only if the default
            # misses its accuracy floor there; "never" / "always" force it
            "tune": "auto",
            "grid_C": [0.1, 1.0, 10.0, 100.0],
            "grid_gamma": [0.05, 0.2, 1.0, 5.0],
            "validation_per_class": 100,
        },
        "rf": {"n_trees": 100, "max_features": 2, "seed": 7},
    },
    "output_dir": "out",
}


class ConfigError(ValueError):
    pass


def _merge(base: dict, override: dict, path: str = "") -> dict:
    out = copy.deepcopy(base)
    for key, value in override.items():
        where = f"{path}.{key}" if path else key
        if key not in base:
            raise ConfigError(f"unknown config key {where!r}")
        if isinstance(base[key], dict) and isinstance(value, dict):
            out[key] = _merge(base[key], value, where)
        else:
            out[key] = value
    return out


@dataclass
class ExperimentConfig:
    raw: dict = field(default_factory=lambda: copy.deepcopy(DEFAULT_CONFIG))

    @classmethod
    def load(cls, path=None, overrides: dict | None = None) -> "ExperimentConfig":
        raw = copy.deepcopy(DEFAULT_CONFIG)
        if path is not None:
            try:
                user = json.loads(Path(path).read_text())
            except json.JSONDecodeError as exc:
                raise ConfigError(f"{path}: {exc}") from None
            raw = _merge(raw, user)
        if overrides:
            raw = _merge(raw, overrides)
        cfg = cls(raw)
        cfg.validate()
        return cfg

    def validate(self) -> None:
        d = self.raw
        if d["dwt"]["levels"] < 3:
            raise ConfigError("features need at least 3 DWT levels")
        if d["dwt"]["boundary"] not in BOUNDARY_MODES:
            raise ConfigError(f"boundary must be one of {BOUNDARY_MODES}")
        for name in d["classifiers"]["enabled"]:
            if name not in ("knn", "svm", "rf"):
                raise ConfigError(f"unknown classifier {name!r}")
        if d["classifiers"]["svm"]["tune"] not in ("auto", "never", "always"):
            raise ConfigError("svm.tune must be auto, never or always")
        for key in ("master_seed",):
            if not isinstance(d["dataset"][key], int):
                raise ConfigError(f"dataset.{key} must be an explicit integer")
        for section in ("split", "classifiers.rf"):
            node = d
            for part in section.split("."):
                node = node[part]
            if not isinstance(node["seed"], int):
                raise ConfigError(f"{section}.seed must be an explicit integer")

    @property
    def dataset_spec(self) -> DatasetSpec:
        d = self.raw["dataset"]
        return DatasetSpec(
            signals_per_class=int(d["signals_per_class"]),
            classes=tuple(DisturbanceClass.from_code(c) for c in d["classes"]),
            master_seed=int(d["master_seed"]),
            fundamental_hz=float(d["fundamental_hz"]),
            sampling_hz=float(d["sampling_hz"]),
            duration_cycles=int(d["duration_cycles"]),
            snr_db=d["snr_db"],
            ranges=ParameterRanges.from_dict(d["ranges"]),
        )

    @property
    def levels(self) -> int:
        return int(self.raw["dwt"]["levels"])

    @property
    def boundary(self) -> str:
        return self.raw["dwt"]["boundary"]

    @property
    def split(self) -> dict:
        return self.raw["split"]

    @property
    def classifiers(self) -> dict:
        return self.raw["classifiers"]

    @property
    def output_dir(self) -> Path:
        return Path(self.raw["output_dir"])

    def dumps(self) -> str:
        return json.dumps(self.raw, indent=2)
