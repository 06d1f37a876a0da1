"""CSV formats for datasets, feature tables and coefficient exports."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .features import FEATURE_NAMES, FeatureVector
from .signal_gen import DisturbanceClass, ParameterError, SignalParams, SignalRecord


class CsvParseError(ValueError):
    def __init__(self, path, line: int, message: str):
        super().__init__(f"{path}:{line}: {message}")
        self.line = line


def fmt(value: float) -> str:
    """17 significant digits, enough to round-trip any double."""
    return f"{value:.17g}"


def write_dataset_csv(records: list[SignalRecord], path) -> None:
    n = max((len(r.samples) for r in records), default=0)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["id", "class_code", "class_name", "seed", "param_json"] + [f"s{i}" for i in range(n)])
        for r in records:
            params = json.dumps(r.params.to_dict(), sort_keys=True)
            w.writerow(
                [r.id, r.label.code, r.label.display_name, r.seed, params]
                + [fmt(v) for v in r.samples]
            )


def read_dataset_csv(path) -> list[SignalRecord]:
    records = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or header[:5] != ["id", "class_code", "class_name", "seed", "param_json"]:
            raise CsvParseError(path, 1, "missing or malformed dataset header")
        n_samples = len(header) - 5
        for line, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise CsvParseError(path, line, f"expected {len(header)} fields, got {len(row)}")
            try:
                label = DisturbanceClass.from_code(int(row[1]))
                params = SignalParams.from_dict(json.loads(row[4]))
                samples = np.array([float(v) for v in row[5:]], dtype=float)
                rec = SignalRecord(
                    samples=samples, label=label, params=params, id=int(row[0]), seed=int(row[3])
                )
            except (ValueError, TypeError, KeyError, ParameterError) as exc:
                raise CsvParseError(path, line, str(exc)) from None
            if len(samples) != n_samples or not np.all(np.isfinite(samples)):
                raise CsvParseError(path, line, "non-finite or missing samples")
            records.append(rec)
    return records


@dataclass
class FeatureTable:
    ids: np.ndarray
    labels: np.ndarray
    X: np.ndarray


def write_features_csv(rows: list[tuple[int, FeatureVector]], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["id", "class_code", *FEATURE_NAMES])
        for rid, fv in rows:
            code = fv.label.code if fv.label is not None else ""
            w.writerow([rid, code] + [fmt(getattr(fv, name)) for name in FEATURE_NAMES])


def read_features_csv(path) -> FeatureTable:
    ids, labels, X = [], [], []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["id", "class_code", *FEATURE_NAMES]:
            raise CsvParseError(path, 1, "missing or malformed feature header")
        for line, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise CsvParseError(path, line, f"expected {len(header)} fields, got {len(row)}")
            try:
                ids.append(int(row[0]))
                labels.append(DisturbanceClass.from_code(int(row[1])).code)
                X.append([float(v) for v in row[2:]])
            except (ValueError, ParameterError) as exc:
                raise CsvParseError(path, line, str(exc)) from None
    X = np.array(X, dtype=float).reshape(-1, len(FEATURE_NAMES))
    if not np.all(np.isfinite(X)):
        raise CsvParseError(path, 0, "non-finite feature value")
    return FeatureTable(ids=np.array(ids, dtype=int), labels=np.array(labels, dtype=int), X=X)


def write_coefficients_csv(details: list[np.ndarray], path) -> None:
    """Detail coefficients as ``level, index, value`` rows (level 1 is finest)."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["level", "index", "value"])
        for level, band in enumerate(details, start=1):
            for i, v in enumerate(band):
                w.writerow([level, i, fmt(v)])


def write_waveform_csv(samples: np.ndarray, sampling_hz: float, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["index", "time_s", "value"])
        for i, v in enumerate(samples):
            w.writerow([i, fmt(i / sampling_hz), fmt(v)])


def write_json(obj, path) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")
