"""``pqwf`` command line: generate | extract | train-eval | plot | run."""

from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path

from . import pipeline
from .config import ConfigError, ExperimentConfig
from .dwt import ShapeError, wavedec
from .eval import SplitError
from .io import CsvParseError, read_dataset_csv, write_coefficients_csv, write_waveform_csv
from .plot import render_svg
from .signal_gen import ParameterError

EXIT_OK = 0
EXIT_FLOOR = 1
EXIT_IO = 2
EXIT_PARSE = 3
EXIT_SPLIT = 4
EXIT_MISSING_ID = 5

log = logging.getLogger("pqwf")


class MissingIdError(LookupError):
    pass


def _out_dir(args, cfg: ExperimentConfig) -> Path:
    return Path(args.out) if args.out else cfg.output_dir


def cmd_generate(args, cfg) -> int:
    path, n = pipeline.generate(cfg, _out_dir(args, cfg))
    print(f"wrote {n} signals to {path} (master_seed={cfg.dataset_spec.master_seed})")
    return EXIT_OK


def cmd_extract(args, cfg) -> int:
    out = _out_dir(args, cfg)
    dataset = Path(args.dataset) if args.dataset else out / pipeline.DATASET_FILE
    summary = pipeline.extract(dataset, cfg, out)
    print(f"wrote {summary.rows} feature rows to {summary.path}; warnings: {len(summary.skipped)}")
    return EXIT_OK


def cmd_train_eval(args, cfg) -> int:
    out = _out_dir(args, cfg)
    features = Path(args.features) if args.features else out / pipeline.FEATURES_FILE
    subset = args.classifiers.split(",") if args.classifiers else None
    result = pipeline.train_eval(features, cfg, out, subset)
    print((out / pipeline.REPORT_TEXT).read_text(), end="")
    return EXIT_OK if result.comparison.passed else EXIT_FLOOR


def cmd_plot(args, cfg) -> int:
    out = _out_dir(args, cfg)
    dataset = Path(args.dataset) if args.dataset else out / pipeline.DATASET_FILE
    records = {r.id: r for r in read_dataset_csv(dataset)}
    if args.id not in records:
        raise MissingIdError(f"no signal with id {args.id} in {dataset}")
    rec = records[args.id]
    decomp = wavedec(rec.samples, cfg.levels, mode=cfg.boundary)
    out.mkdir(parents=True, exist_ok=True)
    stem = out / f"signal_{rec.id}"
    write_waveform_csv(rec.samples, rec.params.sampling_hz, f"{stem}_waveform.csv")
    write_coefficients_csv(decomp.details, f"{stem}_details.csv")
    if not args.no_svg:
        series = [("waveform", rec.samples)] + [
            (f"detail level {j}", decomp.detail(j)) for j in range(1, decomp.levels + 1)
        ]
        title = f"signal {rec.id}: {rec.label.short} {rec.label.display_name}"
        Path(f"{stem}.svg").write_text(render_svg(series, title))
    print(f"wrote {stem}_waveform.csv and {stem}_details.csv")
    return EXIT_OK


def cmd_run(args, cfg) -> int:
    args.dataset = None
    args.features = None
    t0 = time.perf_counter()
    for step in (cmd_generate, cmd_extract):
        step(args, cfg)
    code = cmd_train_eval(args, cfg)
    print(f"total runtime {time.perf_counter() - t0:.1f}s")
    return code


COMMANDS = {
    "generate": cmd_generate,
    "extract": cmd_extract,
    "train-eval": cmd_train_eval,
    "plot": cmd_plot,
    "run": cmd_run,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pqwf", description=__doc__)
    p.add_argument("--print-default-config", action="store_true", help="print the default config and exit")
    sub = p.add_subparsers(dest="command")
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--config", help="JSON config file (defaults apply to missing keys)")
        s.add_argument("--out", help="output directory (overrides output_dir)")
        s.add_argument("-v", "--verbose", action="store_true")
        if name in ("extract", "plot"):
            s.add_argument("--dataset", help="dataset CSV (default: <out>/dataset.csv)")
        if name == "train-eval":
            s.add_argument("--features", help="feature CSV (default: <out>/features.csv)")
        if name in ("train-eval", "run"):
            s.add_argument("--classifiers", help="comma-separated subset of knn,svm,rf")
        if name == "plot":
            s.add_argument("--id", type=int, required=True, help="signal id to export")
            s.add_argument("--no-svg", action="store_true")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.print_default_config:
        print(ExperimentConfig().dumps())
        return EXIT_OK
    if not args.command:
        parser.print_help()
        return EXIT_IO
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        cfg = ExperimentConfig.load(args.config)
        return COMMANDS[args.command](args, cfg)
    except MissingIdError as exc:
        log.error("%s", exc)
        return EXIT_MISSING_ID
    except SplitError as exc:
        log.error("infeasible split: %s", exc)
        return EXIT_SPLIT
    except (CsvParseError, ShapeError, ConfigError, ParameterError) as exc:
        log.error("%s", exc)
        return EXIT_PARSE
    except OSError as exc:
        log.error("I/O error: %s", exc)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
