"""Command-line entry point.

Subcommands:
    run       bundle -> subtitles/JSON/TSV (optionally + metrics vs a CTM)
    segment   bundle -> merged chunk spans as JSON (for export tooling)
    eval      hypothesis JSON vs reference CTM -> metrics report

Exit codes: 0 success, 2 configuration error, 3 input/format error,
4 backend error. Log level comes from the TIMEALIGN_LOG environment
variable (DEBUG/INFO/WARNING/ERROR).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import os
import sys
from typing import Optional, Sequence

from . import __version__
from .bundle_io import read_bundle
from .metrics import (
    EmptyReference,
    ngram_duplicates,
    normalize_text,
    segmentation_pr,
    word_error_rate,
)
from .orchestrate import BackendError, MissingFixtureEntry
from .pipeline import run_pipeline, segment_bundle
from .types import AlignedWord, ConfigError, PipelineConfig, PipelineError
from .vad import InvalidParams
from .writers import FORMATS, read_ctm, read_words_json, write_outputs

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INPUT = 3
EXIT_BACKEND = 4

_CONFIG_FLAGS = [
    # (flag, config field)
    ("--onset", "onset_threshold"),
    ("--offset", "offset_threshold"),
    ("--min-on", "min_duration_on"),
    ("--min-off", "min_duration_off"),
    ("--max-chunk", "max_chunk"),
    ("--merge-threshold", "merge_threshold"),
    ("--collar", "collar"),
]


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    for flag, fieldname in _CONFIG_FLAGS:
        parser.add_argument(flag, type=float, default=None, dest=fieldname)
    parser.add_argument("--batch-size", type=int, default=None, dest="batch_size")
    parser.add_argument(
        "--show-config",
        action="store_true",
        help="print the effective configuration and exit",
    )


def _build_config(args: argparse.Namespace) -> PipelineConfig:
    overrides = {}
    for f in dataclasses.fields(PipelineConfig):
        value = getattr(args, f.name, None)
        if value is not None:
            overrides[f.name] = value
    return PipelineConfig(**overrides)


def _print_config(config: PipelineConfig) -> None:
    print(f"onset {config.onset_threshold!r}")
    print(f"offset {config.offset_threshold!r}")
    print(f"min-on {config.min_duration_on!r}")
    print(f"min-off {config.min_duration_off!r}")
    print(f"max-chunk {config.max_chunk!r}")
    print(f"merge-threshold {config.merge_threshold!r}")
    print(f"batch-size {config.batch_size}")
    print(f"collar {config.collar!r}")


def _metrics_report(
    ref: list[AlignedWord],
    hyp: list[AlignedWord],
    collar: float,
    normalize: bool,
) -> dict:
    ref_words = [w.word for w in ref]
    hyp_words = [w.word for w in hyp]
    if normalize:
        ref_words = normalize_text(" ".join(ref_words)).split()
        hyp_words = normalize_text(" ".join(hyp_words)).split()
    wer = word_error_rate(ref_words, hyp_words)
    pr = segmentation_pr(ref, hyp, collar)
    return {
        "wer": wer.wer,
        "ier": wer.ier,
        "substitutions": wer.substitutions,
        "insertions": wer.insertions,
        "deletions": wer.deletions,
        "num_reference": wer.num_reference,
        "dup5": ngram_duplicates(hyp_words, 5),
        "precision": pr.precision,
        "recall": pr.recall,
        "matches": pr.matches,
        "collar": collar,
        "normalized": normalize,
    }


def _print_metrics_table(report: dict, stream) -> None:
    rows = [
        ("WER", f"{report['wer']:.4f}"),
        ("IER", f"{report['ier']:.4f}"),
        ("S/I/D", "{substitutions}/{insertions}/{deletions}".format(**report)),
        ("5-Dup", str(report["dup5"])),
        ("Precision", f"{report['precision']:.4f}"),
        ("Recall", f"{report['recall']:.4f}"),
        ("Matches", str(report["matches"])),
    ]
    width = max(len(name) for name, _ in rows)
    for name, value in rows:
        print(f"{name:<{width}}  {value}", file=stream)


def _cmd_run(args: argparse.Namespace) -> int:
    config = _build_config(args)
    if args.show_config:
        _print_config(config)
        return EXIT_OK
    bundle = read_bundle(args.bundle)
    result = run_pipeline(bundle, config, skip_failed=args.skip_failed)
    for warning in result.warnings:
        log.warning("%s", warning)
    write_outputs(result.words, args.format, args.output)
    log.info(
        "wrote %d words from %d chunks to %s",
        len(result.words), len(result.chunks), args.output,
    )
    if args.eval is not None:
        report = _metrics_report(
            read_ctm(args.eval), result.words, config.collar, normalize=True
        )
        print(json.dumps(report, indent=2, sort_keys=True))
        _print_metrics_table(report, sys.stderr)
    return EXIT_OK


def _cmd_segment(args: argparse.Namespace) -> int:
    config = _build_config(args)
    if args.show_config:
        _print_config(config)
        return EXIT_OK
    bundle = read_bundle(args.bundle)
    chunks = segment_bundle(bundle, config)
    payload = {
        "recording_id": bundle.recording_id,
        "chunks": [
            {
                "span": [c.start, c.end],
                "segments": [[s.start, s.end] for s in c.segments],
            }
            for c in chunks
        ],
    }
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_eval(args: argparse.Namespace) -> int:
    config = PipelineConfig(collar=args.collar if args.collar is not None else 0.2)
    report = _metrics_report(
        read_ctm(args.ref),
        read_words_json(args.hyp),
        config.collar,
        normalize=not args.no_normalize,
    )
    print(json.dumps(report, indent=2, sort_keys=True))
    _print_metrics_table(report, sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="timealign",
        description="Long-form transcription pipeline with word-level timestamps",
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument(
        "--show-config",
        action="store_true",
        help="print the default configuration and exit",
    )
    sub = parser.add_subparsers(dest="command")

    p_run = sub.add_parser("run", help="run the full pipeline on a bundle")
    p_run.add_argument("--bundle", required=True)
    p_run.add_argument("-o", "--output", required=True)
    p_run.add_argument("--format", choices=FORMATS, default="srt")
    p_run.add_argument("--eval", default=None, metavar="REF_CTM")
    p_run.add_argument("--skip-failed", action="store_true")
    _add_config_flags(p_run)
    p_run.set_defaults(func=_cmd_run)

    p_seg = sub.add_parser("segment", help="emit merged chunk spans for a bundle")
    p_seg.add_argument("--bundle", required=True)
    p_seg.add_argument("-o", "--output", default=None)
    _add_config_flags(p_seg)
    p_seg.set_defaults(func=_cmd_segment)

    p_eval = sub.add_parser("eval", help="score a hypothesis against a reference")
    p_eval.add_argument("--hyp", required=True)
    p_eval.add_argument("--ref", required=True)
    p_eval.add_argument("--collar", type=float, default=None)
    p_eval.add_argument("--no-normalize", action="store_true")
    p_eval.set_defaults(func=_cmd_eval)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(
        level=os.environ.get("TIMEALIGN_LOG", "WARNING").upper(),
        format="%(levelname)s %(name)s: %(message)s",
    )
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        if args.show_config:
            _print_config(PipelineConfig())
            return EXIT_OK
        parser.print_help()
        return EXIT_CONFIG
    try:
        return args.func(args)
    except (ConfigError, InvalidParams, ValueError) as exc:
        log.error("configuration error: %s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (BackendError, MissingFixtureEntry) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BACKEND
    except (PipelineError, OSError, EmptyReference) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
