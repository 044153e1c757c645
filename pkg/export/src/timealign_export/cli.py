"""timealign-export: run models over audio and populate a bundle manifest.

Typical flow against the pipeline CLI:

    timealign-export vad    --audio rec.wav --bundle out/bundle.json
    timealign segment --bundle out/bundle.json -o out/chunks.json
    timealign-export asr    --audio rec.wav --bundle out/bundle.json \\
                            --chunks out/chunks.json
    timealign-export logits --audio rec.wav --bundle out/bundle.json \\
                            --chunks out/chunks.json
    timealign run --bundle out/bundle.json -o out/words.srt
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

from . import exporters
from .audio import UnsupportedAudio
from .engines import (
    ModelLoadError,
    get_asr_engine,
    get_phoneme_engine,
    get_vad_engine,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_MODEL = 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="timealign-export",
        description="Export VAD scores, transcripts, and logits into a bundle.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, chunks: bool) -> None:
        p.add_argument("--audio", required=True, help="input WAV file")
        p.add_argument("--bundle", required=True, help="bundle manifest to update")
        p.add_argument("--engine", default="tone", help="engine name (default: tone)")
        if chunks:
            p.add_argument(
                "--chunks", required=True,
                help="chunk spans JSON from `timealign segment`",
            )

    common(sub.add_parser("vad", help="export per-frame speech scores"), False)
    common(sub.add_parser("asr", help="export chunk transcripts"), True)
    common(sub.add_parser("logits", help="export chunk phoneme logits"), True)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=os.environ.get("TIMEALIGN_LOG", "WARNING"))
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "vad":
            exporters.export_vad(args.audio, args.bundle, get_vad_engine(args.engine))
        elif args.command == "asr":
            exporters.export_asr(
                args.audio, args.bundle,
                exporters.load_spans(args.chunks), get_asr_engine(args.engine),
            )
        else:
            exporters.export_logits(
                args.audio, args.bundle,
                exporters.load_spans(args.chunks), get_phoneme_engine(args.engine),
            )
    except ModelLoadError as exc:
        print(f"timealign-export: {exc}", file=sys.stderr)
        return EXIT_MODEL
    except (UnsupportedAudio, OSError, KeyError, ValueError) as exc:
        print(f"timealign-export: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
