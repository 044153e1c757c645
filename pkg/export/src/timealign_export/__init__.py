"""Export scripts that populate interchange bundles for the timealign CLI."""

from .audio import UnsupportedAudio, read_wav, slice_span, write_wav
from .engines import (
    ModelLoadError,
    get_asr_engine,
    get_phoneme_engine,
    get_vad_engine,
)
from .exporters import export_asr, export_logits, export_vad, load_spans

__version__ = "0.1.0"

__all__ = [
    "ModelLoadError",
    "UnsupportedAudio",
    "export_asr",
    "export_logits",
    "export_vad",
    "get_asr_engine",
    "get_phoneme_engine",
    "get_vad_engine",
    "load_spans",
    "read_wav",
    "slice_span",
    "write_wav",
]
