"""Model engines behind the export scripts.

Each exporter takes an engine object with a tiny duck-typed surface:

    VAD engine:     .frame_period, .scores(samples, rate) -> np.ndarray
    ASR engine:     .decode_flags, .transcribe(samples, rate) -> str
    phoneme engine: .labels, .blank_index, .frame_period,
                    .logits(samples, rate) -> np.ndarray (T x K)

The default "tone" engines are hermetic: they analyze the waveform with an
FFT band model (see tone_codec) and need no downloaded weights, so the full
export -> pipeline path runs offline. The "pyannote", "whisper" and
"wav2vec2" engines wrap the corresponding pretrained models and require
their packages plus network access to fetch weights; they raise
ModelLoadError with the reason when unavailable.
"""

from __future__ import annotations

import numpy as np

from . import tone_codec
from .audio import UnsupportedAudio


class ModelLoadError(Exception):
    """An engine's model could not be loaded (missing package, no weights)."""


def _require_rate(rate: int) -> None:
    if rate != tone_codec.SAMPLE_RATE:
        raise UnsupportedAudio(
            f"tone engines need {tone_codec.SAMPLE_RATE} Hz audio, got {rate} Hz"
        )


class ToneVadEngine:
    name = "tone"
    frame_period = tone_codec.FRAME_PERIOD

    def scores(self, samples: np.ndarray, rate: int) -> np.ndarray:
        _require_rate(rate)
        return tone_codec.vad_scores(samples)


class ToneAsrEngine:
    name = "tone"
    decode_flags = {"strategy": "greedy", "timestamps": False, "condition_on_previous": False}

    def transcribe(self, samples: np.ndarray, rate: int) -> str:
        _require_rate(rate)
        if len(samples) < tone_codec.FRAME_SAMPLES:
            return ""
        return tone_codec.greedy_decode(tone_codec.logits_from_audio(samples))


class TonePhonemeEngine:
    name = "tone"
    labels = tone_codec.LABELS
    blank_index = tone_codec.BLANK_INDEX
    frame_period = tone_codec.FRAME_PERIOD

    def logits(self, samples: np.ndarray, rate: int) -> np.ndarray:
        _require_rate(rate)
        if len(samples) < tone_codec.FRAME_SAMPLES:
            raise UnsupportedAudio("span shorter than one frame")
        return tone_codec.logits_from_audio(samples)


class PyannoteVadEngine:
    name = "pyannote"
    frame_period = 0.02

    def __init__(self, checkpoint: str = "pyannote/segmentation"):
        try:
            from pyannote.audio import Model  # type: ignore
        except ImportError as exc:
            raise ModelLoadError(f"pyannote.audio not installed: {exc}") from exc
        try:
            self._model = Model.from_pretrained(checkpoint)
        except Exception as exc:  # hub/network/auth failures
            raise ModelLoadError(f"cannot load {checkpoint}: {exc}") from exc

    def scores(self, samples: np.ndarray, rate: int) -> np.ndarray:
        import torch

        waveform = torch.as_tensor(samples, dtype=torch.float32)[None, :]
        with torch.inference_mode():
            out = self._model({"waveform": waveform, "sample_rate": rate})
        # collapse speaker dimension to plain speech activity
        return out.squeeze(0).max(dim=-1).values.numpy()


class WhisperAsrEngine:
    name = "whisper"
    decode_flags = {"strategy": "greedy", "timestamps": False, "condition_on_previous": False}

    def __init__(self, checkpoint: str = "openai/whisper-base.en"):
        try:
            from transformers import WhisperForConditionalGeneration, WhisperProcessor
        except ImportError as exc:
            raise ModelLoadError(f"transformers not installed: {exc}") from exc
        try:
            self._processor = WhisperProcessor.from_pretrained(checkpoint)
            self._model = WhisperForConditionalGeneration.from_pretrained(checkpoint)
        except Exception as exc:
            raise ModelLoadError(f"cannot load {checkpoint}: {exc}") from exc

    def transcribe(self, samples: np.ndarray, rate: int) -> str:
        import torch

        features = self._processor(
            samples, sampling_rate=rate, return_tensors="pt"
        ).input_features
        with torch.inference_mode():
            ids = self._model.generate(
                features, do_sample=False, return_timestamps=False
            )
        return self._processor.batch_decode(ids, skip_special_tokens=True)[0].strip()


class Wav2Vec2PhonemeEngine:
    name = "wav2vec2"
    frame_period = 0.02

    def __init__(self, checkpoint: str = "facebook/wav2vec2-base-960h"):
        try:
            from transformers import Wav2Vec2ForCTC, Wav2Vec2Processor
        except ImportError as exc:
            raise ModelLoadError(f"transformers not installed: {exc}") from exc
        try:
            self._processor = Wav2Vec2Processor.from_pretrained(checkpoint)
            self._model = Wav2Vec2ForCTC.from_pretrained(checkpoint)
        except Exception as exc:
            raise ModelLoadError(f"cannot load {checkpoint}: {exc}") from exc
        vocab = self._processor.tokenizer.get_vocab()
        self.labels = tuple(sorted(vocab, key=vocab.get))
        self.blank_index = self._processor.tokenizer.pad_token_id

    def logits(self, samples: np.ndarray, rate: int) -> np.ndarray:
        import torch

        inputs = self._processor(
            samples, sampling_rate=rate, return_tensors="pt"
        ).input_values
        with torch.inference_mode():
            out = self._model(inputs).logits
        return out.squeeze(0).numpy()


_VAD = {"tone": ToneVadEngine, "pyannote": PyannoteVadEngine}
_ASR = {"tone": ToneAsrEngine, "whisper": WhisperAsrEngine}
_PHONEME = {"tone": TonePhonemeEngine, "wav2vec2": Wav2Vec2PhonemeEngine}


def _build(registry: dict, name: str, kind: str):
    try:
        factory = registry[name]
    except KeyError:
        raise ModelLoadError(
            f"unknown {kind} engine {name!r}; choices: {sorted(registry)}"
        ) from None
    return factory()


def get_vad_engine(name: str):
    return _build(_VAD, name, "VAD")


def get_asr_engine(name: str):
    return _build(_ASR, name, "ASR")


def get_phoneme_engine(name: str):
    return _build(_PHONEME, name, "phoneme")
