"""Fingerprint attribution toolkit.

Encodes user fingerprints into BCH codewords, transmits them through
simulated and image-domain watermark channels under post-processing
attacks, decodes with detect/correct/flag semantics, and measures bit
accuracy and fingerprint error rate.
"""

from .bch import BchParams, DecodeOutcome, DecodeStatus, build_params, decode, encode
from .bits import Bits
from .channel import BscChannel, EmbedConfig, bsc_transmit, embed, extract
from .registry import AttributionResult, FingerprintRegistry, Verdict

__version__ = "0.1.0"

__all__ = [
    "AttributionResult",
    "BchParams",
    "Bits",
    "BscChannel",
    "DecodeOutcome",
    "DecodeStatus",
    "EmbedConfig",
    "FingerprintRegistry",
    "Verdict",
    "bsc_transmit",
    "build_params",
    "decode",
    "embed",
    "encode",
    "extract",
    "__version__",
]
