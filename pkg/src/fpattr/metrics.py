"""Evaluation quantities: bit accuracy, fingerprint error rate, PSNR, SSIM.

FER comes in two modes because decoder self-reporting and ground-truth
checking measure different things: "flagged" counts only words the decoder
itself declared uncorrectable, "reference" additionally counts silent
miscorrections against the true fingerprint.  Conflating them would hide
miscorrections, so both are first-class.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Literal, Sequence

import numpy as np

from .bch import DecodeOutcome, DecodeStatus
from .bits import Bits, LengthMismatchError


class DimensionMismatchError(ValueError):
    """Two images of different shapes were compared."""


class EmptyTrialSetError(ValueError):
    """A rate was requested over zero trials."""


FerMode = Literal["flagged", "reference"]

#: Fixed interchange column order for metric rows.
CSV_COLUMNS = (
    "method",
    "channel",
    "attack",
    "strength",
    "bit_acc",
    "fer_flagged",
    "fer_reference",
    "psnr",
    "ssim",
    "trials",
    "seed",
)


@dataclass(frozen=True, slots=True)
class TrialOutcome:
    """One decoding trial: the truth, what came back, and the self-report."""

    true_fingerprint: Bits
    decoded: Bits | None
    outcome: DecodeOutcome

    def __post_init__(self) -> None:
        if (self.decoded is None) != (self.outcome.status is DecodeStatus.UNCORRECTABLE):
            raise ValueError("decoded payload must be absent exactly when uncorrectable")


def bit_accuracy(truth: Bits, decoded: Bits) -> float:
    """Fraction of positions where the decoded fingerprint matches the truth."""
    if truth.width != decoded.width:
        raise LengthMismatchError(f"widths differ: {truth.width} vs {decoded.width}")
    return 1.0 - truth.hamming(decoded) / truth.width


def fer(trials: Sequence[TrialOutcome], mode: FerMode = "flagged") -> float:
    """Fingerprint error rate: corrupted fingerprints / total fingerprints.

    flagged   -- decoder self-reports only (Uncorrectable outcomes)
    reference -- any trial whose decoded payload differs from the truth,
                 plus all Uncorrectable trials (test-bench measurement)
    """
    if not trials:
        raise EmptyTrialSetError("FER over an empty trial set is undefined")
    if mode == "flagged":
        bad = sum(1 for t in trials if t.outcome.status is DecodeStatus.UNCORRECTABLE)
    elif mode == "reference":
        bad = sum(1 for t in trials if t.decoded is None or t.decoded != t.true_fingerprint)
    else:
        raise ValueError(f"unknown FER mode {mode!r}")
    return bad / len(trials)


def _as_float_image(img: np.ndarray, other: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    if img.shape != other.shape:
        raise DimensionMismatchError(f"image shapes differ: {img.shape} vs {other.shape}")
    return img.astype(np.float64), other.astype(np.float64)


def psnr(a: np.ndarray, b: np.ndarray) -> float:
    """Peak signal-to-noise ratio in dB for 8-bit images; inf when identical."""
    fa, fb = _as_float_image(a, b)
    mse = float(np.mean((fa - fb) ** 2))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(255.0 ** 2 / mse)


def _luma(img: np.ndarray) -> np.ndarray:
    if img.ndim == 3:
        return img @ np.array([0.299, 0.587, 0.114])
    return img


def ssim(
    a: np.ndarray,
    b: np.ndarray,
    window: Literal["uniform", "gaussian"] = "uniform",
    k1: float = 0.01,
    k2: float = 0.03,
    dynamic_range: float = 255.0,
) -> float:
    """Mean local SSIM on luma.

    Default is the 8x8 uniform sliding window of the original formulation's
    simplified variant; a Gaussian window (sigma 1.5) is available behind
    the ``window`` flag.
    """
    fa, fb = _as_float_image(a, b)
    ya, yb = _luma(fa), _luma(fb)
    c1 = (k1 * dynamic_range) ** 2
    c2 = (k2 * dynamic_range) ** 2

    if window == "uniform":
        mu_a = _box_mean(ya, 8)
        mu_b = _box_mean(yb, 8)
        e_aa = _box_mean(ya * ya, 8)
        e_bb = _box_mean(yb * yb, 8)
        e_ab = _box_mean(ya * yb, 8)
    elif window == "gaussian":
        from scipy.ndimage import gaussian_filter

        def g(x: np.ndarray) -> np.ndarray:
            return gaussian_filter(x, sigma=1.5, mode="reflect")

        mu_a, mu_b = g(ya), g(yb)
        e_aa, e_bb, e_ab = g(ya * ya), g(yb * yb), g(ya * yb)
    else:
        raise ValueError(f"unknown window {window!r}")

    var_a = e_aa - mu_a * mu_a
    var_b = e_bb - mu_b * mu_b
    cov = e_ab - mu_a * mu_b
    ssim_map = ((2 * mu_a * mu_b + c1) * (2 * cov + c2)) / (
        (mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2)
    )
    return float(np.mean(ssim_map))


def _box_mean(x: np.ndarray, size: int) -> np.ndarray:
    """Mean over every size x size sliding window (valid positions only)."""
    if x.shape[0] < size or x.shape[1] < size:
        raise DimensionMismatchError(f"image smaller than the {size}x{size} SSIM window")
    padded = np.zeros((x.shape[0] + 1, x.shape[1] + 1))
    padded[1:, 1:] = np.cumsum(np.cumsum(x, axis=0), axis=1)
    total = (
        padded[size:, size:]
        - padded[:-size, size:]
        - padded[size:, :-size]
        + padded[:-size, :-size]
    )
    return total / (size * size)


@dataclass(frozen=True, slots=True)
class MetricRow:
    """One CSV interchange row; None fields serialize as empty cells."""

    method: str
    channel: str
    attack: str
    strength: float | None
    bit_acc: float | None
    fer_flagged: float | None
    fer_reference: float | None
    psnr: float | None
    ssim: float | None
    trials: int
    seed: int

    def as_csv_dict(self) -> dict[str, str]:
        out = {}
        for name in CSV_COLUMNS:
            out[name] = format_cell(getattr(self, name))
        return out


def format_cell(value: object) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        if math.isinf(value):
            return "inf"
        return f"{value:.10g}"
    return str(value)


def write_csv(rows: Iterable[MetricRow], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        for row in rows:
            writer.writerow(row.as_csv_dict())


def read_csv(path: str | Path) -> list[dict[str, str]]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))
