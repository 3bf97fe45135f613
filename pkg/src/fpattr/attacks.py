"""The image post-processing battery as deterministic, parameterized transforms.

Valuemetric semantics follow the conventional image-enhancement definitions
(blend toward a reference image); factor 1.0 is the exact identity for all
of them.  Crop removes the requested fraction of total *area* as a centered
border, so a 20% crop keeps ~89.4% of each dimension.  JPEG is a real
baseline encode/decode, not a noise proxy.

Specs serialize to a compact string form ("brightness:1.35", "jpeg:60",
"hflip") used by the CLI and in report columns.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import ImageTooSmallError, jpeg_roundtrip, luma601, validate_image


class InvalidStrengthError(ValueError):
    """Attack strength outside the family's validity range."""


#: family -> (takes a strength, validity rule shown in errors)
_FAMILIES: dict[str, tuple[bool, str]] = {
    "brightness": (True, "factor > 0"),
    "contrast": (True, "factor > 0"),
    "saturation": (True, "factor > 0"),
    "sharpness": (True, "factor > 0"),
    "hflip": (False, ""),
    "noise": (True, "sigma >= 0"),
    "crop": (True, "0 <= fraction < 1"),
    "jpeg": (True, "1 <= quality <= 100"),
}

VALUEMETRIC_FAMILIES = ("brightness", "contrast", "saturation", "sharpness")


def _validate_strength(kind: str, strength: float | None) -> None:
    if kind not in _FAMILIES:
        raise InvalidStrengthError(f"unknown attack family {kind!r}")
    has_strength, rule = _FAMILIES[kind]
    if not has_strength:
        if strength is not None:
            raise InvalidStrengthError(f"{kind} takes no strength")
        return
    if strength is None:
        raise InvalidStrengthError(f"{kind} requires a strength ({rule})")
    ok = {
        "brightness": strength > 0,
        "contrast": strength > 0,
        "saturation": strength > 0,
        "sharpness": strength > 0,
        "noise": strength >= 0,
        "crop": 0 <= strength < 1,
        "jpeg": 1 <= strength <= 100,
    }[kind]
    if not ok:
        raise InvalidStrengthError(f"{kind} strength {strength} violates {rule}")


@dataclass(frozen=True, slots=True)
class AttackSpec:
    kind: str
    strength: float | None = None

    def __post_init__(self) -> None:
        _validate_strength(self.kind, self.strength)

    def compact(self) -> str:
        if self.strength is None:
            return self.kind
        return f"{self.kind}:{self.strength:g}"

    @classmethod
    def parse(cls, text: str) -> "AttackSpec":
        kind, _, raw = text.partition(":")
        kind = kind.strip().lower()
        if not raw:
            return cls(kind)
        try:
            strength = float(raw)
        except ValueError as exc:
            raise InvalidStrengthError(f"bad strength in {text!r}") from exc
        return cls(kind, strength)


def attack_grid(family: str, strengths: list[float]) -> list[AttackSpec]:
    """Ordered specs for a sweep over one family."""
    if family not in _FAMILIES or not _FAMILIES[family][0]:
        raise InvalidStrengthError(f"{family!r} is not a sweepable attack family")
    return [AttackSpec(family, s) for s in strengths]


def _to_uint8(img: np.ndarray) -> np.ndarray:
    return np.clip(np.rint(img), 0, 255).astype(np.uint8)


def _smooth3x3(img: np.ndarray) -> np.ndarray:
    """3x3 smoothing with the usual center-weighted kernel; the one-pixel
    border keeps its original values."""
    kernel = np.array([[1.0, 1.0, 1.0], [1.0, 5.0, 1.0], [1.0, 1.0, 1.0]]) / 13.0
    f = img.astype(np.float64)
    out = f.copy()
    interior = np.zeros_like(f[1:-1, 1:-1])
    for dy in (-1, 0, 1):
        for dx in (-1, 0, 1):
            weight = kernel[dy + 1, dx + 1]
            interior += weight * f[1 + dy : f.shape[0] - 1 + dy, 1 + dx : f.shape[1] - 1 + dx]
    out[1:-1, 1:-1] = interior
    return out


def apply(image: np.ndarray, spec: AttackSpec, rng: np.random.Generator | None = None) -> np.ndarray:
    """Apply one post-processing attack.

    Gaussian noise draws from ``rng`` for reproducibility; other attacks
    are fully deterministic and ignore it.
    """
    validate_image(image)
    kind, s = spec.kind, spec.strength

    if kind in VALUEMETRIC_FAMILIES and s == 1.0:
        return image.copy()

    if kind == "brightness":
        return _to_uint8(image.astype(np.float64) * s)

    if kind == "contrast":
        mean = float(np.mean(luma601(image)))
        return _to_uint8(mean + s * (image.astype(np.float64) - mean))

    if kind == "saturation":
        gray = luma601(image)[..., None]
        return _to_uint8(gray + s * (image.astype(np.float64) - gray))

    if kind == "sharpness":
        smooth = _smooth3x3(image)
        return _to_uint8(smooth + s * (image.astype(np.float64) - smooth))

    if kind == "hflip":
        return image[:, ::-1].copy()

    if kind == "noise":
        if s == 0:
            return image.copy()
        if rng is None:
            rng = np.random.default_rng(0)
        scaled = image.astype(np.float64) / 255.0
        noisy = scaled + rng.normal(0.0, s, size=image.shape)
        return _to_uint8(np.clip(noisy, 0.0, 1.0) * 255.0)

    if kind == "crop":
        h, w = image.shape[:2]
        keep = math.sqrt(1.0 - s)
        kh, kw = round(h * keep), round(w * keep)
        if kh < 1 or kw < 1:
            raise ImageTooSmallError(f"crop({s}) of a {w}x{h} image leaves no pixels")
        y0, x0 = (h - kh) // 2, (w - kw) // 2
        return image[y0 : y0 + kh, x0 : x0 + kw].copy()

    if kind == "jpeg":
        return jpeg_roundtrip(image, int(round(s)))

    raise InvalidStrengthError(f"unknown attack family {kind!r}")
