"""Monte-Carlo experiment engine: channel runs, attack sweeps, reports.

An experiment registers a population of users, transmits each trial's
codeword through the configured channel (bit-symmetric or image embedding,
optionally post-processed by attacks), attributes the result, and
aggregates three views of the same transmissions:

  raw   -- the payload positions read straight off the received word, no
           error correction (the no-ECC baseline)
  psi   -- pre-correction bit accuracy over the whole codeword
  phi   -- the decoded fingerprint with flagged/reference FERs and
           attribution accuracy

The independence-model analytic rates are reported next to every
Monte-Carlo estimate: real watermark channels have correlated bit errors,
so any divergence stays explicit instead of silent.

All aggregation uses integer counters, so reports are independent of trial
order, and every random stream derives from the config seed, so identical
configs produce byte-identical CSV/JSON outputs.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.stats import binom

from . import attacks as attacks_mod
from . import bch, channel, metrics
from .bits import Bits
from .registry import FingerprintRegistry, Verdict

Z_95 = 1.96

#: Stamped into every report: the stand-in channels approximate the
#: correlated errors of a real watermark pipeline.
CHANNEL_NOTES = {
    "bsc": (
        "BSC assumes independent bit errors; real watermark channels are "
        "correlated, so analytic independence-model rates are reported for "
        "comparison"
    ),
    "image": (
        "transform-domain embedder stand-in, not a neural watermark channel; "
        "absolute robustness numbers are specific to this channel"
    ),
}


class EmptyCorpusError(ValueError):
    """An image-channel experiment was configured with no images."""


def calibrate_ber(bit_accuracy: float) -> float:
    """Per-bit flip probability equivalent to a measured bit accuracy."""
    if not 0.0 <= bit_accuracy <= 1.0:
        raise ValueError(f"bit accuracy must be in [0, 1], got {bit_accuracy}")
    return 1.0 - bit_accuracy


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class CorpusSpec:
    """Either a synthetic corpus (generated in memory) or an image directory."""

    kind: str = "synthetic"       # "synthetic" | "dir"
    count: int = 16
    size: int = 512
    seed: int = 0
    path: str | None = None

    def to_dict(self) -> dict:
        if self.kind == "dir":
            return {"type": "dir", "path": self.path}
        return {"type": "synthetic", "count": self.count, "size": self.size, "seed": self.seed}

    @classmethod
    def from_dict(cls, obj: dict) -> "CorpusSpec":
        kind = obj.get("type", "synthetic")
        if kind == "dir":
            return cls(kind="dir", path=obj["path"])
        return cls(
            kind="synthetic",
            count=int(obj.get("count", 16)),
            size=int(obj.get("size", 512)),
            seed=int(obj.get("seed", 0)),
        )


@dataclass(frozen=True, slots=True)
class ExperimentConfig:
    """Everything a run needs; serializes to/from JSON."""

    code_m: int = 6
    code_t: int = 4
    payload_len: int = 32
    channel_type: str = "bsc"     # "bsc" | "image"
    bsc_p: float = 0.0
    embed: channel.EmbedConfig = field(default_factory=channel.EmbedConfig)
    corpus: CorpusSpec = field(default_factory=CorpusSpec)
    crop_mode: str = "crop_only"  # "crop_only" | "resize_back"
    attacks: tuple[attacks_mod.AttackSpec, ...] = ()
    trials: int = 5000
    seed: int = 0
    registry_size: int = 100
    image_quality: bool = True    # per-trial PSNR/SSIM of the embedding

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.registry_size < 1:
            raise ValueError("registry_size must be >= 1")
        if self.channel_type not in ("bsc", "image"):
            raise ValueError(f"unknown channel type {self.channel_type!r}")
        if self.crop_mode not in ("crop_only", "resize_back"):
            raise ValueError(f"unknown crop mode {self.crop_mode!r}")
        if self.channel_type == "bsc":
            if not 0.0 <= self.bsc_p <= 1.0:
                raise ValueError(f"bsc p must be in [0, 1], got {self.bsc_p}")
            if self.attacks:
                raise ValueError("post-processing attacks require the image channel")

    def to_dict(self) -> dict:
        out = {
            "code": {"m": self.code_m, "t": self.code_t, "payload_len": self.payload_len},
            "attacks": [a.compact() for a in self.attacks],
            "trials": self.trials,
            "seed": self.seed,
            "registry_size": self.registry_size,
        }
        if self.channel_type == "bsc":
            out["channel"] = {"type": "bsc", "p": self.bsc_p}
        else:
            out["channel"] = {
                "type": "image",
                "embed": dataclasses.asdict(self.embed),
                "corpus": self.corpus.to_dict(),
                "crop_mode": self.crop_mode,
                "image_quality": self.image_quality,
            }
        return out

    @classmethod
    def from_dict(cls, obj: dict) -> "ExperimentConfig":
        code = obj.get("code", {})
        chan = obj.get("channel", {"type": "bsc", "p": 0.0})
        kwargs: dict = {
            "code_m": int(code.get("m", 6)),
            "code_t": int(code.get("t", 4)),
            "payload_len": int(code.get("payload_len", 32)),
            "attacks": tuple(attacks_mod.AttackSpec.parse(s) for s in obj.get("attacks", [])),
            "trials": int(obj.get("trials", 5000)),
            "seed": int(obj.get("seed", 0)),
            "registry_size": int(obj.get("registry_size", 100)),
        }
        if chan.get("type", "bsc") == "bsc":
            kwargs["channel_type"] = "bsc"
            kwargs["bsc_p"] = float(chan.get("p", 0.0))
        else:
            kwargs["channel_type"] = "image"
            kwargs["embed"] = channel.EmbedConfig(**chan.get("embed", {}))
            kwargs["corpus"] = CorpusSpec.from_dict(chan.get("corpus", {}))
            kwargs["crop_mode"] = chan.get("crop_mode", "crop_only")
            kwargs["image_quality"] = bool(chan.get("image_quality", True))
        return cls(**kwargs)

    @classmethod
    def from_json_file(cls, path: str | Path) -> "ExperimentConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def canonical_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    def config_hash(self) -> str:
        return hashlib.sha256(self.canonical_json().encode()).hexdigest()[:12]

    def channel_label(self) -> str:
        if self.channel_type == "bsc":
            return f"bsc(p={self.bsc_p:g})"
        return "image"

    def attack_label(self) -> str:
        if not self.attacks:
            return "none"
        return "+".join(a.compact() for a in self.attacks)


# ---------------------------------------------------------------------------
# aggregation
# ---------------------------------------------------------------------------

def _rate_ci(count: int, total: int) -> tuple[float, float]:
    rate = count / total
    return rate, Z_95 * math.sqrt(rate * (1.0 - rate) / total)


@dataclass
class TrialReport:
    """Aggregated outcome of one experiment (one channel/attack setting)."""

    channel: str
    attack: str
    strength: float | None
    trials: int
    seed: int
    config_hash: str
    # no-ECC baseline: payload positions read straight off the received word
    raw_bit_acc: float
    raw_fer: float
    raw_fer_ci95: float
    # pre-correction codeword bits
    psi_bit_acc: float
    # post-ECC fingerprint
    phi_bit_acc: float | None          # over decodable trials (Eq.-style average)
    phi_bit_acc_all: float | None      # all trials; flagged ones fall back to the raw read
    fer_flagged: float
    fer_flagged_ci95: float
    fer_reference: float
    fer_reference_ci95: float
    attribution_acc: float | None      # over non-flagged trials
    counts: dict[str, int]
    # independence-model analytic rates (BSC only)
    model_raw_fer: float | None
    model_reference_fer: float | None
    # embedding quality, image channel only
    psnr: float | None
    ssim: float | None
    mean_confidence: float | None

    def to_json_dict(self) -> dict:
        return dataclasses.asdict(self)

    def to_metric_rows(self) -> list[metrics.MetricRow]:
        common = dict(
            channel=self.channel,
            attack=self.attack,
            strength=self.strength,
            psnr=self.psnr,
            ssim=self.ssim,
            trials=self.trials,
            seed=self.seed,
        )
        return [
            metrics.MetricRow(
                method="raw",
                bit_acc=self.raw_bit_acc,
                fer_flagged=None,
                fer_reference=self.raw_fer,
                **common,
            ),
            metrics.MetricRow(
                method="ecc",
                bit_acc=self.phi_bit_acc,
                fer_flagged=self.fer_flagged,
                fer_reference=self.fer_reference,
                **common,
            ),
        ]


class _Tally:
    """Order-independent integer accumulators for one experiment."""

    def __init__(self, params: bch.BchParams):
        self.params = params
        self.trials = 0
        self.raw_err_trials = 0
        self.raw_wrong_bits = 0
        self.psi_wrong_bits = 0
        self.uncorrectable = 0
        self.unregistered = 0
        self.misattributed = 0
        self.attributed_correct = 0
        self.clean = 0
        self.corrected = 0
        self.corrected_bits = 0
        self.decodable = 0
        self.phi_wrong_bits_decodable = 0
        self.phi_wrong_bits_all = 0
        self.psnr_sum = 0.0
        self.ssim_sum = 0.0
        self.quality_trials = 0
        self.conf_sum = 0.0
        self.conf_trials = 0

    def add(
        self,
        truth: Bits,
        true_user: str,
        transmitted: Bits,
        received: Bits,
        result,
        psnr_val: float | None = None,
        ssim_val: float | None = None,
        confidence: float | None = None,
    ) -> None:
        p = self.params
        self.trials += 1
        raw = Bits(received.value >> (p.n - p.payload_len), p.payload_len)
        raw_wrong = raw.hamming(truth)
        self.raw_wrong_bits += raw_wrong
        if raw_wrong:
            self.raw_err_trials += 1
        self.psi_wrong_bits += received.hamming(transmitted)

        outcome = result.outcome
        if outcome.status is bch.DecodeStatus.UNCORRECTABLE:
            self.uncorrectable += 1
            self.phi_wrong_bits_all += raw_wrong
        else:
            self.decodable += 1
            wrong = result.fingerprint.hamming(truth)
            self.phi_wrong_bits_decodable += wrong
            self.phi_wrong_bits_all += wrong
            if outcome.status is bch.DecodeStatus.CLEAN:
                self.clean += 1
            else:
                self.corrected += 1
                self.corrected_bits += outcome.error_count
            if result.verdict is Verdict.FLAGGED_UNREGISTERED:
                self.unregistered += 1
            elif result.user_id == true_user:
                self.attributed_correct += 1
            else:
                self.misattributed += 1

        if psnr_val is not None:
            self.psnr_sum += psnr_val
            self.ssim_sum += ssim_val if ssim_val is not None else 0.0
            self.quality_trials += 1
        if confidence is not None:
            self.conf_sum += confidence
            self.conf_trials += 1

    def report(self, cfg: ExperimentConfig, strength: float | None = None) -> TrialReport:
        p = self.params
        t = self.trials
        raw_fer, raw_ci = _rate_ci(self.raw_err_trials, t)
        flagged, flagged_ci = _rate_ci(self.uncorrectable, t)
        ref_count = self.uncorrectable + self.unregistered + self.misattributed
        reference, reference_ci = _rate_ci(ref_count, t)
        attributed = self.attributed_correct + self.misattributed

        model_raw = model_ref = None
        if cfg.channel_type == "bsc":
            model_raw = 1.0 - (1.0 - cfg.bsc_p) ** p.payload_len
            model_ref = float(binom.sf(p.t, p.n, cfg.bsc_p))

        return TrialReport(
            channel=cfg.channel_label(),
            attack=cfg.attack_label(),
            strength=strength,
            trials=t,
            seed=cfg.seed,
            config_hash=cfg.config_hash(),
            raw_bit_acc=1.0 - self.raw_wrong_bits / (t * p.payload_len),
            raw_fer=raw_fer,
            raw_fer_ci95=raw_ci,
            psi_bit_acc=1.0 - self.psi_wrong_bits / (t * p.n),
            phi_bit_acc=(
                1.0 - self.phi_wrong_bits_decodable / (self.decodable * p.payload_len)
                if self.decodable
                else None
            ),
            phi_bit_acc_all=1.0 - self.phi_wrong_bits_all / (t * p.payload_len),
            fer_flagged=flagged,
            fer_flagged_ci95=flagged_ci,
            fer_reference=reference,
            fer_reference_ci95=reference_ci,
            attribution_acc=(self.attributed_correct / attributed if attributed else None),
            counts={
                "clean": self.clean,
                "corrected": self.corrected,
                "corrected_bits": self.corrected_bits,
                "uncorrectable": self.uncorrectable,
                "unregistered": self.unregistered,
                "misattributed": self.misattributed,
            },
            model_raw_fer=model_raw,
            model_reference_fer=model_ref,
            psnr=(self.psnr_sum / self.quality_trials if self.quality_trials else None),
            ssim=(self.ssim_sum / self.quality_trials if self.quality_trials else None),
            mean_confidence=(self.conf_sum / self.conf_trials if self.conf_trials else None),
        )


# ---------------------------------------------------------------------------
# experiment runners
# ---------------------------------------------------------------------------

def _build_population(
    cfg: ExperimentConfig, params: bch.BchParams
) -> tuple[FingerprintRegistry, list[str], list[Bits], list[Bits]]:
    registry = FingerprintRegistry(cfg.payload_len)
    rng = random.Random(cfg.seed)
    user_ids, fingerprints, codewords = [], [], []
    for i in range(cfg.registry_size):
        record = registry.assign(f"user-{i:05d}", rng=rng)
        user_ids.append(record.user_id)
        fingerprints.append(record.fingerprint)
        codewords.append(bch.encode(record.fingerprint, params))
    return registry, user_ids, fingerprints, codewords


def run_channel_experiment(cfg: ExperimentConfig) -> TrialReport:
    """Run one Monte-Carlo experiment and aggregate it into a TrialReport."""
    params = bch.build_params(cfg.code_m, cfg.code_t, cfg.payload_len)
    if cfg.channel_type == "bsc":
        return _run_bsc(cfg, params)
    return _run_image(cfg, params, [tuple(cfg.attacks)])[0]


def _run_bsc(cfg: ExperimentConfig, params: bch.BchParams) -> TrialReport:
    registry, user_ids, fingerprints, codewords = _build_population(cfg, params)
    pick = np.random.default_rng([cfg.seed, 1]).integers(0, cfg.registry_size, cfg.trials)
    chan = channel.BscChannel(cfg.bsc_p, seed=[cfg.seed, 2])
    tally = _Tally(params)
    for i in range(cfg.trials):
        u = int(pick[i])
        transmitted = codewords[u]
        received = channel.bsc_transmit(transmitted, chan)
        result = registry.attribute(received, params)
        tally.add(fingerprints[u], user_ids[u], transmitted, received, result)
    return tally.report(cfg)


def _load_corpus(cfg: ExperimentConfig) -> list[np.ndarray]:
    embed_cfg = cfg.embed
    if cfg.corpus.kind == "synthetic":
        images = synthetic_corpus(cfg.corpus.count, cfg.corpus.size, cfg.corpus.seed)
    else:
        root = Path(cfg.corpus.path)
        paths = sorted(
            p for p in root.iterdir() if p.suffix.lower() in (".png", ".jpg", ".jpeg")
        )
        images = [channel.load_image(p) for p in paths]
    if not images:
        raise EmptyCorpusError("image corpus is empty")
    fitted = []
    for img in images:
        h, w = img.shape[:2]
        if h < embed_cfg.height or w < embed_cfg.width:
            raise channel.ImageTooSmallError(
                f"corpus image is {w}x{h}, below the embed geometry "
                f"{embed_cfg.width}x{embed_cfg.height}"
            )
        y0 = (h - embed_cfg.height) // 2
        x0 = (w - embed_cfg.width) // 2
        fitted.append(img[y0 : y0 + embed_cfg.height, x0 : x0 + embed_cfg.width])
    return fitted


def _resize_to(img: np.ndarray, width: int, height: int) -> np.ndarray:
    from PIL import Image

    return np.asarray(Image.fromarray(img).resize((width, height), Image.BILINEAR))


def _run_image(
    cfg: ExperimentConfig,
    params: bch.BchParams,
    attack_chains: list[tuple[attacks_mod.AttackSpec, ...]],
) -> list[TrialReport]:
    """Image-channel engine; evaluates each attack chain on shared embeddings.

    Each chain sees exactly the per-trial random streams it would see in a
    standalone run, so a battery row equals the corresponding single-chain
    experiment.
    """
    embed_cfg = dataclasses.replace(cfg.embed, codeword_len=params.n)
    corpus = _load_corpus(cfg)
    registry, user_ids, fingerprints, codewords = _build_population(cfg, params)
    tallies = [_Tally(params) for _ in attack_chains]

    for i in range(cfg.trials):
        pick = np.random.default_rng([cfg.seed, i, 0])
        u = int(pick.integers(0, cfg.registry_size))
        img_i = int(pick.integers(0, len(corpus)))
        original = corpus[img_i]
        transmitted = codewords[u]
        marked = channel.embed(original, transmitted, embed_cfg)

        psnr_val = ssim_val = None
        if cfg.image_quality:
            psnr_val = metrics.psnr(original, marked)
            ssim_val = metrics.ssim(original, marked)

        for chain, tally in zip(attack_chains, tallies):
            attack_rng = np.random.default_rng([cfg.seed, i, 1])
            attacked = marked
            for spec in chain:
                attacked = attacks_mod.apply(attacked, spec, attack_rng)
            if cfg.crop_mode == "resize_back" and attacked.shape[:2] != marked.shape[:2]:
                attacked = _resize_to(attacked, embed_cfg.width, embed_cfg.height)
            received, confidences = channel.extract(attacked, embed_cfg)
            result = registry.attribute(received, params)
            tally.add(
                fingerprints[u],
                user_ids[u],
                transmitted,
                received,
                result,
                psnr_val=psnr_val,
                ssim_val=ssim_val,
                confidence=float(np.mean(confidences)),
            )

    reports = []
    for chain, tally in zip(attack_chains, tallies):
        chain_cfg = dataclasses.replace(cfg, attacks=chain)
        strength = chain[0].strength if len(chain) == 1 else None
        reports.append(tally.report(chain_cfg, strength))
    return reports


def run_attack_battery(
    cfg: ExperimentConfig, specs: Sequence[attacks_mod.AttackSpec]
) -> list[TrialReport]:
    """One report per attack, all evaluated on the same embedded images."""
    params = bch.build_params(cfg.code_m, cfg.code_t, cfg.payload_len)
    if cfg.channel_type != "image":
        raise ValueError("the attack battery needs the image channel")
    return _run_image(cfg, params, [(spec,) for spec in specs])


@dataclass
class SweepReport:
    family: str
    strengths: list[float]
    reports: list[TrialReport]

    def to_metric_rows(self) -> list[metrics.MetricRow]:
        rows = []
        for report in self.reports:
            rows.extend(report.to_metric_rows())
        return rows

    def to_json_dict(self) -> dict:
        return {
            "family": self.family,
            "strengths": self.strengths,
            "reports": [r.to_json_dict() for r in self.reports],
        }


def run_attack_sweep(
    cfg: ExperimentConfig, family: str, strengths: Sequence[float]
) -> SweepReport:
    """One experiment per strength, rows ordered by strength.

    All strengths share the per-trial embeddings, so a single-strength
    sweep row is identical to the corresponding standalone experiment.
    """
    if cfg.channel_type != "image":
        raise ValueError("attack sweeps need the image channel")
    ordered = sorted(strengths)
    grid = attacks_mod.attack_grid(family, ordered)
    params = bch.build_params(cfg.code_m, cfg.code_t, cfg.payload_len)
    reports = _run_image(cfg, params, [(spec,) for spec in grid])
    return SweepReport(family=family, strengths=list(ordered), reports=reports)


# ---------------------------------------------------------------------------
# synthetic corpus
# ---------------------------------------------------------------------------

def synthetic_corpus(count: int = 16, size: int = 512, seed: int = 0) -> list[np.ndarray]:
    """Deterministic RGB test images: gradients, plaids, smooth noise fields.

    Values stay inside [8, 248] so mid-frequency structure survives the
    8-bit clamp; chroma is kept smooth so 4:2:0 JPEG does not dominate
    quality comparisons.
    """
    from scipy.ndimage import gaussian_filter

    images = []
    yy, xx = np.mgrid[0:size, 0:size].astype(np.float64) / size
    for i in range(count):
        rng = np.random.default_rng([seed, i])
        style = i % 4
        img = np.empty((size, size, 3))
        if style == 0:  # directional gradient
            angle = rng.uniform(0, 2 * np.pi)
            g = (np.cos(angle) * xx + np.sin(angle) * yy + 1.5) / 3.0
            lo = rng.uniform(20, 80, size=3)
            hi = rng.uniform(160, 230, size=3)
            img = lo + (hi - lo) * g[..., None]
        elif style == 1:  # radial blend
            cx, cy = rng.uniform(0.3, 0.7, size=2)
            r = np.sqrt((xx - cx) ** 2 + (yy - cy) ** 2)
            r = r / r.max()
            inner = rng.uniform(150, 230, size=3)
            outer = rng.uniform(20, 100, size=3)
            img = inner + (outer - inner) * r[..., None]
        elif style == 2:  # plaid
            fx, fy = rng.integers(2, 9, size=2)
            px, py = rng.uniform(0, 2 * np.pi, size=2)
            wave = np.sin(2 * np.pi * fx * xx + px) + np.sin(2 * np.pi * fy * yy + py)
            base = rng.uniform(90, 160, size=3)
            amp = rng.uniform(25, 55, size=3)
            img = base + amp * (wave / 2.0)[..., None]
        else:  # multi-scale smooth noise
            f = np.zeros((size, size))
            for sigma, weight in ((32, 1.0), (12, 0.6), (5, 0.3)):
                f += weight * gaussian_filter(rng.normal(0, 1, (size, size)), sigma)
            f = (f - f.min()) / (f.max() - f.min())
            lo = rng.uniform(20, 60, size=3)
            hi = rng.uniform(180, 235, size=3)
            img = lo + (hi - lo) * f[..., None]
        images.append(np.clip(np.rint(img), 8, 248).astype(np.uint8))
    return images


def save_corpus(out_dir: str | Path, count: int = 16, size: int = 512, seed: int = 0) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for i, img in enumerate(synthetic_corpus(count, size, seed)):
        path = out / f"synthetic-{i:03d}.png"
        channel.save_image(img, path)
        paths.append(path)
    return paths


# ---------------------------------------------------------------------------
# output files
# ---------------------------------------------------------------------------

def write_experiment_outputs(
    report: TrialReport, cfg: ExperimentConfig, out_dir: str | Path
) -> dict[str, Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    stem = f"experiment_{cfg.config_hash()}"
    csv_path = out / f"{stem}.csv"
    json_path = out / f"{stem}.json"
    metrics.write_csv(report.to_metric_rows(), csv_path)
    payload = {
        "config": cfg.to_dict(),
        "config_hash": cfg.config_hash(),
        "channel_note": CHANNEL_NOTES[cfg.channel_type],
        "report": report.to_json_dict(),
    }
    json_path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    return {"csv": csv_path, "json": json_path}


def write_sweep_outputs(
    sweep: SweepReport, cfg: ExperimentConfig, out_dir: str | Path
) -> dict[str, Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    stem = f"sweep_{sweep.family}_{cfg.config_hash()}"
    csv_path = out / f"{stem}.csv"
    json_path = out / f"{stem}.json"
    svg_path = out / f"{stem}.svg"
    metrics.write_csv(sweep.to_metric_rows(), csv_path)
    payload = {
        "config": cfg.to_dict(),
        "config_hash": cfg.config_hash(),
        "channel_note": CHANNEL_NOTES[cfg.channel_type],
        "sweep": sweep.to_json_dict(),
    }
    json_path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    plot_sweep(sweep, svg_path)
    return {"csv": csv_path, "json": json_path, "svg": svg_path}


def plot_sweep(sweep: SweepReport, path: str | Path) -> None:
    """Accuracy and FER vs attack strength, one series per method/mode."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    xs = [r.strength for r in sweep.reports]
    fig, (ax_acc, ax_fer) = plt.subplots(1, 2, figsize=(10, 4))

    ax_acc.plot(xs, [r.raw_bit_acc for r in sweep.reports], "o-", label="raw bit acc")
    ax_acc.plot(
        xs,
        [r.phi_bit_acc if r.phi_bit_acc is not None else float("nan") for r in sweep.reports],
        "s-",
        label="decoded bit acc",
    )
    ax_acc.set_xlabel(f"{sweep.family} strength")
    ax_acc.set_ylabel("bit accuracy")
    ax_acc.set_ylim(-0.02, 1.02)
    ax_acc.grid(True, alpha=0.3)
    ax_acc.legend()

    ax_fer.plot(xs, [r.raw_fer for r in sweep.reports], "o-", label="raw FER")
    ax_fer.plot(xs, [r.fer_flagged for r in sweep.reports], "s-", label="FER (flagged)")
    ax_fer.plot(xs, [r.fer_reference for r in sweep.reports], "^-", label="FER (reference)")
    ax_fer.set_xlabel(f"{sweep.family} strength")
    ax_fer.set_ylabel("fingerprint error rate")
    ax_fer.grid(True, alpha=0.3)
    ax_fer.legend()

    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
