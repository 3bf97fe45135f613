import math
import random

import numpy as np
import pytest

from fpattr import bch, metrics
from fpattr.attacks import AttackSpec, apply
from fpattr.bits import Bits
from fpattr.channel import (
    BscChannel,
    EmbedConfig,
    ImageTooSmallError,
    bsc_transmit,
    embed,
    extract,
    load_image,
    rgb_to_ycbcr,
    save_image,
    validate_image,
    ycbcr_to_rgb,
)


# ---------------------------------------------------------------------------
# binary symmetric channel
# ---------------------------------------------------------------------------

def test_bsc_p_zero_is_identity():
    chan = BscChannel(0.0, seed=1)
    word = Bits(0x123456789ABCDEF, 63)
    for _ in range(20):
        assert bsc_transmit(word, chan) == word


def test_bsc_p_one_flips_everything():
    chan = BscChannel(1.0, seed=1)
    word = Bits(0, 63)
    assert bsc_transmit(word, chan) == Bits((1 << 63) - 1, 63)


def test_bsc_seed_reproducible_bit_for_bit():
    a = BscChannel(0.3, seed=77)
    b = BscChannel(0.3, seed=77)
    word = Bits(0x5555555555555555 & ((1 << 63) - 1), 63)
    for _ in range(50):
        assert bsc_transmit(word, a) == bsc_transmit(word, b)


def test_bsc_rejects_bad_probability():
    with pytest.raises(ValueError):
        BscChannel(-0.1)
    with pytest.raises(ValueError):
        BscChannel(1.1)


def test_bsc_mean_flip_count_matches_binomial():
    # calibrated p: expected flips per 63-bit word is 63 * 0.0026
    p, trials = 0.0026, 100_000
    chan = BscChannel(p, seed=5)
    zero = Bits.zeros(63)
    total = sum(bsc_transmit(zero, chan).weight for _ in range(trials))
    mean = total / trials
    expectation = 63 * p
    sigma_of_mean = math.sqrt(63 * p * (1 - p) / trials)
    assert abs(mean - expectation) <= 3 * sigma_of_mean


def test_bsc_raw_fer_matches_independence_model():
    p, trials, width = 0.0026, 100_000, 32
    chan = BscChannel(p, seed=6)
    zero = Bits.zeros(width)
    corrupted = sum(1 for _ in range(trials) if bsc_transmit(zero, chan).value)
    observed = corrupted / trials
    model = 1 - (1 - p) ** width
    sigma = math.sqrt(model * (1 - model) / trials)
    assert abs(observed - model) <= 3 * sigma


# ---------------------------------------------------------------------------
# image plumbing
# ---------------------------------------------------------------------------

def test_validate_image_rejects_bad_arrays():
    with pytest.raises(ValueError):
        validate_image(np.zeros((8, 8), dtype=np.uint8))
    with pytest.raises(ValueError):
        validate_image(np.zeros((8, 8, 3), dtype=np.float64))


def test_png_round_trip(tmp_path, corpus):
    path = tmp_path / "img.png"
    save_image(corpus[0], path)
    assert np.array_equal(load_image(path), corpus[0])


def test_ycbcr_round_trip_is_within_rounding(corpus):
    img = corpus[1]
    back = ycbcr_to_rgb(*rgb_to_ycbcr(img))
    assert np.max(np.abs(back.astype(int) - img.astype(int))) <= 1


# ---------------------------------------------------------------------------
# embed / extract
# ---------------------------------------------------------------------------

def test_embed_extract_round_trip(corpus, embed_cfg, params63):
    rng = random.Random(0)
    for img in corpus[:4]:
        cw = bch.encode(Bits.random(32, rng), params63)
        marked = embed(img, cw, embed_cfg)
        assert marked.shape == img.shape
        assert marked.dtype == np.uint8
        got, confidence = extract(marked, embed_cfg)
        assert got == cw
        assert float(np.min(confidence)) == 1.0


def test_embed_quality_meets_psnr_target(corpus, embed_cfg, params63):
    rng = random.Random(1)
    for img in corpus[:4]:
        cw = bch.encode(Bits.random(32, rng), params63)
        assert metrics.psnr(img, embed(img, cw, embed_cfg)) >= 35.0


def test_embed_strength_zero_is_identity(corpus):
    cfg = EmbedConfig(strength=0.0, seed=7)
    cw = Bits.random(63, random.Random(2))
    out = embed(corpus[0], cw, cfg)
    assert np.array_equal(out, corpus[0])


def test_embed_leaves_chroma_channels_untouched(corpus, embed_cfg):
    img = corpus[2]
    cw = Bits.random(63, random.Random(3))
    marked = embed(img, cw, embed_cfg)
    _, cb0, cr0 = rgb_to_ycbcr(img)
    _, cb1, cr1 = rgb_to_ycbcr(marked)
    # chroma shifts only by the RGB re-quantization, never by the payload
    assert np.max(np.abs(cb1 - cb0)) <= 1.5
    assert np.max(np.abs(cr1 - cr0)) <= 1.5


def test_extract_survives_horizontal_flip(corpus, embed_cfg, params63):
    rng = random.Random(4)
    cw = bch.encode(Bits.random(32, rng), params63)
    marked = embed(corpus[3], cw, embed_cfg)
    flipped = apply(marked, AttackSpec("hflip"))
    got, _ = extract(flipped, embed_cfg)
    assert got == cw


def test_extract_survives_centered_crop(corpus, embed_cfg, params63):
    rng = random.Random(5)
    cw = bch.encode(Bits.random(32, rng), params63)
    marked = embed(corpus[0], cw, embed_cfg)
    cropped = apply(marked, AttackSpec("crop", 0.2))
    assert cropped.shape[0] < 512
    got, _ = extract(cropped, embed_cfg)
    assert got == cw


def test_extract_on_unmarked_images_has_low_confidence(corpus, embed_cfg, params63):
    uncorrectable = 0
    for img in corpus:
        codeword, confidence = extract(img, embed_cfg)
        assert float(np.mean(confidence)) < 0.5
        _, outcome = bch.decode(codeword, params63)
        if outcome.status is bch.DecodeStatus.UNCORRECTABLE:
            uncorrectable += 1
    assert uncorrectable >= len(corpus) - 1


def test_embed_requires_capacity():
    img = np.full((64, 64, 3), 128, dtype=np.uint8)
    cfg = EmbedConfig(width=64, height=64, seed=1)  # 64 blocks < 63*65
    with pytest.raises(ImageTooSmallError):
        embed(img, Bits.random(63, random.Random(6)), cfg)
    # shrinking redundancy makes it fit
    small = EmbedConfig(width=64, height=64, redundancy=1, seed=1)
    cw = Bits.random(63, random.Random(7))
    got, _ = extract(embed(img, cw, small), small)
    assert got == cw


def test_embed_geometry_must_match_config(corpus, embed_cfg):
    cw = Bits.random(63, random.Random(8))
    with pytest.raises(ImageTooSmallError):
        embed(corpus[0][:256, :256], cw, embed_cfg)
    big = np.zeros((600, 600, 3), dtype=np.uint8)
    with pytest.raises(ValueError):
        embed(big, cw, embed_cfg)


def test_embed_config_sidecar_round_trip(tmp_path):
    cfg = EmbedConfig(width=256, height=256, strength=12.5, redundancy=3, codeword_len=63, seed=99)
    path = tmp_path / "embed.json"
    cfg.save(path)
    assert EmbedConfig.load(path) == cfg
    assert EmbedConfig.from_json(cfg.to_json()) == cfg


def test_embed_config_validation():
    with pytest.raises(ValueError):
        EmbedConfig(redundancy=0)
    with pytest.raises(ValueError):
        EmbedConfig(strength=-1.0)
    with pytest.raises(ValueError):
        EmbedConfig(block_size=4)
