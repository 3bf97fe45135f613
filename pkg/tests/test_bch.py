import itertools
import random

import pytest

from fpattr.bch import (
    DecodeStatus,
    InvalidParamsError,
    WrongLengthError,
    build_params,
    compute_syndromes,
    decode,
    encode,
    find_error_positions,
    solve_error_locator,
)
from fpattr.bits import Bits
from fpattr.gf2m import poly_degree, poly_mod_gf2

# Frozen generator polynomials (lowest degree first in the integer's bits);
# both match the published narrow-sense tables for these codes.
GEN_63_39 = 0o166623567
GEN_15_7 = 0b111010001  # x^8 + x^7 + x^6 + x^4 + 1


def all_codewords(params):
    return [encode(Bits(v, params.payload_len), params) for v in range(1 << params.payload_len)]


# ---------------------------------------------------------------------------
# parameter construction
# ---------------------------------------------------------------------------

def test_default_code_configuration(params63):
    assert (params63.n, params63.k, params63.t) == (63, 39, 4)
    assert params63.payload_len == 32
    assert poly_degree(params63.generator_poly) == 24 == params63.n - params63.k
    assert params63.generator_poly == GEN_63_39


def test_small_reference_code(params15):
    assert (params15.n, params15.k, params15.t) == (15, 7, 2)
    assert params15.generator_poly == GEN_15_7


def test_generator_has_the_designed_roots(params63, params15):
    for params in (params63, params15):
        for j in range(1, 2 * params.t + 1):
            assert params.fld.eval_poly(params.generator_poly, params.fld.alpha_pow(j)) == 0


def test_invalid_params():
    with pytest.raises(InvalidParamsError):
        build_params(6, 0, 32)
    with pytest.raises(InvalidParamsError):
        build_params(6, 4, 40)  # payload beyond k=39
    with pytest.raises(InvalidParamsError):
        build_params(6, 4, 0)
    with pytest.raises(InvalidParamsError):
        build_params(4, 4, 7)  # k collapses to 1
    with pytest.raises(InvalidParamsError):
        build_params(2, 2, 1)  # generator consumes the whole length


# ---------------------------------------------------------------------------
# encoding
# ---------------------------------------------------------------------------

def test_encode_zero_is_zero(params63):
    assert encode(Bits.zeros(32), params63) == Bits.zeros(63)


def test_encode_linearity(params63, params63_full):
    rng = random.Random(3)
    for params in (params63, params63_full):
        for _ in range(50):
            m1 = Bits.random(params.payload_len, rng)
            m2 = Bits.random(params.payload_len, rng)
            assert encode(m1, params) ^ encode(m2, params) == encode(m1 ^ m2, params)


def test_encode_output_divisible_by_generator(params63):
    rng = random.Random(4)
    for _ in range(100):
        cw = encode(Bits.random(32, rng), params63)
        assert poly_mod_gf2(cw.value, params63.generator_poly) == 0


def test_unit_messages_have_weight_at_least_9(params63_full):
    # minimum distance of the t=4 code is >= 2t+1 = 9
    for j in range(params63_full.payload_len):
        cw = encode(Bits(1 << j, 39), params63_full)
        assert cw.weight >= 9


def test_encode_systematic_layout(params63):
    rng = random.Random(5)
    payload = Bits.random(32, rng)
    cw = encode(payload, params63)
    # payload occupies the highest-index systematic positions
    assert cw.value >> (63 - 32) == payload.value
    # shortened message region between parity and payload is zero
    assert (cw.value >> 24) & ((1 << 7) - 1) == 0


def test_encode_rejects_wrong_width(params63):
    with pytest.raises(WrongLengthError):
        encode(Bits(0, 31), params63)


# ---------------------------------------------------------------------------
# syndromes
# ---------------------------------------------------------------------------

def test_syndromes_zero_on_codewords(params63):
    rng = random.Random(6)
    assert not any(compute_syndromes(Bits.zeros(63), params63))
    for _ in range(30):
        cw = encode(Bits.random(32, rng), params63)
        assert not any(compute_syndromes(cw, params63))


def test_syndromes_of_single_error(params63):
    rng = random.Random(7)
    for i in (0, 17, 40, 62):
        rx = encode(Bits.random(32, rng), params63).flip(i)
        syndromes = compute_syndromes(rx, params63)
        for j in range(1, 9):
            assert syndromes[j - 1] == params63.fld.alpha_pow(j * i)


def test_syndromes_match_direct_polynomial_evaluation(params63):
    # independent oracle: Horner evaluation of the received word at alpha^j
    rng = random.Random(8)
    for _ in range(20):
        rx = Bits.random(63, rng)
        syndromes = compute_syndromes(rx, params63)
        for j in range(1, 9):
            assert syndromes[j - 1] == params63.fld.eval_poly(rx.value, params63.fld.alpha_pow(j))


def test_cyclic_shifts_of_codewords_are_codewords(params63_full):
    rng = random.Random(9)
    cw = encode(Bits.random(39, rng), params63_full)
    v = cw.value
    for _ in range(63):
        v = ((v << 1) | (v >> 62)) & ((1 << 63) - 1)
        assert not any(compute_syndromes(Bits(v, 63), params63_full))
    assert v == cw.value


def test_xor_of_codewords_is_a_codeword(params63):
    rng = random.Random(10)
    for _ in range(30):
        c1 = encode(Bits.random(32, rng), params63)
        c2 = encode(Bits.random(32, rng), params63)
        assert not any(compute_syndromes(c1 ^ c2, params63))


# ---------------------------------------------------------------------------
# locator and positions
# ---------------------------------------------------------------------------

def test_locator_degree_matches_error_weight(params63):
    rng = random.Random(11)
    assert solve_error_locator((0,) * 8, params63.fld) == (1,)
    for w in range(1, 5):
        for _ in range(25):
            cw = encode(Bits.random(32, rng), params63)
            rx = cw.flip(*rng.sample(range(63), w))
            locator = solve_error_locator(compute_syndromes(rx, params63), params63.fld)
            assert len(locator) - 1 == w


def test_five_errors_usually_break_the_locator(params63):
    rng = random.Random(12)
    failures = 0
    trials = 300
    for _ in range(trials):
        cw = encode(Bits.random(32, rng), params63)
        rx = cw.flip(*rng.sample(range(63), 5))
        _, outcome = decode(rx, params63)
        if outcome.status is DecodeStatus.UNCORRECTABLE:
            failures += 1
    assert failures >= 0.9 * trials


def test_find_error_positions(params63):
    assert find_error_positions((1,), params63) == ()
    rng = random.Random(13)
    cw = encode(Bits.random(32, rng), params63)
    rx = cw.flip(3, 17)
    locator = solve_error_locator(compute_syndromes(rx, params63), params63.fld)
    assert sorted(find_error_positions(locator, params63)) == [3, 17]


# ---------------------------------------------------------------------------
# decode
# ---------------------------------------------------------------------------

def test_round_trip_clean(params63):
    rng = random.Random(14)
    for _ in range(100):
        phi = Bits.random(32, rng)
        payload, outcome = decode(encode(phi, params63), params63)
        assert payload == phi
        assert outcome.status is DecodeStatus.CLEAN
        assert outcome.positions == ()


def test_corrects_up_to_t_and_reports_positions(params63):
    rng = random.Random(15)
    for _ in range(100):
        phi = Bits.random(32, rng)
        cw = encode(phi, params63)
        for w in range(1, 5):
            positions = rng.sample(range(63), w)
            payload, outcome = decode(cw.flip(*positions), params63)
            assert payload == phi
            assert outcome.status is DecodeStatus.CORRECTED
            assert outcome.error_count == w
            assert outcome.positions == tuple(sorted(positions))


def test_weight_one_exhaustive(params63):
    rng = random.Random(16)
    phi = Bits.random(32, rng)
    cw = encode(phi, params63)
    for i in range(63):
        payload, outcome = decode(cw.flip(i), params63)
        assert payload == phi
        assert outcome.positions == (i,)


def test_beyond_t_is_flagged_or_measurably_miscorrected(params63):
    rng = random.Random(17)
    uncorrectable = miscorrected = 0
    trials = 400
    for _ in range(trials):
        phi = Bits.random(32, rng)
        cw = encode(phi, params63)
        w = rng.choice([5, 6, 7])
        payload, outcome = decode(cw.flip(*rng.sample(range(63), w)), params63)
        if outcome.status is DecodeStatus.UNCORRECTABLE:
            assert payload is None
            uncorrectable += 1
        else:
            # silent miscorrection onto another valid codeword: rate is
            # measured, never hidden
            assert outcome.error_count <= params63.t
            assert payload != phi
            miscorrected += 1
    assert uncorrectable + miscorrected == trials
    assert uncorrectable >= 0.9 * trials


def test_never_corrects_more_than_t(params63):
    rng = random.Random(18)
    uncorrectable = 0
    for _ in range(2000):
        _, outcome = decode(Bits.random(63, rng), params63)
        assert outcome.error_count <= params63.t
        if outcome.status is DecodeStatus.UNCORRECTABLE:
            uncorrectable += 1
    # random words are overwhelmingly uncorrectable (decodable density
    # is ~3e-4 with the shortening check)
    assert uncorrectable >= 0.99 * 2000


def test_shortened_region_acts_as_integrity_check(params63, params63_full):
    # a codeword of the full code with nonzero shortened-message bits is a
    # valid codeword, but not a legal transmission of the shortened code
    bad_message = Bits(0b1010101, 39)  # lives entirely in the shortened region
    cw = encode(bad_message, params63_full)
    assert not any(compute_syndromes(cw, params63))
    payload, outcome = decode(cw, params63)
    assert payload is None
    assert outcome.status is DecodeStatus.UNCORRECTABLE
    # still uncorrectable after a correctable-weight flip
    payload, outcome = decode(cw.flip(5), params63)
    assert payload is None


def test_decode_rejects_wrong_length(params63):
    with pytest.raises(WrongLengthError):
        decode(Bits(0, 62), params63)
    with pytest.raises(WrongLengthError):
        compute_syndromes(Bits(0, 64), params63)


def test_codeword_hex_interchange(params63):
    rng = random.Random(19)
    cw = encode(Bits.random(32, rng), params63)
    assert len(cw.hex) == params63.hex_digits == 16
    assert Bits.from_hex(cw.hex, params63.n) == cw


# ---------------------------------------------------------------------------
# small-code oracle: BCH(15,7,2)
# ---------------------------------------------------------------------------

def test_minimum_distance_of_small_code(params15):
    codewords = all_codewords(params15)
    dmin = min(
        a.hamming(b) for a, b in itertools.combinations(codewords, 2)
    )
    assert dmin >= 5


def test_small_code_decode_matches_brute_force_within_radius(params15):
    codewords = all_codewords(params15)
    patterns = [()] + [(i,) for i in range(15)] + list(itertools.combinations(range(15), 2))
    for value in (0, 1, 42, 85, 127):  # spot subset; acceptance runs all 128
        cw = codewords[value]
        for pattern in patterns:
            rx = cw.flip(*pattern)
            nearest = min(codewords, key=lambda c: c.hamming(rx))
            assert nearest == cw  # unique within radius 2 since dmin >= 5
            payload, outcome = decode(rx, params15)
            assert payload is not None
            assert encode(payload, params15) == cw
            assert outcome.error_count == len(pattern)


def test_small_code_weight3_decodes_are_consistent_with_brute_force(params15):
    # beyond-t behavior: anything the decoder accepts must genuinely lie
    # within distance t of the returned codeword
    rng = random.Random(20)
    codewords = all_codewords(params15)
    miscorrected = uncorrectable = 0
    for _ in range(300):
        cw = codewords[rng.randrange(128)]
        rx = cw.flip(*rng.sample(range(15), 3))
        payload, outcome = decode(rx, params15)
        if payload is None:
            uncorrectable += 1
        else:
            miscorrected += 1
            returned = encode(payload, params15)
            assert returned.hamming(rx) <= params15.t
            best = min(c.hamming(rx) for c in codewords)
            assert returned.hamming(rx) == best
    assert uncorrectable + miscorrected == 300
