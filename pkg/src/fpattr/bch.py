"""Systematic binary BCH codec with clean / corrected / uncorrectable reporting.

Narrow-sense code: the generator polynomial is the lcm of the minimal
polynomials of alpha^1 .. alpha^2t.  Codeword bit i is the coefficient of
x^i.  Layout of an n-bit codeword (low index to high):

    [0 .. n-k-1]              parity
    [n-k .. n-payload_len-1]  shortened message bits, always zero
    [n-payload_len .. n-1]    payload (the fingerprint)

The shortened positions double as an integrity check: a received word that
decodes onto a codeword with nonzero bits there is reported uncorrectable.
Decoding is syndrome based: Berlekamp-Massey for the error locator, Chien
search for its roots.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

from .bits import Bits
from .gf2m import FieldContext, build_field, minimal_polynomial, poly_degree, poly_mod_gf2, poly_mul_gf2


class InvalidParamsError(ValueError):
    """Requested BCH parameters are unsatisfiable."""


class WrongLengthError(ValueError):
    """A bit string with the wrong width was passed to the codec."""


class RootCountMismatchError(Exception):
    """Chien search found fewer roots than the locator degree (internal)."""


class DecodeStatus(Enum):
    CLEAN = "clean"
    CORRECTED = "corrected"
    UNCORRECTABLE = "uncorrectable"


@dataclass(frozen=True, slots=True)
class DecodeOutcome:
    """Decoder self-report: whether and how the word was repaired."""

    status: DecodeStatus
    error_count: int = 0
    positions: tuple[int, ...] = ()

    @classmethod
    def clean(cls) -> "DecodeOutcome":
        return cls(DecodeStatus.CLEAN)

    @classmethod
    def corrected(cls, positions: Sequence[int]) -> "DecodeOutcome":
        pos = tuple(sorted(positions))
        return cls(DecodeStatus.CORRECTED, error_count=len(pos), positions=pos)

    @classmethod
    def uncorrectable(cls) -> "DecodeOutcome":
        return cls(DecodeStatus.UNCORRECTABLE)

    @property
    def is_decodable(self) -> bool:
        return self.status is not DecodeStatus.UNCORRECTABLE

    def describe(self) -> str:
        if self.status is DecodeStatus.CORRECTED:
            return f"corrected:{self.error_count}"
        return self.status.value


@dataclass(frozen=True, slots=True)
class BchParams:
    """A fully constructed BCH(n, k) code shortened to payload_len bits."""

    m: int
    n: int
    k: int
    t: int
    payload_len: int
    generator_poly: int
    fld: FieldContext = field(repr=False)
    # per-position syndrome contributions, all 2t m-bit syndromes packed
    # into one int per codeword position (lane j-1 holds alpha^(j*i))
    syndrome_pack: tuple[int, ...] = field(repr=False, compare=False)

    @property
    def hex_digits(self) -> int:
        return (self.n + 3) // 4


def build_params(
    m: int, t: int, payload_len: int, primitive_poly: int | None = None
) -> BchParams:
    """Construct the narrow-sense BCH code over GF(2^m) correcting t errors."""
    if t < 1:
        raise InvalidParamsError(f"t must be >= 1, got {t}")
    fld = build_field(m, primitive_poly)
    n = fld.order

    generator = 1
    seen: set[int] = set()
    for j in range(1, 2 * t + 1):
        mp = minimal_polynomial(fld.alpha_pow(j), fld)
        if mp not in seen:
            seen.add(mp)
            generator = poly_mul_gf2(generator, mp)

    k = n - poly_degree(generator)
    if k < 1:
        raise InvalidParamsError(f"t={t} leaves no message bits in a length-{n} code")
    if not 1 <= payload_len <= k:
        raise InvalidParamsError(f"payload_len must be in [1, {k}], got {payload_len}")

    pack = []
    for i in range(n):
        word = 0
        for j in range(1, 2 * t + 1):
            word |= fld.alpha_pow(j * i) << ((j - 1) * m)
        pack.append(word)

    return BchParams(
        m=m,
        n=n,
        k=k,
        t=t,
        payload_len=payload_len,
        generator_poly=generator,
        fld=fld,
        syndrome_pack=tuple(pack),
    )


def encode(payload: Bits, params: BchParams) -> Bits:
    """Systematic codeword for a payload.

    The payload fills the top payload_len message positions; the remaining
    k - payload_len message bits are the shortened zeros.  Parity is the
    remainder of x^(n-k) * m(x) modulo the generator, so the output is
    divisible by the generator.
    """
    if payload.width != params.payload_len:
        raise WrongLengthError(
            f"payload must be {params.payload_len} bits, got {payload.width}"
        )
    data = payload.value << (params.n - params.payload_len)
    parity = poly_mod_gf2(data, params.generator_poly)
    return Bits(data ^ parity, params.n)


def compute_syndromes(received: Bits, params: BchParams) -> tuple[int, ...]:
    """S_j = r(alpha^j) for j = 1..2t; all zero iff received is a codeword."""
    if received.width != params.n:
        raise WrongLengthError(f"received word must be {params.n} bits, got {received.width}")
    packed = 0
    v = received.value
    pack = params.syndrome_pack
    while v:
        i = (v & -v).bit_length() - 1
        packed ^= pack[i]
        v &= v - 1
    mask = (1 << params.m) - 1
    return tuple((packed >> ((j - 1) * params.m)) & mask for j in range(1, 2 * params.t + 1))


def solve_error_locator(syndromes: Sequence[int], fld: FieldContext) -> tuple[int, ...]:
    """Berlekamp-Massey: minimal LFSR polynomial for the syndrome sequence.

    Returns locator coefficients lowest degree first, constant term 1.  A
    result of degree > t (judged by the caller) signals likely
    uncorrectable corruption.
    """
    c = [1]
    prev = [1]
    length = 0
    gap = 1
    prev_disc = 1
    for i, s in enumerate(syndromes):
        disc = s
        for j in range(1, length + 1):
            if j < len(c) and c[j] and syndromes[i - j]:
                disc ^= fld.mul(c[j], syndromes[i - j])
        if disc == 0:
            gap += 1
            continue
        coef = fld.div(disc, prev_disc)
        if 2 * length <= i:
            saved = c[:]
            if len(c) < len(prev) + gap:
                c.extend([0] * (len(prev) + gap - len(c)))
            for j, pj in enumerate(prev):
                if pj:
                    c[j + gap] ^= fld.mul(coef, pj)
            length = i + 1 - length
            prev = saved
            prev_disc = disc
            gap = 1
        else:
            if len(c) < len(prev) + gap:
                c.extend([0] * (len(prev) + gap - len(c)))
            for j, pj in enumerate(prev):
                if pj:
                    c[j + gap] ^= fld.mul(coef, pj)
            gap += 1
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return tuple(c)


def find_error_positions(locator: Sequence[int], params: BchParams) -> tuple[int, ...]:
    """Chien search: positions i with locator(alpha^-i) = 0.

    Raises RootCountMismatchError when the number of roots among the n
    positions differs from the locator degree; decode maps that to
    Uncorrectable.
    """
    fld = params.fld
    n = params.n
    deg = len(locator) - 1
    if deg == 0:
        return ()
    if deg == 1:
        # single root x = 1/lambda_1 = alpha^-i, i.e. i = log(lambda_1)
        return (fld.log[locator[1]],)

    # terms[j] tracks locator[j] * alpha^(-i*j); step j multiplies by alpha^-j
    terms = list(locator)
    steps = [fld.alpha_pow(-j) for j in range(deg + 1)]
    positions = []
    for i in range(n):
        acc = 0
        for j in range(deg + 1):
            acc ^= terms[j]
        if acc == 0:
            positions.append(i)
        for j in range(1, deg + 1):
            terms[j] = fld.mul(terms[j], steps[j])
    if len(positions) != deg:
        raise RootCountMismatchError(f"{len(positions)} roots for degree-{deg} locator")
    return tuple(positions)


def decode(received: Bits, params: BchParams) -> tuple[Bits | None, DecodeOutcome]:
    """Detect, correct, and report corruption in a received word.

    Returns (payload, outcome).  The payload is None exactly when the
    outcome is Uncorrectable: more than t errors, a root-count mismatch, a
    failed post-correction syndrome check, or a nonzero shortened region.
    """
    if received.width != params.n:
        raise WrongLengthError(f"received word must be {params.n} bits, got {received.width}")

    syndromes = compute_syndromes(received, params)
    if any(syndromes):
        locator = solve_error_locator(syndromes, params.fld)
        if len(locator) - 1 > params.t:
            return None, DecodeOutcome.uncorrectable()
        try:
            positions = find_error_positions(locator, params)
        except RootCountMismatchError:
            return None, DecodeOutcome.uncorrectable()
        candidate = received.flip(*positions)
        if any(compute_syndromes(candidate, params)):
            return None, DecodeOutcome.uncorrectable()
        outcome = DecodeOutcome.corrected(positions)
    else:
        candidate = received
        outcome = DecodeOutcome.clean()

    shortened_width = params.k - params.payload_len
    if shortened_width and (candidate.value >> (params.n - params.k)) & ((1 << shortened_width) - 1):
        return None, DecodeOutcome.uncorrectable()

    payload = Bits(candidate.value >> (params.n - params.payload_len), params.payload_len)
    return payload, outcome
