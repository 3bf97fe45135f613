"""User fingerprint lifecycle: assignment, persistence, attribution.

Each registered user holds a unique random fingerprint.  Attribution runs
the codec on a received word and maps the recovered payload back to a user,
flagging non-identifiable results instead of guessing.  The registry
persists as JSON lines (user_id, hex fingerprint, ISO-8601 timestamp):
append-friendly, diff-friendly, parseable anywhere.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path

from . import bch
from .bits import Bits

DEFAULT_FINGERPRINT_LEN = 32
MAX_ASSIGN_RETRIES = 64


class DuplicateUserError(ValueError):
    """The user_id is already registered."""


class FingerprintSpaceExhaustedError(RuntimeError):
    """No unused fingerprint was found within the retry bound."""


class FormatError(ValueError):
    """A registry file is corrupt or truncated."""


@dataclass(frozen=True, slots=True)
class UserRecord:
    user_id: str
    fingerprint: Bits
    created_at: str


class Verdict(Enum):
    ATTRIBUTED = "attributed"
    FLAGGED_UNCORRECTABLE = "flagged_uncorrectable"
    FLAGGED_UNREGISTERED = "flagged_unregistered"


@dataclass(frozen=True, slots=True)
class AttributionResult:
    """Outcome of mapping a received word back to a user.

    ``fingerprint`` is the decoded payload whenever decoding succeeded
    (even for unregistered hits); None when uncorrectable.  The decode
    outcome is retained as an audit trail so operators can monitor how many
    corrections the channel is costing.
    """

    verdict: Verdict
    user_id: str | None
    fingerprint: Bits | None
    outcome: bch.DecodeOutcome

    @property
    def is_flagged(self) -> bool:
        return self.verdict is not Verdict.ATTRIBUTED


class FingerprintRegistry:
    """In-memory registry of user fingerprints.

    Reads are safe concurrently; mutations assume a single writer.
    """

    def __init__(self, fingerprint_len: int = DEFAULT_FINGERPRINT_LEN):
        if fingerprint_len < 1:
            raise ValueError("fingerprint_len must be >= 1")
        self.fingerprint_len = fingerprint_len
        self._records: dict[str, UserRecord] = {}
        self._by_value: dict[int, str] = {}

    def __len__(self) -> int:
        return len(self._records)

    def __contains__(self, user_id: str) -> bool:
        return user_id in self._records

    def records(self) -> list[UserRecord]:
        return list(self._records.values())

    def get(self, user_id: str) -> UserRecord:
        return self._records[user_id]

    def lookup(self, fingerprint: Bits) -> str | None:
        """user_id owning a fingerprint, or None."""
        if fingerprint.width != self.fingerprint_len:
            return None
        return self._by_value.get(fingerprint.value)

    def assign(
        self,
        user_id: str,
        rng: random.Random | None = None,
        seed: int | None = None,
    ) -> UserRecord:
        """Register user_id with a fresh Bernoulli(0.5) fingerprint.

        Reproducible when given a seed or seeded rng; resamples on
        collision up to MAX_ASSIGN_RETRIES before declaring the space
        exhausted.
        """
        if user_id in self._records:
            raise DuplicateUserError(f"user {user_id!r} already registered")
        if rng is None:
            rng = random.Random(seed)
        if len(self._records) >= (1 << self.fingerprint_len):
            raise FingerprintSpaceExhaustedError(
                f"all 2^{self.fingerprint_len} fingerprints are taken"
            )
        for _ in range(MAX_ASSIGN_RETRIES):
            candidate = Bits.random(self.fingerprint_len, rng)
            if candidate.value not in self._by_value:
                return self._insert(user_id, candidate)
        raise FingerprintSpaceExhaustedError(
            f"no unused fingerprint after {MAX_ASSIGN_RETRIES} draws; "
            f"registry holds {len(self._records)} of 2^{self.fingerprint_len}"
        )

    def assign_sequential(self, user_id: str) -> UserRecord:
        """Deterministic lowest-unused-value assignment, for capacity tests."""
        if user_id in self._records:
            raise DuplicateUserError(f"user {user_id!r} already registered")
        for value in range(1 << self.fingerprint_len):
            if value not in self._by_value:
                return self._insert(user_id, Bits(value, self.fingerprint_len))
        raise FingerprintSpaceExhaustedError(
            f"all 2^{self.fingerprint_len} fingerprints are taken"
        )

    def _insert(self, user_id: str, fingerprint: Bits) -> UserRecord:
        record = UserRecord(
            user_id=user_id,
            fingerprint=fingerprint,
            created_at=datetime.now(timezone.utc).isoformat(timespec="seconds"),
        )
        self._records[user_id] = record
        self._by_value[fingerprint.value] = user_id
        self._check_unique()
        return record

    def _check_unique(self) -> None:
        # invariant: no two users share a fingerprint, no duplicate ids
        assert len(self._by_value) == len(self._records)

    def attribute(self, received: Bits, params: bch.BchParams) -> AttributionResult:
        """Decode a received word and attribute it to a registered user.

        Uncorrectable words and payloads absent from the registry are
        flagged, never attributed.
        """
        payload, outcome = bch.decode(received, params)
        if payload is None:
            return AttributionResult(Verdict.FLAGGED_UNCORRECTABLE, None, None, outcome)
        user_id = self.lookup(payload)
        if user_id is None:
            return AttributionResult(Verdict.FLAGGED_UNREGISTERED, None, payload, outcome)
        return AttributionResult(Verdict.ATTRIBUTED, user_id, payload, outcome)

    def save(self, path: str | Path) -> None:
        lines = []
        for record in self._records.values():
            lines.append(
                json.dumps(
                    {
                        "user_id": record.user_id,
                        "fingerprint": record.fingerprint.hex,
                        "created_at": record.created_at,
                    },
                    sort_keys=True,
                )
            )
        Path(path).write_text("\n".join(lines) + ("\n" if lines else ""))

    @classmethod
    def load(cls, path: str | Path, fingerprint_len: int = DEFAULT_FINGERPRINT_LEN) -> "FingerprintRegistry":
        registry = cls(fingerprint_len)
        text = Path(path).read_text()
        for lineno, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                user_id = obj["user_id"]
                fingerprint = Bits.from_hex(obj["fingerprint"], fingerprint_len)
                created_at = obj["created_at"]
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise FormatError(f"{path}:{lineno}: bad registry line: {exc}") from exc
            if user_id in registry._records or fingerprint.value in registry._by_value:
                raise FormatError(f"{path}:{lineno}: duplicate user or fingerprint")
            record = UserRecord(user_id=user_id, fingerprint=fingerprint, created_at=created_at)
            registry._records[user_id] = record
            registry._by_value[fingerprint.value] = user_id
        registry._check_unique()
        return registry
