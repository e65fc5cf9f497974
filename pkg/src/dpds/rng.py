"""Deterministic splittable random streams.

Every stream is identified by a 16-byte BLAKE2b digest.  Child streams are
derived by hashing the parent digest together with a typed key, so a stream
reached via the same (seed, key path) always yields the same draws, no matter
in which order siblings are created or consumed.  That property is what lets
per-node sampling run under any scheduling and still be reproducible, and
what lets two different executions of the same algorithm (for example an
in-process run and a simulated map-reduce run) consume identical randomness.

Uniforms are generated in counter mode: block ``b`` of a stream is the
64-byte BLAKE2b hash of ``digest || b``, read as eight 53-bit mantissas.
Scalar and vector draws walk the same counter, so they interleave freely.
"""

from __future__ import annotations

import hashlib
import struct

import numpy as np

_SUB_PERSON = b"dpds-substream"
_BLK_PERSON = b"dpds-u64block"
_DIGEST_SIZE = 16
_BLOCK_WORDS = 8
# (w >> 11) keeps 53 bits; the half-unit offset keeps draws inside (0, 1).
_TO_UNIT = 2.0 ** -53
_HALF = 0.5


def _encode_key_part(part) -> bytes:
    if isinstance(part, bool):
        raise TypeError("bool key parts are ambiguous; use int 0/1 explicitly")
    if isinstance(part, int):
        return b"i" + part.to_bytes(16, "big", signed=True)
    if isinstance(part, float):
        return b"f" + struct.pack(">d", part)
    if isinstance(part, str):
        raw = part.encode("utf-8")
        return b"s" + struct.pack(">I", len(raw)) + raw
    if isinstance(part, bytes):
        return b"b" + struct.pack(">I", len(part)) + part
    raise TypeError(f"unsupported key part type: {type(part).__name__}")


class RngStream:
    """A deterministic stream of uniforms with cheap keyed substreams.

    Args:
        seed: master seed (int, str, or bytes).  Two streams built from the
            same seed are identical; substreams with equal key paths match
            draw for draw.
    """

    __slots__ = ("_digest", "_index", "_block", "_block_no")

    def __init__(self, seed=0):
        if isinstance(seed, RngStream):
            raise TypeError("seed must be int, str, or bytes, not RngStream")
        digest = hashlib.blake2b(
            _encode_key_part(seed), digest_size=_DIGEST_SIZE, person=b"dpds-root"
        ).digest()
        self._init_from_digest(digest)

    def _init_from_digest(self, digest: bytes) -> None:
        self._digest = digest
        self._index = 0
        self._block = None
        self._block_no = -1

    @classmethod
    def _from_digest(cls, digest: bytes) -> "RngStream":
        obj = cls.__new__(cls)
        obj._init_from_digest(digest)
        return obj

    def substream(self, *key) -> "RngStream":
        """Derive the child stream for ``key`` (ints, floats, strs, bytes)."""
        h = hashlib.blake2b(self._digest, digest_size=_DIGEST_SIZE, person=_SUB_PERSON)
        for part in key:
            h.update(_encode_key_part(part))
        return RngStream._from_digest(h.digest())

    def token(self) -> int:
        """Stable 63-bit identity of this stream, for logging and seeding."""
        return int.from_bytes(self._digest[:8], "big") >> 1

    def _block_words(self, block_no: int) -> np.ndarray:
        if block_no != self._block_no:
            raw = hashlib.blake2b(
                self._digest + block_no.to_bytes(8, "big"),
                digest_size=64,
                person=_BLK_PERSON,
            ).digest()
            self._block = np.frombuffer(raw, dtype=">u8")
            self._block_no = block_no
        return self._block

    def uniform(self) -> float:
        """One draw from the open interval (0, 1)."""
        j = self._index
        self._index = j + 1
        word = int(self._block_words(j >> 3)[j & 7])
        return ((word >> 11) + _HALF) * _TO_UNIT

    def uniforms(self, count: int) -> np.ndarray:
        """``count`` draws from (0, 1), continuing the scalar counter."""
        if count < 0:
            raise ValueError(f"count must be >= 0, got {count}")
        if count == 0:
            return np.empty(0, dtype=np.float64)
        start = self._index
        self._index = start + count
        first = start >> 3
        last = (start + count - 1) >> 3
        if first == last:
            words = self._block_words(first)
        else:
            words = np.concatenate(
                [self._block_words(b) for b in range(first, last + 1)]
            )
        offset = start & 7
        out = words[offset : offset + count].astype(np.uint64)
        return ((out >> np.uint64(11)) + _HALF) * _TO_UNIT

    def generator(self) -> np.random.Generator:
        """A numpy Generator seeded from this stream's identity.

        Intended for bulk, non-replayed sampling such as graph generation;
        the keyed uniform draws above stay untouched by its use.
        """
        return np.random.default_rng(int.from_bytes(self._digest, "big"))

    def __repr__(self) -> str:
        return f"RngStream(token={self.token():#x})"
