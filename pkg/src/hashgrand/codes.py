"""Systematic codes whose parity part is a digest of the message.

Four families share one interface:

``sha1`` / ``sha256``
    parity = the first ``n - k`` bits of the standard hash of the message
    bytes (``ceil(k/8)`` bytes, zero padded in the last byte).
``srlc``
    systematic random linear code: parity = ``m @ P`` over GF(2) for a
    seeded i.i.d. Bernoulli(1/2) matrix ``P`` of shape ``k x (n-k)``.
``srnlc``
    systematic random non-linear code: parity drawn from a seeded random
    oracle stand-in, memoized per message.
"""
import hashlib
import threading
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .bits import BitVector, bits_to_bytes, bytes_to_bits, concat, pack_words, split, unpack_words

FAMILIES = ("sha1", "sha256", "srlc", "srnlc")
DIGEST_BITS = {"sha1": 160, "sha256": 256}
_FAMILY_ID = {"sha1": _kernels.SHA1, "sha256": _kernels.SHA256,
              "srlc": _kernels.SRLC, "srnlc": _kernels.SRNLC}
# the random families are bounded by the widest hash so all four stay comparable
MAX_PARITY_BITS = 256


class CodeConfigError(ValueError):
    """Invalid code parameters (dimensions, family, digest size)."""


def sha_digest(m, variant, out_len):
    """First ``out_len`` bits of SHA-1/SHA-256 over the packed message bytes."""
    if variant not in DIGEST_BITS:
        raise CodeConfigError(f"unknown hash variant {variant!r}")
    if not 0 <= out_len <= DIGEST_BITS[variant]:
        raise CodeConfigError(
            f"{variant} yields {DIGEST_BITS[variant]} bits, {out_len} requested")
    digest = hashlib.new(variant, bits_to_bytes(m)).digest()
    return bytes_to_bits(digest)[:out_len]


def _derive_key(seed):
    return np.uint64(np.random.SeedSequence(seed).generate_state(1, dtype=np.uint64)[0])


@dataclass
class RlcParity:
    """Parity matrix of a systematic random linear code."""

    matrix: np.ndarray
    seed: int | None = None

    def __post_init__(self):
        self.matrix = np.array(self.matrix, dtype=np.uint8) & 1
        self.matrix.setflags(write=False)
        if self.matrix.ndim != 2:
            raise CodeConfigError("parity matrix must be 2-D")
        # rows packed as MSB-first words for the search kernel
        self.row_words = np.stack([pack_words(BitVector(row)) for row in self.matrix]) \
            if self.matrix.shape[0] else np.zeros((0, 1), dtype=np.uint64)

    @classmethod
    def random(cls, k, r, seed):
        rng = np.random.default_rng(seed)
        return cls(rng.integers(0, 2, size=(k, r), dtype=np.uint8), seed)

    @property
    def shape(self):
        return self.matrix.shape


def srlc_parity(m, parity):
    """``m @ P`` over GF(2)."""
    k, r = parity.shape
    if len(m) != k:
        raise CodeConfigError(f"message has {len(m)} bits, parity matrix expects {k}")
    prod = m.bits.astype(np.int64) @ parity.matrix.astype(np.int64)
    return BitVector(prod & 1)


class RandomOracleTable:
    """Memoized random function from k-bit messages to ``out_len``-bit digests.

    A digest is produced on first query and remembered; later queries for
    the same message return it unchanged. Fresh digests come from a keyed
    pseudorandom function of (seed, message), so a digest never depends on
    the order of queries and separate processes built from the same seed
    agree without sharing the table.
    """

    def __init__(self, k, out_len, seed):
        if out_len > MAX_PARITY_BITS:
            raise CodeConfigError(f"oracle output limited to {MAX_PARITY_BITS} bits")
        self.k = k
        self.out_len = out_len
        self.seed = seed
        self.key = _derive_key(seed)
        self.memo = {}
        self._lock = threading.Lock()

    def _draw(self, m):
        out = np.zeros((self.out_len + 63) // 64, dtype=np.uint64)
        _kernels.oracle_prf(pack_words(m), self.k, self.key, out)
        return unpack_words(out, self.out_len)

    def query(self, m):
        if len(m) != self.k:
            raise CodeConfigError(f"message has {len(m)} bits, oracle expects {self.k}")
        with self._lock:
            digest = self.memo.get(m)
            if digest is None:
                digest = self.memo[m] = self._draw(m)
        return digest

    def __len__(self):
        return len(self.memo)

    def __getstate__(self):
        state = self.__dict__.copy()
        del state["_lock"]
        return state

    def __setstate__(self, state):
        self.__dict__.update(state)
        self._lock = threading.Lock()


def srnlc_digest(m, table):
    return table.query(m)


@dataclass(eq=False)
class SystematicCode:
    """A systematic ``(n, k)`` code: codeword = message followed by its digest."""

    family: str
    k: int
    n: int
    seed: int = 0
    parity: RlcParity | None = field(default=None, repr=False)
    oracle: RandomOracleTable | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise CodeConfigError(f"unknown family {self.family!r}; choose from {FAMILIES}")
        if not 0 < self.k < self.n:
            raise CodeConfigError(f"need 0 < k < n, got k={self.k}, n={self.n}")
        limit = DIGEST_BITS.get(self.family, MAX_PARITY_BITS)
        if self.r > limit:
            raise CodeConfigError(
                f"{self.family} provides at most {limit} parity bits, n-k={self.r}")
        if self.family == "srlc" and self.parity is None:
            self.parity = RlcParity.random(self.k, self.r, self.seed)
        if self.family == "srnlc" and self.oracle is None:
            self.oracle = RandomOracleTable(self.k, self.r, self.seed)
        if self.parity is not None and self.parity.shape != (self.k, self.r):
            raise CodeConfigError(f"parity matrix shape {self.parity.shape} != {(self.k, self.r)}")

    @property
    def r(self):
        """Number of parity (digest) bits."""
        return self.n - self.k

    @property
    def rate(self):
        return self.k / self.n

    def digest(self, m):
        if len(m) != self.k:
            raise CodeConfigError(f"message has {len(m)} bits, code expects k={self.k}")
        if self.family in DIGEST_BITS:
            return sha_digest(m, self.family, self.r)
        if self.family == "srlc":
            return srlc_parity(m, self.parity)
        return srnlc_digest(m, self.oracle)

    def encode(self, m):
        return concat(m, self.digest(m))

    def verify(self, m, d):
        return hash_verify(m, d, self)

    def digest_batch(self, messages):
        """Digests of an ``(N, k)`` 0/1 array through the compiled kernels.

        Returns an ``(N, n-k)`` uint8 array. Bypasses the oracle memo, which
        is fine because oracle digests do not depend on query order.
        """
        messages = np.asarray(messages, dtype=np.uint8)
        if messages.ndim != 2 or messages.shape[1] != self.k:
            raise CodeConfigError(f"expected shape (N, {self.k}), got {messages.shape}")
        family_id, rows, key = self.kernel_params()
        packed = np.packbits(messages, axis=1)
        nw = (self.r + 63) // 64
        if self.family in DIGEST_BITS:
            nw = max(nw, (DIGEST_BITS[self.family] + 63) // 64)
        out = np.zeros((len(messages), nw), dtype=np.uint64)
        _kernels.digest_batch(family_id, packed, self.k, rows, key, out)
        raw = np.frombuffer(out.astype(">u8").tobytes(), dtype=np.uint8).reshape(len(messages), -1)
        return np.unpackbits(raw, axis=1)[:, :self.r]

    def kernel_params(self):
        """(family id, packed parity rows, oracle key) for the search kernels."""
        rows = self.parity.row_words if self.parity is not None else np.zeros((1, 1), dtype=np.uint64)
        key = self.oracle.key if self.oracle is not None else np.uint64(0)
        return _FAMILY_ID[self.family], rows, key

    def to_config(self):
        return f"family = {self.family}\nk = {self.k}\nn = {self.n}\nseed = {self.seed}\n"

    @classmethod
    def from_config(cls, text):
        """Parse the ``key = value`` text written by :meth:`to_config`."""
        values = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise CodeConfigError(f"line {lineno}: expected 'key = value'")
            key, value = (part.strip() for part in line.split("=", 1))
            values[key] = value
        missing = {"family", "k", "n"} - values.keys()
        if missing:
            raise CodeConfigError(f"missing keys: {sorted(missing)}")
        unknown = values.keys() - {"family", "k", "n", "seed"}
        if unknown:
            raise CodeConfigError(f"unknown keys: {sorted(unknown)}")
        try:
            return cls(values["family"], int(values["k"]), int(values["n"]),
                       int(values.get("seed", 0)))
        except ValueError as exc:
            if isinstance(exc, CodeConfigError):
                raise
            raise CodeConfigError(str(exc)) from None


def encode(code, m):
    return code.encode(m)


def hash_verify(m, d, code):
    """True iff ``d`` is the digest of ``m`` under ``code``."""
    if len(m) != code.k or len(d) != code.r:
        raise CodeConfigError(
            f"expected ({code.k}, {code.r}) bits, got ({len(m)}, {len(d)})")
    return code.digest(m) == d


def split_codeword(code, word):
    return split(word, code.k)
