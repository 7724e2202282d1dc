"""Joint GRAND error correction and hash check.

Noise patterns are tried from most to least likely: increasing Hamming
weight, and within one weight in lexicographic order of the 1 positions
(``itertools.combinations`` order, so ``110`` before ``101`` before ``011``).
A pattern ``w = (w_msg, w_dig)`` is accepted the first time
``F(y ^ w_msg) == z ^ w_dig``.

:func:`grand_decode_sequential` does exactly that, one pattern at a time.
:func:`grand_decode` returns the same answer and the same query count much
faster: for every message-part guess only one digest-part guess can verify,
namely ``F(y ^ w_msg) ^ z``, so it hashes once per message-part pattern and
recovers the rank of the accepted pattern combinatorially.
:func:`ml_decode_bruteforce` is an independent minimum-distance oracle.
"""
import itertools
from dataclasses import dataclass
from math import comb

import numpy as np

from . import _kernels
from .bits import BitVector, concat, pack_words, split, word_mask, xor
from .codes import DIGEST_BITS


@dataclass(frozen=True)
class NoisePattern:
    pattern: BitVector
    weight: int
    rank: int


@dataclass(frozen=True)
class GrandConfig:
    """Abandonment bounds: total pattern weight and number of hash checks."""

    max_weight: int = 6
    max_queries: int | None = None

    def __post_init__(self):
        if self.max_weight < 0:
            raise ValueError("max_weight must be non-negative")
        if self.max_queries is not None and self.max_queries < 1:
            raise ValueError("max_queries must be at least 1")


@dataclass(frozen=True)
class DecodeResult:
    """Outcome of one decode.

    ``queries`` counts hash verifications in the order the search defines,
    i.e. the rank of the accepted pattern plus one, or the full budget on
    abandonment. ``hash_evaluations`` is the number of digests the fast
    decoder actually computed.
    """

    message: BitVector | None
    queries: int
    noise_weight: int | None
    abandoned: bool
    noise: BitVector | None = None
    hash_evaluations: int = 0


def patterns_up_to(n, max_weight):
    """Number of length-``n`` patterns with weight at most ``max_weight``."""
    return sum(comb(n, w) for w in range(min(max_weight, n) + 1))


def pattern_rank(support, n):
    """0-based position of the pattern with 1s at ``support`` in the search order."""
    support = tuple(support)
    w = len(support)
    rank = patterns_up_to(n, w - 1) if w else 0
    prev = -1
    for i, pos in enumerate(support):
        if not prev < pos < n:
            raise ValueError(f"support must be strictly increasing within [0, {n})")
        for j in range(prev + 1, pos):
            rank += comb(n - 1 - j, w - 1 - i)
        prev = pos
    return rank


def pattern_unrank(rank, n):
    """Inverse of :func:`pattern_rank`; returns the support tuple."""
    if not 0 <= rank < 2 ** n:
        raise ValueError(f"rank {rank} out of range for n={n}")
    w = 0
    while rank >= comb(n, w):
        rank -= comb(n, w)
        w += 1
    support = []
    pos = 0
    for i in range(w):
        while True:
            block = comb(n - 1 - pos, w - 1 - i)
            if rank < block:
                break
            rank -= block
            pos += 1
        support.append(pos)
        pos += 1
    return tuple(support)


def noise_patterns(n, max_weight=None):
    """Yield every length-``n`` pattern up to ``max_weight`` in search order.

    Streams in constant memory; exhaustion simply ends the generator.
    """
    top = n if max_weight is None else min(max_weight, n)
    rank = 0
    for w in range(top + 1):
        for support in itertools.combinations(range(n), w):
            bits = np.zeros(n, dtype=np.uint8)
            bits[list(support)] = 1
            yield NoisePattern(BitVector._wrap(bits), w, rank)
            rank += 1


def _support_to_bits(support, n):
    bits = np.zeros(n, dtype=np.uint8)
    bits[list(support)] = 1
    return BitVector._wrap(bits)


def _check_inputs(y, z, code):
    if len(y) != code.k or len(z) != code.r:
        raise ValueError(f"expected y, z of lengths ({code.k}, {code.r}), got ({len(y)}, {len(z)})")


def _effective_weight(n, cfg):
    top = min(cfg.max_weight, n)
    if cfg.max_queries is not None:
        # weight levels whose first pattern already exceeds the budget are unreachable
        while top > 0 and patterns_up_to(n, top - 1) >= cfg.max_queries:
            top -= 1
    return top


def _budget(n, cfg):
    total = patterns_up_to(n, cfg.max_weight)
    return total if cfg.max_queries is None else min(total, cfg.max_queries)


def grand_decode(y, z, code, cfg=GrandConfig()):
    """Decode ``(y, z)``: the lightest verifying noise pattern, earliest on ties."""
    _check_inputs(y, z, code)
    k, n = code.k, code.n
    top = _effective_weight(n, cfg)
    family_id, rows, key = code.kernel_params()

    sbuf = np.zeros(64, dtype=np.uint8)
    mwords = np.zeros(1, dtype=np.uint64)
    if code.family in DIGEST_BITS:
        sbuf = _kernels.pad_message(np.packbits(y.bits))
    elif code.family == "srnlc":
        mwords = pack_words(y)
    else:
        mwords = pack_words(xor(code.digest(y), z))
    zw = pack_words(z)
    mask = word_mask(code.r)

    best_total = None
    best_support = None
    evals = 0
    scratch = np.zeros(max(top, 1), dtype=np.int64)
    for a in range(min(top, k) + 1):
        if best_total is not None and a > best_total:
            break
        bound = top if best_total is None else best_total
        use_stop = best_total is not None and a == best_total
        stop = np.array(best_support if use_stop else (0,) * a, dtype=np.int64)
        total, n_evals = _kernels.scan_level(
            family_id, sbuf, mwords, k, zw, mask, a, bound, stop, use_stop,
            rows, key, scratch)
        evals += n_evals
        if total < 0:
            continue
        m_hat = xor(y, _support_to_bits(scratch[:a], k))
        dig_noise = xor(code.digest(m_hat), z)
        support = tuple(scratch[:a].tolist()) + tuple(k + j for j in dig_noise.support())
        if best_total is None or (total, support) < (best_total, best_support):
            best_total, best_support = total, support

    if best_total is None:
        return DecodeResult(None, _budget(n, cfg), None, True, hash_evaluations=evals)
    queries = pattern_rank(best_support, n) + 1
    if cfg.max_queries is not None and queries > cfg.max_queries:
        return DecodeResult(None, cfg.max_queries, None, True, hash_evaluations=evals)
    noise = _support_to_bits(best_support, n)
    message = xor(y, split(noise, k)[0])
    return DecodeResult(message, queries, best_total, False, noise, evals)


def grand_decode_sequential(y, z, code, cfg=GrandConfig(), trace=None):
    """Literal one-pattern-at-a-time search; ``trace(pattern, m_hat, ok)`` per query."""
    _check_inputs(y, z, code)
    k, n = code.k, code.n
    queries = 0
    for pat in noise_patterns(n, cfg.max_weight):
        if cfg.max_queries is not None and queries >= cfg.max_queries:
            break
        queries += 1
        w_msg, w_dig = split(pat.pattern, k)
        m_hat = xor(y, w_msg)
        ok = code.verify(m_hat, xor(z, w_dig))
        if trace is not None:
            trace(pat, m_hat, ok)
        if ok:
            return DecodeResult(m_hat, queries, pat.weight, False, pat.pattern, queries)
    return DecodeResult(None, queries, None, True, hash_evaluations=queries)


MAX_BRUTEFORCE_K = 20


def ml_decode_bruteforce(y, z, code):
    """Nearest codeword by exhaustive search over all ``2**k`` messages.

    Ties go to the message whose implied noise pattern comes first in the
    search order. Returns ``(message, distance)``.
    """
    _check_inputs(y, z, code)
    if code.k > MAX_BRUTEFORCE_K:
        raise ValueError(f"brute force limited to k <= {MAX_BRUTEFORCE_K}, got {code.k}")
    received = concat(y, z)
    best = None
    for value in range(2 ** code.k):
        m = BitVector([(value >> (code.k - 1 - i)) & 1 for i in range(code.k)])
        noise = xor(received, code.encode(m))
        support = noise.support()
        key = (len(support), support)
        if best is None or key < best[0]:
            best = (key, m)
    (distance, _), message = best
    return message, distance
