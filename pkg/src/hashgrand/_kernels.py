"""Compiled inner loops: SHA-1/SHA-256 compression, the oracle PRF and the
per-weight noise search used by the GRAND decoder.

Digests and digest observations are handled as MSB-first uint64 words.
The reference path for every digest lives in ``codes`` (hashlib / numpy);
these kernels are only the fast route and are cross-checked against it in
the test suite.

When libcrypto exposes ``SHA1_Transform``/``SHA256_Transform`` (hardware SHA
extensions on most x86 CPUs) the block compression is delegated to it;
otherwise a pure numba compression function is used. Set
``HASHGRAND_PURE_SHA=1`` to force the latter.
"""
import ctypes
import ctypes.util
import os

import numpy as np
from numba import njit

SHA1, SHA256, SRLC, SRNLC = 0, 1, 2, 3

MASK32 = 0xFFFFFFFF

SHA1_IV = np.array([0x67452301, 0xEFCDAB89, 0x98BADCFE, 0x10325476, 0xC3D2E1F0],
                   dtype=np.int64)

SHA256_IV = np.array([
    0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
    0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19,
], dtype=np.int64)

SHA256_K = np.array([
    0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1,
    0x923f82a4, 0xab1c5ed5, 0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3,
    0x72be5d74, 0x80deb1fe, 0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786,
    0x0fc19dc6, 0x240ca1cc, 0x2de92c6f, 0x4a7484aa, 0x5cb0a9dc, 0x76f988da,
    0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7, 0xc6e00bf3, 0xd5a79147,
    0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc, 0x53380d13,
    0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85, 0xa2bfe8a1, 0xa81a664b,
    0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070,
    0x19a4c116, 0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a,
    0x5b9cca4f, 0x682e6ff3, 0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208,
    0x90befffa, 0xa4506ceb, 0xbef9a3f7, 0xc67178f2,
], dtype=np.int64)

_U1 = np.uint64(1)
_U2 = np.uint64(2)
_U4 = np.uint64(4)
_U32 = np.uint64(32)
_U33 = np.uint64(33)
_U56 = np.uint64(56)
_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_H01 = np.uint64(0x0101010101010101)
_FMIX_C1 = np.uint64(0xFF51AFD7ED558CCD)
_FMIX_C2 = np.uint64(0xC4CEB9FE1A85EC53)
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_TOP = np.uint64(0x8000000000000000)


def _load_transforms():
    if os.environ.get("HASHGRAND_PURE_SHA"):
        return None
    name = ctypes.util.find_library("crypto")
    if name is None:
        return None
    try:
        lib = ctypes.CDLL(name)
        t1, t256 = lib.SHA1_Transform, lib.SHA256_Transform
    except (OSError, AttributeError):
        return None
    for fn in (t1, t256):
        fn.restype = None
        fn.argtypes = [ctypes.c_void_p, ctypes.c_void_p]
    return t1, t256


_TRANSFORMS = _load_transforms()
NATIVE_SHA = _TRANSFORMS is not None
if NATIVE_SHA:
    _native_sha1, _native_sha256 = _TRANSFORMS
else:
    # never called: the NATIVE_SHA branches below are folded at compile time
    _native_sha1 = _native_sha256 = None


def padded_length(nbytes):
    """Length in bytes of a Merkle-Damgard padded SHA-1/SHA-256 input."""
    return ((nbytes + 8) // 64 + 1) * 64


def pad_message(msg):
    """Return the padded SHA input buffer for ``msg`` (uint8 array)."""
    nbytes = len(msg)
    buf = np.zeros(padded_length(nbytes), dtype=np.uint8)
    buf[:nbytes] = msg
    buf[nbytes] = 0x80
    buf[-8:] = np.frombuffer((nbytes * 8).to_bytes(8, "big"), dtype=np.uint8)
    return buf


@njit(inline="always")
def _rotl(x, s):
    return ((x << s) | (x >> (32 - s))) & MASK32


@njit(inline="always")
def _rotr(x, s):
    return ((x >> s) | (x << (32 - s))) & MASK32


@njit(inline="always")
def _load_block(buf, base, w):
    for t in range(16):
        i = base + 4 * t
        w[t] = ((np.int64(buf[i]) << 24) | (np.int64(buf[i + 1]) << 16)
                | (np.int64(buf[i + 2]) << 8) | np.int64(buf[i + 3]))


@njit(cache=True)
def sha1_compress(h, buf, base, w):
    """One SHA-1 block compression of ``buf[base:base+64]`` into state ``h``."""
    _load_block(buf, base, w)
    for t in range(16, 80):
        w[t] = _rotl(w[t - 3] ^ w[t - 8] ^ w[t - 14] ^ w[t - 16], 1)
    a, b, c, d, e = h[0], h[1], h[2], h[3], h[4]
    for t in range(0, 20):
        tmp = (_rotl(a, 5) + (d ^ (b & (c ^ d))) + e + 0x5A827999 + w[t]) & MASK32
        e = d
        d = c
        c = _rotl(b, 30)
        b = a
        a = tmp
    for t in range(20, 40):
        tmp = (_rotl(a, 5) + (b ^ c ^ d) + e + 0x6ED9EBA1 + w[t]) & MASK32
        e = d
        d = c
        c = _rotl(b, 30)
        b = a
        a = tmp
    for t in range(40, 60):
        tmp = (_rotl(a, 5) + ((b & c) | (d & (b | c))) + e + 0x8F1BBCDC + w[t]) & MASK32
        e = d
        d = c
        c = _rotl(b, 30)
        b = a
        a = tmp
    for t in range(60, 80):
        tmp = (_rotl(a, 5) + (b ^ c ^ d) + e + 0xCA62C1D6 + w[t]) & MASK32
        e = d
        d = c
        c = _rotl(b, 30)
        b = a
        a = tmp
    h[0] = (h[0] + a) & MASK32
    h[1] = (h[1] + b) & MASK32
    h[2] = (h[2] + c) & MASK32
    h[3] = (h[3] + d) & MASK32
    h[4] = (h[4] + e) & MASK32


@njit(cache=True)
def sha256_compress(h, buf, base, w):
    """One SHA-256 block compression of ``buf[base:base+64]`` into state ``h``."""
    _load_block(buf, base, w)
    for t in range(16, 64):
        x = w[t - 15]
        y = w[t - 2]
        s0 = _rotr(x, 7) ^ _rotr(x, 18) ^ (x >> 3)
        s1 = _rotr(y, 17) ^ _rotr(y, 19) ^ (y >> 10)
        w[t] = (w[t - 16] + s0 + w[t - 7] + s1) & MASK32
    a, b, c, d = h[0], h[1], h[2], h[3]
    e, f, g, hh = h[4], h[5], h[6], h[7]
    for t in range(64):
        S1 = _rotr(e, 6) ^ _rotr(e, 11) ^ _rotr(e, 25)
        ch = (e & f) ^ ((~e) & g)
        t1 = (hh + S1 + ch + SHA256_K[t] + w[t]) & MASK32
        S0 = _rotr(a, 2) ^ _rotr(a, 13) ^ _rotr(a, 22)
        maj = (a & b) ^ (a & c) ^ (b & c)
        t2 = (S0 + maj) & MASK32
        hh = g
        g = f
        f = e
        e = (d + t1) & MASK32
        d = c
        c = b
        b = a
        a = (t1 + t2) & MASK32
    h[0] = (h[0] + a) & MASK32
    h[1] = (h[1] + b) & MASK32
    h[2] = (h[2] + c) & MASK32
    h[3] = (h[3] + d) & MASK32
    h[4] = (h[4] + e) & MASK32
    h[5] = (h[5] + f) & MASK32
    h[6] = (h[6] + g) & MASK32
    h[7] = (h[7] + hh) & MASK32


@njit
def _sha_state(family, buf, h, w, ctx):
    """Run SHA-1/SHA-256 over a padded buffer, final state words into ``h``."""
    nblocks = buf.shape[0] // 64
    nh = 5 if family == SHA1 else 8
    if NATIVE_SHA:
        for i in range(nh):
            ctx[i] = SHA1_IV[i] if family == SHA1 else SHA256_IV[i]
        for blk in range(nblocks):
            if family == SHA1:
                _native_sha1(ctx.ctypes.data, buf.ctypes.data + 64 * blk)
            else:
                _native_sha256(ctx.ctypes.data, buf.ctypes.data + 64 * blk)
        for i in range(nh):
            h[i] = ctx[i]
    else:
        for i in range(nh):
            h[i] = SHA1_IV[i] if family == SHA1 else SHA256_IV[i]
        for blk in range(nblocks):
            if family == SHA1:
                sha1_compress(h, buf, 64 * blk, w)
            else:
                sha256_compress(h, buf, 64 * blk, w)


@njit(inline="always")
def _state_to_words(h, nh, out):
    # two 32-bit state words per output word, MSB-first
    for j in range(out.shape[0]):
        hi = np.uint64(h[2 * j]) if 2 * j < nh else np.uint64(0)
        lo = np.uint64(h[2 * j + 1]) if 2 * j + 1 < nh else np.uint64(0)
        out[j] = (hi << _U32) | lo


@njit(inline="always")
def _fmix64(h):
    h ^= h >> _U33
    h *= _FMIX_C1
    h ^= h >> _U33
    h *= _FMIX_C2
    h ^= h >> _U33
    return h


@njit(cache=True)
def oracle_prf(mwords, nbits, key, out):
    """Keyed pseudorandom map from a packed message to ``len(out)`` words.

    Stands in for a lazily sampled random oracle: the output for a message
    depends only on (key, message), never on query order.
    """
    h = _fmix64(key ^ (np.uint64(nbits) * _GOLDEN))
    for i in range(mwords.shape[0]):
        h = _fmix64(h ^ mwords[i]) + _GOLDEN
    h = _fmix64(h ^ key)
    for j in range(out.shape[0]):
        out[j] = _fmix64(h + np.uint64(j + 1) * _GOLDEN)


@njit(inline="always")
def popcount64(x):
    x = x - ((x >> _U1) & _M1)
    x = (x & _M2) + ((x >> _U2) & _M2)
    x = (x + (x >> _U4)) & _M4
    return np.int64((x * _H01) >> _U56)


@njit(inline="always")
def _flip_byte(buf, pos):
    buf[pos >> 3] ^= np.uint8(0x80 >> (pos & 7))


@njit(inline="always")
def _flip_word(words, pos):
    words[pos >> 6] ^= _TOP >> np.uint64(pos & 63)


@njit(inline="always")
def _combo_before(c, stop):
    for i in range(c.shape[0]):
        if c[i] < stop[i]:
            return True
        if c[i] > stop[i]:
            return False
    return False


@njit
def scan_level(family, sbuf, mwords, k, zw, mask, weight, bound, stop,
               use_stop, rows, key, best):
    """Search every message-part noise pattern of one Hamming weight.

    For each ``weight``-subset of message positions (lexicographic order) the
    de-noised message is hashed; the unique digest-part pattern that makes
    it verify has weight ``dist(F(m), z)``. Returns ``(best_total, evals)``
    where ``best_total`` is the smallest ``weight + dist`` not exceeding
    ``bound`` (first in order on ties, written into ``best``), or -1.

    Buffers by family: sha uses the padded byte buffer ``sbuf``; srnlc the
    packed message words ``mwords``; srlc passes ``parity(y) ^ z`` in
    ``mwords`` and ``zw`` is ignored. Buffers are restored on exit.
    """
    nw = mask.shape[0]
    w = np.empty(80, dtype=np.int64)
    h = np.zeros(8, dtype=np.int64)
    ctx = np.zeros(64, dtype=np.uint32)
    dig = np.zeros(nw, dtype=np.uint64)
    nh = 5 if family == SHA1 else 8
    c = np.arange(weight)
    best_total = -1
    evals = 0
    while True:
        if use_stop and not _combo_before(c, stop):
            break
        d = 0
        if family == SRLC:
            for i in range(nw):
                acc = mwords[i]
                for j in range(weight):
                    acc ^= rows[c[j], i]
                d += popcount64(acc & mask[i])
        else:
            if family == SRNLC:
                for j in range(weight):
                    _flip_word(mwords, c[j])
                oracle_prf(mwords, k, key, dig)
                for j in range(weight):
                    _flip_word(mwords, c[j])
            else:
                for j in range(weight):
                    _flip_byte(sbuf, c[j])
                _sha_state(family, sbuf, h, w, ctx)
                for j in range(weight):
                    _flip_byte(sbuf, c[j])
                _state_to_words(h, nh, dig)
            for i in range(nw):
                d += popcount64((dig[i] ^ zw[i]) & mask[i])
        evals += 1
        total = weight + d
        if total <= bound and (best_total < 0 or total < best_total):
            best_total = total
            for j in range(weight):
                best[j] = c[j]
            # later patterns in this level only win by being strictly lighter
            bound = total - 1
            if bound < weight:
                break
        i = weight - 1
        while i >= 0 and c[i] == k - weight + i:
            i -= 1
        if i < 0:
            break
        c[i] += 1
        for j in range(i + 1, weight):
            c[j] = c[j - 1] + 1
    return best_total, evals


@njit
def digest_batch(family, msgs, k, rows, key, out):
    """Digest words of many messages; ``msgs`` is (N, nbytes) packed bytes.

    Output words are not truncated: the caller keeps the leading bits.
    """
    nbytes = msgs.shape[1]
    nw = out.shape[1]
    w = np.empty(80, dtype=np.int64)
    h = np.zeros(8, dtype=np.int64)
    ctx = np.zeros(64, dtype=np.uint32)
    dig = np.zeros(nw, dtype=np.uint64)
    mwords = np.zeros((k + 63) // 64, dtype=np.uint64)
    plen = ((nbytes + 8) // 64 + 1) * 64
    buf = np.zeros(plen, dtype=np.uint8)
    buf[nbytes] = 0x80
    nbits = nbytes * 8
    for i in range(8):
        buf[plen - 1 - i] = (nbits >> (8 * i)) & 0xFF
    nh = 5 if family == SHA1 else 8
    for r in range(msgs.shape[0]):
        if family == SHA1 or family == SHA256:
            buf[:nbytes] = msgs[r]
            _sha_state(family, buf, h, w, ctx)
            _state_to_words(h, nh, dig)
        else:
            for i in range(mwords.shape[0]):
                mwords[i] = 0
            for i in range(nbytes):
                mwords[i >> 3] |= np.uint64(msgs[r, i]) << np.uint64(56 - 8 * (i & 7))
            if family == SRNLC:
                oracle_prf(mwords, k, key, dig)
            else:
                for i in range(nw):
                    dig[i] = 0
                for bit in range(k):
                    if mwords[bit >> 6] & (_TOP >> np.uint64(bit & 63)):
                        for i in range(nw):
                            dig[i] ^= rows[bit, i]
        out[r] = dig
