"""
Decoding one block by guessing the noise
=========================================

A hash code appends a truncated digest to the message. The receiver does
not decode in the usual sense: it guesses which bits the channel flipped,
lightest guesses first, and stops at the first guess whose message part
hashes to its digest part.
"""

import numpy as np

from hashgrand import BitVector, GrandConfig, SystematicCode, grand_decode, grand_decode_sequential
from hashgrand.bits import split, xor

# a small SHA-1 code: 16 message bits, 16 digest bits
code = SystematicCode("sha1", k=16, n=32)
rng = np.random.default_rng(7)
m = BitVector.random(code.k, rng)
word = code.encode(m)
print("message  ", m)
print("codeword ", word)

# flip one message bit and one digest bit
noise = BitVector.unit(32, 3) ^ BitVector.unit(32, 20)
y, z = split(xor(word, noise), code.k)

# the literal search; printing every rejected guess would be long, so keep them
seen = []
res = grand_decode_sequential(y, z, code, GrandConfig(max_weight=2),
                              trace=lambda pat, m_hat, ok: seen.append((pat.weight, ok)))
print("queries  ", res.queries, "of which", sum(not ok for _, ok in seen), "rejected")
print("decoded  ", res.message, "correct" if res.message == m else "WRONG")
print("noise    ", res.noise)

# the fast decoder gives the same answer and query count but computes one
# digest per message-part guess instead of one per full guess
fast = grand_decode(y, z, code, GrandConfig(max_weight=2))
print("fast     ", fast.queries, "queries,", fast.hash_evaluations, "digests computed")

# too small a budget: the receiver gives up rather than guessing wrong
short = grand_decode(y, z, code, GrandConfig(max_weight=1))
print("budget 1 ", f"abandoned={short.abandoned} after {short.queries} queries")
