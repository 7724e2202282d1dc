"""Fixed-length GF(2) vectors and the byte/bit conversions around them."""
import numpy as np


class BitVector:
    """Immutable sequence of bits backed by a read-only uint8 array.

    Bit order is MSB-first whenever bytes are involved, so the hex form of a
    digest reads the same as standard hash test vectors.

    >>> BitVector.from_str("1100") ^ BitVector.from_str("1010")
    BitVector('0110')
    """

    __slots__ = ("_bits",)

    def __init__(self, bits=()):
        arr = np.array(bits, dtype=np.uint8).reshape(-1)
        if arr.size and arr.max() > 1:
            raise ValueError("bits must be 0 or 1")
        arr.setflags(write=False)
        self._bits = arr

    @classmethod
    def _wrap(cls, arr):
        # trusted constructor: arr is a fresh uint8 array of 0/1
        obj = cls.__new__(cls)
        arr.setflags(write=False)
        obj._bits = arr
        return obj

    @classmethod
    def from_str(cls, text):
        text = text.replace(" ", "").replace("_", "")
        if set(text) - {"0", "1"}:
            raise ValueError(f"not a bit string: {text!r}")
        return cls._wrap(np.frombuffer(text.encode(), dtype=np.uint8) - ord("0"))

    @classmethod
    def zeros(cls, length):
        return cls._wrap(np.zeros(length, dtype=np.uint8))

    @classmethod
    def unit(cls, length, index):
        arr = np.zeros(length, dtype=np.uint8)
        arr[index] = 1
        return cls._wrap(arr)

    @classmethod
    def random(cls, length, rng):
        return cls._wrap(rng.integers(0, 2, size=length, dtype=np.uint8))

    @property
    def bits(self):
        """Read-only uint8 view of the bits."""
        return self._bits

    def __len__(self):
        return self._bits.size

    def __getitem__(self, index):
        if isinstance(index, slice):
            return BitVector._wrap(self._bits[index].copy())
        return int(self._bits[index])

    def __iter__(self):
        return iter(self._bits.tolist())

    def __eq__(self, other):
        if not isinstance(other, BitVector):
            return NotImplemented
        return self._bits.size == other._bits.size and bool(np.array_equal(self._bits, other._bits))

    def __hash__(self):
        return hash((self._bits.size, self._bits.tobytes()))

    def __xor__(self, other):
        return xor(self, other)

    def __add__(self, other):
        return concat(self, other)

    def __str__(self):
        return (self._bits + ord("0")).tobytes().decode()

    def __repr__(self):
        text = str(self)
        if len(text) > 64:
            text = text[:60] + "..."
        return f"BitVector({text!r})"

    def weight(self):
        return hamming_weight(self)

    def support(self):
        """Indices of the 1 bits, ascending."""
        return tuple(np.flatnonzero(self._bits).tolist())

    def hex(self):
        return bits_to_bytes(self).hex()


def xor(a, b):
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} != {len(b)}")
    return BitVector._wrap(np.bitwise_xor(a.bits, b.bits))


def hamming_weight(v):
    return int(np.count_nonzero(v.bits))


def hamming_distance(a, b):
    return hamming_weight(xor(a, b))


def split(v, k):
    """Split ``v`` into its first ``k`` bits and the rest."""
    if not 0 <= k <= len(v):
        raise ValueError(f"split point {k} outside [0, {len(v)}]")
    return v[:k], v[k:]


def concat(*parts):
    if not parts:
        return BitVector()
    return BitVector._wrap(np.concatenate([p.bits for p in parts]))


def bytes_to_bits(data):
    return BitVector._wrap(np.unpackbits(np.frombuffer(bytes(data), dtype=np.uint8)))


def bits_to_bytes(v):
    """Pack MSB-first; a partial final byte is padded with trailing zeros."""
    return np.packbits(v.bits).tobytes()


def pack_words(v):
    """Pack into MSB-first uint64 words, zero padded (kernel layout)."""
    nwords = (len(v) + 63) // 64
    padded = np.zeros(nwords * 64, dtype=np.uint8)
    padded[:len(v)] = v.bits
    return np.frombuffer(np.packbits(padded).tobytes(), dtype=">u8").astype(np.uint64)


def unpack_words(words, length):
    raw = np.asarray(words, dtype=np.uint64).astype(">u8").tobytes()
    return BitVector._wrap(np.unpackbits(np.frombuffer(raw, dtype=np.uint8))[:length].copy())


def word_mask(length):
    """uint64 words with the first ``length`` bits set (MSB-first)."""
    return pack_words(BitVector._wrap(np.ones(length, dtype=np.uint8)))
