"""BPSK over AWGN with hard-decision demodulation.

Unit symbol energy: bit 0 -> +1, bit 1 -> -1. The noise standard deviation
absorbs both Eb/N0 and the code rate, ``sigma = sqrt(1 / (2 R Eb/N0))``.
"""
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from .bits import BitVector, hamming_weight, split, xor


def ebn0_to_sigma(ebn0_db, rate):
    if not 0 < rate < 1:
        raise ValueError(f"rate must lie in (0, 1), got {rate}")
    return math.sqrt(1.0 / (2.0 * rate * 10.0 ** (ebn0_db / 10.0)))


def sigma_to_ebn0(sigma, rate):
    if not 0 < rate < 1:
        raise ValueError(f"rate must lie in (0, 1), got {rate}")
    return 10.0 * math.log10(1.0 / (2.0 * rate * sigma ** 2))


def q_function(x):
    """Gaussian tail probability P(N(0,1) > x)."""
    return float(ndtr(-x))


@dataclass(frozen=True)
class ChannelParams:
    ebn0_db: float
    rate: float
    sigma: float

    @classmethod
    def from_ebn0(cls, ebn0_db, rate):
        return cls(float(ebn0_db), rate, ebn0_to_sigma(ebn0_db, rate))

    @classmethod
    def from_sigma(cls, sigma, rate):
        if sigma < 0:
            raise ValueError("sigma must be non-negative")
        ebn0 = sigma_to_ebn0(sigma, rate) if sigma > 0 else math.inf
        return cls(ebn0, rate, float(sigma))

    @property
    def crossover(self):
        """Bit-flip probability of the hard-decision channel, Q(1/sigma)."""
        return q_function(1.0 / self.sigma) if self.sigma > 0 else 0.0


@dataclass(frozen=True)
class ChannelObservation:
    y: BitVector
    z: BitVector
    flips: int


def bpsk_modulate(bits):
    return 1.0 - 2.0 * np.asarray(bits.bits, dtype=np.float64)


def add_awgn(symbols, sigma, rng):
    if sigma < 0:
        raise ValueError("sigma must be non-negative")
    symbols = np.asarray(symbols, dtype=np.float64)
    if sigma == 0:
        return symbols.copy()
    return symbols + rng.normal(0.0, sigma, size=symbols.shape)


def hard_demodulate(values):
    """Sign decision; exact zeros decide for bit 0."""
    return BitVector((np.asarray(values) < 0).astype(np.uint8))


def transmit(codeword, params, rng, k=None, noiseless_digest=False):
    """Send a codeword through the channel and split the hard decisions.

    ``k`` is the message length; it defaults to ``round(rate * n)``. With
    ``noiseless_digest`` only the first ``k`` symbols see noise.
    """
    n = len(codeword)
    if k is None:
        k = round(params.rate * n)
    received = add_awgn(bpsk_modulate(codeword), params.sigma, rng)
    if noiseless_digest:
        received[k:] = bpsk_modulate(codeword)[k:]
    demod = hard_demodulate(received)
    y, z = split(demod, k)
    return ChannelObservation(y, z, hamming_weight(xor(demod, codeword)))
