"""Cryptographic hash digests as systematic error-correcting codes, decoded by
GRAND with an integrated hash check."""
from .analysis import biawgn_capacity, bsc_capacity, crossover_probability, rate_margin
from .bits import BitVector, bits_to_bytes, bytes_to_bits, hamming_weight, split, xor
from .channel import ChannelObservation, ChannelParams, ebn0_to_sigma, transmit
from .codes import (CodeConfigError, RandomOracleTable, RlcParity, SystematicCode, hash_verify,
                    sha_digest, srlc_parity, srnlc_digest)
from .grand import (DecodeResult, GrandConfig, NoisePattern, grand_decode, grand_decode_sequential,
                    ml_decode_bruteforce, noise_patterns)
from .harness import BlerPoint, SweepConfig, run_point, run_sweep, run_trial, write_csv

__version__ = "0.1.0"
