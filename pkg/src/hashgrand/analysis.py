"""Capacity of the effective channel and the rate margin ``C - k/n``.

Two channel models are offered: ``hard`` (the binary symmetric channel left
after hard-decision demodulation, the one the decoder actually sees) and
``soft`` (binary-input AWGN with unquantized outputs).
"""
import math

import numpy as np
from scipy import integrate

from .channel import q_function

MODELS = ("hard", "soft")
_LN2 = math.log(2.0)


def binary_entropy(p):
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability outside [0, 1]: {p}")
    if p in (0.0, 1.0):
        return 0.0
    return -p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p)


def bsc_capacity(p):
    return 1.0 - binary_entropy(p)


def crossover_probability(sigma):
    """Hard-decision flip probability Q(1/sigma) for unit-energy BPSK."""
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    return q_function(1.0 / sigma)


def _biawgn_loss(y, sigma):
    # log2(1 + exp(-2y/sigma^2)) without overflow
    return np.logaddexp(0.0, -2.0 * y / sigma ** 2) / _LN2


def biawgn_capacity(sigma):
    """Capacity in bits/use of the BI-AWGN channel with equiprobable +-1 inputs.

    ``C = 1 - E[log2(1 + exp(-2Y/sigma^2))]`` with ``Y ~ N(1, sigma^2)``,
    by adaptive quadrature over ``1 +- 10 sigma``.
    """
    if sigma <= 0:
        raise ValueError("sigma must be positive")

    def integrand(y):
        density = math.exp(-0.5 * ((y - 1.0) / sigma) ** 2) / (sigma * math.sqrt(2.0 * math.pi))
        return density * float(_biawgn_loss(y, sigma))

    lo, hi = 1.0 - 10.0 * sigma, 1.0 + 10.0 * sigma
    loss, _ = integrate.quad(integrand, lo, hi, points=[0.0, 1.0] if lo < 0.0 else [1.0],
                             epsabs=1e-10, epsrel=1e-10, limit=200)
    return min(1.0, max(0.0, 1.0 - loss))


def biawgn_capacity_montecarlo(sigma, samples=10_000_000, rng=None, chunk=1_000_000):
    """Monte-Carlo estimate of :func:`biawgn_capacity`; returns (C, std error)."""
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    rng = np.random.default_rng(rng)
    total = 0.0
    total_sq = 0.0
    done = 0
    while done < samples:
        m = min(chunk, samples - done)
        loss = _biawgn_loss(1.0 + sigma * rng.standard_normal(m), sigma)
        total += loss.sum()
        total_sq += np.square(loss).sum()
        done += m
    mean = total / samples
    var = max(total_sq / samples - mean ** 2, 0.0)
    return 1.0 - mean, math.sqrt(var / samples)


def capacity(sigma, model="hard"):
    if model == "hard":
        return bsc_capacity(crossover_probability(sigma))
    if model == "soft":
        return biawgn_capacity(sigma)
    raise ValueError(f"unknown model {model!r}; choose from {MODELS}")


def rate_margin(k, n, sigma, model="hard"):
    """``C - k/n``; positive when the rate is below capacity."""
    if not 0 < k < n:
        raise ValueError(f"need 0 < k < n, got k={k}, n={n}")
    return capacity(sigma, model) - k / n
