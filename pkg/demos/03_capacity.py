"""
How much does hard decision cost?
=================================

GRAND here only sees hard bits, so the channel it faces is a binary
symmetric channel with crossover Q(1/sigma). Its capacity sits below the
BI-AWGN capacity that soft information would allow.
"""

import numpy as np

from hashgrand.analysis import biawgn_capacity, biawgn_capacity_montecarlo, capacity
from hashgrand.channel import sigma_to_ebn0

rate = 128 / 288
print(f"{'sigma':>6} {'Eb/N0':>7} {'hard':>7} {'soft':>7} {'soft MC':>8}")
for sigma in np.linspace(0.3, 1.5, 7):
    mc, _ = biawgn_capacity_montecarlo(sigma, samples=1_000_000, rng=0)
    print(f"{sigma:6.2f} {sigma_to_ebn0(sigma, rate):7.2f} {capacity(sigma, 'hard'):7.4f} "
          f"{biawgn_capacity(sigma):7.4f} {mc:8.4f}")

# smallest noise level where a rate-4/9 code can no longer work
sigmas = np.linspace(0.3, 1.5, 2001)
for model in ("hard", "soft"):
    limit = sigmas[np.argmax([capacity(s, model) < rate for s in sigmas])]
    print(f"{model}: rate {rate:.3f} exceeds capacity beyond sigma {limit:.3f} "
          f"({sigma_to_ebn0(limit, rate):.2f} dB)")
