"""
Do cryptographic hashes make good codes?
=========================================

Compare SHA-1, a random linear parity matrix (S-RLC) and an idealized
random oracle (S-RNLC) at the k=128, n=288 geometry. If the hash behaves
like a random function, the three block error rates should agree within
Monte-Carlo noise. Takes a minute or two.
"""

from hashgrand.analysis import capacity
from hashgrand.channel import ebn0_to_sigma
from hashgrand.harness import SweepConfig, emit_summary, run_sweep

grid = (7.0, 8.0, 9.0)
points = []
for family in ("sha1", "srlc", "srnlc"):
    config = SweepConfig(family, 128, 288, grid, trials_per_point=1000, max_weight=3, seed=1)
    points += run_sweep(config)

print(emit_summary(points))

# how far below capacity these points are
for ebn0 in grid:
    sigma = ebn0_to_sigma(ebn0, 128 / 288)
    print(f"{ebn0} dB: hard-decision capacity {capacity(sigma):.3f}, rate {128 / 288:.3f}")
