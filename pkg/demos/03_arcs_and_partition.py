#!/usr/bin/env python3
"""Farey dissection: arcs, bump ladders, and the major/minor split.

Each reduced fraction a/q with q <= N/10 carries an interval of radius
1/(qN) and a ladder of mean-zero bumps partitioning unity on it.  The
multiplier decomposes as m = m_maj + m_min with m_maj supported near the
fractions; on every arc the minor part vanishes identically.
"""

import numpy as np

from paravg import OperatorParams, PieceSpec, major_arcs, piece_multiplier
from paravg.arcs import arc_system

N = 64
print(f"major arcs at N = {N} (q <= {N // 10}):")
for arc in major_arcs(N):
    print(
        f"  {arc.frac.a}/{arc.frac.q:<3d} center {arc.center:.4f} "
        f"radius {arc.radius:.5f}"
    )

system = arc_system(N)
print("\nladder scales per denominator (dyadic up to Nq < N^2, then the core):")
for (q, a), lad in sorted(system.ladders.items()):
    if a == (1 if q > 1 else 0):
        print(f"  q = {q}: {lad.scales}")

print("\npartition of unity on the arc of 1/2 (samples of the ladder sum):")
lad = system.ladders[(2, 1)]
for frac_of_radius in (0.0, 0.3, 0.9):
    xi = 0.5 + frac_of_radius / (N * 2)
    total = sum(lad.eta(level, xi) for level in lad.levels())
    print(f"  xi = 1/2 + {frac_of_radius:.1f}/(Nq): ladder sum = {total:.15f}")

params = OperatorParams.smooth(2, N)
rng = np.random.default_rng(0)
print("\nmaj + min == whole at random frequencies:")
worst = 0.0
for _ in range(200):
    xi = rng.random(2)
    whole = piece_multiplier(PieceSpec("whole"), xi, params)
    parts = piece_multiplier(PieceSpec("maj"), xi, params) + piece_multiplier(
        PieceSpec("min"), xi, params
    )
    worst = max(worst, abs(whole - parts))
print(f"  max deviation over 200 samples: {worst:.2e}")

print("\nminor part on the arc of 1/3 (should vanish):")
for du in (-0.9, 0.0, 0.7):
    xi = (0.27, (1 / 3 + du / (3 * N)) % 1.0)
    print(f"  |m_min| = {abs(piece_multiplier(PieceSpec('min'), xi, params)):.2e}")
