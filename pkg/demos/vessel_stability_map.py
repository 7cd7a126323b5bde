"""Stability map of a particle in a rotating vessel (Brouwer's problem).

Sweeps (k1, k2) at fixed rotation speed, counts the marginally stable
cells, and locates the three corners of the stability region.
"""
import numpy as np

from gyrostab import surfaces as S
from gyrostab.spectral import Stability

OMEGA = 0.7
spec = S.GridSpec("brouwer", (S.GridAxis("k1", -2, 2, 400), S.GridAxis("k2", -2, 2, 400)),
                  {"omega": OMEGA})
result = S.sweep(spec)
codes = result.grid("verdict")
cell = spec.axes[0].step

print(f"rotation speed {OMEGA}, grid {spec.shape}")
for s in Stability:
    print(f"  {s.name:26s} {(codes == s).mean():6.1%}")

boundary = S.stability_boundary(result)
print(f"boundary polylines: {len(boundary.polylines)}")
for name, p in zip("ABC", S.brouwer_cusps(OMEGA)):
    d = boundary.distance_to(p)
    print(f"  corner {name} = ({p[0]:+.2f}, {p[1]:+.2f}): nearest boundary vertex {d:.4f} ({d / cell:.2f} cells)")

# the high-speed triangle shrinks like 8 omega**4 / 3 as the speed goes to zero
for om in (0.2, 0.4, 0.6):
    print(f"  omega={om}: triangle area {S.triangle_area(om):.5f}, 8 w^4/3 = {8 * om**4 / 3:.5f}")
