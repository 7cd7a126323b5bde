"""Slices of the damped-rotor asymptotic-stability domain at fixed kappa.

At kappa = +-0.06 the boundary has a cusp at an exceptional point; below
the double-zero plane the domain is empty.
"""
import numpy as np

from gyrostab import criteria as C
from gyrostab import surfaces as S
from gyrostab.spectral import Stability

K1, OMEGA, NU = 1.0, 0.03, 0.03
w = C.pure_imaginary_window(K1, OMEGA, NU)

for kappa in (0.06, 0.0, -0.06, w.kappa_d - 0.01):
    result, contours = S.viaduct_slice(kappa, K1, OMEGA, NU)
    stable = (result.grid("verdict") == Stability.AsymptoticallyStable).mean()
    h3 = contours.for_channel("h3")
    print(f"kappa = {kappa:+.4f}: stable fraction {stable:6.2%}, h3 polylines {len(h3)}")
    for ep in C.exceptional_points(K1, OMEGA, NU)[:2]:
        if abs(ep.kappa - kappa) < 1e-12:
            print(f"  EP ({ep.delta1:+.2f}, {ep.delta2:+.2f}) to h3 contour: "
                  f"{contours.distance_to((ep.delta1, ep.delta2), channel='h3'):.5f}")

upper, lower = S.self_intersection_branches(K1, OMEGA, NU)
print(f"self-intersection: upper branch kappa in [{upper[:, 2].min():.3f}, {upper[:, 2].max():.3f}], "
      f"lower branch kappa in [{lower[:, 2].min():.3f}, {lower[:, 2].max():.3f}]")
