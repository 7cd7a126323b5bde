"""Bubble of instability of a slightly anisotropic rotor near its critical speed.

Stiffnesses 1 + eps and 1 - eps: the rotor diverges for
sqrt(1 - eps) < omega < sqrt(1 + eps).
"""
import numpy as np
from scipy.optimize import bisect

from gyrostab import criteria as C
from gyrostab import models as M
from gyrostab import surfaces as S
from gyrostab.spectral import classify

EPS = 0.2


def growth(om):
    return classify(M.build_brouwer(M.BrouwerParams(1 + EPS, 1 - EPS, om))).max_real_part


lo, hi = C.bubble_interval(EPS)
print(f"bubble for eps = {EPS}: [{lo:.6f}, {hi:.6f}]")
for om in np.linspace(0.85, 1.15, 7):
    print(f"  omega = {om:.3f}  max Re = {growth(om):.5f}")
l = bisect(lambda o: 1.0 if growth(o) > 1e-8 else -1.0, 0.8, 1.0, xtol=1e-12)
h = bisect(lambda o: -1.0 if growth(o) > 1e-8 else 1.0, 1.0, 1.2, xtol=1e-12)
print(f"bisection: [{l:.9f}, {h:.9f}]")

om, ep = np.meshgrid(np.linspace(0, 2, 100), np.linspace(0, 0.9, 100))
rep = S.certify_surface_forms(om, ep)
print("surface residuals:", {k: v for k, v in rep.items() if k.startswith(("whirl", "growth"))})
