"""Exceptional points and the pure-imaginary handles of a damped rotor.

Uses k1 = 1, rotation speed 0.03 and circulatory stiffness 0.03.
"""
import numpy as np

from gyrostab import criteria as C
from gyrostab import models as M
from gyrostab.spectral import characteristic_coefficients, classify, quartic_roots_closed_form

K1, OMEGA, NU = 1.0, 0.03, 0.03

for ep in C.exceptional_points(K1, OMEGA, NU):
    s = M.build_shieh_masur(M.ShiehMasurParams(K1, K1 + ep.kappa, OMEGA, ep.delta1, ep.delta2, NU))
    v = classify(s)
    jordan = [c for c in v.spectrum.clusters if not c.semisimple]
    print(f"{ep.kind:18s} (d1, d2, kappa) = ({ep.delta1:+.4f}, {ep.delta2:+.4f}, {ep.kappa:+.4f})"
          f"  lambda = {ep.eigenvalue:.6f}  verdict {v.klass.name}, Jordan blocks {len(jordan)}")

w = C.pure_imaginary_window(K1, OMEGA, NU)
print(f"double zero at delta1 = {w.delta_d:.10f}, kappa = {w.kappa_d:.10f}")

# walk along kappa = -4 omega nu / delta1, delta2 = -delta1
for d in (-0.06, -0.03, -0.001, 0.002, 0.0037, 0.03, 0.06):
    s = M.build_shieh_masur(M.ShiehMasurParams(K1, K1 - 4 * OMEGA * NU / d, OMEGA, d, -d, NU))
    r = quartic_roots_closed_form(characteristic_coefficients(s.a, s.b))
    tag = "window" if w.contains(np.array([d]))[0] else "saddle"
    print(f"  delta1 = {d:+.4f} [{tag}]  max|Re| = {np.abs(r.real).max():.2e}")
