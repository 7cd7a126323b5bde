"""Time integration: lab frame against rotating frame, and growth rates.

The helical quadrupole is integrated in the lab frame with RK4, then mapped
to the rotating frame and compared with the exact autonomous propagator.
"""
import math

import numpy as np

from gyrostab import models as M
from gyrostab import timesim as T
from gyrostab.spectral import SystemMatrices, classify

p = M.HelicalQuadParams(a=0.1)
x0 = np.array([1.0, 0.0, 0.0, 0.2])
lab = T.integrate_nonautonomous_quad(p, x0, 20, 0.01)
rot = M.lab_to_corotating_state(lab.states, lab.times / 2, 0.5)
auto = T.integrate_autonomous(M.build_helical_quad(p), rot[0], 20, 0.01)
print(f"helical quadrupole: sup |lab->rot - autonomous| = {np.abs(rot - auto.states).max():.2e}"
      f" (internal step {lab.meta['internal_step']})")

q = M.CholestericParams(0.8, 1.0, 1.3, 0.6)
lab = T.integrate_cholesteric_lab(q, x0, 20, 0.01)
rot = M.lab_to_corotating_state(lab.states, q.alpha * lab.times, q.alpha)
auto = T.integrate_autonomous(M.build_cholesteric(q), rot[0], 20, 0.01)
print(f"cholesteric: sup difference = {np.abs(rot - auto.states).max():.2e}")

g = T.measure_growth_rate(T.integrate_rankine(1.0, 1.1, None, 60, 0.01))
print(f"Rankine above critical speed: measured rate {g.rate:.5f}, sqrt(0.21) = {math.sqrt(0.21):.5f}")

s = M.build_shieh_masur(M.ShiehMasurParams(1, 1, 0.03, 0.1, 0.1, 0.03))
g = T.measure_growth_rate(T.integrate_autonomous(s, None, 400, 0.05))
print(f"damped rotor: measured {g.rate:.5f}, spectral {classify(s).max_real_part:.5f}")

z = np.zeros((2, 2))
g = T.measure_growth_rate(T.integrate_autonomous(SystemMatrices(z, z), (1, 0, 0, 1), 200, 0.1))
print(f"quadruple zero: exponential fit residual {g.fit_residual:.2e}, "
      f"power law exponent {g.power_exponent:.4f} residual {g.power_residual:.2e}")
