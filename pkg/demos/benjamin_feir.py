"""Benjamin-Feir reduction: indefinite damping with zero trace.

The spectrum stays symmetric under reflection in the imaginary axis, and
instability sets in through a Krein collision as the amplitude |u0| grows.
"""
import math

import numpy as np
from scipy.optimize import bisect

from gyrostab import criteria as C
from gyrostab import models as M
from gyrostab.spectral import characteristic_coefficients, classify

ALPHA, GAMMA, K, SIGMA = 1.2, 0.8, 0.7, 0.4

for r in (0.0, 0.2, 0.34, 0.35, 0.5):
    s = M.build_benjamin_feir(M.BenjaminFeirParams(ALPHA, GAMMA, K, SIGMA, (r, 0.0)))
    v = classify(s)
    rep = C.biquadratic_conditions(s)
    print(f"|u0| = {r:.2f}  {v.klass.name:18s} max Re = {v.max_real_part:.4f}  "
          f"tr B = {rep.details['tr_b']:.1e}  tr AB = {rep.details['tr_ab']:.1e}")


def disc(r):
    c = characteristic_coefficients(*M.benjamin_feir_matrices(ALPHA, GAMMA, K, SIGMA, r, 0.0))
    return float(C.biquadratic_marginal_margins(c)["disc"])


r0 = bisect(disc, 0.0, 1.0, xtol=1e-14)
print(f"Krein collision at |u0| = {r0:.12f}; sqrt(sigma^2 alpha / (2 gamma)) = "
      f"{math.sqrt(SIGMA**2 * ALPHA / (2 * GAMMA)):.12f}")
