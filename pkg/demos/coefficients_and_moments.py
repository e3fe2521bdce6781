"""Expansion coefficients, Parseval partial sums and energy moments.

Run: python3 demos/coefficients_and_moments.py
"""

from fractions import Fraction

import numpy as np

from wellsum import PrecisionContext, spectral

ctx = PrecisionContext(256)
state = (Fraction(5, 2), Fraction(5, 2))

# three routes to C_n
for n in range(1, 6):
    vals = [spectral.coeff(state, n, r, ctx) for r in spectral.routes_for(state)]
    print(n, [float(v) for v in vals], float(max(vals) - min(vals)))

# partial sums of |C_n|^2 approach 1 from below
c2 = np.array([float(spectral.coeff(state, n, "Hypergeometric", ctx)) ** 2 for n in range(1, 41)])
print(1 - np.cumsum(c2)[[0, 4, 9, 19, 39]])

# <H> and <H^2> (hbar^2/2m = a = 1)
print(spectral.energy_moment_integral(state, 1), spectral.energy_moment_integral(state, 2))
print(spectral.energy_moment_quadrature(state, 1, ctx))

# sum n^2 pi^2 |C_n|^2 converges to <H>, slowly
e = np.cumsum([(n * np.pi) ** 2 * c for n, c in enumerate(c2, 1)])
print(e[-1])

# samples for plotting elsewhere
pts = spectral.sample_wavefunction((Fraction(3, 2), Fraction(7, 2)), 11, ctx)
print(spectral.write_samples_csv(pts, digits=8))
