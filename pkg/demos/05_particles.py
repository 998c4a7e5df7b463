"""
A particle picture of the operator
==================================

Every child picks two parents from the current population and keeps the
smaller one with probability ``p``.  On atoms the particles reproduce the exact
weights.  On a continuous start they follow the CDF orbit of the kernel's own
orientation, which is the orbit of ``G`` with ``p`` and ``q`` exchanged.
"""

import numpy as np

from lebesgue_qso import (
    AtomicMeasure,
    CdfMeasure,
    DensityOrbit,
    KernelParams,
    evolve,
    iterate,
    kolmogorov_distance,
    sample_initial,
)

N = 100_000
k = KernelParams(0.8)

lam = AtomicMeasure([0.1, 0.4, 0.75], [0.3, 0.45, 0.25])
e = evolve(k, sample_initial(lam, N, seed=1), 5)
print("particles:", np.round(e.weights_on(lam.atoms), 4))
print("exact    :", np.round(iterate(k, lam, 5).weight_table()[-1], 4))

uniform = CdfMeasure.uniform()
e = evolve(k, sample_initial(uniform, N, seed=2), 3)
print("\nKolmogorov distance after 3 steps")
print("  to the orbit of G with p, q exchanged:", round(kolmogorov_distance(e, DensityOrbit(k.swapped(), uniform, 4).cdf_at), 4))
print("  to the orbit of G itself            :", round(kolmogorov_distance(e, DensityOrbit(k, uniform, 4).cdf_at), 4))
print("mean particle position:", round(float(e.points.mean()), 4))
