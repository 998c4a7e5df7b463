"""
CDF and density orbits of a continuous measure
==============================================

For a continuous start the CDF is pushed through the quadratic map
``G(x) = x (x + 2q(1 - x))`` and the density relative to the start is a product
of linear factors ``f(x) = 2px + 2q(1 - x)``.
"""

import numpy as np

from lebesgue_qso import CdfMeasure, DensityOrbit, KernelParams, pushforward_interval

k = KernelParams(0.8)
uniform = CdfMeasure.uniform()

# the mass of an interval after one step needs only the CDF at its ends
print("V lam([0.2, 0.6]) =", pushforward_interval(k, uniform, 0.2, 0.6))

# densities at the endpoints are exact powers
o = DensityOrbit(k, uniform, 3)
print("f_3(0), f_3(1) =", o.density_at(np.array([0.0, 1.0])))

# the same interval mass, now by integrating the density
o1 = DensityOrbit(k, uniform, 1)
res = o1.integrate_density(0.2, 0.6)
print(f"int_0.2^0.6 f_1 = {res.value:.15f} (error estimate {res.error:.1e}, {res.intervals} intervals)")

# a table of the orbit: mass drains towards x = 1
x = np.linspace(0, 1, 6)
print("\n   n  " + "  ".join(f"g_n({v:.1f})" for v in x))
for n in (1, 2, 5, 10, 20):
    row = DensityOrbit(k, uniform, n).cdf_at(x)
    print(f"{n:4d}  " + "  ".join(f"{v:9.6f}" for v in row))

# near x = 1 the density grows like (2p)^n; the log stays finite
big = DensityOrbit(k, uniform, 2000)
print("\nlog f_2000(1) =", float(big.log_density_at(1.0)), " vs 2000 log 1.6 =", 2000 * np.log(1.6))
