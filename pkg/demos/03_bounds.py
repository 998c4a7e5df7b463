"""
Certified decay away from the attracting endpoint
=================================================

The constants ``beta_n`` and ``B_n`` certify that ``G`` contracts ``[0, B_n]``
linearly.  The numerical checks below confirm that part and show where the
claimed exponential density bound breaks down for mild bias.
"""

from lebesgue_qso import CdfMeasure, KernelParams, certificate, density_bound_chain, min_valid_n, verify_bounds

uniform = CdfMeasure.uniform()

for p in (0.6, 0.8, 0.95, 0.2):
    k = KernelParams(p)
    n0 = min_valid_n(k)
    c = certificate(k, n0)
    print(f"p = {p}: first valid n = {n0}, beta = {c.beta_n:.6f}, domain end = {c.domain_end:.6g}")

# every inequality holds for strong bias
rep = verify_bounds(KernelParams(0.8), uniform, 10, 1000)
print("\np = 0.8, n = 10:", {name: f"{v:.2e}" for name, v in rep.violations.items()})

# for p = 0.6 the orbit contracts as promised, yet the density bound fails
rep = verify_bounds(KernelParams(0.6), uniform, 19, 1000)
print("p = 0.6, n = 19:", {name: f"{v:.2e}" for name, v in rep.violations.items()})

# the culprit is the first link of the chain: f keeps its intercept 2q
print("chain at p = 0.6, n = 19:", density_bound_chain(KernelParams(0.6), uniform, 19))
