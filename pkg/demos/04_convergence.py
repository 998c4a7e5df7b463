"""
Convergence to a Dirac mass
===========================

Wasserstein-1 distance to the predicted limit, step by step.  Once the
transient has passed, the distance shrinks by about ``1 / (2 max(p, q))`` per
step for continuous data and by ``2 min(p, q)`` for atomic data.  A start with
little mass near the target, such as ``pow:2`` heading for 0, has a longer
transient.
"""

from lebesgue_qso import AtomicMeasure, CdfMeasure, KernelParams, run_to_convergence

cases = [
    (0.8, CdfMeasure.uniform()),
    (0.3, CdfMeasure.power(2)),
    (0.3, AtomicMeasure([0.2, 0.7], [0.5, 0.5])),
    (0.5, CdfMeasure.uniform()),
]
for p, init in cases:
    rep = run_to_convergence(KernelParams(p), init, tol=1e-6, max_steps=200)
    d = [v for _, v in rep.distances]
    ratio = d[-1] / d[-2] if len(d) > 1 and d[-2] > 0 else float("nan")
    print(f"p = {p}, {rep.initial}: limit {rep.predicted_limit}, "
          f"converged at step {rep.converged_at}, last ratio {ratio:.4f}")
