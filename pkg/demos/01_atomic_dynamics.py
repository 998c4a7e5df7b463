"""
Atomic measures under the operator
==================================

A measure with finitely many atoms stays on those atoms forever.  Only the
weights move, and the extreme atom favoured by ``p`` swallows the rest.
"""

import numpy as np

from lebesgue_qso import AtomicMeasure, KernelParams, apply_once, iterate, predict_limit

# two parents at 0.3 and 0.7: the smaller one survives with probability p
k = KernelParams(0.8)
lam = AtomicMeasure([0.2, 0.7], [0.5, 0.5])
print("one step :", apply_once(k, lam).as_dict())
print("two steps:", iterate(k, lam, 2).last.as_dict())

# with three atoms the middle one loses mass from both sides
three = AtomicMeasure([0.1, 0.5, 0.9], [1 / 3, 1 / 3, 1 / 3])
table = iterate(k, three, 12).weight_table()
np.set_printoptions(precision=5, suppress=True)
print("\nweights of 0.1, 0.5, 0.9 over 12 steps (p = 0.8)")
print(table)

# the losing atom shrinks by a factor close to 2q per step
tail = table[:, -1]
print("\ntail ratios:", tail[1:] / tail[:-1])

# reversing the bias sends everything to the largest atom
for p in (0.8, 0.3, 0.5):
    print(f"p = {p}: limit {predict_limit(KernelParams(p), three).as_dict()}")
