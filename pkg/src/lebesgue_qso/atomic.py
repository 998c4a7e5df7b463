"""Exact dynamics of the operator on finite atomic measures.

For atoms ``a_1 < ... < a_m`` with weights ``w_k`` one application gives

    w_k' = w_k * (w_k + 2 q * sum_{j<k} w_j + 2 p * sum_{j>k} w_j),

a Volterra-type update: the atom list never grows, and the new weights sum to
``(sum w)^2 = 1``.  :func:`volterra_weights` returns the raw update;
:func:`apply_once` rescales it by its sum, which differs from 1 only by
rounding.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .kernel import IdentityExample, KernelParams, KernelVariant, transition_probability
from .measure import AtomicMeasure, Interval

#: weights below this are treated as extinct and removed
DROP_THRESHOLD = 1e-300


def volterra_weights(k: KernelParams, weights: np.ndarray) -> np.ndarray:
    """One-step weight update for sorted atoms, in O(m)."""
    w = np.asarray(weights, dtype=float)
    below = np.concatenate(([0.0], np.cumsum(w)[:-1]))
    above = np.concatenate((np.cumsum(w[::-1])[::-1][1:], [0.0]))
    return w * (w + 2.0 * k.q * below + 2.0 * k.p * above)


def apply_once(k: KernelVariant, lam: AtomicMeasure) -> AtomicMeasure:
    """Image of ``lam`` under the operator generated by ``k``."""
    if isinstance(k, IdentityExample) or k.is_identity:
        return lam
    w = volterra_weights(k, lam.weights)
    # total mass 1 is an unstable fixed point of s -> s**2, so rounding drift
    # would double every step without this
    w = w / w.sum()
    keep = w >= DROP_THRESHOLD
    if keep.all():
        return AtomicMeasure._trusted(lam.atoms, w)
    return AtomicMeasure._trusted(lam.atoms[keep], w[keep])


def apply_once_bruteforce(k: KernelVariant, lam: AtomicMeasure) -> np.ndarray:
    """New weight of every atom of ``lam`` as the full double sum over parents.

    Independent of :func:`volterra_weights`: each term is read off the kernel
    itself.  Quadratic in the number of atoms; meant as a check.
    """
    a, w = lam.atoms, lam.weights
    m = a.size
    out = np.zeros(m)
    for t in range(m):
        target = Interval.point(a[t])
        total = 0.0
        for i in range(m):
            for j in range(m):
                total += w[i] * w[j] * transition_probability(k, a[i], a[j], target)
        out[t] = total
    return out


@dataclass
class AtomicTrajectory:
    """Orbit ``lam, V lam, ..., V^n lam`` plus the atoms lost along the way."""

    params: KernelVariant
    measures: list[AtomicMeasure]
    dropped: list[tuple[int, float]] = field(default_factory=list)

    def __len__(self):
        return len(self.measures)

    def __getitem__(self, i):
        return self.measures[i]

    def __iter__(self):
        return iter(self.measures)

    @property
    def last(self) -> AtomicMeasure:
        return self.measures[-1]

    def weight_table(self) -> np.ndarray:
        """``(n+1, m)`` array of weights over the initial atom list, 0 once dropped."""
        atoms = self.measures[0].atoms
        table = np.zeros((len(self.measures), atoms.size))
        for s, mu in enumerate(self.measures):
            table[s, np.searchsorted(atoms, mu.atoms)] = mu.weights
        return table


def iterate(k: KernelVariant, lam: AtomicMeasure, n: int) -> AtomicTrajectory:
    """Trajectory of length ``n + 1`` starting at ``lam``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    measures = [lam]
    dropped = []
    current = lam
    for step in range(1, n + 1):
        nxt = apply_once(k, current)
        if len(nxt) < len(current):
            lost = np.setdiff1d(current.atoms, nxt.atoms)
            dropped.extend((step, float(a)) for a in lost)
        measures.append(nxt)
        current = nxt
    return AtomicTrajectory(k, measures, dropped)


def predict_limit(k: KernelVariant, lam: AtomicMeasure) -> AtomicMeasure:
    """Limit of the trajectory: the extreme atom favoured by ``p``."""
    if isinstance(k, IdentityExample) or k.is_identity:
        return lam
    if k.p > 0.5:
        return AtomicMeasure.dirac(lam.atoms[0])
    return AtomicMeasure.dirac(lam.atoms[-1])
