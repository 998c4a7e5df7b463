"""Finite atomic probability measures on [0, 1) and half-open intervals."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

MERGE_TOL = 1e-12
MASS_TOL = 1e-12


def check_point(x: float, name: str = "x") -> float:
    x = float(x)
    if not (0.0 <= x < 1.0):
        raise ValueError(f"{name}={x!r} must lie in [0, 1)")
    return x


@dataclass(frozen=True)
class Interval:
    """Subinterval of [0, 1).

    ``Interval(lo, hi)`` is ``[lo, hi)``; with ``closed=True`` it is
    ``[lo, hi]``, so ``Interval(a, a, closed=True)`` is the singleton ``{a}``.
    """

    lo: float
    hi: float
    closed: bool = False

    def __post_init__(self):
        if not (0.0 <= self.lo <= self.hi <= 1.0):
            raise ValueError(f"invalid interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, a: float) -> "Interval":
        return cls(a, a, closed=True)

    def __contains__(self, x) -> bool:
        if self.closed:
            return self.lo <= x <= self.hi
        return self.lo <= x < self.hi


class AtomicMeasure:
    """Convex combination of Dirac measures with sorted, distinct atoms.

    Construction sorts the atoms, coalesces atoms closer than ``MERGE_TOL``
    (adding their weights), drops zero weights and renormalizes.  The total
    mass must already be within ``MASS_TOL`` of one.
    """

    __slots__ = ("atoms", "weights")

    def __init__(self, atoms: Iterable[float], weights: Iterable[float]):
        a = np.asarray(list(atoms) if not isinstance(atoms, np.ndarray) else atoms, dtype=float)
        w = np.asarray(list(weights) if not isinstance(weights, np.ndarray) else weights, dtype=float)
        if a.ndim != 1 or a.shape != w.shape:
            raise ValueError("atoms and weights must be 1-d sequences of equal length")
        if a.size == 0:
            raise ValueError("an atomic measure needs at least one atom")
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(w))):
            raise ValueError("atoms and weights must be finite")
        if np.any((a < 0.0) | (a >= 1.0)):
            raise ValueError("atoms must lie in [0, 1)")
        if np.any(w < 0.0):
            raise ValueError("weights must be nonnegative")
        total = w.sum()
        if abs(total - 1.0) > MASS_TOL:
            raise ValueError(f"weights sum to {total!r}, not 1")

        order = np.argsort(a, kind="stable")
        a, w = a[order], w[order]
        # coalesce near-duplicates into the first atom of each cluster
        starts = np.concatenate(([True], np.diff(a) > MERGE_TOL))
        group = np.cumsum(starts) - 1
        a = a[starts]
        w = np.bincount(group, weights=w)
        keep = w > 0.0
        a, w = a[keep], w[keep]
        w = w / w.sum()
        self._set(a, w)

    def _set(self, atoms: np.ndarray, weights: np.ndarray) -> None:
        atoms = np.array(atoms, dtype=float)
        weights = np.array(weights, dtype=float)
        atoms.flags.writeable = False
        weights.flags.writeable = False
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "weights", weights)

    def __setattr__(self, name, value):
        raise AttributeError("AtomicMeasure is immutable")

    @classmethod
    def _trusted(cls, atoms: np.ndarray, weights: np.ndarray) -> "AtomicMeasure":
        # skips validation and renormalization; callers guarantee the invariants
        obj = cls.__new__(cls)
        obj._set(atoms, weights)
        return obj

    @classmethod
    def dirac(cls, a: float) -> "AtomicMeasure":
        return cls._trusted(np.array([check_point(a, "a")]), np.array([1.0]))

    @classmethod
    def from_mapping(cls, mapping: Mapping[float, float]) -> "AtomicMeasure":
        return cls(list(mapping.keys()), list(mapping.values()))

    def as_dict(self) -> dict[float, float]:
        return {float(a): float(w) for a, w in zip(self.atoms, self.weights)}

    def weight_at(self, x: float) -> float:
        i = np.searchsorted(self.atoms, x)
        if i < self.atoms.size and self.atoms[i] == x:
            return float(self.weights[i])
        return 0.0

    def measure_of(self, interval: Interval) -> float:
        return float(sum(w for a, w in zip(self.atoms, self.weights) if a in interval))

    def cdf(self, x) -> np.ndarray:
        """``lambda([0, x))``, vectorized over ``x``."""
        cum = np.concatenate(([0.0], np.cumsum(self.weights)))
        return cum[np.searchsorted(self.atoms, x, side="left")]

    @property
    def mass(self) -> float:
        return float(self.weights.sum())

    def __len__(self) -> int:
        return int(self.atoms.size)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AtomicMeasure):
            return NotImplemented
        return np.array_equal(self.atoms, other.atoms) and np.array_equal(self.weights, other.weights)

    def __hash__(self):
        return hash((self.atoms.tobytes(), self.weights.tobytes()))

    def __repr__(self) -> str:
        body = ", ".join(f"{a:g}: {w:.6g}" for a, w in zip(self.atoms, self.weights))
        return f"AtomicMeasure({{{body}}})"
