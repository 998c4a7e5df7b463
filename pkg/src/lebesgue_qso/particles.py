"""Monte Carlo particle approximation of the operator.

Each child of the next generation picks two parents uniformly (with
replacement) from the current one and becomes the smaller parent with
probability ``p``, the larger with probability ``q``.  The law of a child is
exactly ``V`` applied to the empirical measure of the parents.

Random streams come from numpy's PCG64 keyed by
``SeedSequence(seed, spawn_key=(generation, worker))``, so a run is
reproducible from ``(seed, inputs, threads)`` alone.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .cdf import CdfMeasure
from .kernel import KernelParams
from .measure import AtomicMeasure

INVERSION_TOL = 1e-12
_BELOW_ONE = np.nextafter(1.0, 0.0)


def make_rng(seed: int, generation: int, worker: int = 0) -> np.random.Generator:
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(generation), int(worker)))
    return np.random.Generator(np.random.PCG64(ss))


@dataclass(frozen=True)
class ParticleEnsemble:
    points: np.ndarray
    seed: int
    generation: int = 0

    def __post_init__(self):
        pts = np.sort(np.asarray(self.points, dtype=float))
        if pts.size < 1:
            raise ValueError("an ensemble needs at least one particle")
        if np.any((pts < 0.0) | (pts >= 1.0)):
            raise ValueError("particles must lie in [0, 1)")
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return int(self.points.size)

    def weights_on(self, atoms) -> np.ndarray:
        """Fraction of particles sitting exactly on each of ``atoms``."""
        atoms = np.asarray(atoms, dtype=float)
        left = np.searchsorted(self.points, atoms, side="left")
        right = np.searchsorted(self.points, atoms, side="right")
        return (right - left) / self.points.size

    def empirical_cdf(self, x) -> np.ndarray:
        """Fraction of particles strictly below ``x``."""
        return np.searchsorted(self.points, x, side="left") / self.points.size

    def summary(self) -> dict:
        pts = self.points
        return {
            "n_particles": int(pts.size),
            "seed": int(self.seed),
            "generation": int(self.generation),
            "mean": float(pts.mean()),
            "min": float(pts[0]),
            "max": float(pts[-1]),
            "distinct_values": int(np.unique(pts).size),
        }


def invert_cdf(g: Callable[[np.ndarray], np.ndarray], u: np.ndarray, tol: float = INVERSION_TOL) -> np.ndarray:
    """Vectorized bisection for ``g(x) = u`` on [0, 1]."""
    u = np.asarray(u, dtype=float)
    lo = np.zeros_like(u)
    hi = np.ones_like(u)
    while np.max(hi - lo) > tol:
        mid = 0.5 * (lo + hi)
        below = g(mid) < u
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return np.minimum(0.5 * (lo + hi), _BELOW_ONE)


def sample_initial(spec: Union[AtomicMeasure, CdfMeasure], N: int, seed: int) -> ParticleEnsemble:
    """Draw ``N`` particles from an atomic or continuous measure."""
    if int(N) != N or N < 1:
        raise ValueError("N must be a positive integer")
    rng = make_rng(seed, 0)
    if isinstance(spec, AtomicMeasure):
        counts = rng.multinomial(int(N), spec.weights)
        points = np.repeat(spec.atoms, counts)
    else:
        points = invert_cdf(spec, rng.random(int(N)))
    return ParticleEnsemble(points, int(seed), 0)


def _children(k: KernelParams, parents: np.ndarray, count: int, rng: np.random.Generator) -> np.ndarray:
    idx = rng.integers(0, parents.size, size=(2, count))
    x, y = parents[idx[0]], parents[idx[1]]
    take_min = rng.random(count) < k.p
    return np.where(take_min, np.minimum(x, y), np.maximum(x, y))


def step_generation(k: KernelParams, e: ParticleEnsemble, threads: int = 1) -> ParticleEnsemble:
    """Next generation of the same size; ``threads`` workers share the children."""
    if threads < 1:
        raise ValueError("threads must be >= 1")
    N = len(e)
    gen = e.generation + 1
    sizes = [N // threads + (1 if w < N % threads else 0) for w in range(threads)]
    if threads == 1:
        kids = _children(k, e.points, N, make_rng(e.seed, gen, 0))
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = pool.map(lambda w: _children(k, e.points, sizes[w], make_rng(e.seed, gen, w)),
                             range(threads))
            kids = np.concatenate(list(parts))
    return ParticleEnsemble(kids, e.seed, gen)


def evolve(k: KernelParams, e: ParticleEnsemble, steps: int, threads: int = 1) -> ParticleEnsemble:
    for _ in range(steps):
        e = step_generation(k, e, threads)
    return e


def kolmogorov_distance(e: ParticleEnsemble, cdf: Callable[[np.ndarray], np.ndarray]) -> float:
    """``sup_x |F_N(x) - F(x)|`` against a continuous CDF ``F``."""
    values, counts = np.unique(e.points, return_counts=True)
    cum = np.cumsum(counts) / e.points.size
    before = np.concatenate(([0.0], cum[:-1]))
    F = np.asarray(cdf(values), dtype=float)
    return float(max(np.max(np.abs(cum - F)), np.max(np.abs(before - F))))
