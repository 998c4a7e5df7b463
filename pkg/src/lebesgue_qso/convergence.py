"""Distances from the orbit to its Dirac limit, and stopping rules.

Distances are Wasserstein-1 to a Dirac mass: ``sum_i w_i |a_i - t|`` for atomic
measures and ``int_0^t h + int_t^1 (1 - h)`` for a CDF ``h``.  The Kolmogorov
distance is useless here because the CDF of a continuous measure never comes
uniformly close to a step function.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .atomic import apply_once, predict_limit
from .cdf import CdfMeasure, DensityOrbit
from .kernel import KernelParams
from .measure import AtomicMeasure
from .quadrature import integrate

Snapshot = Union[AtomicMeasure, DensityOrbit, CdfMeasure]


def w1_to_dirac(snapshot: Snapshot, target: float, tol: float = 1e-11) -> float:
    """W1 distance from a measure to the Dirac mass at ``target``.

    A :class:`DensityOrbit` at step ``n`` stands for ``V^(n-1) lam`` (CDF
    ``g^(n)``).  ``tol`` is the quadrature tolerance for continuous measures.
    """
    t = float(target)
    if not (0.0 <= t <= 1.0):
        raise ValueError("target must lie in [0, 1]")
    if isinstance(snapshot, AtomicMeasure):
        return float(np.dot(snapshot.weights, np.abs(snapshot.atoms - t)))
    if isinstance(snapshot, DensityOrbit):
        cdf, sf, breaks = snapshot.cdf_at, snapshot.sf_at, snapshot.breakpoints
    elif isinstance(snapshot, CdfMeasure):
        cdf, sf, breaks = snapshot, snapshot.sf, snapshot.breakpoints
    else:
        raise TypeError(f"cannot measure distance for {type(snapshot).__name__}")
    below = integrate(cdf, 0.0, t, tol / 2, breakpoints=breaks).value
    above = integrate(sf, t, 1.0, tol / 2, breakpoints=breaks).value
    return below + above


def describe(initial) -> str:
    if isinstance(initial, AtomicMeasure):
        return "atoms " + ",".join(f"{a!r}:{w!r}" for a, w in initial.as_dict().items())
    return initial.name


@dataclass
class ConvergenceReport:
    params: KernelParams
    initial: str
    metric: str
    predicted_limit: Union[float, str]
    distances: list = field(default_factory=list)
    converged_at: Optional[int] = None
    tol: float = 0.0

    @property
    def converged(self) -> bool:
        return self.converged_at is not None

    def to_dict(self) -> dict:
        return {
            "p": self.params.p,
            "initial": self.initial,
            "metric": self.metric,
            "tol": self.tol,
            "predicted_limit": self.predicted_limit,
            "converged_at": self.converged_at,
            "distances": [[int(s), float(v)] for s, v in self.distances],
        }


def run_to_convergence(
    k: KernelParams,
    initial: Union[AtomicMeasure, CdfMeasure],
    tol: float = 1e-3,
    max_steps: int = 200,
    metric: str = "W1",
) -> ConvergenceReport:
    """Iterate until the distance to the predicted limit is at most ``tol``.

    Atomic data converge to the extreme atom chosen by ``p``; continuous data
    to ``delta_1`` when ``p > 1/2`` and ``delta_0`` when ``p < 1/2``.  The
    ``"tail-mass"`` metric (atomic data only) is one minus the weight of the
    limiting atom.  Non-convergence is reported through ``converged_at=None``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if metric not in ("W1", "tail-mass"):
        raise ValueError(f"unknown metric {metric!r}")
    atomic = isinstance(initial, AtomicMeasure)
    if metric == "tail-mass" and not atomic:
        raise ValueError("tail-mass is defined for atomic initial measures only")

    report = ConvergenceReport(k, describe(initial), metric, "identity", tol=tol)
    if k.is_identity:
        report.distances.append((0, 0.0))
        report.converged_at = 0
        return report

    if atomic:
        target = float(predict_limit(k, initial).atoms[0])
    else:
        target = 1.0 if k.p > 0.5 else 0.0
    report.predicted_limit = target
    quad_tol = min(1e-10, tol * 1e-3)

    current = initial if atomic else DensityOrbit(k, initial, 1)
    for step in range(max_steps + 1):
        if step:
            current = apply_once(k, current) if atomic else current.advance()
        if metric == "tail-mass":
            d = 1.0 - current.weight_at(target)
        else:
            d = w1_to_dirac(current, target, quad_tol)
        report.distances.append((step, d))
        if d <= tol:
            report.converged_at = step
            break
    return report


def fixed_point_check(k: KernelParams, a: float) -> float:
    """``|V delta_a({a}) - 1|``; zero for every Dirac mass."""
    image = apply_once(k, AtomicMeasure.dirac(a))
    return abs(image.weight_at(float(a)) - 1.0)
