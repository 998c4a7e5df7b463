"""Transition kernels ``P(x, y, .)`` generating quadratic stochastic operators.

Two families are provided.  The parametric Lebesgue kernel sends a pair of
distinct parents to the smaller one with probability ``p`` and to the larger
one with probability ``q = 1 - p``; equal parents reproduce themselves.  The
identity kernel splits mass evenly between the two parents and generates the
identity operator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .measure import AtomicMeasure, Interval, check_point


@dataclass(frozen=True)
class KernelParams:
    """Weight ``p`` placed on the smaller of two distinct parents."""

    p: float

    def __post_init__(self):
        p = self.p
        if isinstance(p, bool) or not isinstance(p, (int, float, np.floating, np.integer)):
            raise TypeError(f"p must be a real number, got {type(p).__name__}")
        if not math.isfinite(p):
            raise ValueError(f"p must be finite, got {p!r}")
        if not (0.0 <= p <= 1.0):
            raise ValueError("p must lie in [0,1]")
        object.__setattr__(self, "p", float(p))

    @property
    def q(self) -> float:
        return 1.0 - self.p

    @property
    def is_identity(self) -> bool:
        return self.p == 0.5

    def swapped(self) -> "KernelParams":
        """Parameters with the roles of ``p`` and ``q`` exchanged."""
        return KernelParams(self.q)


@dataclass(frozen=True)
class IdentityExample:
    """Kernel ``P(x, y, A) = (1[x in A] + 1[y in A]) / 2``."""


KernelVariant = Union[KernelParams, IdentityExample]


def kernel_measure(k: KernelParams, x: float, y: float) -> AtomicMeasure:
    """Offspring distribution ``P(x, y, .)`` of the Lebesgue kernel.

    >>> kernel_measure(KernelParams(0.8), 0.3, 0.7).as_dict()
    {0.3: 0.8, 0.7: 0.19999999999999996}
    """
    x = check_point(x, "x")
    y = check_point(y, "y")
    if x == y:
        return AtomicMeasure.dirac(x)
    lo, hi = (x, y) if x < y else (y, x)
    weights = np.array([k.p, k.q])
    keep = weights > 0.0
    return AtomicMeasure._trusted(np.array([lo, hi])[keep], weights[keep])


def identity_kernel_measure(x: float, y: float, A: Interval) -> float:
    """``P(x, y, A)`` for the identity kernel: 1, 1/2 or 0."""
    x = check_point(x, "x")
    y = check_point(y, "y")
    return 0.5 * ((x in A) + (y in A))


def transition_probability(kernel: KernelVariant, x: float, y: float, A: Interval) -> float:
    """``P(x, y, A)`` for either kernel variant."""
    if isinstance(kernel, IdentityExample):
        return identity_kernel_measure(x, y, A)
    return kernel_measure(kernel, x, y).measure_of(A)
