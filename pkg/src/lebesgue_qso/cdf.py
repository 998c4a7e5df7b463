"""Continuous initial measures: CDF orbits and Radon-Nikodym densities.

A continuous measure ``lam`` on [0, 1) is carried by its CDF
``g(x) = lam([0, x))``.  The orbit is driven by the interval map

    G(x) = x * (x + 2q(1 - x)),     G'(x) = f(x) = 2px + 2q(1 - x),

with ``g^(1) = g`` and ``g^(i+1) = G(g^(i))``.  The CDF of ``V^k lam`` is
``g^(k+1)`` and its density with respect to ``lam`` is
``f^(k) = prod_{i=1..k} f(g^(i))``.

Orientation: ``G`` moves mass towards 1 when ``p > 1/2``, the mirror image of
the atomic rule, where ``p > 1/2`` favours the smallest atom.  The particle
oracle follows the atomic convention and therefore tracks the orbit of
``KernelParams(q)``, not of ``KernelParams(p)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .kernel import KernelParams
from .quadrature import QuadResult, integrate

LN2 = math.log(2.0)
MONOTONE_TOL = 1e-12


def _unit(x, name="x"):
    arr = np.asarray(x, dtype=float)
    if np.any(~((arr >= 0.0) & (arr <= 1.0))):
        raise ValueError(f"{name} must lie in [0, 1]")
    return arr


def G_map(k: KernelParams, x):
    """``x * (x + 2q(1 - x))``; maps [0, 1] onto itself, increasing."""
    x = _unit(x)
    return x * (x + 2.0 * k.q * (1.0 - x))


def f_factor(k: KernelParams, x):
    """``2px + 2q(1 - x)``, the derivative of :func:`G_map`."""
    x = _unit(x)
    return 2.0 * k.p * x + 2.0 * k.q * (1.0 - x)


def _G(q2: float, x):
    # unchecked G with 2q precomputed
    return x * (x + q2 * (1.0 - x))


def orbit_state(k: KernelParams, r: np.ndarray, upper: np.ndarray, steps: int):
    """Advance a two-sided orbit state ``steps`` times.

    A point is stored as ``r = g`` when ``g <= 1/2`` and as ``r = 1 - g``
    (``upper`` set) otherwise; the complement evolves under ``G`` with ``p``
    and ``q`` exchanged.  Both sides keep full relative precision, which
    matters near the repelling endpoint where errors grow like ``(2p)^n``.
    Crossing 1/2 is exact because ``1 - r`` is exact for ``r`` in [1/2, 1].
    """
    r = np.array(r, dtype=float, copy=True)
    upper = np.array(upper, dtype=bool, copy=True)
    if k.is_identity:
        return r, upper
    q2, p2 = 2.0 * k.q, 2.0 * k.p
    for _ in range(steps):
        r = np.where(upper, _G(p2, r), _G(q2, r))
        flip = r > 0.5
        r = np.where(flip, 1.0 - r, r)
        upper = upper ^ flip
    return r, upper


def _state_to_cdf(r, upper):
    return np.where(upper, 1.0 - r, r)


@dataclass(frozen=True)
class CdfMeasure:
    """Continuous probability measure on [0, 1) given by ``g(x) = lam([0, x))``.

    ``density`` is ``g'`` when known; without it only CDF-based operations
    are available.  ``breakpoints`` mark kinks of ``g`` (grid measures).
    """

    g: Callable[[np.ndarray], np.ndarray]
    name: str
    density: Optional[Callable[[np.ndarray], np.ndarray]] = None
    breakpoints: tuple = field(default=(), repr=False)
    survival: Optional[Callable[[np.ndarray], np.ndarray]] = field(default=None, repr=False)

    def __post_init__(self):
        if float(self.g(np.array(0.0))) != 0.0 or float(self.g(np.array(1.0))) != 1.0:
            raise ValueError(f"CDF {self.name!r} must satisfy g(0)=0 and g(1)=1")
        xs = np.linspace(0.0, 1.0, 1025)
        if np.any(np.diff(self.g(xs)) < -MONOTONE_TOL):
            raise ValueError(f"CDF {self.name!r} is not monotone")

    def __call__(self, x):
        return self.g(np.asarray(x, dtype=float))

    def sf(self, x):
        """``1 - g(x)``, accurate near ``x = 1`` for the presets."""
        x = np.asarray(x, dtype=float)
        if self.survival is not None:
            return self.survival(x)
        return 1.0 - self.g(x)

    def state(self, x):
        """Two-sided representation used by :func:`orbit_state`."""
        g = self(x)
        upper = g > 0.5
        return np.where(upper, self.sf(x), g), upper

    @classmethod
    def uniform(cls) -> "CdfMeasure":
        return cls(g=lambda x: np.array(x, dtype=float, copy=True), name="uniform",
                   density=lambda x: np.ones_like(x, dtype=float), survival=lambda x: 1.0 - x)

    @classmethod
    def power(cls, k: float) -> "CdfMeasure":
        """``g(x) = x**k`` for ``k >= 1``."""
        k = float(k)
        if not (k >= 1.0 and math.isfinite(k)):
            raise ValueError("power exponent must be a finite number >= 1")
        if k == 1.0:
            return cls(g=lambda x: np.array(x, dtype=float, copy=True), name="pow:1",
                       density=lambda x: np.ones_like(x, dtype=float), survival=lambda x: 1.0 - x)

        def survival(x):
            # 1 - x**k = -expm1(k log x), with log x = log1p(-(1 - x)) exact in 1 - x
            with np.errstate(divide="ignore"):
                return -np.expm1(k * np.log1p(-(1.0 - x)))

        return cls(g=lambda x: np.power(x, k), name=f"pow:{k:g}",
                   density=lambda x: k * np.power(x, k - 1.0), survival=survival)

    @classmethod
    def from_grid(cls, xs: Sequence[float], gs: Sequence[float], name: str = "user-grid") -> "CdfMeasure":
        """Piecewise-linear CDF through ``(xs[i], gs[i])``."""
        xs = np.asarray(xs, dtype=float)
        gs = np.asarray(gs, dtype=float)
        if xs.ndim != 1 or xs.shape != gs.shape or xs.size < 2:
            raise ValueError("grid needs at least two (x, g) pairs")
        if xs[0] != 0.0 or xs[-1] != 1.0:
            raise ValueError("grid must start at x=0 and end at x=1")
        if np.any(np.diff(xs) <= 0):
            raise ValueError("grid x values must be strictly increasing")
        if np.any(np.diff(gs) < -MONOTONE_TOL):
            raise ValueError("grid g values must be nondecreasing")
        gs = np.maximum.accumulate(np.clip(gs, 0.0, 1.0))
        return cls(g=lambda x: np.interp(x, xs, gs), name=name,
                   breakpoints=tuple(xs[1:-1]))


@dataclass(frozen=True)
class DensityOrbit:
    """The pair ``(g^(n), f^(n))`` for a kernel and a base measure."""

    params: KernelParams
    base: CdfMeasure
    n: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError("n must be an integer >= 1")

    def advance(self, m: int = 1) -> "DensityOrbit":
        return DensityOrbit(self.params, self.base, self.n + m)

    @property
    def breakpoints(self) -> np.ndarray:
        """Cuts for quadrature: kinks of the base plus dyadic points at both ends.

        The orbit changes within about ``(2 max(p, q))**-n`` of an endpoint,
        far below the node spacing of a coarse rule; cuts at ``2**-j`` and
        ``1 - 2**-j`` for ``j <= n + 10`` resolve that layer.
        """
        depth = min(self.n + 10, 1000)
        dyadic = np.ldexp(1.0, -np.arange(1, depth + 1))
        return np.concatenate((self.base.breakpoints, dyadic, 1.0 - dyadic))

    def state_at(self, x):
        """Two-sided orbit state after ``n - 1`` steps (see :func:`orbit_state`)."""
        r, upper = self.base.state(_unit(x))
        return orbit_state(self.params, r, upper, self.n - 1)

    def cdf_at(self, x):
        """``g^(n)(x)``, the CDF of ``V^(n-1) lam``."""
        return _state_to_cdf(*self.state_at(x))

    def sf_at(self, x):
        """``1 - g^(n)(x)`` without cancellation."""
        r, upper = self.state_at(x)
        return np.where(upper, r, 1.0 - r)

    def next_cdf_at(self, x):
        """``g^(n+1)(x)``, the CDF of ``V^n lam``."""
        return _state_to_cdf(*orbit_state(self.params, *self.state_at(x), 1))

    def _scaled_density(self, x):
        # product kept as mantissa * 2**exponent to avoid overflow
        k = self.params
        r, upper = self.base.state(_unit(x))
        mant = np.ones_like(r)
        expo = np.zeros(r.shape, dtype=np.int64)
        p2, q2 = 2.0 * k.p, 2.0 * k.q
        for i in range(self.n):
            if i:
                r, upper = orbit_state(k, r, upper, 1)
            factor = np.where(upper, p2 * (1.0 - r) + q2 * r, p2 * r + q2 * (1.0 - r))
            mant, e = np.frexp(mant * factor)
            expo += e
        return mant, expo

    def density_at(self, x):
        """``f^(n)(x) = prod_{i<=n} f(g^(i)(x))``; may overflow to inf."""
        mant, expo = self._scaled_density(x)
        with np.errstate(over="ignore", under="ignore"):
            return np.ldexp(mant, expo)

    def log_density_at(self, x):
        """Natural log of :meth:`density_at`; ``-inf`` where a factor is 0."""
        mant, expo = self._scaled_density(x)
        with np.errstate(divide="ignore"):
            return np.log(mant) + expo * LN2

    def measure_of(self, a: float, b: float) -> float:
        """``V^n lam([a, b])`` from the CDF orbit."""
        if a > b:
            raise ValueError("need a <= b")
        ga, gb = self.next_cdf_at(np.array([a, b]))
        return float(gb - ga)

    def integrate_density(self, a: float, b: float, tol: float = 1e-9) -> QuadResult:
        """Adaptive estimate of ``int_a^b f^(n)(x) g'(x) dx``.

        Raises :class:`~lebesgue_qso.quadrature.QuadratureError` when the
        subdivision limit is reached.
        """
        if self.base.density is None:
            raise ValueError(f"base measure {self.base.name!r} has no density; use measure_of")
        _unit([a, b], "interval endpoints")
        if a > b:
            raise ValueError("need a <= b")
        dens = self.base.density
        return integrate(lambda x: self.density_at(x) * dens(x), a, b, tol,
                         breakpoints=self.breakpoints)


def pushforward_interval(k: KernelParams, lam: CdfMeasure, a: float, b: float) -> float:
    """``V lam([a, b]) = L (L + 2p g(a) + 2q (1 - g(b)))`` with ``L = lam([a, b])``."""
    _unit([a, b], "interval endpoints")
    if a > b:
        raise ValueError("need a <= b")
    ga, gb = (float(v) for v in lam(np.array([a, b])))
    L = gb - ga
    return L * (L + 2.0 * k.p * ga + 2.0 * k.q * (1.0 - gb))
