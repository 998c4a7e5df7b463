"""Certificates bounding the density orbit away from the attracting endpoint.

For ``p > 1/2`` and ``n >= 2`` put

    beta_n = (1 - 1/n) * (16 p^4)^(-1/(n-1)),   B_n = (beta_n - 2q) / (1 - 2q).

Once ``beta_n > 2q`` the interval ``[0, B_n]`` is mapped into itself by ``G``
with ``G(y) <= beta_n * y`` there, and the density ``f^(n)`` is claimed to be at
most ``(1/2p)^n`` wherever ``g(x) <= B_n``.  For ``p < 1/2`` everything is
reflected through ``x -> 1 - x`` with ``p`` and ``q`` exchanged, giving the
domain ``[A_n, 1]`` with ``A_n = 1 - B_n(q)``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .cdf import CdfMeasure, DensityOrbit, G_map, f_factor
from .kernel import KernelParams

VIOLATION_TOL = 1e-12


def _require_nonidentity(k: KernelParams):
    if k.is_identity:
        raise ValueError("bounds need p != 1/2; the operator is the identity there")


def beta(p_major: float, n: int) -> float:
    """``(1 - 1/n) * (16 p^4)^(-1/(n-1))`` for the dominant weight ``p_major``."""
    return (1.0 - 1.0 / n) * math.exp(-math.log(16.0 * p_major**4) / (n - 1))


@dataclass(frozen=True)
class BoundCertificate:
    params: KernelParams
    n: int
    beta_n: float
    domain_end: Optional[float]
    bound: float
    valid: bool

    @property
    def upper(self) -> bool:
        """True when the certified domain is ``[A_n, 1]`` (``p < 1/2``)."""
        return self.params.p < 0.5

    def to_dict(self) -> dict:
        d = asdict(self)
        d["params"] = {"p": self.params.p, "q": self.params.q}
        d["domain"] = ("upper" if self.upper else "lower")
        return d


def certificate(k: KernelParams, n: int) -> BoundCertificate:
    _require_nonidentity(k)
    if int(n) != n or n < 2:
        raise ValueError("n must be an integer >= 2")
    major, minor = (k.p, k.q) if k.p > 0.5 else (k.q, k.p)
    b = beta(major, n)
    valid = b > 2.0 * minor
    end = None
    if valid:
        end = (b - 2.0 * minor) / (1.0 - 2.0 * minor)
        if k.p < 0.5:
            end = 1.0 - end
    return BoundCertificate(k, int(n), b, end, (1.0 / (2.0 * major)) ** n, valid)


def min_valid_n(k: KernelParams) -> int:
    """Smallest ``n >= 2`` with a valid certificate (``beta_n`` grows with ``n``)."""
    _require_nonidentity(k)
    if certificate(k, 2).valid:
        return 2
    lo, hi = 2, 4
    while not certificate(k, hi).valid:
        lo, hi = hi, 2 * hi
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if certificate(k, mid).valid:
            hi = mid
        else:
            lo = mid
    return hi


@dataclass
class BoundReport:
    certificate: BoundCertificate
    grid: int
    domain_x: tuple
    violations: dict

    def passed(self, tol: float = VIOLATION_TOL) -> dict:
        return {name: v <= tol for name, v in self.violations.items()}

    @property
    def ok(self) -> bool:
        return all(self.passed().values())

    def to_dict(self) -> dict:
        return {
            "certificate": self.certificate.to_dict(),
            "grid": self.grid,
            "domain_x": list(self.domain_x),
            "violations": dict(self.violations),
            "passed": self.passed(),
        }


def _inverse_cdf(lam: CdfMeasure, level: float, tol: float = 1e-15) -> float:
    """Largest ``x`` (to ``tol``) with ``g(x) <= level``."""
    lo, hi = 0.0, 1.0
    if float(lam(hi)) <= level:
        return 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if float(lam(mid)) <= level:
            lo = mid
        else:
            hi = mid
    return lo


def _orbit_stack(k: KernelParams, g0: np.ndarray, n: int) -> np.ndarray:
    rows = [g0]
    for _ in range(n - 1):
        rows.append(G_map(k, rows[-1]))
    return np.array(rows)


def verify_bounds(k: KernelParams, lam: CdfMeasure, n: int, grid: int = 1000) -> BoundReport:
    """Largest violation of each certified inequality on a sample grid.

    Checks, mirrored when ``p < 1/2``:

    * ``linear_bound``: ``G(y) <= beta_n y`` on ``[0, B_n]``;
    * ``invariant_interval``: ``G(B_n) = beta_n B_n`` and ``beta_n B_n < B_n``;
    * ``orbit_bound``: ``g^(i)(x) <= beta_n^(i-1) g(x)`` for ``i = 2..n``;
    * ``density_bound``: ``f^(n)(x) <= bound``;
    * ``monotone_density``: ``f^(n)`` increasing (decreasing) on [0, 1].

    The first four sample points where ``g(x)`` lies in the certified domain.
    """
    cert = certificate(k, n)
    if not cert.valid:
        raise ValueError(f"certificate at n={n} is not valid (beta_n={cert.beta_n:.6g})")
    if grid < 2:
        raise ValueError("grid must be >= 2")
    b = cert.beta_n
    upper = cert.upper
    end = cert.domain_end
    powers = b ** np.arange(n)

    if upper:
        y = np.linspace(end, 1.0, grid)
        linear = (1.0 - G_map(k, y)) - b * (1.0 - y)
        x_lo = _inverse_cdf(lam, np.nextafter(end, 0.0))
        x = np.linspace(x_lo, 1.0, grid)
        x = x[lam(x) >= end] if np.any(lam(x) >= end) else x[-1:]
        gi = _orbit_stack(k, lam(x), n)
        orbit = (1.0 - gi[1:]) - powers[1:, None] * (1.0 - gi[0])[None, :]
        gap = abs(G_map(k, end) - (1.0 - b * (1.0 - end)))
        shrink = (1.0 - b * (1.0 - end)) > end
        x_domain = (float(x[0]), 1.0)
    else:
        y = np.linspace(0.0, end, grid)
        linear = G_map(k, y) - b * y
        x_hi = _inverse_cdf(lam, end)
        x = np.linspace(0.0, x_hi, grid)
        gi = _orbit_stack(k, lam(x), n)
        orbit = gi[1:] - powers[1:, None] * gi[0][None, :]
        gap = abs(G_map(k, end) - b * end)
        shrink = b * end < end
        x_domain = (0.0, float(x_hi))

    orbit_dens = DensityOrbit(k, lam, n)
    density = orbit_dens.density_at(x) - cert.bound

    full = np.linspace(0.0, 1.0, grid)
    steps = np.diff(orbit_dens.density_at(full))
    monotone = (steps if upper else -steps).max()

    violations = {
        "linear_bound": float(linear.max()),
        "invariant_interval": float(gap) if shrink else float("inf"),
        "orbit_bound": float(orbit.max()) if orbit.size else 0.0,
        "density_bound": float(density.max()),
        "monotone_density": max(float(monotone), 0.0),
    }
    return BoundReport(cert, grid, x_domain, violations)


def density_bound_chain(k: KernelParams, lam: CdfMeasure, n: int, grid: int = 1000) -> dict:
    """Largest violation of each link in the chain

        f^(n)(x) <= (beta^((n-1)/2) f(g(x)))^n <= (2p beta^((n-1)/2))^n <= (1/2p)^n

    on the certified domain (``p > 1/2`` only).  The first link is not implied
    by the orbit bound because ``f`` has a positive intercept ``2q``.
    """
    cert = certificate(k, n)
    if not cert.valid or cert.upper:
        raise ValueError("chain is defined for valid certificates with p > 1/2")
    b = cert.beta_n
    x = np.linspace(0.0, _inverse_cdf(lam, cert.domain_end), grid)
    dens = DensityOrbit(k, lam, n).density_at(x)
    middle = (b ** ((n - 1) / 2.0) * f_factor(k, lam(x))) ** n
    top = (2.0 * k.p * b ** ((n - 1) / 2.0)) ** n
    return {
        "product_vs_geometric": float((dens - middle).max()),
        "geometric_vs_endpoint": float((middle - top).max()),
        "endpoint_vs_bound": float(top - cert.bound),
    }
