"""Invariant suite behind ``lebesgue-qso verify``.

Each check returns ``(ok, detail)``; :func:`run_all` collects them by module
and name.  Sample sizes are small enough for the suite to finish in seconds.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .atomic import apply_once, apply_once_bruteforce, iterate, predict_limit, volterra_weights
from .bounds import certificate, min_valid_n, verify_bounds
from .cdf import CdfMeasure, DensityOrbit, G_map, f_factor
from .convergence import fixed_point_check, run_to_convergence, w1_to_dirac
from .kernel import IdentityExample, KernelParams, kernel_measure
from .measure import AtomicMeasure
from .particles import evolve, kolmogorov_distance, sample_initial

SEED = 20240611


@dataclass
class CheckResult:
    module: str
    name: str
    ok: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'} {self.module}.{self.name}: {self.detail}"


def random_atomic(rng: np.random.Generator, max_atoms: int = 10) -> AtomicMeasure:
    m = int(rng.integers(1, max_atoms + 1))
    atoms = np.sort(rng.choice(4096, size=m, replace=False)) / 4096.0
    w = rng.random(m) + 1e-3
    return AtomicMeasure(atoms, w / w.sum())


_CHECKS: list[tuple[str, str, Callable[[], tuple[bool, str]]]] = []


def check(module: str, name: str):
    def register(fn):
        _CHECKS.append((module, name, fn))
        return fn
    return register


@check("kernel", "probability_measure")
def _kernel_normalized():
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for _ in range(500):
        k = KernelParams(float(rng.random()))
        x, y = rng.random(2)
        mu = kernel_measure(k, x, y)
        worst = max(worst, abs(mu.mass - 1.0))
        if not set(mu.atoms) <= {x, y} or mu != kernel_measure(k, y, x):
            return False, f"support/symmetry broken at p={k.p}, x={x}, y={y}"
    return worst == 0.0, f"max |mass-1| = {worst:.3g}"


@check("kernel", "identity_example_fixes_atoms")
def _identity_example():
    rng = np.random.default_rng(SEED + 1)
    worst = 0.0
    for _ in range(20):
        lam = random_atomic(rng, 6)
        worst = max(worst, float(np.abs(apply_once_bruteforce(IdentityExample(), lam) - lam.weights).max()))
    return worst <= 1e-15, f"max deviation {worst:.3g}"


@check("atomic_dynamics", "mass_conservation")
def _mass():
    rng = np.random.default_rng(SEED + 2)
    worst = 0.0
    for _ in range(500):
        k = KernelParams(float(rng.random()))
        for mu in iterate(k, random_atomic(rng), 10):
            worst = max(worst, abs(volterra_weights(k, mu.weights).sum() - 1.0))
    return worst <= 1e-12, f"max |sum w - 1| = {worst:.3g}"


@check("atomic_dynamics", "bruteforce_agreement")
def _bruteforce():
    rng = np.random.default_rng(SEED + 3)
    worst = 0.0
    for _ in range(30):
        k = KernelParams(float(rng.random()))
        lam = random_atomic(rng, 20)
        worst = max(worst, float(np.abs(apply_once(k, lam).weights - apply_once_bruteforce(k, lam)).max()))
    return worst <= 1e-12, f"max deviation {worst:.3g}"


@check("atomic_dynamics", "limit_dichotomy")
def _atomic_limit():
    rng = np.random.default_rng(SEED + 4)
    for _ in range(50):
        p = float(rng.choice([0.1, 0.3, 0.7, 0.9]))
        lam = random_atomic(rng)
        last = iterate(KernelParams(p), lam, 400).last
        want = predict_limit(KernelParams(p), lam)
        if abs(last.weight_at(want.atoms[0]) - 1.0) > 1e-9:
            return False, f"p={p}: {last} does not approach {want}"
    return True, "50 random measures reach the predicted extreme atom"


@check("cdf_dynamics", "endpoint_exactness")
def _endpoints():
    worst = 0.0
    for p in (0.6, 0.8, 0.95):
        k = KernelParams(p)
        for n in range(1, 41):
            o = DensityOrbit(k, CdfMeasure.uniform(), n)
            d0, d1 = o.density_at(np.array([0.0, 1.0]))
            worst = max(worst, abs(d0 / (2 * k.q) ** n - 1) / n, abs(d1 / (2 * k.p) ** n - 1) / n)
    return worst <= 2.0**-50, f"max relative error / n = {worst:.3g}"


@check("cdf_dynamics", "cdf_density_consistency")
def _consistency():
    rng = np.random.default_rng(SEED + 5)
    worst = 0.0
    for base in (CdfMeasure.uniform(), CdfMeasure.power(2)):
        for _ in range(20):
            o = DensityOrbit(KernelParams(float(rng.random())), base, int(rng.integers(1, 16)))
            a, b = np.sort(rng.random(2))
            worst = max(worst, abs(o.integrate_density(a, b).value - o.measure_of(a, b)))
    return worst <= 1e-6, f"max |int f dlam - cdf diff| = {worst:.3g}"


@check("cdf_dynamics", "reflection_conjugacy")
def _reflection():
    x = np.linspace(0.0, 1.0, 10001)
    worst = 0.0
    for p in np.linspace(0.0, 1.0, 10):
        k = KernelParams(float(p))
        worst = max(worst, float(np.abs(G_map(k, x) - (1.0 - G_map(k.swapped(), 1.0 - x))).max()))
    return worst <= 1e-15, f"max deviation {worst:.3g}"


@check("cdf_dynamics", "derivative_identity")
def _derivative():
    x = np.linspace(1e-6, 1 - 1e-6, 2001)
    worst = 0.0
    for p in (0.1, 0.5, 0.8):
        k = KernelParams(p)
        fd = (G_map(k, x + 1e-6) - G_map(k, x - 1e-6)) / 2e-6
        worst = max(worst, float(np.abs(fd - f_factor(k, x)).max()))
    return worst <= 1e-6, f"max |central difference - f| = {worst:.3g}"


@check("cdf_dynamics", "monotone_cdfs")
def _monotone():
    x = np.linspace(0.0, 1.0, 2001)
    for p in (0.2, 0.8):
        for n in (1, 5, 20):
            for base in (CdfMeasure.uniform(), CdfMeasure.power(3)):
                if np.any(np.diff(DensityOrbit(KernelParams(p), base, n).cdf_at(x)) < 0):
                    return False, f"p={p}, n={n}, {base.name}"
    return True, "all sampled orbits nondecreasing"


@check("bounds", "certificate_suite")
def _bounds():
    bad = []
    for p in (0.6, 0.8, 0.95, 0.4, 0.2, 0.05):
        k = KernelParams(p)
        n0 = min_valid_n(k)
        for n in (n0, n0 + 10):
            rep = verify_bounds(k, CdfMeasure.uniform(), n, 1000)
            bad += [f"p={p},n={n}:{name}" for name, ok in rep.passed().items() if not ok]
    return not bad, "all checks within 1e-12" if not bad else "violated: " + ", ".join(bad)


@check("bounds", "beta_limit")
def _beta_limit():
    k = KernelParams(0.8)
    n0 = min_valid_n(k)
    ends = [certificate(k, n).domain_end for n in range(n0, n0 + 51)]
    ok = all(np.diff(ends) > 0) and certificate(k, 10**6).beta_n > 0.9999
    return ok, f"B_n rises from {ends[0]:.4g} to {ends[-1]:.4g}"


@check("convergence", "dirac_fixed_points")
def _fixed_points():
    worst = max(fixed_point_check(KernelParams(p), a)
                for p in (0.0, 0.25, 0.5, 0.75, 1.0) for a in np.linspace(0, 0.999, 200))
    return worst == 0.0, f"max |V delta_a({{a}}) - 1| = {worst}"


@check("convergence", "regularity")
def _regularity():
    inits = [CdfMeasure.uniform(), CdfMeasure.power(2), AtomicMeasure([0.1, 0.5, 0.9], [0.3, 0.3, 0.4])]
    for p in (0.05, 0.2, 0.4, 0.6, 0.8, 0.95):
        for lam in inits:
            rep = run_to_convergence(KernelParams(p), lam, 1e-3, 200)
            if not rep.converged:
                return False, f"p={p}, {rep.initial} did not converge"
    return True, "every preset converges within 200 steps"


def _particle_vs_orbit(p: float, steps: int, N: int):
    k = KernelParams(p)
    ens = evolve(k, sample_initial(CdfMeasure.uniform(), N, SEED), steps)
    orbit = DensityOrbit(k, CdfMeasure.uniform(), steps + 1)
    return ens, orbit


@check("convergence", "w1_particle_agreement")
def _w1_particles():
    N = 100_000
    worst = 0.0
    for p in (0.3, 0.8):
        ens, orbit = _particle_vs_orbit(p, 5, N)
        worst = max(worst, abs(w1_to_dirac(orbit, 1.0) - float(np.mean(1.0 - ens.points))))
    return worst <= 3 / np.sqrt(N), f"max |W1(orbit) - W1(particles)| = {worst:.3g} (limit {3 / np.sqrt(N):.3g})"


@check("particle_oracle", "atomic_agreement")
def _particles_atomic():
    N = 100_000
    lam = AtomicMeasure([0.1, 0.4, 0.75], [0.3, 0.45, 0.25])
    worst = 0.0
    for p in (0.3, 0.8):
        k = KernelParams(p)
        ens = evolve(k, sample_initial(lam, N, SEED), 5)
        exact = iterate(k, lam, 5).weight_table()[-1]
        worst = max(worst, float(np.abs(ens.weights_on(lam.atoms) - exact).max()))
    return worst <= 4 / np.sqrt(N), f"max weight error {worst:.3g} (limit {4 / np.sqrt(N):.3g})"


@check("particle_oracle", "continuous_agreement")
def _particles_continuous():
    worst = 0.0
    for p in (0.3, 0.8):
        ens, orbit = _particle_vs_orbit(p, 10, 100_000)
        worst = max(worst, kolmogorov_distance(ens, orbit.cdf_at))
    return worst <= 0.015, f"max Kolmogorov distance to cdf_at(k+1) = {worst:.3g} (limit 0.015)"


@check("particle_oracle", "determinism")
def _determinism():
    k = KernelParams(0.7)
    a = evolve(k, sample_initial(CdfMeasure.power(2), 1000, 5), 3)
    b = evolve(k, sample_initial(CdfMeasure.power(2), 1000, 5), 3)
    return bool(np.array_equal(a.points, b.points)), "same seed, same ensemble"


def run_all() -> list[CheckResult]:
    results = []
    for module, name, fn in _CHECKS:
        try:
            ok, detail = fn()
        except Exception as exc:  # a crashing check is a failed check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append(CheckResult(module, name, bool(ok), detail))
    return results
