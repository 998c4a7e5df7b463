"""Lebesgue quadratic stochastic operator on [0, 1).

The operator ``V`` acts on probability measures through a symmetric kernel
that sends two distinct parents to the smaller one with probability ``p`` and
to the larger one with probability ``q = 1 - p``.
"""

from .atomic import (
    AtomicTrajectory,
    apply_once,
    apply_once_bruteforce,
    iterate,
    predict_limit,
    volterra_weights,
)
from .bounds import (
    BoundCertificate,
    BoundReport,
    certificate,
    density_bound_chain,
    min_valid_n,
    verify_bounds,
)
from .cdf import CdfMeasure, DensityOrbit, G_map, f_factor, orbit_state, pushforward_interval
from .convergence import ConvergenceReport, fixed_point_check, run_to_convergence, w1_to_dirac
from .kernel import IdentityExample, KernelParams, identity_kernel_measure, kernel_measure
from .measure import AtomicMeasure, Interval
from .particles import (
    ParticleEnsemble,
    evolve,
    kolmogorov_distance,
    sample_initial,
    step_generation,
)
from .quadrature import QuadratureError, integrate

__all__ = [
    "AtomicMeasure",
    "AtomicTrajectory",
    "BoundCertificate",
    "BoundReport",
    "CdfMeasure",
    "ConvergenceReport",
    "DensityOrbit",
    "G_map",
    "IdentityExample",
    "Interval",
    "KernelParams",
    "ParticleEnsemble",
    "QuadratureError",
    "apply_once",
    "apply_once_bruteforce",
    "certificate",
    "density_bound_chain",
    "evolve",
    "f_factor",
    "fixed_point_check",
    "identity_kernel_measure",
    "integrate",
    "iterate",
    "kernel_measure",
    "kolmogorov_distance",
    "min_valid_n",
    "orbit_state",
    "predict_limit",
    "pushforward_interval",
    "run_to_convergence",
    "sample_initial",
    "step_generation",
    "verify_bounds",
    "volterra_weights",
    "w1_to_dirac",
]

__version__ = "0.1.0"
