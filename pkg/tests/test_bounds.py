"""Certificates (beta_n, B_n, A_n) and the numerical bound checks."""

import mpmath
import numpy as np
import pytest

from lebesgue_qso import (
    CdfMeasure,
    KernelParams,
    certificate,
    density_bound_chain,
    min_valid_n,
    verify_bounds,
)
from lebesgue_qso.bounds import beta


def beta_mp(p, n):
    with mpmath.workdps(40):
        p = mpmath.mpf(p)
        return (1 - mpmath.mpf(1) / n) * (16 * p**4) ** (-mpmath.mpf(1) / (n - 1))


def end_mp(p, n):
    with mpmath.workdps(40):
        q2 = 2 * (1 - mpmath.mpf(p))
        return (beta_mp(p, n) - q2) / (1 - q2)


def min_valid_mp(p):
    major = max(p, 1 - p)
    n = 2
    while beta_mp(major, n) <= 2 * (1 - mpmath.mpf(major)):
        n += 1
    return n


class TestBeta:
    @pytest.mark.parametrize("p", [0.55, 0.6, 0.8, 0.95, 1.0])
    @pytest.mark.parametrize("n", [2, 3, 4, 10, 57, 1000])
    def test_matches_high_precision(self, p, n):
        assert beta(p, n) == pytest.approx(float(beta_mp(p, n)), rel=1e-14)

    def test_frozen_values(self):
        assert beta(0.8, 4) == pytest.approx(0.40077561250235085, rel=1e-15)
        assert beta(0.8, 3) == pytest.approx(0.2604166666666667, rel=1e-15)
        assert beta(1.0, 2) == 0.03125
        assert beta(1.0, 10) == pytest.approx(0.9 * 16 ** (-1 / 9), rel=1e-15)

    def test_in_unit_interval_and_tends_to_one(self):
        b = [beta(0.8, n) for n in (2, 10, 100, 10_000, 10**6)]
        assert all(0 < v < 1 for v in b)
        assert np.all(np.diff(b) > 0)
        assert b[-1] > 0.9999


class TestCertificate:
    def test_p08_n4(self):
        c = certificate(KernelParams(0.8), 4)
        assert c.valid
        assert c.beta_n == pytest.approx(0.4008, abs=5e-5)
        assert c.domain_end == pytest.approx(float(end_mp(0.8, 4)), rel=1e-12)
        # the closed form gives about 0.0013
        assert c.domain_end == pytest.approx(0.0012926875039180948, rel=1e-12)
        assert c.bound == pytest.approx(1 / 1.6**4, rel=1e-15)

    def test_p08_n3_invalid(self):
        c = certificate(KernelParams(0.8), 3)
        assert not c.valid
        assert c.domain_end is None

    def test_p1_domain_equals_beta(self):
        c = certificate(KernelParams(1.0), 10)
        assert c.valid
        assert c.domain_end == c.beta_n
        assert c.beta_n == pytest.approx(0.66138052152401948, rel=1e-15)

    def test_mirrored_domain(self):
        c, m = certificate(KernelParams(0.2), 14), certificate(KernelParams(0.8), 14)
        assert c.upper and not m.upper
        assert c.beta_n == m.beta_n
        # 1 - 0.8 differs from 0.2 in the last bit
        assert c.domain_end == pytest.approx(1 - m.domain_end, abs=1e-15)
        assert m.domain_end == pytest.approx(0.6725718085031475, rel=1e-13)

    def test_domain_end_rises_to_one(self):
        k = KernelParams(0.8)
        n0 = min_valid_n(k)
        ends = [certificate(k, n).domain_end for n in range(n0, n0 + 51)]
        assert np.all(np.diff(ends) > 0)
        assert 0 < ends[0] < ends[-1] < 1
        assert certificate(k, 10**6).domain_end > 0.999

    def test_rejects_identity_and_small_n(self):
        with pytest.raises(ValueError):
            certificate(KernelParams(0.5), 4)
        with pytest.raises(ValueError):
            certificate(KernelParams(0.8), 1)

    def test_to_dict(self):
        d = certificate(KernelParams(0.3), 12).to_dict()
        assert d["params"] == {"p": 0.3, "q": 0.7}
        assert d["domain"] == "upper"


class TestMinValidN:
    @pytest.mark.parametrize("p,n", [(0.8, 4), (1.0, 2), (0.2, 4), (0.0, 2), (0.95, 3), (0.6, 9)])
    def test_values(self, p, n):
        assert min_valid_n(KernelParams(p)) == n

    @pytest.mark.parametrize("p", [0.51, 0.55, 0.6, 0.7, 0.75, 0.9, 0.99])
    def test_against_scan(self, p):
        assert min_valid_n(KernelParams(p)) == min_valid_mp(p)
        assert min_valid_n(KernelParams(1 - p)) == min_valid_n(KernelParams(p))

    def test_rejects_identity(self):
        with pytest.raises(ValueError):
            min_valid_n(KernelParams(0.5))


class TestVerifyBounds:
    def test_p08_n10(self, uniform):
        rep = verify_bounds(KernelParams(0.8), uniform, 10, 1000)
        assert rep.ok, rep.violations
        assert set(rep.violations) == {
            "linear_bound", "invariant_interval", "orbit_bound", "density_bound", "monotone_density"}

    def test_origin_row_is_tight(self, uniform):
        # G(0) = 0 = beta * 0, so the linear check is attained with equality
        rep = verify_bounds(KernelParams(0.8), uniform, 10, 1000)
        assert rep.violations["linear_bound"] == 0.0

    def test_mirrored_p03(self, uniform):
        k = KernelParams(0.3)
        rep = verify_bounds(k, uniform, min_valid_n(k), 1000)
        assert rep.ok, rep.violations
        assert rep.domain_x[1] == 1.0

    @pytest.mark.parametrize("p", [0.75, 0.8, 0.95, 0.25, 0.05])
    @pytest.mark.parametrize("extra", [0, 10, 30])
    def test_holds_for_strong_bias(self, p, extra, pow2):
        k = KernelParams(p)
        assert verify_bounds(k, pow2, min_valid_n(k) + extra, 500).ok

    def test_invalid_certificate_rejected(self, uniform):
        with pytest.raises(ValueError):
            verify_bounds(KernelParams(0.8), uniform, 3)

    def test_domain_uses_cdf(self, pow2):
        # for g(x) = x^2 the certified x-range ends at sqrt(B_n)
        k = KernelParams(0.8)
        rep = verify_bounds(k, pow2, 14, 200)
        assert rep.domain_x[1] == pytest.approx(np.sqrt(certificate(k, 14).domain_end), abs=1e-12)

    def test_report_dict(self, uniform):
        d = verify_bounds(KernelParams(0.8), uniform, 6, 50).to_dict()
        assert d["grid"] == 50
        assert all(d["passed"].values())


class TestDensityBoundBreaksForMildBias:
    """The exponential density bound fails when p is close to 1/2.

    For p = 0.6 the density at the edge of the certified domain exceeds
    (1/2p)^n from n = 11 on.  The orbit bound itself still holds, so the
    failure sits in the step from the orbit bound to the density product,
    where the intercept 2q of f is not contracted.
    """

    def test_mpmath_counterexample(self):
        p, n = mpmath.mpf("0.6"), 19
        with mpmath.workdps(40):
            q = 1 - p
            end = end_mp("0.6", n)
            g, dens = end, mpmath.mpf(1)
            for _ in range(n):
                dens *= 2 * p * g + 2 * q * (1 - g)
                g = g * (g + 2 * q * (1 - g))
            bound = (1 / (2 * p)) ** n
        assert dens > 2.5 * bound
        rep = verify_bounds(KernelParams(0.6), CdfMeasure.uniform(), n, 1000)
        assert rep.violations["density_bound"] == pytest.approx(float(dens - bound), rel=1e-6)
        assert rep.violations["orbit_bound"] <= 1e-12
        assert rep.violations["linear_bound"] <= 1e-12

    def test_first_chain_link_is_the_culprit(self, uniform):
        chain = density_bound_chain(KernelParams(0.6), uniform, 19)
        assert chain["product_vs_geometric"] > 0
        assert chain["geometric_vs_endpoint"] <= 1e-12
        assert chain["endpoint_vs_bound"] <= 1e-12

    @pytest.mark.parametrize("p,first_bad", [(0.6, 11), (0.65, 10)])
    def test_onset(self, p, first_bad, uniform):
        k = KernelParams(p)
        assert verify_bounds(k, uniform, first_bad - 1, 1000).violations["density_bound"] <= 1e-12
        assert verify_bounds(k, uniform, first_bad, 1000).violations["density_bound"] > 1e-12
