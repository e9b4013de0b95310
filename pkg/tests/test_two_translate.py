import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from affine_frames.errors import HypothesisError
from affine_frames.frames import estimate_bounds
from affine_frames.geometry import Domain, LatticeSpectrum
from affine_frames.kernel import hermitian_eigenvalues
from affine_frames.surd import sqrt
from affine_frames.two_translate import (
    TwoTranslateProblem,
    alpha_of,
    block_matrix,
    decide_gsp,
    r_pm,
    r_pm_theta,
    spectral_resolution,
)

from conftest import I, Z, lattice

S2 = sqrt(2)


def rational_problem(beta=F(1, 3)):
    return TwoTranslateProblem(I, Z, Domain.interval(0, 2), lattice(F(1, 2)), (2,), (beta,))


def irrational_problem():
    return TwoTranslateProblem(I, Z, Domain.interval(0, S2), lattice(S2 / 2), (S2,), (F(1, 3),))


@pytest.mark.parametrize("omega2, expected", [(I, 2), (Domain.interval(0, 2), 4)])
def test_alpha_of(omega2, expected):
    assert alpha_of(I, omega2) == expected


def test_alpha_of_2d():
    assert alpha_of(Domain.box((0, 0), (1, 1)), Domain.box((0, 0), (3, 1))) == 6


def test_r_pm_examples():
    assert r_pm((0,), (0,), (1,), 4) == pytest.approx((0, 12), abs=1e-12)
    assert r_pm((0,), (F(1, 2),), (1,), 4) == pytest.approx((4, 8), abs=1e-12)
    assert r_pm((0,), (F(1, 2),), (1,), 2) == pytest.approx((4, 4), abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.floats(0, 2 * math.pi, exclude_max=True), st.sampled_from([0.5, 1.0, 2.0, 4.0]))
def test_block_matrix_eigenvalues(theta, alpha):
    rm, rp = r_pm_theta(theta, alpha)
    # oracle: the 2x2 block written out directly, solved by LAPACK
    blk = 2 * np.array([[alpha + 1 + math.cos(theta), 1j * math.sin(theta)],
                        [-1j * math.sin(theta), 1 - math.cos(theta)]])
    ref = np.linalg.eigvalsh(blk)
    assert np.allclose(block_matrix(theta, alpha), blk, atol=1e-15)
    assert hermitian_eigenvalues(blk) == pytest.approx(ref, abs=1e-10)
    assert (rm, rp) == pytest.approx(tuple(ref), abs=1e-10)
    assert rm + rp == pytest.approx(2 * (2 + alpha), abs=1e-10)
    assert rm * rp == pytest.approx(4 * alpha * (1 - math.cos(theta)), abs=1e-10)


def test_rational_case_is_gsp_with_exact_infimum():
    d = decide_gsp(rational_problem(), 100)
    assert d.is_gsp and d.condition_i and d.condition_ii
    # brute force over residues: 2 (1/3 + n) mod 1 is always 2/3
    residues = {(2 * (F(1, 3) + n)) % 1 for n in range(-50, 51)}
    theta = [2 * math.pi * float(r) for r in residues]
    brute = min(r_pm_theta(t, 4)[0] for t in theta)
    assert d.exact_inf_r_minus == pytest.approx(brute, abs=1e-12)
    assert brute == pytest.approx(6 - 2 * math.sqrt(3), abs=1e-12)


@pytest.mark.parametrize("radius", [2, 5, 50, 1000])
def test_rational_infimum_truncation_independent(radius):
    d = decide_gsp(rational_problem(), radius)
    assert d.inf_r_minus == pytest.approx(6 - 2 * math.sqrt(3), abs=1e-12)


def test_irrational_case_fails_condition_ii():
    prev = math.inf
    for radius in (100, 1000, 10000):
        d = decide_gsp(irrational_problem(), radius)
        assert not d.is_gsp and not d.condition_ii
        assert d.condition_ii_witness == (1,)
        assert d.inf_r_minus <= prev
        prev = d.inf_r_minus
    assert prev <= 1e-4


def test_forced_zero_via_condition_i():
    d = decide_gsp(rational_problem(F(1, 2)), 10)
    assert not d.is_gsp and not d.condition_i
    n0 = d.condition_i_witness
    assert (2 * (F(1, 2) + n0[0])).denominator == 1
    assert r_pm((n0[0],), (F(1, 2),), (2,), 4)[0] == pytest.approx(0, abs=1e-12)
    assert min(rm for _, rm, _ in d.spectrum_sample) == pytest.approx(0, abs=1e-12)


def test_overlap_and_annihilator_hypotheses():
    with pytest.raises(HypothesisError):
        TwoTranslateProblem(I, Z, Domain.interval(0, 2), lattice(F(1, 2)), (F(1, 2),), (0,))
    with pytest.raises(HypothesisError):
        TwoTranslateProblem(I, Z, Domain.interval(0, 2), lattice(F(1, 2)), (3,), (0,))


def test_resolution_modes():
    res = spectral_resolution(rational_problem(), 20)
    assert res.mode == "equality"
    assert res.certificate.as_floats() == pytest.approx((3 - math.sqrt(3), 3 + math.sqrt(3)), abs=1e-12)
    res2 = spectral_resolution(rational_problem(), 20, base_constants=(F(1, 2), 1))
    assert res2.mode == "inequality"


def test_certificate_agrees_with_grid_estimate():
    # Omega_1 = I u (I + 2), Lambda_1 = (Z + 1/3) u (1/2)Z
    cert = spectral_resolution(rational_problem(), 20).certificate
    union = LatticeSpectrum([[1]], [[F(1, 3)], [0], [F(1, 2)]])
    est = estimate_bounds(Domain.interval(0, 1, [(0,), (2,)]), union, 64, 32)
    assert est.K_hat == pytest.approx(cert.as_floats()[1], rel=1e-6)
    assert est.k_hat == pytest.approx(cert.as_floats()[0], abs=0.05)
