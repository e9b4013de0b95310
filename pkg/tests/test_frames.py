from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from affine_frames.errors import ArgumentError
from affine_frames.frames import default_threads, estimate_bounds, scale_check, scale_pair
from affine_frames.geometry import Domain, FiniteSpectrum, LatticeSpectrum, spectra_equal

from conftest import I, Z, lattice

UNION = Domain.interval(0, 1, [(0,), (2,)])
UNION_SPEC = lattice(1, [0, F(1, 4)])


def oracle_bounds(cells, lams, n, band):
    """Midpoint-rule form of the local-exponential test space, built by hand
    (1-D, equal cells of length e) and diagonalized by LAPACK."""
    cols = []
    for a, e in cells:
        x = a + (np.arange(n) + 0.5) * e / n
        for m in range(-band, band + 1):
            basis = np.exp(2j * np.pi * m * (x - a) / e)
            cols.append([np.sum(basis * np.exp(-2j * np.pi * l * x)) * e / n for l in lams])
    Fm = np.array(cols).T
    w = np.linalg.eigvalsh(Fm.conj().T @ Fm / cells[0][1])
    return w[0], w[-1]


def test_parseval_pair():
    est = estimate_bounds(I, Z, 64, 16)
    assert est.k_hat == pytest.approx(1, abs=0.02) and est.K_hat == pytest.approx(1, abs=0.02)
    assert not est.not_total


def test_hadamard_union_pair():
    est = estimate_bounds(UNION, UNION_SPEC, 64, 16)
    assert est.k_hat == pytest.approx(2, rel=0.05) and est.K_hat == pytest.approx(2, rel=0.05)


def test_single_frequency_is_flagged():
    est = estimate_bounds(I, FiniteSpectrum([(0,)]), 64, 16)
    assert est.K_hat <= 1 + 1e-9 and est.k_hat <= 1e-9 and est.not_total


@pytest.mark.parametrize("dom, spec", [(I, Z), (UNION, UNION_SPEC), (Domain.interval(0, 2), lattice(F(1, 2)))])
def test_against_hand_built_form(dom, spec):
    est = estimate_bounds(dom, spec, 32, 16)
    lams = [float(p[0]) for p in spec.points_within(16)]
    cells = [(float(c[0][0]), float(c[1][0] - c[0][0])) for c in dom.cells()]
    lo, hi = oracle_bounds(cells, lams, 32, est.band[0])
    assert est.K_hat == pytest.approx(hi, rel=1e-7)
    assert est.k_hat == pytest.approx(lo, rel=1e-6, abs=1e-9)


@pytest.mark.parametrize("dom, spec, vol", [(I, Z, 1), (Domain.interval(0, 2), lattice(F(1, 2)), 2)])
def test_tight_pairs(dom, spec, vol):
    est = estimate_bounds(dom, spec, 64, 16)
    assert est.k_hat == pytest.approx(vol, rel=0.02) and est.K_hat == pytest.approx(vol, rel=0.02)
    assert est.normalized() == pytest.approx((1, 1), rel=0.02)


@settings(max_examples=10, deadline=None)
@given(st.integers(4, 12), st.integers(1, 8))
def test_monotone_in_radius_with_fixed_band(r, dr):
    a = estimate_bounds(UNION, UNION_SPEC, 32, r, band=1)
    b = estimate_bounds(UNION, UNION_SPEC, 32, r + dr, band=1)
    assert b.K_hat >= a.K_hat * (1 - 1e-9) and b.k_hat >= a.k_hat - 1e-9 * a.K_hat


@pytest.mark.parametrize("dom, spec", [(I, Z), (UNION, UNION_SPEC), (Domain.interval(0, 2), lattice(F(1, 2)))])
def test_refinement_stability(dom, spec):
    a = estimate_bounds(dom, spec, 64, 16)
    b = estimate_bounds(dom, spec, 128, 16)
    assert b.k_hat == pytest.approx(a.k_hat, rel=0.01) and b.K_hat == pytest.approx(a.K_hat, rel=0.01)


def test_threads_do_not_change_result():
    a = estimate_bounds(UNION, UNION_SPEC, 64, 80, threads=1)
    b = estimate_bounds(UNION, UNION_SPEC, 64, 80, threads=3)
    assert (a.k_hat, a.K_hat) == (b.k_hat, b.K_hat)


def test_two_dimensional_box():
    sq = Domain.box((0, 0), (1, 1))
    est = estimate_bounds(sq, LatticeSpectrum([[1, 0], [0, 1]]), 32, 8)
    assert est.k_hat == pytest.approx(1, abs=0.03) and est.K_hat == pytest.approx(1, abs=0.03)


def test_scale_pair_examples():
    dom, spec = scale_pair([[4]], I, Z)
    assert dom == Domain.interval(0, F(1, 4))
    assert spectra_equal(spec, lattice(4), 40)
    dom, spec = scale_pair([[1]], I, Z)
    assert dom == I and spectra_equal(spec, Z, 40)


def test_scale_check_agrees():
    chk = scale_check([[4]], I, Z, 64, 16)
    assert chk.agrees(0.05) and chk.det == 4
    # raw constants carry the Jacobian factor
    assert chk.after.K_hat == pytest.approx(chk.before.K_hat / 4, rel=0.05)


def test_bad_arguments():
    with pytest.raises(ArgumentError):
        estimate_bounds(I, Z, 4, 16)
    with pytest.raises(ArgumentError):
        estimate_bounds(I, Z, 64, 0)


def test_thread_env(monkeypatch):
    monkeypatch.setenv("AFFINE_FRAMES_THREADS", "3")
    assert default_threads() == 3
    monkeypatch.setenv("AFFINE_FRAMES_THREADS", "x")
    with pytest.raises(ArgumentError):
        default_threads()
