import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from affine_frames.errors import ArgumentError
from affine_frames.kernel import (
    HermitianMatrix,
    exact_det,
    exact_inverse,
    exact_matmul,
    hermitian_eigenvalues,
    hermitian_eigh,
    reduced_phase,
    roots_of_unity_sum_is_zero,
    unit_exponential,
    unit_exponential_array,
)
from affine_frames.surd import sqrt


@pytest.mark.parametrize("t, expected", [(0, 1), (F(1, 2), -1), (F(1, 4), 1j), (F(3, 4), -1j)])
def test_unit_exponential_quarter_points(t, expected):
    assert unit_exponential(t) == expected


def test_eigenvalues_small_examples():
    assert hermitian_eigenvalues(np.eye(3)) == pytest.approx([1, 1, 1], abs=1e-14)
    assert hermitian_eigenvalues([[2, 0], [0, 2]]) == pytest.approx([2, 2], abs=1e-14)


def test_eigenvalues_of_gram_matrix_B01_L0third():
    # rows indexed by L, columns by B
    M = np.array([[1, 1], [1, np.exp(2j * np.pi / 3)]])
    assert hermitian_eigenvalues(M.conj().T @ M) == pytest.approx([1, 3], abs=1e-12)


def test_non_hermitian_rejected():
    with pytest.raises(ArgumentError):
        HermitianMatrix([[1, 2], [3, 4]])


def _random_hermitian(seed, n):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (a + a.conj().T) / 2


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 16))
def test_jacobi_matches_lapack_and_trace(seed, n):
    a = _random_hermitian(seed, n)
    w, v = hermitian_eigh(a)
    norm = np.linalg.norm(a, 2)
    assert np.allclose(w, np.linalg.eigvalsh(a), atol=1e-10 * max(norm, 1))
    assert abs(w.sum() - np.trace(a).real) <= 1e-10 * n * max(norm, 1)
    assert np.all(np.diff(w) >= 0)
    assert np.linalg.norm(a @ v - v * w) <= 1e-10 * max(norm, 1)


@settings(max_examples=200, deadline=None)
@given(st.integers(-10**6 * 2**20, 10**6 * 2**20))
def test_unit_exponential_periodic(k):
    # dyadic t so that the float t + 1 is exact
    t = k / 2**20
    assert abs(unit_exponential(t + 1) - unit_exponential(t)) <= 1e-12


@settings(max_examples=200, deadline=None)
@given(st.integers(-10**6, 10**6), st.integers(1, 10**4))
def test_unit_exponential_exact_rational_periodic(p, q):
    t = F(p, q)
    assert abs(unit_exponential(t + 1) - unit_exponential(t)) <= 1e-12


@given(st.integers(-10**9, 10**9), st.integers(1, 10**9), st.integers(-10**9, 10**9), st.integers(1, 10**9))
def test_rational_sum_exact(a, b, c, d):
    s = F(a, b) + F(c, d)
    assert s.numerator * b * d == (a * d + c * b) * s.denominator


def test_reduced_phase_exact_and_surd():
    assert reduced_phase(F(-1, 3)) == pytest.approx(2 / 3, abs=1e-15)
    assert reduced_phase(sqrt(2) * 1000) == pytest.approx(math.fmod(1000 * math.sqrt(2), 1), abs=1e-9)


def test_unit_exponential_array_matches_scalar():
    t = np.array([0.0, 0.25, 0.5, 0.125, 1e5 + 0.3])
    ref = np.array([unit_exponential(x) for x in t])
    assert np.allclose(unit_exponential_array(t), ref, atol=1e-12)


def test_exact_inverse_and_det():
    a = ((F(2), F(1)), (F(1), F(3)))
    assert exact_det(a) == 5
    assert exact_matmul(a, exact_inverse(a)) == ((1, 0), (0, 1))


def test_roots_of_unity_zero_test():
    assert roots_of_unity_sum_is_zero([0, F(1, 3), F(2, 3)])
    assert roots_of_unity_sum_is_zero([0, F(1, 2)])
    assert not roots_of_unity_sum_is_zero([0, F(1, 3)])
    # 1 + w^2 + w^4 with w a 6th root: cube roots again
    assert roots_of_unity_sum_is_zero([0, F(2, 6), F(4, 6)])
    assert not roots_of_unity_sum_is_zero([0, F(1, 5), F(2, 5)])


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 23), st.integers(-2, 2)), min_size=1, max_size=8))
def test_roots_of_unity_zero_test_vs_float(terms):
    phases = [F(k, 24) for k, _ in terms]
    weights = [w for _, w in terms]
    val = sum(w * np.exp(2j * np.pi * float(p)) for p, w in zip(phases, weights))
    assert roots_of_unity_sum_is_zero(phases, weights) == (abs(val) < 1e-9)
