from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from affine_frames.ellipticity import build_report, propagate_constants, q_lambda
from affine_frames.errors import HypothesisError, NotEllipticError

from conftest import Z, lattice


def pts(xs):
    return [(x,) for x in xs]


def test_hadamard_pair():
    rep = build_report(pts([0, 2]), pts([0, F(1, 4)]))
    assert rep.hadamard and rep.p == rep.P == 2


def test_non_hadamard_pair():
    rep = build_report(pts([0, 1]), pts([0, F(1, 3)]))
    assert not rep.hadamard
    assert rep.p == pytest.approx(1, abs=1e-12) and rep.P == pytest.approx(3, abs=1e-12)


def test_rank_deficient_not_elliptic():
    rep = build_report(pts([0, 1, 2]), pts([0]))
    assert rep.p == pytest.approx(0, abs=1e-12) and not rep.elliptic


def test_gram_matrix_against_numpy():
    B, L = [0, 1, 3], [0, F(1, 5), F(2, 7), F(1, 2)]
    M = np.exp(2j * np.pi * np.outer([float(l) for l in L], B))
    ref = np.linalg.eigvalsh(M.conj().T @ M)
    rep = build_report(pts(B), pts(L))
    assert rep.p == pytest.approx(ref[0], abs=1e-10) and rep.P == pytest.approx(ref[-1], abs=1e-10)


@pytest.mark.parametrize("B, L, expected", [
    ([0, 2], [0, F(1, 4)], (2, 2)),
    ([0], [0], (1, 1)),
    ([0, 1], [0, F(1, 3)], (1, 3)),
])
def test_propagation(B, L, expected):
    cert = propagate_constants(1, 1, build_report(pts(B), pts(L)), Z)
    assert cert.as_floats() == pytest.approx(expected, abs=1e-10)


def test_hadamard_propagation_is_exact():
    cert = propagate_constants(1, 1, build_report(pts([0, 2]), pts([0, F(1, 4)])), Z)
    assert cert.lower == 2 and cert.upper == 2 and cert.tight


def test_propagation_refuses_non_elliptic():
    with pytest.raises(NotEllipticError):
        propagate_constants(1, 1, build_report(pts([0, 1, 2]), pts([0])))


def test_propagation_checks_annihilator():
    with pytest.raises(HypothesisError):
        propagate_constants(1, 1, build_report(pts([0, F(1, 2)]), pts([0, 1])), Z)
    cert = propagate_constants(1, 1, build_report(pts([0, 2]), pts([0, F(1, 4)])))
    assert cert.assumptions


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(-6, 6), min_size=1, max_size=4, unique=True),
       st.lists(st.fractions(-3, 3, max_denominator=12), min_size=4, max_size=6, unique=True),
       st.fractions(-5, 5, max_denominator=16))
def test_shift_of_L_preserves_bounds(B, L, c):
    r1 = build_report(pts(B), pts(L))
    r2 = build_report(pts(B), pts([l + c for l in L]))
    assert abs(r1.p - r2.p) <= 1e-10 * max(1, r1.P) and abs(r1.P - r2.P) <= 1e-10 * max(1, r1.P)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(-6, 6), min_size=1, max_size=4, unique=True),
       st.lists(st.fractions(-3, 3, max_denominator=12), min_size=1, max_size=5, unique=True))
def test_positive_p_iff_full_column_rank(B, L):
    rep = build_report(pts(B), pts(L))
    M = np.exp(2j * np.pi * np.outer([float(l) for l in L], B))
    full = np.linalg.matrix_rank(M, tol=1e-6) == len(B)
    if rep.elliptic:
        assert full
    if not full:
        assert not rep.elliptic


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 5), st.floats(-10, 10, allow_nan=False), st.floats(0.1, 5))
def test_q_lambda_rank_at_most_two(n, lam, alpha):
    q = q_lambda(pts(range(n)), alpha, (lam,), probe=pts([F(k, n) + F(1, 7) for k in range(n)]))
    assert q.rank <= 2
    assert q.min_eigenvalue <= 1e-9 * q.matrix.trace()


def test_q_lambda_rank_one_at_zero():
    assert q_lambda(pts([0, 1, 2]), 1, (0,), probe=pts([0, F(1, 5), F(2, 5)])).rank <= 1


def test_q_lambda_example():
    q = q_lambda(pts([0, 1, 2]), 1, (F(1, 3),), probe=pts([0, F(1, 3), F(2, 3)]))
    assert abs(q.min_eigenvalue) <= 1e-9
