"""Numeric kernel: exact scalars, unit exponentials, a small Hermitian
eigensolver, exact matrix helpers and an exact vanishing test for sums of
roots of unity.

Complex values are plain Python ``complex``; rationals are
:class:`fractions.Fraction`; tagged irrationals are :class:`~affine_frames.surd.Surd`.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np

from .errors import ArgumentError, ExactnessError, NumericDomainError
from .surd import Surd, is_rational

__all__ = [
    "Vector",
    "HermitianMatrix",
    "hermitian_eigenvalues",
    "hermitian_eigh",
    "unit_exponential",
    "unit_exponential_array",
    "reduced_phase",
    "dot",
    "as_vector",
    "to_float",
    "vector_to_float",
    "exact_det",
    "exact_inverse",
    "exact_matvec",
    "exact_matmul",
    "transpose",
    "roots_of_unity_sum_is_zero",
]

Vector = tuple
TWO_PI = 2.0 * math.pi

_QUARTER_TABLE = {0: 1 + 0j, 1: 0 + 1j, 2: -1 + 0j, 3: 0 - 1j}


# scalars -------------------------------------------------------------------

def to_float(x) -> float:
    v = float(x)
    if not math.isfinite(v):
        raise NumericDomainError(f"non-finite value {x!r}")
    return v


def as_vector(x, dim: int | None = None) -> tuple:
    """Accept a scalar (for d = 1) or a sequence and return a tuple."""
    if isinstance(x, (int, float, Rational, Surd, str)) and not isinstance(x, bool):
        v = (x,)
    else:
        v = tuple(x)
    if dim is not None and len(v) != dim:
        raise ArgumentError(f"expected a vector of dimension {dim}, got {len(v)}")
    return v


def vector_to_float(v: Sequence) -> np.ndarray:
    return np.array([to_float(c) for c in v], dtype=float)


def dot(u: Sequence, v: Sequence):
    if len(u) != len(v):
        raise ArgumentError("dimension mismatch in dot product")
    total = 0
    for a, b in zip(u, v):
        total = total + a * b
    return total


def reduced_phase(t) -> float:
    """Return ``t mod 1`` in ``[0, 1)``, reducing exactly when ``t`` is exact."""
    if isinstance(t, Surd):
        return t.fractional_part()
    if is_rational(t):
        q = Fraction(t)
        return float(q - math.floor(q))
    v = float(t)
    if not math.isfinite(v):
        raise NumericDomainError(f"non-finite phase {t!r}")
    r = v - math.floor(v)
    return 0.0 if r == 1.0 else r


def unit_exponential(t) -> complex:
    """``exp(2*pi*i*t)``; quarter periods come back exactly."""
    r = reduced_phase(t)
    q = 4.0 * r
    if q == int(q):
        return _QUARTER_TABLE[int(q)]
    return cmath.exp(1j * TWO_PI * r)


def unit_exponential_array(t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(t)):
        raise NumericDomainError("non-finite phase in array")
    r = t - np.floor(t)
    out = np.exp(1j * TWO_PI * r)
    q = 4.0 * r
    exact = q == np.floor(q)
    if np.any(exact):
        idx = q[exact].astype(int) % 4
        out[exact] = np.array([1, 1j, -1, -1j])[idx]
    return out


# Hermitian eigensolver -----------------------------------------------------

class HermitianMatrix:
    """Square complex matrix that is Hermitian up to rounding.

    Construction checks ``|a_ij - conj(a_ji)| <= 1e-12 * max(1, max|a|)`` and
    then replaces the data by its Hermitian part.
    """

    __slots__ = ("_a",)

    def __init__(self, entries, tol: float = 1e-12):
        a = np.array(entries, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
            raise ArgumentError("Hermitian matrix must be square with dim >= 1")
        if not np.all(np.isfinite(a)):
            raise NumericDomainError("Hermitian matrix has non-finite entries")
        scale = max(1.0, float(np.max(np.abs(a))))
        if np.max(np.abs(a - a.conj().T)) > tol * scale:
            raise ArgumentError("matrix is not Hermitian")
        self._a = (a + a.conj().T) / 2
        self._a.setflags(write=False)

    @property
    def dim(self) -> int:
        return self._a.shape[0]

    @property
    def entries(self) -> np.ndarray:
        return self._a

    def trace(self) -> float:
        return float(np.trace(self._a).real)

    def __array__(self, dtype=None, copy=None):
        return self._a if dtype is None else self._a.astype(dtype)

    def __repr__(self):
        return f"HermitianMatrix(dim={self.dim})"


def hermitian_eigh(m, max_sweeps: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic complex Jacobi; returns ascending eigenvalues and eigenvectors.

    Each rotation first removes the phase of the pivot ``a_pq`` with a
    diagonal unitary, then applies a real plane rotation.  Sweeps stop once
    the off-diagonal Frobenius norm is at most ``1e-13 * ||A||_F``.
    """
    if not isinstance(m, HermitianMatrix):
        m = HermitianMatrix(m)
    a = np.array(m.entries, dtype=complex)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    norm = float(np.linalg.norm(a))
    if norm == 0.0 or n == 1:
        return np.real(np.diag(a)).copy(), v
    target = 1e-13 * norm
    for _ in range(max_sweeps):
        off = float(np.linalg.norm(a - np.diag(np.diag(a))))
        if off <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                g = abs(apq)
                if g <= 1e-300 or g < 1e-18 * norm:
                    continue
                phase = apq / g
                app = a[p, p].real
                aqq = a[q, q].real
                theta = (aqq - app) / (2.0 * g)
                t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                # W = diag(1, conj(phase)) @ [[c, s], [-s, c]] in the (p, q) plane
                w = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                cols = a[:, [p, q]] @ w
                a[:, p], a[:, q] = cols[:, 0], cols[:, 1]
                rows = w.conj().T @ a[[p, q], :]
                a[p, :], a[q, :] = rows[0], rows[1]
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                vc = v[:, [p, q]] @ w
                v[:, p], v[:, q] = vc[:, 0], vc[:, 1]
    else:
        raise NumericDomainError("Jacobi iteration did not converge")
    vals = np.real(np.diag(a))
    order = np.argsort(vals, kind="stable")
    return vals[order], v[:, order]


def hermitian_eigenvalues(m) -> list[float]:
    vals, _ = hermitian_eigh(m)
    return [float(x) for x in vals]


# exact linear algebra ------------------------------------------------------

def transpose(a: Sequence[Sequence]) -> tuple:
    return tuple(tuple(row[j] for row in a) for j in range(len(a[0])))


def exact_matvec(a: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(dot(row, v) for row in a)


def exact_matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> tuple:
    bt = transpose(b)
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def _check_square(a) -> int:
    n = len(a)
    if n == 0 or any(len(row) != n for row in a):
        raise ArgumentError("matrix must be square and nonempty")
    return n


def _is_zero(x) -> bool:
    if isinstance(x, float):
        return x == 0.0
    return x == 0


def _eliminate(a: Sequence[Sequence]):
    """Gauss-Jordan on ``[a | I]``; returns ``(det, inverse or None)``."""
    n = _check_square(a)
    m = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    det = Fraction(1)
    for col in range(n):
        pivot = None
        for r in range(col, n):
            if not _is_zero(m[r][col]):
                pivot = r
                break
        if pivot is None:
            return Fraction(0), None
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        pv = m[col][col]
        if isinstance(pv, Surd) and len(pv.terms) > 1:
            raise ExactnessError("pivot is a multi-term surd; cannot invert exactly")
        det = det * pv
        inv_p = 1 / pv
        m[col] = [x * inv_p for x in m[col]]
        for r in range(n):
            if r != col and not _is_zero(m[r][col]):
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return det, tuple(tuple(row[n:]) for row in m)


def exact_det(a: Sequence[Sequence]):
    det, _ = _eliminate(a)
    return det


def exact_inverse(a: Sequence[Sequence]) -> tuple:
    det, inv = _eliminate(a)
    if inv is None:
        raise ArgumentError("matrix is singular")
    return inv


# roots of unity ------------------------------------------------------------

def _poly_divmod(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    """Integer polynomial division by a monic divisor; coefficients low to high."""
    num = list(num)
    dl = len(den) - 1
    if den[-1] != 1:
        raise ValueError("divisor must be monic")
    quot = [0] * max(1, len(num) - dl)
    for i in range(len(num) - 1, dl - 1, -1):
        c = num[i]
        if c:
            quot[i - dl] = c
            for j, d in enumerate(den):
                num[i - dl + j] -= c * d
    rem = num[:dl] if dl > 0 else [0]
    return quot, rem


@lru_cache(maxsize=512)
def _cyclotomic(n: int) -> tuple[int, ...]:
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly, rem = _poly_divmod(poly, list(_cyclotomic(d)))
            assert not any(rem)
    return tuple(poly)


def roots_of_unity_sum_is_zero(phases: Iterable, weights: Iterable[int] | None = None) -> bool:
    """Decide exactly whether ``sum_k w_k exp(2*pi*i*r_k)`` vanishes.

    The ``r_k`` must be rational.  With common denominator ``N`` the sum is
    ``P(zeta_N)`` for an integer polynomial ``P``; it vanishes iff the N-th
    cyclotomic polynomial divides ``P``.
    """
    phases = [Fraction(r) for r in phases]
    weights = [1] * len(phases) if weights is None else list(weights)
    if not phases:
        return True
    n = 1
    for r in phases:
        n = n * r.denominator // math.gcd(n, r.denominator)
    poly = [0] * n
    for r, w in zip(phases, weights):
        poly[int(r * n) % n] += w
    if n == 1:
        return poly[0] == 0
    _, rem = _poly_divmod(poly, list(_cyclotomic(n)))
    return not any(rem)
