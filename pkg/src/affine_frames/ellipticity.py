"""The matrix ``M = (e^{2 pi i b.l})`` (rows ``L``, columns ``B``), bounds on
``M* M``, propagation of frame constants to ``(Omega + B, Lambda + L)`` and
the rank-two form ``Q_lambda``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .certificates import EXACT, FrameCertificate
from .errors import ArgumentError, HypothesisError, NotEllipticError
from .geometry import annihilator_witness
from .kernel import (
    HermitianMatrix,
    as_vector,
    dot,
    exact_inverse,
    exact_matvec,
    hermitian_eigh,
    transpose,
    unit_exponential,
)
from .surd import is_exact, is_rational, to_exact
from .transforms import phi_B

__all__ = [
    "EllipticityReport",
    "build_report",
    "propagate_constants",
    "QLambda",
    "q_lambda",
    "HADAMARD_TOL",
    "RANK_TOL",
]

HADAMARD_TOL = 1e-9
RANK_TOL = 1e-9


def _point_set(points, name: str) -> tuple:
    pts = tuple(as_vector(p) for p in points)
    if not pts:
        raise ArgumentError(f"{name} must be nonempty")
    if len({len(p) for p in pts}) != 1:
        raise ArgumentError(f"points of {name} differ in dimension")
    pts = tuple(tuple(to_exact(c) if is_exact(c) or isinstance(c, str) else float(c) for c in p)
                for p in pts)
    if len(set(pts)) != len(pts):
        raise ArgumentError(f"{name} has repeated points")
    return pts


@dataclass(frozen=True)
class EllipticityReport:
    B: tuple
    L: tuple
    M: np.ndarray
    A: HermitianMatrix
    p: float
    P: float
    hadamard: bool

    @property
    def elliptic(self) -> bool:
        return self.p > RANK_TOL * max(1.0, self.P)

    @property
    def square_invertible(self) -> bool:
        """``|B| = |L|`` with ``M`` invertible: the condition under which an
        exact initial frame stays exact."""
        return len(self.B) == len(self.L) and self.elliptic

    def to_dict(self) -> dict:
        return {
            "B": [[str(c) for c in b] for b in self.B],
            "L": [[str(c) for c in l] for l in self.L],
            "p": self.p,
            "P": self.P,
            "hadamard": self.hadamard,
            "elliptic": self.elliptic,
            "square_invertible": self.square_invertible,
        }


def build_report(B, L) -> EllipticityReport:
    B = _point_set(B, "B")
    L = _point_set(L, "L")
    if len(B[0]) != len(L[0]):
        raise ArgumentError("B and L differ in dimension")
    M = np.array([[unit_exponential(dot(b, l)) for b in B] for l in L], dtype=complex)
    A = HermitianMatrix(M.conj().T @ M)
    vals, _ = hermitian_eigh(A)
    p = max(0.0, float(vals[0]))
    P = float(vals[-1])
    n = len(B)
    hadamard = len(L) == n and bool(np.max(np.abs(A.entries - n * np.eye(n))) <= HADAMARD_TOL)
    if hadamard:
        p = P = float(n)
    return EllipticityReport(B, L, M, A, p, P, hadamard)


def propagate_constants(k, K, report: EllipticityReport, spectrum=None) -> FrameCertificate:
    """Frame constants ``(k p, K P)`` for ``(Omega + B, Lambda + L)``.

    The hypothesis ``B`` inside the annihilator of ``Lambda`` is checked
    exactly when a rational ``spectrum`` is supplied; otherwise it is recorded
    as an assumption on the certificate.
    """
    if not (0 < k <= K):
        raise ArgumentError("need 0 < k <= K")
    if not report.elliptic:
        raise NotEllipticError(
            f"M*M is not bounded below (p = {report.p:.3g}); no lower frame bound")
    assumptions = []
    if spectrum is not None and spectrum.is_rational() and \
            all(is_rational(c) for b in report.B for c in b):
        for b in report.B:
            w = annihilator_witness(b, spectrum)
            if w is not None:
                raise HypothesisError(
                    f"translate {b} is not in the annihilator of the spectrum", witness=w)
    else:
        assumptions.append("B lies in the annihilator of Lambda")
    exact_inputs = is_exact(k) and is_exact(K)
    if report.hadamard and exact_inputs:
        n = len(report.B)
        lower, upper, tol = to_exact(k) * n, to_exact(K) * n, 0.0
    else:
        lower, upper = float(k) * report.p, float(K) * report.P
        tol = 1e-10 * max(1.0, upper)
    return FrameCertificate(
        lower, upper, EXACT, "translation by B, spectrum extended by L", tol,
        tuple(assumptions), exact_frame=report.square_invertible or None)


@dataclass(frozen=True)
class QLambda:
    matrix: HermitianMatrix
    eigenvalues: tuple
    rank: int
    probe: tuple

    @property
    def min_eigenvalue(self) -> float:
        return self.eigenvalues[0]


def q_lambda(B, alpha_prime, lam, probe=None, R=None) -> QLambda:
    """The form ``Q_lam(xi, xi') = a' conj(phi(xi)) phi(xi') + conj(phi(xi-lam)) phi(xi'-lam)``
    on a probe set of size ``|B|``.

    Without an explicit probe the set ``R^{-T} B`` is used when ``R`` is
    given, else ``B`` itself.  Rank counts eigenvalues above ``1e-9 * trace``.
    """
    B = _point_set(B, "B")
    d = len(B[0])
    lam = as_vector(lam, d)
    if probe is None:
        if R is not None:
            inv_t = transpose(exact_inverse(R))
            probe = [exact_matvec(inv_t, b) for b in B]
        else:
            probe = B
    probe = tuple(as_vector(x, d) for x in probe)
    if not probe:
        raise ArgumentError("probe set must be nonempty")
    if len(probe) != len(B):
        raise ArgumentError("probe set must have |B| points")
    u = np.array([phi_B(B, x) for x in probe])
    v = np.array([phi_B(B, tuple(a - b for a, b in zip(x, lam))) for x in probe])
    q = float(alpha_prime) * np.outer(u.conj(), u) + np.outer(v.conj(), v)
    H = HermitianMatrix(q)
    vals, _ = hermitian_eigh(H)
    tr = H.trace()
    rank = int(np.sum(vals > RANK_TOL * tr)) if tr > 0 else 0
    return QLambda(H, tuple(float(x) for x in vals), rank, probe)
