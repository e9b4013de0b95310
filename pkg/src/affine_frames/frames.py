"""Numerical estimates of the frame constants of ``(Omega, Lambda)`` by
midpoint quadrature.

Every grid function on a truncation cannot be controlled by finitely many
samples (the form has rank at most ``|Lambda_r|``), so the estimate is taken
over a resolved test space: on each cell the local exponentials
``exp(2 pi i m.(x - c) / e)`` with ``|m_i| <= M_i``, where
``M_i = max(1, min(floor(r e_i / 8), floor(n / 4)))``, i.e. frequencies up to
about ``r / 8``, well inside the truncation.  These are orthogonal
for the midpoint rule, so the Gram matrix is ``vol(cell) * I``.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from .errors import ArgumentError
from .geometry import AffineSystem, Domain, apply_affine
from .kernel import hermitian_eigenvalues, to_float, unit_exponential_array

__all__ = [
    "GridFrameEstimate",
    "ScaleCheck",
    "estimate_bounds",
    "scale_pair",
    "scale_check",
    "default_threads",
    "TOTALITY_TOL",
]

TOTALITY_TOL = 1e-12
RAYLEIGH_TOL = 1e-8
_MAX_ITER = 5000
_BLOCK = 16
_TILE = 256


def default_threads() -> int:
    env = os.environ.get("AFFINE_FRAMES_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError:
            raise ArgumentError(f"AFFINE_FRAMES_THREADS={env!r} is not an integer")
        if n >= 1:
            return n
    return 1


@dataclass(frozen=True)
class GridFrameEstimate:
    k_hat: float
    K_hat: float
    grid_points_per_cell: int
    radius: float
    rayleigh_iterations: int
    band: tuple
    n_lambda: int
    test_dim: int
    volume: float
    not_total: bool

    def normalized(self) -> tuple[float, float]:
        """Constants relative to ``vol(Omega)``; 1 for a spectral pair."""
        return self.k_hat / self.volume, self.K_hat / self.volume

    def to_dict(self) -> dict:
        return {
            "k_hat": self.k_hat,
            "K_hat": self.K_hat,
            "grid_points_per_cell": self.grid_points_per_cell,
            "radius": self.radius,
            "rayleigh_iterations": self.rayleigh_iterations,
            "band": list(self.band),
            "n_lambda": self.n_lambda,
            "test_dim": self.test_dim,
            "volume": self.volume,
            "not_total": self.not_total,
        }


def _axis_factor(lam_axis, corner, edge, n, band):
    """``(e/n) sum_k exp(2 pi i m (x_k - c)/e) exp(-2 pi i lam x_k)``."""
    k = np.arange(n)
    x = corner + (k + 0.5) * edge / n
    m = np.arange(-band, band + 1)
    left = unit_exponential_array(-np.outer(lam_axis, x))
    right = unit_exponential_array(np.outer((k + 0.5) / n, m))
    return (edge / n) * (left @ right)


def _assemble_tile(lams, domain, n, bands, shifts):
    d = domain.dim
    F0 = np.ones((lams.shape[0], 1), dtype=complex)
    for i in range(d):
        A = _axis_factor(lams[:, i], to_float(domain.corner[i]), to_float(domain.edges[i]), n, bands[i])
        F0 = (F0[:, :, None] * A[:, None, :]).reshape(lams.shape[0], -1)
    phase = unit_exponential_array(-(lams @ shifts.T))          # (m, |T|)
    F = (phase[:, :, None] * F0[:, None, :]).reshape(lams.shape[0], -1)
    return F.conj().T @ F


def _start_block(n: int) -> np.ndarray:
    rng = np.random.default_rng(0x5EED)
    q = rng.standard_normal((n, min(n, _BLOCK))) + 1j * rng.standard_normal((n, min(n, _BLOCK)))
    return np.linalg.qr(q)[0]


def _subspace_extreme(A: np.ndarray, apply, largest: bool, floor: float) -> tuple[float, int]:
    """Block power (or inverse) iteration with a Rayleigh-Ritz step.

    Stops when the extreme Ritz value changes by at most ``1e-8`` relative
    to ``max(|value|, floor)`` between sweeps.
    """
    Q = _start_block(A.shape[0])
    prev = None
    for it in range(1, _MAX_ITER + 1):
        Q = np.linalg.qr(apply(Q))[0]
        T = Q.conj().T @ A @ Q
        ritz = hermitian_eigenvalues((T + T.conj().T) / 2)
        val = ritz[-1] if largest else max(ritz[0], 0.0)
        if prev is not None and abs(val - prev) <= RAYLEIGH_TOL * max(abs(val), floor):
            return val, it
        prev = val
    return prev, _MAX_ITER


def _power(A):
    return _subspace_extreme(A, lambda Q: A @ Q, True, 0.0)


def _inverse(A, top):
    shift = TOTALITY_TOL * max(top, 1e-300)
    try:
        factor = cho_factor(A + shift * np.eye(A.shape[0]), lower=False)
    except LinAlgError:
        return 0.0, 0
    return _subspace_extreme(A, lambda Q: cho_solve(factor, Q), False, TOTALITY_TOL * top)


def estimate_bounds(domain: Domain, spectrum=None, grid_n: int = 64, radius=16, band=None,
                    points=None, threads: int | None = None) -> GridFrameEstimate:
    """Estimate ``(k, K)`` over the resolved test space.

    ``band`` fixes ``M_i`` (an int or a per-axis tuple); by default it is
    tied to ``radius``.  Assembly runs over fixed tiles of frequencies so the
    result does not depend on ``threads``.
    """
    if grid_n < 8:
        raise ArgumentError("grid_n must be at least 8")
    if radius <= 0:
        raise ArgumentError("radius must be positive")
    d = domain.dim
    if points is None:
        if spectrum is None:
            raise ArgumentError("need a spectrum or explicit points")
        pts = spectrum.points_array(radius)
    else:
        pts = np.asarray(points, dtype=float).reshape(-1, d)
    if band is None:
        bands = tuple(max(1, min(int(math.floor(radius * to_float(e) / 8)), grid_n // 4))
                      for e in domain.edges)
    else:
        bands = tuple(band) if isinstance(band, (tuple, list)) else (int(band),) * d
    shifts = np.array([[to_float(c) for c in t] for t in domain.translates])
    cell_vol = to_float(domain.cell_volume)
    test_dim = len(domain.translates) * int(np.prod([2 * b + 1 for b in bands]))
    threads = threads or default_threads()
    tiles = [pts[i:i + _TILE] for i in range(0, len(pts), _TILE)]
    work = lambda tile: _assemble_tile(tile, domain, grid_n, bands, shifts)
    if threads > 1 and len(tiles) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(work, tiles))
    else:
        parts = [work(t) for t in tiles]
    A = np.zeros((test_dim, test_dim), dtype=complex)
    for part in parts:
        A += part
    A = (A + A.conj().T) / (2 * cell_vol)
    if len(pts) == 0:
        K_hat, k_hat, it1, it2 = 0.0, 0.0, 0, 0
    else:
        K_hat, it1 = _power(A)
        k_hat, it2 = _inverse(A, K_hat)
    k_hat = min(k_hat, K_hat)
    return GridFrameEstimate(k_hat, K_hat, grid_n, float(radius), it1 + it2, bands, len(pts),
                             test_dim, to_float(domain.volume),
                             k_hat < TOTALITY_TOL * max(1.0, K_hat))


# scaling -------------------------------------------------------------------------

def scale_pair(R, domain: Domain, spectrum):
    """``(R^{-1} Omega, R^T Lambda)``."""
    d = domain.dim
    zero = [(0,) * d]
    sigma = AffineSystem(R, zero, "sigma")
    tau = AffineSystem(R, zero, "tau")
    return apply_affine(sigma, domain), apply_affine(tau, spectrum)


@dataclass(frozen=True)
class ScaleCheck:
    before: GridFrameEstimate
    after: GridFrameEstimate
    det: float
    relative_difference: float

    def agrees(self, tol: float = 0.05) -> bool:
        return self.relative_difference <= tol


def scale_check(R, domain: Domain, spectrum, grid_n: int = 64, radius=16,
                threads: int | None = None) -> ScaleCheck:
    """Compare volume-normalized estimates before and after scaling.

    Raw constants pick up a factor ``1/|det R|`` under the change of
    variables; after normalizing by the volume they should coincide.
    """
    dom2, spec2 = scale_pair(R, domain, spectrum)
    e1 = estimate_bounds(domain, spectrum, grid_n, radius, threads=threads)
    e2 = estimate_bounds(dom2, spec2, grid_n, radius, threads=threads)
    det = abs(float(AffineSystem(R, [(0,) * domain.dim]).det()))
    a, b = e1.normalized(), e2.normalized()
    rel = max(abs(x - y) / max(abs(x), abs(y), 1e-300) for x, y in zip(a, b))
    return ScaleCheck(e1, e2, det, rel)
