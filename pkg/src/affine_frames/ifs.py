"""Iteration of an affine system and its dual, spectral sums over the
iterated spectra, and chaos-game sampling of the invariant measure."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import ArgumentError, SpectrumOverlapError
from .geometry import AffineSystem, Domain, FiniteSpectrum, Overlap, apply_affine, is_expansive
from .kernel import as_vector, exact_matvec, to_float, unit_exponential_array
from .surd import is_exact, to_exact
from .transforms import f_dmu_hat, mu_hat_batch

__all__ = [
    "IterationState",
    "SpectralSumSeries",
    "LowerBoundResult",
    "start",
    "iterate",
    "iterate_to",
    "spectral_sum",
    "spectral_series",
    "orthogonality_defect",
    "lower_bound_estimate",
    "chaos_game_sample",
    "empirical_transform",
    "BURN_IN",
]

BURN_IN = 64
_BLOCK = 64


@dataclass(frozen=True)
class IterationState:
    j: int
    domain: Domain
    spectrum: FiniteSpectrum
    sigma: AffineSystem
    tau: AffineSystem
    initial: Domain
    overlap: Overlap = Overlap.DISJOINT
    history: tuple = field(default=(), repr=False)

    def spectrum_at(self, j: int) -> FiniteSpectrum:
        if not 0 <= j <= self.j:
            raise ArgumentError(f"depth {j} not reached (state at {self.j})")
        return self.history[j]


def start(R, B, L, initial: Domain | None = None, seed=None) -> IterationState:
    """Depth-0 state: ``Omega_0`` (unit cube by default) and ``Lambda_0``
    (``{0}`` by default)."""
    sigma = AffineSystem(R, B, "sigma")
    tau = AffineSystem(R, L, "tau")
    if not is_expansive(sigma.R):
        raise ArgumentError("R is not expansive")
    d = sigma.dim
    if initial is None:
        initial = Domain((0,) * d, (1,) * d)
    spec0 = FiniteSpectrum(((Fraction(0),) * d,) if seed is None else seed)
    return IterationState(0, initial, spec0, sigma, tau, initial, initial.overlap, (spec0,))


def _collision(tau: AffineSystem, spectrum: FiniteSpectrum):
    linear = tau.linear_part()
    seen = {}
    for l in tau.translations:
        for p in spectrum.points:
            q = tuple(a + b for a, b in zip(p, l))
            img = exact_matvec(linear, q) if all(is_exact(c) for c in q) and \
                not isinstance(linear, np.ndarray) else tuple(np.asarray(linear) @ np.array(q, float))
            if img in seen:
                return seen[img], (p, l), img
            seen[img] = (p, l)
    return None


def iterate(state: IterationState) -> IterationState:
    domain, cls = apply_affine(state.sigma, state.domain, return_overlap=True)
    spectrum, scls = apply_affine(state.tau, state.spectrum, return_overlap=True)
    if scls is Overlap.OVERLAP:
        first, second, img = _collision(state.tau, state.spectrum)
        raise SpectrumOverlapError(
            f"dual images collide at {img}: (point, shift) {first} and {second}",
            witness=(first, second))
    return IterationState(state.j + 1, domain, spectrum, state.sigma, state.tau,
                          state.initial, cls, state.history + (spectrum,))


def iterate_to(state: IterationState, j: int) -> IterationState:
    while state.j < j:
        state = iterate(state)
    return state


# spectral sums -------------------------------------------------------------

@dataclass(frozen=True)
class SpectralSumSeries:
    entries: tuple             # (j, S_j, truncation_error)

    def values(self) -> list[float]:
        return [s for _, s, _ in self.entries]


def _trig_terms(f, dim):
    """Normalize a test function: a frequency ``t`` (meaning ``e_t``) or a
    mapping ``{frequency: coefficient}``."""
    if isinstance(f, dict):
        terms = [(tuple(as_vector(t, dim)), complex(c)) for t, c in f.items()]
        if not terms:
            raise ArgumentError("empty trigonometric polynomial")
        return terms, False
    return [(tuple(as_vector(f, dim)), 1 + 0j)], True


def spectral_sum(state: IterationState, f=0, j: int | None = None) -> tuple[float, float]:
    """``(|B|/|L|)^j sum_{lam in Lambda_j} |(f dmu_j)^(lam)|^2`` and an error bound."""
    j = state.j if j is None else j
    spec = state.spectrum_at(j)
    terms, _ = _trig_terms(f, state.sigma.dim)
    scale = (len(state.sigma.translations) / len(state.tau.translations)) ** j
    total, err = 0.0, 0.0
    for lam in spec.points:
        v, e = 0j, 0.0
        for t, c in terms:
            tv = f_dmu_hat(state.sigma, state.initial, j, t, lam)
            v += c * tv.value
            e += abs(c) * tv.abs_error_bound
        total += abs(v) ** 2
        err += 2 * abs(v) * e + e * e
    return scale * total, scale * err


def spectral_series(state: IterationState, f=0, j_max: int = 8) -> tuple[SpectralSumSeries, IterationState]:
    state = iterate_to(state, j_max)
    entries = []
    for j in range(j_max + 1):
        s, e = spectral_sum(state, f, j)
        entries.append((j, s, e))
    return SpectralSumSeries(tuple(entries)), state


def orthogonality_defect(state: IterationState, j: int | None = None) -> float:
    """``max |mu_j^(lam - lam')|`` over distinct pairs of ``Lambda_j``."""
    j = state.j if j is None else j
    pts = np.array([[to_float(c) for c in p] for p in state.spectrum_at(j).points])
    n = len(pts)
    if n < 2:
        return 0.0
    iu = np.triu_indices(n, 1)
    diffs = (pts[:, None, :] - pts[None, :, :])[iu]
    vals = mu_hat_batch(state.sigma, state.initial, j, diffs)
    return float(np.max(np.abs(vals)))


@dataclass(frozen=True)
class LowerBoundResult:
    epsilon: float
    series: SpectralSumSeries
    norm_sq: float
    norm_exact: bool


def lower_bound_estimate(state: IterationState, f=0, j_max: int = 8, mc_samples: int = 100_000,
                         seed: int = 0) -> LowerBoundResult:
    """``min_{1 <= j <= j_max} S_j`` over ``integral |f|^2 dmu``.

    For a single exponential the denominator is exactly 1; otherwise it is
    a chaos-game Monte Carlo estimate.
    """
    if j_max < 1:
        raise ArgumentError("j_max must be at least 1")
    terms, single = _trig_terms(f, state.sigma.dim)
    series, _ = spectral_series(state, f, j_max)
    smin = min(s for j, s, _ in series.entries if j >= 1)
    if single:
        norm_sq, exact = 1.0, True
    else:
        x = chaos_game_sample(state.sigma, mc_samples, seed)
        freqs = np.array([[to_float(c) for c in t] for t, _ in terms])
        coefs = np.array([c for _, c in terms])
        vals = unit_exponential_array(x @ freqs.T) @ coefs
        norm_sq, exact = float(np.mean(np.abs(vals) ** 2)), False
    return LowerBoundResult(smin / norm_sq, series, norm_sq, exact)


# chaos game ----------------------------------------------------------------

def chaos_game_sample(system: AffineSystem, n: int, seed: int, x0=None,
                      burn_in: int = BURN_IN) -> np.ndarray:
    """``n`` points of the random orbit ``x <- R^{-1}(x + b)``, ``b`` uniform.

    Randomness comes from a Philox counter-based generator keyed by
    ``seed``.  The orbit is advanced in blocks of 64 steps: block starts are
    propagated sequentially and the points inside each block are filled in
    with one batched affine recurrence, so the output is a pure function of
    ``(system, n, seed, x0)``.
    """
    if n < 1:
        raise ArgumentError("n must be positive")
    if system.side != "sigma":
        raise ArgumentError("chaos game needs a domain-side system")
    if not is_expansive(system.R):
        raise ArgumentError("R is not expansive")
    d = system.dim
    A = np.linalg.inv(system.R_float())
    Bf = system.translations_float()
    rng = np.random.Generator(np.random.Philox(int(seed) & (2**64 - 1)))
    total = n + burn_in
    nblocks = -(-total // _BLOCK)
    idx = rng.integers(0, len(Bf), size=nblocks * _BLOCK)
    shifts = Bf[idx].reshape(nblocks, _BLOCK, d)
    powers = [np.eye(d)]
    for _ in range(_BLOCK):
        powers.append(A @ powers[-1])
    powers = np.array(powers)                              # A^0 .. A^64
    # kernel[m, i] = A^(m - i + 1) for i <= m
    kernel = np.zeros((_BLOCK, _BLOCK, d, d))
    for m in range(_BLOCK):
        for i in range(m + 1):
            kernel[m, i] = powers[m - i + 1]
    forced = np.einsum("mide,bie->bmd", kernel, shifts)
    x = np.zeros(d) if x0 is None else np.array([to_float(c) for c in as_vector(x0, d)])
    starts = np.empty((nblocks, d))
    last = powers[_BLOCK]
    for b in range(nblocks):
        starts[b] = x
        x = last @ x + forced[b, -1]
    free = np.einsum("mde,be->bmd", powers[1:], starts)
    out = (free + forced).reshape(-1, d)
    return out[burn_in:burn_in + n]


def empirical_transform(samples: np.ndarray, lam) -> complex:
    """Sample mean of ``conj(e_lam)``."""
    samples = np.asarray(samples, dtype=float)
    lam = np.array([to_float(c) for c in as_vector(lam, samples.shape[1])])
    return complex(np.mean(unit_exponential_array(-(samples @ lam))))
