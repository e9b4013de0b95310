"""Doubling a domain by one translate: ``Omega_1 = Omega u (Omega + a)`` with
candidate spectrum ``Lambda_1 = (Lambda + beta) u Lambda_2``.

The frame operator splits into 2x2 blocks indexed by ``Lambda``; block
``lam`` has eigenvalues ``r_-(lam) <= r_+(lam)`` depending only on the phase
``(beta + lam) . a mod 1``.  Whether the pair is a frame is decided here
without floating point whenever the data is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .certificates import ESTIMATE, EXACT, FrameCertificate
from .errors import ArgumentError, HypothesisError, NumericDomainError
from .geometry import (
    Domain,
    FiniteSpectrum,
    LatticeSpectrum,
    Overlap,
    annihilator_contains,
    annihilator_witness,
    check_no_overlap,
    domain_contains,
    is_integer,
    rational_annihilator_witness,
)
from .kernel import TWO_PI, as_vector, dot, reduced_phase, to_float
from .surd import Surd, is_exact, is_rational, to_exact

__all__ = [
    "TwoTranslateProblem",
    "GspDecision",
    "SpectralResolution",
    "alpha_of",
    "r_pm",
    "r_pm_theta",
    "r_pm_phase",
    "block_matrix",
    "decide_gsp",
    "spectral_resolution",
    "DEFAULT_RADIUS",
]

DEFAULT_RADIUS = 1000
_RESIDUE_LIST_LIMIT = 4096


def _exactish(v):
    return tuple(c if isinstance(c, float) else to_exact(c) for c in v)


def _add(u, v):
    return tuple(x + y for x, y in zip(u, v))


@dataclass(frozen=True)
class TwoTranslateProblem:
    omega: Domain
    spectrum: LatticeSpectrum | FiniteSpectrum
    omega2: Domain
    spectrum2: LatticeSpectrum | FiniteSpectrum
    a: tuple
    beta: tuple = None

    def __post_init__(self):
        d = self.omega.dim
        if self.omega2.dim != d or self.spectrum.dim != d or self.spectrum2.dim != d:
            raise ArgumentError("all components must share one dimension")
        a = _exactish(as_vector(self.a, d))
        beta = (Fraction(0),) * d if self.beta is None else _exactish(as_vector(self.beta, d))
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "beta", beta)
        if any(isinstance(c, float) for c in a + beta):
            raise ArgumentError("a and beta must be exact (rational or tagged sqrt)")
        if check_no_overlap(self.omega, [(0,) * d, a]) is Overlap.OVERLAP:
            raise HypothesisError("Omega and Omega + a overlap in positive volume", witness=a)
        if not domain_contains(self.omega2, self.omega):
            raise HypothesisError("Omega is not contained in Omega_2")
        w = annihilator_witness(a, self.spectrum2, allow_surds=True)
        if w is not None:
            raise HypothesisError("a is not in the annihilator of Lambda_2", witness=w)

    @property
    def omega1(self) -> Domain:
        return self.omega.translate_by([(0,) * self.omega.dim, self.a])

    def phase(self, lam):
        """``(beta + lam) . a``, exact when the inputs are."""
        return dot(self.a, _add(self.beta, lam))


def alpha_of(omega: Domain, omega2: Domain):
    """``2 vol(Omega_2) / vol(Omega)``, exact."""
    if not domain_contains(omega2, omega):
        raise HypothesisError("Omega is not contained in Omega_2")
    return 2 * omega2.volume / omega.volume


# eigenvalues ---------------------------------------------------------------

def r_pm_phase(phase, alpha):
    """``(r_-, r_+)`` for the phase ``phi = theta / (2 pi)``.

    ``1 - cos theta`` is evaluated as ``2 sin^2(pi phi)`` and ``r_-`` as
    ``4 alpha (1 - cos theta) / r_+`` so both stay accurate near zero.
    Accepts arrays.
    """
    alpha = np.asarray(alpha, dtype=float)
    if np.any(alpha <= 0):
        raise ArgumentError("alpha must be positive")
    phi = np.asarray(phase, dtype=float)
    phi = phi - np.round(phi)
    omc = 2.0 * np.sin(np.pi * phi) ** 2
    half = 2.0 + alpha
    disc = half * half - 4.0 * alpha * omc
    if np.any(disc < -1e-12 * half * half):
        raise NumericDomainError("negative discriminant")
    rp = half + np.sqrt(np.maximum(disc, 0.0))
    rm = 4.0 * alpha * omc / rp
    if rm.ndim == 0:
        return float(rm), float(rp)
    return rm, rp


def r_pm_theta(theta, alpha):
    return r_pm_phase(np.asarray(theta, dtype=float) / TWO_PI, alpha)


def r_pm(lam, beta, a, alpha):
    """``r_-(lam), r_+(lam)`` with ``theta = 2 pi (beta + lam) . a``."""
    a = as_vector(a)
    lam = as_vector(lam, len(a))
    beta = as_vector(beta, len(a))
    return r_pm_phase(reduced_phase(dot(a, _add(beta, lam))), float(alpha))


def block_matrix(theta: float, alpha: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return 2.0 * np.array([[alpha + 1 + c, 1j * s], [-1j * s, 1 - c]])


# exact analysis of the phase set ---------------------------------------------

def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def _ext_gcd_coeffs(nums: Sequence[int]) -> tuple[int, list[int]]:
    """``g, u`` with ``sum u_i nums_i = g = gcd(nums)``."""
    g, coeffs = 0, [0] * len(nums)
    for i, n in enumerate(nums):
        # extend: g' = x g + y n
        old_r, r = g, n
        old_x, x = 1, 0
        old_y, y = 0, 1
        while r:
            q = old_r // r
            old_r, r = r, old_r - q * r
            old_x, x = x, old_x - q * x
            old_y, y = y, old_y - q * y
        if old_r < 0:
            old_r, old_x, old_y = -old_r, -old_x, -old_y
        coeffs = [old_x * c for c in coeffs]
        coeffs[i] = old_y
        g = old_r
    return g, coeffs


@dataclass
class _CosetAnalysis:
    offset: tuple
    constant: object          # a . (offset + beta)
    denominator: int | None   # D when all generator phases are rational
    hit: tuple | None         # lattice coordinates n with integral phase


def _analyse_coset(problem, offset, gens) -> _CosetAnalysis:
    c = problem.phase(offset)
    gs = [dot(problem.a, g) for g in gens]
    if all(is_rational(g) for g in gs):
        D = 1
        for g in gs:
            D = _lcm(D, Fraction(g).denominator)
        hit = None
        cD = c * D
        if is_rational(cD) and Fraction(cD).denominator == 1:
            # solve sum n_j (g_j D) = -c D (mod D)
            nums = [int(g * D) for g in gs] + [D]
            _, u = _ext_gcd_coeffs(nums)
            target = int(-cD)
            hit = tuple((u[j] * target) % D for j in range(len(gs)))
        return _CosetAnalysis(offset, c, D, hit)
    if len(gs) == 1:
        g = gs[0]
        ig = g.irrational_part()
        r0, coef = next(iter(ig.items()))
        ic = c.irrational_part() if isinstance(c, Surd) else {}
        n = -ic.get(r0, Fraction(0)) / coef
        hit = None
        if n.denominator == 1 and is_integer_safe(c + g * int(n)):
            hit = (int(n),)
        return _CosetAnalysis(offset, c, None, hit)
    return _CosetAnalysis(offset, c, None, None)


def is_integer_safe(x) -> bool:
    return not isinstance(x, Surd) and Fraction(x).denominator == 1


def _lattice_point(offset, gens, n):
    return tuple(offset[i] + sum(n[j] * gens[j][i] for j in range(len(gens)))
                 for i in range(len(offset)))


@dataclass(frozen=True)
class ConditionResult:
    holds: bool
    witness: tuple | None = None
    method: str = ""


def _condition_i(problem, radius) -> ConditionResult:
    """Pointwise reading: ``a . (lam + beta)`` is never an integer."""
    spec = problem.spectrum
    if isinstance(spec, LatticeSpectrum):
        gens = spec.generators
        global_ok = all(is_rational(dot(problem.a, g)) for g in gens) or len(gens) == 1
        if global_ok:
            for off in spec.offsets:
                info = _analyse_coset(problem, off, gens)
                if info.hit is not None:
                    return ConditionResult(False, _lattice_point(off, gens, info.hit), "exact")
            return ConditionResult(True, None, "exact")
    pts = spec.points if isinstance(spec, FiniteSpectrum) else spec.points_within(radius)
    for p in pts:
        v = problem.phase(p)
        if is_exact(v) and is_integer_safe(v):
            return ConditionResult(False, p, "exact" if isinstance(spec, FiniteSpectrum)
                                   else f"exact scan up to radius {radius}")
    method = "exact" if isinstance(spec, FiniteSpectrum) else f"exact scan up to radius {radius}"
    return ConditionResult(True, None, method)


def _condition_i_literal(problem) -> ConditionResult:
    """Literal reading: ``a`` is not in the annihilator of ``Lambda + beta``."""
    shifted = problem.spectrum.translated(problem.beta)
    inside = annihilator_contains(problem.a, shifted, allow_surds=True)
    return ConditionResult(not inside, problem.a if inside else None, "exact")


def _condition_ii(problem) -> ConditionResult:
    w = rational_annihilator_witness(problem.a, problem.spectrum)
    return ConditionResult(w is None, w, "exact")


def _min_phase_distance(problem) -> tuple[float | None, list | None]:
    """Exact infimum over all of Lambda of the distance from the phase to Z,
    and the residue list when it is short.  None when the phases are dense."""
    spec = problem.spectrum
    if isinstance(spec, FiniteSpectrum):
        phases = [reduced_phase(problem.phase(p)) for p in spec.points]
        return min(min(p, 1 - p) for p in phases), sorted(set(phases))
    gens = spec.generators
    if not all(is_rational(dot(problem.a, g)) for g in gens):
        return None, None
    best, residues = 1.0, []
    for off in spec.offsets:
        info = _analyse_coset(problem, off, gens)
        D = info.denominator
        r = reduced_phase(info.constant * D)
        best = min(best, min(r, 1 - r) / D)
        if residues is not None and len(residues) + D <= _RESIDUE_LIST_LIMIT:
            base = info.constant
            for k in range(D):
                residues.append(reduced_phase(base + Fraction(k, D)))
        else:
            residues = None
    return best, (sorted(set(residues)) if residues is not None else None)


# decision --------------------------------------------------------------------

def _sample(problem, radius):
    spec = problem.spectrum
    pts = spec.points if isinstance(spec, FiniteSpectrum) else spec.points_within(radius)
    data = list(problem.a) + list(problem.beta) + [c for p in pts[:1] for c in p]
    if all(is_rational(v) for v in data) and spec.is_rational():
        phases = np.array([reduced_phase(problem.phase(p)) for p in pts])
    else:
        P = np.array([[to_float(c) for c in p] for p in pts]).reshape(len(pts), -1)
        a_f = np.array([to_float(c) for c in problem.a])
        shift = float(sum(to_float(x) * to_float(y) for x, y in zip(problem.a, problem.beta)))
        phases = np.mod(P @ a_f + shift, 1.0)
    return pts, phases


@dataclass(frozen=True)
class GspDecision:
    is_gsp: bool
    condition_i: bool
    condition_i_witness: tuple | None
    condition_i_literal: bool
    condition_ii: bool
    condition_ii_witness: tuple | None
    alpha: object
    spectrum_sample: list
    inf_r_minus: float
    sup_r_plus: float
    truncation_radius: float
    exact_inf_r_minus: float | None = None
    residues: tuple | None = None
    condition_i_method: str = ""
    notes: tuple = field(default_factory=tuple)

    def to_dict(self) -> dict:
        enc = lambda w: None if w is None else [str(c) for c in w]
        return {
            "is_gsp": self.is_gsp,
            "condition_i": self.condition_i,
            "condition_i_witness": enc(self.condition_i_witness),
            "condition_i_method": self.condition_i_method,
            "condition_i_literal": self.condition_i_literal,
            "condition_ii": self.condition_ii,
            "condition_ii_witness": enc(self.condition_ii_witness),
            "alpha": str(self.alpha),
            "inf_r_minus": self.inf_r_minus,
            "sup_r_plus": self.sup_r_plus,
            "exact_inf_r_minus": self.exact_inf_r_minus,
            "truncation_radius": self.truncation_radius,
            "sample_size": len(self.spectrum_sample),
            "notes": list(self.notes),
        }


def decide_gsp(problem: TwoTranslateProblem, truncation_radius=DEFAULT_RADIUS,
               alpha=None) -> GspDecision:
    """Decide whether ``(Omega_1, Lambda_1)`` is a frame pair.

    The verdict is ``condition_i and condition_ii``, with condition (i) read
    pointwise.  The literal annihilator reading is reported alongside.
    """
    if alpha is None:
        alpha = alpha_of(problem.omega, problem.omega2)
    ci = _condition_i(problem, truncation_radius)
    cl = _condition_i_literal(problem)
    cii = _condition_ii(problem)
    pts, phases = _sample(problem, truncation_radius)
    rm, rp = r_pm_phase(phases, float(alpha))
    rm, rp = np.atleast_1d(rm), np.atleast_1d(rp)
    sample = [(p, float(a), float(b)) for p, a, b in zip(pts, rm, rp)]
    notes = []
    exact_inf, residues = None, None
    dist, res = _min_phase_distance(problem)
    if dist is not None:
        exact_inf = r_pm_phase(dist, float(alpha))[0]
        residues = tuple(res) if res is not None else None
        notes.append("phases take finitely many values; exact_inf_r_minus covers all of Lambda")
    if ci.holds != cl.holds:
        notes.append("pointwise and literal readings of condition (i) disagree")
    return GspDecision(
        is_gsp=ci.holds and cii.holds,
        condition_i=ci.holds,
        condition_i_witness=ci.witness,
        condition_i_literal=cl.holds,
        condition_ii=cii.holds,
        condition_ii_witness=cii.witness,
        alpha=alpha,
        spectrum_sample=sample,
        inf_r_minus=float(rm.min()) if rm.size else math.inf,
        sup_r_plus=float(rp.max()) if rp.size else 0.0,
        truncation_radius=truncation_radius,
        exact_inf_r_minus=exact_inf,
        residues=residues,
        condition_i_method=ci.method,
        notes=tuple(notes),
    )


# resolution --------------------------------------------------------------------

@dataclass(frozen=True)
class SpectralResolution:
    entries: list
    mode: str                 # "equality" or "inequality"
    alpha: object
    decision: GspDecision
    certificate: FrameCertificate | None
    union_disjoint: bool | None


def _union_disjoint(problem, radius) -> bool | None:
    """Is ``(Lambda + beta)`` disjoint from ``Lambda_2``?  Implied by condition
    (i) together with ``a`` in the annihilator of ``Lambda_2``."""
    spec = problem.spectrum
    pts = spec.points if isinstance(spec, FiniteSpectrum) else spec.points_within(radius)
    exact = all(is_exact(c) for c in problem.beta)
    for p in pts:
        q = _add(p, problem.beta)
        if exact and all(is_exact(c) for c in q):
            if problem.spectrum2.contains(q):
                return False
    return True


def spectral_resolution(problem: TwoTranslateProblem, truncation_radius=DEFAULT_RADIUS,
                        base_constants=None, extension_constants=None) -> SpectralResolution:
    """Per-block eigenvalues and the frame certificate they imply.

    Without constants both input pairs are taken to be spectral pairs
    (constants ``vol(Omega)`` and ``vol(Omega_2)``) and the block eigenvalues
    are exact ("equality" mode).  Given frame constants that are not those,
    ``alpha = 2 k_2 / K`` and the eigenvalues only bound the frame operator
    from below ("inequality" mode).
    """
    m, m2 = problem.omega.volume, problem.omega2.volume
    k, K = base_constants if base_constants is not None else (m, m)
    k2, K2 = extension_constants if extension_constants is not None else (m2, m2)
    spectral = k == K == m and k2 == K2 == m2
    if spectral:
        mode, alpha = "equality", alpha_of(problem.omega, problem.omega2)
    else:
        mode, alpha = "inequality", 2 * k2 / K
    decision = decide_gsp(problem, truncation_radius, alpha=alpha)
    entries = decision.spectrum_sample
    disjoint = True if decision.condition_i else _union_disjoint(problem, truncation_radius)
    cert = None
    if decision.is_gsp:
        if decision.exact_inf_r_minus is not None:
            rmin, rmax = decision.exact_inf_r_minus, r_pm_phase(
                _min_phase_distance(problem)[0], float(alpha))[1]
            radius, kind = None, EXACT
        else:
            rmin, rmax = decision.inf_r_minus, decision.sup_r_plus
            radius, kind = truncation_radius, ESTIMATE
        if spectral:
            lower, upper = float(m) / 2 * rmin, float(m) / 2 * rmax
        else:
            lower, upper = float(k) / 2 * rmin, 2 * (float(K) + float(K2))
        if disjoint is False:
            lower /= 2
        cert = FrameCertificate(lower, upper, kind, f"two-translate blocks ({mode})",
                                1e-12 * upper, radius=radius)
    return SpectralResolution(entries, mode, alpha, decision, cert, disjoint)
