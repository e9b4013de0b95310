"""Fourier transforms of box unions and of the measures attached to an
affine system.

Convention: ``f^(lam) = integral of f(x) exp(-2 pi i lam.x) dx``.  With it,
``chi_hat(Omega + T) = conj(phi_T) * chi_hat(Omega)`` and one step of the
measure recursion reads

    mu_{k+1}^(lam) = |B|^-1 conj(phi_B(R^-T lam)) mu_k^(R^-T lam).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import ArgumentError, ExactnessError, NumericDomainError
from .geometry import AffineSystem, Domain, is_expansive, spectral_radius
from .kernel import (
    TWO_PI,
    as_vector,
    dot,
    exact_inverse,
    exact_matvec,
    roots_of_unity_sum_is_zero,
    to_float,
    transpose,
    unit_exponential,
    unit_exponential_array,
)
from .surd import is_exact, is_rational

__all__ = [
    "TransformValue",
    "phi_B",
    "interval_transform",
    "chi_hat",
    "chi_hat_batch",
    "chi_hat_is_zero",
    "mu_hat_n",
    "mu_hat_batch",
    "f_dmu_hat",
    "TAIL_TOLERANCE",
    "MAX_FACTORS",
]

TAIL_TOLERANCE = 1e-9
MAX_FACTORS = 200


@dataclass(frozen=True)
class TransformValue:
    value: complex
    abs_error_bound: float = 0.0

    def __post_init__(self):
        v = complex(self.value)
        if not (math.isfinite(v.real) and math.isfinite(v.imag)):
            raise NumericDomainError("non-finite transform value")
        if not (self.abs_error_bound >= 0 and math.isfinite(self.abs_error_bound)):
            raise NumericDomainError("error bound must be finite and nonnegative")
        object.__setattr__(self, "value", v)

    def __abs__(self):
        return abs(self.value)

    def __complex__(self):
        return self.value


def _vectors(points, dim=None) -> list[tuple]:
    pts = [as_vector(p, dim) for p in points]
    if not pts:
        raise ArgumentError("translation set must be nonempty")
    return pts


_EXACT_ZERO_DENOMINATOR = 512


def phi_B(B, xi) -> complex:
    """``sum_b exp(2 pi i b.xi)``.

    Rational phases with a small common denominator are first tested for an
    exact cancellation, so structural zeros come back as exactly 0.
    """
    pts = _vectors(B)
    xi = as_vector(xi, len(pts[0]))
    phases = [dot(b, xi) for b in pts]
    if len(phases) > 1 and all(is_rational(p) for p in phases):
        den = 1
        for p in phases:
            d = Fraction(p).denominator
            den = den * d // math.gcd(den, d)
            if den > _EXACT_ZERO_DENOMINATOR:
                break
        else:
            if roots_of_unity_sum_is_zero(phases):
                return 0j
    total = 0j
    for p in phases:
        total += unit_exponential(p)
    return total


def _sinc(x: float) -> float:
    if x == 0:
        return 1.0
    px = math.pi * x
    return math.sin(px) / px


def interval_transform(lo, length, lam) -> complex:
    """Transform of the indicator of ``[lo, lo + length]`` at ``lam``."""
    if lam == 0:
        return complex(to_float(length))
    prod = lam * length
    if is_rational(prod) and Fraction(prod).denominator == 1:
        return 0j
    # length * sinc(lam * length) * exp(-2 pi i lam * midpoint)
    mid_phase = lam * lo + prod / 2
    return to_float(length) * _sinc(to_float(prod)) * unit_exponential(-mid_phase)


def chi_hat(domain: Domain, lam) -> TransformValue:
    lam = as_vector(lam, domain.dim)
    base = 1 + 0j
    for c, e, l in zip(domain.corner, domain.edges, lam):
        base *= interval_transform(c, e, l)
        if base == 0:
            return TransformValue(0j)
    shift = 0j
    for t in domain.translates:
        shift += unit_exponential(-dot(t, lam))
    return TransformValue(shift * base)


def chi_hat_batch(domain: Domain, lams) -> np.ndarray:
    """Vectorized ``chi_hat`` for an ``(n, d)`` array of float frequencies."""
    lams = np.atleast_2d(np.asarray(lams, dtype=float))
    if lams.shape[1] != domain.dim:
        lams = lams.reshape(-1, domain.dim)
    out = np.ones(lams.shape[0], dtype=complex)
    for i, (c, e) in enumerate(zip(domain.corner, domain.edges)):
        ef, cf = to_float(e), to_float(c)
        x = lams[:, i] * ef
        out *= ef * np.sinc(x) * unit_exponential_array(-(lams[:, i] * (cf + ef / 2)))
    shifts = np.array([[to_float(v) for v in t] for t in domain.translates])
    out *= unit_exponential_array(-(lams @ shifts.T)).sum(axis=1)
    return out


def chi_hat_is_zero(domain: Domain, lam) -> bool:
    """Exact zero test of ``chi_hat`` for rational data.

    The base-cell factor vanishes iff some ``lam_i * edge_i`` is a nonzero
    integer; the translate sum is a sum of roots of unity, tested exactly.
    """
    lam = as_vector(lam, domain.dim)
    if not (domain.is_rational() and all(is_rational(v) for v in lam)):
        raise ExactnessError("exact zero test needs rational domain and frequency")
    for e, l in zip(domain.edges, lam):
        p = Fraction(l) * Fraction(e)
        if p != 0 and p.denominator == 1:
            return True
    return roots_of_unity_sum_is_zero([-dot(t, lam) for t in domain.translates])


# measure transforms --------------------------------------------------------

@lru_cache(maxsize=64)
def _system_data(system: AffineSystem):
    if system.side != "sigma":
        raise ArgumentError("measure transforms need a domain-side system")
    if not is_expansive(system.R):
        raise ArgumentError("R is not expansive")
    exact = system.is_exact()
    inv_t_exact = transpose(exact_inverse(system.R)) if exact else None
    inv_t = np.linalg.inv(system.R_float()).T
    bmax = max(math.sqrt(sum(to_float(c) ** 2 for c in b)) for b in system.translations)
    # block length s with ||(R^-T)^s|| < 1 for the geometric tail
    power, s = inv_t.copy(), 1
    while np.linalg.norm(power, 2) >= 1 and s < 256:
        power = power @ inv_t
        s += 1
    contraction = float(np.linalg.norm(power, 2))
    if contraction >= 1:
        contraction = spectral_radius(inv_t)
    return exact, inv_t_exact, inv_t, bmax, s, contraction


def _step(xi, exact_ok, inv_t_exact, inv_t):
    if exact_ok:
        return exact_matvec(inv_t_exact, xi)
    return tuple(float(v) for v in inv_t @ np.array([to_float(c) for c in xi]))


def _tail_bound(xi, inv_t, bmax, s, contraction) -> float:
    """Bound on ``sum_{k>=1} 2 pi bmax |(R^-T)^k xi|``."""
    v = np.array([to_float(c) for c in xi])
    block = 0.0
    for _ in range(s):
        v = inv_t @ v
        block += float(np.linalg.norm(v))
    return TWO_PI * bmax * block / (1.0 - contraction)


def mu_hat_n(system: AffineSystem, initial: Domain | None, n: int | None, lam) -> TransformValue:
    """Transform of ``mu_n`` (``n`` steps from normalized Lebesgue measure on
    ``initial``), or of the invariant measure when ``n`` is None."""
    exact, inv_t_exact, inv_t, bmax, s, contraction = _system_data(system)
    lam = as_vector(lam, system.dim)
    if any(not is_exact(c) for c in lam):
        lam = tuple(to_float(c) for c in lam)
    exact_ok = exact and all(is_exact(c) for c in lam)
    nb = len(system.translations)
    xi = lam
    prod = 1 + 0j
    if n is not None:
        if n < 0:
            raise ArgumentError("depth must be nonnegative")
        if initial is None:
            raise ArgumentError("finite depth needs an initial domain")
        for _ in range(n):
            xi = _step(xi, exact_ok, inv_t_exact, inv_t)
            prod *= phi_B(system.translations, xi).conjugate() / nb
            if prod == 0:
                return TransformValue(0j)
        base = chi_hat(initial, xi).value / to_float(initial.volume)
        return TransformValue(prod * base)
    for k in range(1, MAX_FACTORS + 1):
        xi = _step(xi, exact_ok, inv_t_exact, inv_t)
        prod *= phi_B(system.translations, xi).conjugate() / nb
        if prod == 0:
            return TransformValue(0j)
        tail = _tail_bound(xi, inv_t, bmax, s, contraction)
        if tail <= TAIL_TOLERANCE:
            return TransformValue(prod, tail)
    return TransformValue(prod, tail)


def mu_hat_batch(system: AffineSystem, initial: Domain | None, n: int | None, lams) -> np.ndarray:
    """Float-path ``mu_hat_n`` over an ``(m, d)`` array of frequencies.

    In limit mode every row uses the same number of factors, chosen so the
    tail bound of the largest frequency is below the tolerance.
    """
    exact, _, inv_t, bmax, s, contraction = _system_data(system)
    lams = np.asarray(lams, dtype=float).reshape(-1, system.dim)
    if not np.all(np.isfinite(lams)):
        raise NumericDomainError("non-finite frequency")
    B = system.translations_float()
    nb = B.shape[0]
    xi = lams.copy()
    prod = np.ones(lams.shape[0], dtype=complex)
    if n is not None:
        for _ in range(n):
            xi = xi @ inv_t.T
            prod *= np.conj(unit_exponential_array(xi @ B.T).sum(axis=1)) / nb
        return prod * chi_hat_batch(initial, xi) / to_float(initial.volume)
    worst = lams[np.argmax(np.linalg.norm(lams, axis=1))] if lams.size else None
    for _ in range(MAX_FACTORS):
        xi = xi @ inv_t.T
        worst = inv_t @ worst
        prod *= np.conj(unit_exponential_array(xi @ B.T).sum(axis=1)) / nb
        if _tail_bound(tuple(worst), inv_t, bmax, s, contraction) <= TAIL_TOLERANCE:
            break
    return prod


def f_dmu_hat(system: AffineSystem, initial: Domain | None, n: int | None, t, lam) -> TransformValue:
    """``integral conj(e_lam) e_t d mu_n``, i.e. ``mu_n^(lam - t)``."""
    lam = as_vector(lam, system.dim)
    t = as_vector(t, system.dim)
    return mu_hat_n(system, initial, n, tuple(a - b for a, b in zip(lam, t)))
