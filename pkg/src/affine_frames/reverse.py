"""Going backwards: recover a spectrum for ``Omega`` from one for
``Omega + B``; check lattice-coset structure ``Lambda = L + Gamma°``; and the
one-dimensional classification with its Hadamard search."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .certificates import EXACT, FrameCertificate
from .errors import ArgumentError, HypothesisError
from .geometry import (
    Domain,
    FiniteSpectrum,
    LatticeSpectrum,
    Overlap,
    check_no_overlap,
    is_integer,
)
from .kernel import (
    as_vector,
    dot,
    exact_det,
    exact_inverse,
    exact_matvec,
    roots_of_unity_sum_is_zero,
    to_float,
    transpose,
    unit_exponential,
)
from .surd import is_rational, to_exact
from .transforms import chi_hat, chi_hat_is_zero

__all__ = [
    "ReverseResult",
    "reverse_spectrum",
    "LatticeClassification",
    "verify_lattice_classification",
    "Violation",
    "Classification1D",
    "classify_1d",
    "search_L",
    "unitarity_defect",
    "ZERO_TOL",
    "UNITARY_TOL",
]

ZERO_TOL = 1e-9
UNITARY_TOL = 1e-9
_MAX_PERIOD = 12


def _sorted_points(points):
    return sorted(points, key=lambda p: (sum(float(c) ** 2 for c in p), tuple(float(c) for c in p)))


def _is_zero(domain: Domain, lam, exact: bool) -> bool:
    if exact:
        return chi_hat_is_zero(domain, lam)
    return abs(chi_hat(domain, lam).value) <= ZERO_TOL * to_float(domain.volume)


def _rational_inputs(domain: Domain, spectrum) -> bool:
    return domain.is_rational() and spectrum.is_rational()


# reverse construction -------------------------------------------------------

@dataclass(frozen=True)
class ReverseResult:
    spectrum: LatticeSpectrum | FiniteSpectrum
    certificate: FrameCertificate
    zero_witnesses: tuple
    radius: float
    lattice_form: bool
    violations: tuple = ()

    @property
    def hypotheses_hold(self) -> bool:
        return not self.violations


def _detect_period(spectrum: LatticeSpectrum, selected: set, pts: list):
    """Smallest ``N`` such that membership in ``selected`` depends only on the
    coset of ``N Gamma``; returns the lattice-coset form or None."""
    d = spectrum.dim
    coords = {}
    for p in pts:
        for oi, off in enumerate(spectrum.offsets):
            c = spectrum.lattice_coordinates(tuple(a - b for a, b in zip(p, off)))
            if all(is_integer(x) for x in c):
                coords[p] = (oi, tuple(int(x) for x in c))
                break
    for N in range(1, _MAX_PERIOD + 1):
        classes: dict = {}
        for p, (oi, n) in coords.items():
            key = (oi, tuple(x % N for x in n))
            classes.setdefault(key, []).append(p in selected)
        if any(len(v) < 2 for v in classes.values()) or \
                len(classes) < len(spectrum.offsets) * N ** d:
            return None
        if all(all(v) or not any(v) for v in classes.values()):
            offsets = []
            for (oi, r), v in sorted(classes.items()):
                if v[0]:
                    off = spectrum.offsets[oi]
                    offsets.append(tuple(off[i] + sum(r[j] * spectrum.generators[j][i] for j in range(d))
                                         for i in range(d)))
            if not offsets:
                return None
            gens = tuple(tuple(N * c for c in g) for g in spectrum.generators)
            return LatticeSpectrum(gens, tuple(offsets))
    return None


def reverse_spectrum(omega: Domain, B, spectrum, constants, truncation_radius=32) -> ReverseResult:
    """``Lambda_Omega = {lam in Lambda : chi_hat_Omega(lam) = 0} u {0}`` with
    frame constants ``(k/|B|, K)`` given constants ``(k, K)`` for
    ``(Omega + B, Lambda)``.

    Zero tests are exact for rational data.  The hypothesis that ``e_0`` is
    orthogonal to every other ``e_lam`` on ``Omega + B`` is checked over the
    truncation and reported, not raised.  When ``Lambda`` is a lattice-coset
    union and the result is periodic on the truncation it is returned in
    lattice-coset form (verified up to the radius only).
    """
    k, K = constants
    B = [as_vector(b, omega.dim) for b in B]
    if not B:
        raise ArgumentError("B must be nonempty")
    if check_no_overlap(omega, B) is Overlap.OVERLAP:
        raise HypothesisError("translates Omega + b overlap in positive volume")
    big = omega.translate_by(B)
    zero = (Fraction(0),) * omega.dim
    if not spectrum.contains(zero):
        raise HypothesisError("0 must belong to the spectrum")
    exact = _rational_inputs(big, spectrum)
    pts = spectrum.points_within(truncation_radius)
    violations = []
    selected = {zero}
    for lam in pts:
        if lam == zero:
            continue
        if not _is_zero(big, lam, exact):
            violations.append(("e_0 not orthogonal to e_lam on Omega + B", lam))
        if _is_zero(omega, lam, exact):
            selected.add(lam)
    witnesses = tuple(p for p in pts if p in selected and p != zero)
    lattice = None
    if isinstance(spectrum, LatticeSpectrum) and exact:
        lattice = _detect_period(spectrum, selected, pts)
    result_spec = lattice if lattice is not None else \
        FiniteSpectrum(tuple(p for p in pts if p in selected))
    kk = to_exact(k) if isinstance(k, (int, Fraction, str)) else k
    cert = FrameCertificate(kk / len(B), K, EXACT, "restriction to a translate",
                            0.0 if exact else ZERO_TOL,
                            (f"verified up to radius {truncation_radius}",),
                            radius=truncation_radius, degenerate=len(selected) == 1)
    return ReverseResult(result_spec, cert, witnesses, truncation_radius,
                         lattice is not None, tuple(violations))


# lattice classification -------------------------------------------------------

def unitarity_defect(L, B) -> float:
    """``max |U* U - I|`` for ``U = |B|^{-1/2} (e^{2 pi i l.b})``."""
    if len(L) != len(B):
        return math.inf
    U = np.array([[unit_exponential(dot(l, b)) for b in B] for l in L]) / math.sqrt(len(B))
    return float(np.max(np.abs(U.conj().T @ U - np.eye(len(B)))))


@dataclass(frozen=True)
class LatticeClassification:
    confirmed: bool
    L: tuple
    counterexample: tuple | None
    reason: str
    unitary_defect: float
    radius: float


def _reduce_mod(dual_gens, dual_inv, v):
    c = exact_matvec(dual_inv, v)
    frac = tuple(x - math.floor(x) for x in c)
    return tuple(sum(frac[j] * dual_gens[j][i] for j in range(len(frac))) for i in range(len(v)))


def verify_lattice_classification(D: Domain, gamma, B, spectrum, truncation_radius=32) -> LatticeClassification:
    gamma = tuple(tuple(to_exact(c) for c in as_vector(g)) for g in gamma)
    d = D.dim
    if len(gamma) != d or any(len(g) != d for g in gamma):
        raise ArgumentError("Gamma needs d generators of dimension d")
    if D.volume != abs(exact_det(transpose(gamma))):
        raise ArgumentError("vol(D) differs from the covolume of Gamma; (D, Gamma) is not a tiling")
    zero = (Fraction(0),) * d
    if not spectrum.contains(zero):
        raise HypothesisError("0 must belong to the spectrum")
    B = [tuple(to_exact(c) for c in as_vector(b, d)) for b in B]
    dual = LatticeSpectrum(transpose(exact_inverse(transpose(gamma))))
    dual_gens = dual.generators
    dual_inv = exact_inverse(transpose(dual_gens))
    pts = _sorted_points(spectrum.points_within(truncation_radius))
    r = truncation_radius
    for lam in pts:
        if lam != zero and chi_hat_is_zero(D, lam) and not dual.contains(lam):
            return LatticeClassification(False, (), lam, "zero of chi_hat_D outside the dual lattice",
                                         math.inf, r)
    L = []
    for lam in pts:
        if not any(dual.contains(tuple(a - b for a, b in zip(lam, l))) for l in L):
            L.append(_reduce_mod(dual_gens, dual_inv, lam))
    L = tuple(L)
    for l in L:
        for p in LatticeSpectrum(dual_gens, (l,)).points_within(r):
            if not spectrum.contains(p):
                return LatticeClassification(False, L, p, "L + dual lattice leaves the spectrum",
                                             math.inf, r)
    if len(L) != len(B):
        return LatticeClassification(False, L, None, f"|L| = {len(L)} but |B| = {len(B)}",
                                     math.inf, r)
    defect = unitarity_defect(L, B)
    if defect > UNITARY_TOL:
        return LatticeClassification(False, L, None, "matrix (e^{2 pi i l.b}) is not unitary",
                                     defect, r)
    return LatticeClassification(True, L, None, f"verified up to radius {r}", defect, r)


# one dimension -------------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    witness: object = None


@dataclass(frozen=True)
class Classification1D:
    valid: bool
    L: tuple
    violations: tuple
    scope: str


def _cosets_mod_one(spectrum, radius):
    """Representatives in ``[0, 1)`` of ``Lambda mod Z`` and whether
    ``Lambda = L + Z`` holds (exactly for rational lattices, else on the ball)."""
    if isinstance(spectrum, LatticeSpectrum) and spectrum.is_rational():
        g = Fraction(spectrum.generators[0][0])
        if (1 / g).denominator != 1:
            return None, "exact", Fraction(1)
        m = abs(int(1 / g))
        reps = sorted({(o[0] + k * g) % 1 for o in spectrum.offsets for k in range(m)})
        return tuple(reps), "exact", None
    pts = spectrum.points_within(radius)
    reps = sorted({Fraction(p[0]) % 1 for p in pts})
    for l in reps:
        for n in range(-math.ceil(radius) - 1, math.ceil(radius) + 2):
            x = l + n
            if abs(x) <= radius and not spectrum.contains((x,)):
                return None, f"verified up to radius {radius}", x
    return tuple(reps), f"verified up to radius {radius}", None


def classify_1d(B, spectrum, truncation_radius=32) -> Classification1D:
    """Check every conclusion of the one-dimensional classification for
    ``(I + B, Lambda)``; each failure is reported with a witness."""
    B = [to_exact(as_vector(b, 1)[0]) for b in B]
    if not B:
        raise ArgumentError("B must be nonempty")
    if spectrum.dim != 1:
        raise ArgumentError("classify_1d works in dimension one")
    violations = []
    unit = Domain.interval(0, 1)
    if check_no_overlap(unit, [(b,) for b in B]) is Overlap.OVERLAP:
        violations.append(Violation("overlap", "translates I + b overlap", tuple(B)))
    for b, c in itertools.combinations(B, 2):
        if not is_integer(b - c):
            violations.append(Violation("b - b' not in Z", f"{b} - {c} is not an integer", (b, c)))
            break
    reps, scope, bad = _cosets_mod_one(spectrum, truncation_radius)
    L = ()
    if reps is None:
        violations.append(Violation("not L + Z", "spectrum is not a union of Z-cosets", bad))
    else:
        L = tuple((l,) for l in reps)
        if len(L) != len(B):
            violations.append(Violation("|L| != |B|", f"|L| = {len(L)}, |B| = {len(B)}", len(L)))
        else:
            defect = unitarity_defect(L, [(b,) for b in B])
            if defect > UNITARY_TOL:
                violations.append(Violation("not unitary",
                                            f"|B|^-1/2 (e^(2 pi i l b)) off by {defect:.3g}", defect))
    return Classification1D(not violations, tuple(l[0] for l in L), tuple(violations), scope)


def search_L(B, q: int) -> list[tuple]:
    """All ``L`` of size ``|B|`` with ``0 in L``, entries in ``[0, 1)`` of
    denominator at most ``q``, and ``|B|^{-1/2} (e^{2 pi i l b})`` unitary."""
    B = [to_exact(as_vector(b, 1)[0]) for b in B]
    if not B or any(not is_integer(b) for b in B):
        raise ArgumentError("search_L needs a nonempty B of integers")
    if q < 1:
        raise ArgumentError("denominator bound must be positive")
    n = len(B)
    if n == 1:
        return [(Fraction(0),)]
    cands = sorted({Fraction(p, d) for d in range(1, q + 1) for p in range(d)})

    def orthogonal(x, y):
        return roots_of_unity_sum_is_zero([b * (x - y) for b in B])

    nodes = [c for c in cands if c != 0 and orthogonal(c, 0)]
    adj = {u: {v for v in nodes if v != u and orthogonal(u, v)} for u in nodes}
    found = []

    def extend(clique, pool):
        if len(clique) == n - 1:
            found.append((Fraction(0),) + tuple(clique))
            return
        for i, v in enumerate(pool):
            extend(clique + [v], [w for w in pool[i + 1:] if w in adj[v]])

    extend([], nodes)
    return [L for L in found if unitarity_defect([(l,) for l in L], [(b,) for b in B]) <= UNITARY_TOL]
