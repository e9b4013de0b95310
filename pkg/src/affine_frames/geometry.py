"""Domains (finite unions of congruent boxes), spectra (point sets) and affine
systems, with exact overlap, containment, expansivity and annihilator tests.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    ArgumentError,
    ExactnessError,
    HypothesisError,
    IndeterminateError,
    UnsupportedGeometryError,
)
from .kernel import (
    as_vector,
    dot,
    exact_det,
    exact_inverse,
    exact_matvec,
    to_float,
    transpose,
)
from .surd import Surd, is_exact, is_rational, to_exact

__all__ = [
    "Overlap",
    "Domain",
    "FiniteSpectrum",
    "LatticeSpectrum",
    "IfsSpectrum",
    "Spectrum",
    "AffineSystem",
    "classify_cells",
    "check_no_overlap",
    "domain_contains",
    "is_expansive",
    "spectral_radius",
    "annihilator_contains",
    "annihilator_witness",
    "rational_annihilator_contains",
    "rational_annihilator_witness",
    "apply_affine",
    "is_integer",
    "spectra_equal",
]


class Overlap(enum.Enum):
    DISJOINT = "Disjoint"
    NULL_OVERLAP = "NullOverlap"
    OVERLAP = "Overlap"


def is_integer(x) -> bool:
    if isinstance(x, Surd):
        return False
    if is_rational(x):
        return Fraction(x).denominator == 1
    raise ExactnessError(f"integrality of inexact value {x!r} is undecidable")


def _exact_vector(v, dim=None) -> tuple:
    return tuple(to_exact(c) for c in as_vector(v, dim))


def _vec_add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def _vec_sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


# boxes -----------------------------------------------------------------------

def _pair_class(a, b) -> Overlap:
    touching = False
    for lo1, hi1, lo2, hi2 in zip(a[0], a[1], b[0], b[1]):
        ov = min(hi1, hi2) - max(lo1, lo2)
        if ov < 0:
            return Overlap.DISJOINT
        if ov == 0:
            touching = True
    return Overlap.NULL_OVERLAP if touching else Overlap.OVERLAP


def classify_cells(cells: Sequence, groups: Sequence[int] | None = None,
                   want_pair: bool = False):
    """Worst overlap class among pairs of closed boxes ``(lo, hi)``.

    Pairs sharing a group label are skipped.  A sweep along the first axis
    keeps this close to linear for the dyadic unions produced by iteration.
    """
    n = len(cells)
    order = sorted(range(n), key=lambda i: cells[i][0][0])
    worst, pair = Overlap.DISJOINT, None
    active: list[int] = []
    for i in order:
        lo_i = cells[i][0][0]
        active = [j for j in active if not cells[j][1][0] < lo_i]
        for j in active:
            if groups is not None and groups[i] == groups[j]:
                continue
            c = _pair_class(cells[i], cells[j])
            if c is Overlap.OVERLAP:
                return (c, (j, i)) if want_pair else c
            if c is Overlap.NULL_OVERLAP and worst is Overlap.DISJOINT:
                worst, pair = c, (j, i)
        active.append(i)
    return (worst, pair) if want_pair else worst


def _box_subtract(box, other) -> list:
    """``box \\ other`` as a list of closed boxes (boundaries are immaterial)."""
    lo, hi = list(box[0]), list(box[1])
    olo, ohi = other[0], other[1]
    for k in range(len(lo)):
        if min(hi[k], ohi[k]) - max(lo[k], olo[k]) <= 0:
            return [box]
    pieces = []
    for k in range(len(lo)):
        if lo[k] < olo[k]:
            p_hi = list(hi)
            p_hi[k] = olo[k]
            pieces.append((tuple(lo), tuple(p_hi)))
            lo[k] = olo[k]
        if ohi[k] < hi[k]:
            p_lo = list(lo)
            p_lo[k] = ohi[k]
            pieces.append((tuple(p_lo), tuple(hi)))
            hi[k] = ohi[k]
    return pieces


# domains -------------------------------------------------------------------

@dataclass(frozen=True)
class Domain:
    """Union of translates ``base_cell + t`` of one closed box.

    ``corner`` and ``edges`` describe the base cell; coordinates are exact
    (``Fraction`` or ``Surd``).  Distinct translated cells may share
    boundary but never a set of positive volume.
    """

    corner: tuple
    edges: tuple
    translates: tuple = None

    def __post_init__(self):
        corner = _exact_vector(self.corner)
        d = len(corner)
        if d == 0:
            raise ArgumentError("domain dimension must be positive")
        edges = _exact_vector(self.edges, d)
        if any(not e > 0 for e in edges):
            raise ArgumentError("box edges must be positive")
        if self.translates is None:
            translates = ((Fraction(0),) * d,)
        else:
            translates = tuple(_exact_vector(t, d) for t in self.translates)
        if not translates:
            raise ArgumentError("domain needs at least one translate")
        if len(set(translates)) != len(translates):
            raise HypothesisError("domain translates must be pairwise distinct")
        object.__setattr__(self, "corner", corner)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "translates", translates)
        cls, pair = classify_cells(self.cells(), want_pair=True)
        if cls is Overlap.OVERLAP:
            raise HypothesisError("translated cells overlap in positive volume",
                                  witness=tuple(translates[i] for i in pair))
        object.__setattr__(self, "_overlap", cls)

    @classmethod
    def interval(cls, lo=0, hi=1, translates=None) -> "Domain":
        lo, hi = to_exact(lo), to_exact(hi)
        return cls((lo,), (hi - lo,), translates)

    @classmethod
    def box(cls, corner, edges, translates=None) -> "Domain":
        return cls(corner, edges, translates)

    @property
    def dim(self) -> int:
        return len(self.corner)

    @property
    def cell_volume(self):
        v = Fraction(1)
        for e in self.edges:
            v = v * e
        return v

    @property
    def volume(self):
        return self.cell_volume * len(self.translates)

    @property
    def overlap(self) -> Overlap:
        return self._overlap

    def cells(self) -> list:
        hi0 = _vec_add(self.corner, self.edges)
        return [(_vec_add(self.corner, t), _vec_add(hi0, t)) for t in self.translates]

    def translate_by(self, shifts: Iterable) -> "Domain":
        shifts = [_exact_vector(b, self.dim) for b in shifts]
        if not shifts:
            raise ArgumentError("empty translation set")
        return Domain(self.corner, self.edges,
                      tuple(_vec_add(t, b) for b in shifts for t in self.translates))

    def is_rational(self) -> bool:
        vals = itertools.chain(self.corner, self.edges, *self.translates)
        return all(is_rational(v) for v in vals)


def check_no_overlap(domain: Domain, new_translates: Iterable) -> Overlap:
    """Classify the copies ``domain + b`` for distinct ``b``."""
    shifts = [_exact_vector(b, domain.dim) for b in new_translates]
    if not shifts:
        raise ArgumentError("empty translate set")
    if len(set(shifts)) != len(shifts):
        return Overlap.OVERLAP
    cells, groups = [], []
    for g, b in enumerate(shifts):
        for lo, hi in domain.cells():
            cells.append((_vec_add(lo, b), _vec_add(hi, b)))
            groups.append(g)
    return classify_cells(cells, groups)


def domain_contains(outer: Domain, inner: Domain) -> bool:
    """Exact test of ``inner ⊆ outer`` up to sets of volume zero."""
    if outer.dim != inner.dim:
        raise ArgumentError("dimension mismatch")
    outer_cells = outer.cells()
    for cell in inner.cells():
        remaining = [cell]
        for oc in outer_cells:
            remaining = [p for r in remaining for p in _box_subtract(r, oc)]
            if not remaining:
                break
        for lo, hi in remaining:
            if all(h - l > 0 for l, h in zip(lo, hi)):
                return False
    return True


# spectra -------------------------------------------------------------------

def _norm_le(v: tuple, radius) -> bool:
    approx = math.sqrt(sum(float(c) ** 2 for c in v))
    r = float(radius)
    if abs(approx - r) > 1e-9 * max(1.0, r):
        return approx < r
    if all(is_exact(c) for c in v) and is_exact(radius):
        return dot(v, v) <= to_exact(radius) * to_exact(radius)
    return approx <= r


class _SpectrumBase:
    def points_array(self, radius) -> np.ndarray:
        pts = self.points_within(radius)
        if not pts:
            return np.zeros((0, self.dim))
        return np.array([[to_float(c) for c in p] for p in pts], dtype=float)

    def data_values(self):
        raise NotImplementedError

    def is_rational(self) -> bool:
        return all(is_rational(v) for v in self.data_values())

    def is_exact(self) -> bool:
        return all(is_exact(v) for v in self.data_values())


@dataclass(frozen=True)
class FiniteSpectrum(_SpectrumBase):
    points: tuple

    def __post_init__(self):
        pts = []
        for p in self.points:
            v = as_vector(p)
            pts.append(tuple(to_exact(c) if is_exact(c) or isinstance(c, (int, str)) else float(c)
                             for c in v))
        if pts and len({len(p) for p in pts}) != 1:
            raise ArgumentError("points must share one dimension")
        object.__setattr__(self, "points", tuple(dict.fromkeys(pts)))

    @property
    def dim(self) -> int:
        if not self.points:
            raise ArgumentError("empty spectrum has no dimension")
        return len(self.points[0])

    def data_values(self):
        return itertools.chain.from_iterable(self.points)

    def points_within(self, radius) -> list:
        return [p for p in self.points if _norm_le(p, radius)]

    def contains(self, x) -> bool:
        return tuple(x) in set(self.points)

    def translated(self, v) -> "FiniteSpectrum":
        v = as_vector(v)
        return FiniteSpectrum(tuple(_vec_add(p, v) for p in self.points))

    def generators_and_offsets(self):
        return (), self.points

    def __len__(self):
        return len(self.points)


@dataclass(frozen=True)
class LatticeSpectrum(_SpectrumBase):
    """``offsets + Gamma Z^d`` with ``Gamma``'s columns given as ``generators``."""

    generators: tuple
    offsets: tuple = None

    def __post_init__(self):
        gens = tuple(_exact_vector(g) for g in self.generators)
        d = len(gens)
        if d == 0 or any(len(g) != d for g in gens):
            raise ArgumentError("lattice needs d generators of dimension d")
        offs = ((Fraction(0),) * d,) if self.offsets is None else \
            tuple(_exact_vector(o, d) for o in self.offsets)
        if not offs:
            raise ArgumentError("lattice spectrum needs at least one offset")
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "offsets", offs)
        gamma = transpose(gens)
        if exact_det(gamma) == 0:
            raise ArgumentError("lattice generators are linearly dependent")
        object.__setattr__(self, "_inverse", exact_inverse(gamma))
        for a, b in itertools.combinations(offs, 2):
            if self._in_lattice(_vec_sub(a, b)):
                raise ArgumentError(f"offsets {a} and {b} agree modulo the lattice")

    @property
    def dim(self) -> int:
        return len(self.generators)

    @property
    def matrix(self) -> tuple:
        return transpose(self.generators)

    def data_values(self):
        return itertools.chain(itertools.chain.from_iterable(self.generators),
                               itertools.chain.from_iterable(self.offsets))

    def _in_lattice(self, v) -> bool:
        coords = exact_matvec(self._inverse, v)
        return all(is_integer(c) for c in coords)

    def lattice_coordinates(self, v) -> tuple:
        return exact_matvec(self._inverse, v)

    def contains(self, x) -> bool:
        x = _exact_vector(x, self.dim)
        return any(self._in_lattice(_vec_sub(x, o)) for o in self.offsets)

    def dual_generators(self) -> tuple:
        """Columns of ``Gamma^{-T}``: generators of the dual lattice."""
        return tuple(tuple(row) for row in self._inverse)

    def translated(self, v) -> "LatticeSpectrum":
        v = _exact_vector(v, self.dim)
        return LatticeSpectrum(self.generators, tuple(_vec_add(o, v) for o in self.offsets))

    def generators_and_offsets(self):
        return self.generators, self.offsets

    def points_within(self, radius) -> list:
        d = self.dim
        gamma_f = np.array([[to_float(c) for c in row] for row in self.matrix])
        inv_f = np.linalg.inv(gamma_f)
        row_norms = np.linalg.norm(inv_f, axis=1)
        r = to_float(radius)
        out = []
        for off in self.offsets:
            off_f = np.array([to_float(c) for c in off])
            centre = -inv_f @ off_f
            reach = row_norms * r + 1e-9
            ranges = [range(math.ceil(centre[i] - reach[i]), math.floor(centre[i] + reach[i]) + 1)
                      for i in range(d)]
            for n in itertools.product(*ranges):
                p = tuple(off[i] + sum(n[j] * self.generators[j][i] for j in range(d))
                          for i in range(d))
                if _norm_le(p, radius):
                    out.append(p)
        return out


@dataclass(frozen=True)
class IfsSpectrum(_SpectrumBase):
    """Finite spectrum obtained by applying a dual system ``depth`` times."""

    system: "AffineSystem"
    depth: int
    seed: tuple = None

    def __post_init__(self):
        if self.depth < 0:
            raise ArgumentError("depth must be nonnegative")
        seed = self.seed
        if seed is None:
            seed = ((Fraction(0),) * self.system.dim,)
        object.__setattr__(self, "seed", tuple(tuple(as_vector(s)) for s in seed))

    @property
    def dim(self) -> int:
        return self.system.dim

    def expand(self) -> FiniteSpectrum:
        current = FiniteSpectrum(self.seed)
        for _ in range(self.depth):
            current = apply_affine(self.system, current)
        return current

    def data_values(self):
        return self.expand().data_values()

    def points_within(self, radius) -> list:
        return self.expand().points_within(radius)

    def contains(self, x) -> bool:
        return self.expand().contains(x)

    def translated(self, v) -> FiniteSpectrum:
        return self.expand().translated(v)

    def generators_and_offsets(self):
        return self.expand().generators_and_offsets()


Spectrum = FiniteSpectrum | LatticeSpectrum | IfsSpectrum


def spectra_equal(a, b, radius=None) -> bool:
    """Set equality of two spectra.

    Two rational lattice-coset unions are compared exactly on a common
    sublattice; otherwise the comparison is restricted to the ball of the
    given radius.
    """
    if isinstance(a, LatticeSpectrum) and isinstance(b, LatticeSpectrum):
        return _lattice_subset(a, b) and _lattice_subset(b, a)
    if radius is None:
        raise ArgumentError("finite comparison needs a radius")
    return set(a.points_within(radius)) == set(b.points_within(radius))


def _lattice_subset(a: LatticeSpectrum, b: LatticeSpectrum) -> bool:
    if not (a.is_rational() and b.is_rational()):
        raise ExactnessError("exact lattice comparison needs rational data")
    # N * Gamma_a lies inside Gamma_b for N = lcm of denominators of Gamma_b^-1 Gamma_a
    coords = [b.lattice_coordinates(g) for g in a.generators]
    n = 1
    for c in itertools.chain.from_iterable(coords):
        den = Fraction(c).denominator
        n = n * den // math.gcd(n, den)
    for off in a.offsets:
        for k in itertools.product(range(n), repeat=a.dim):
            p = tuple(off[i] + sum(k[j] * a.generators[j][i] for j in range(a.dim))
                      for i in range(a.dim))
            if not b.contains(p):
                return False
    return True


# affine systems --------------------------------------------------------------

@dataclass(frozen=True)
class AffineSystem:
    """Contractions ``x -> R^{-1}(x + b)`` (side ``"sigma"``) or dual
    expansions ``s -> R^T (s + l)`` (side ``"tau"``)."""

    R: tuple
    translations: tuple
    side: str = "sigma"

    def __post_init__(self):
        rows = tuple(tuple(as_vector(r)) for r in
                     (self.R if not np.isscalar(self.R) and not is_exact(self.R) else [[self.R]]))
        rows = tuple(tuple(c if isinstance(c, float) else to_exact(c) for c in r) for r in rows)
        d = len(rows)
        if d == 0 or any(len(r) != d for r in rows):
            raise ArgumentError("R must be a nonempty square matrix")
        trans = tuple(tuple(c if isinstance(c, float) else to_exact(c) for c in as_vector(t, d))
                      for t in self.translations)
        if not trans:
            raise ArgumentError("translation set must be nonempty")
        if self.side not in ("sigma", "tau"):
            raise ArgumentError("side must be 'sigma' or 'tau'")
        object.__setattr__(self, "R", rows)
        object.__setattr__(self, "translations", trans)

    @property
    def dim(self) -> int:
        return len(self.R)

    def is_exact(self) -> bool:
        return all(is_exact(c) for row in self.R for c in row)

    def R_float(self) -> np.ndarray:
        return np.array([[to_float(c) for c in row] for row in self.R])

    def translations_float(self) -> np.ndarray:
        return np.array([[to_float(c) for c in t] for t in self.translations])

    def linear_part(self):
        """Matrix applied after shifting: ``R^{-1}`` or ``R^T``."""
        if self.side == "tau":
            return transpose(self.R) if self.is_exact() else self.R_float().T
        if self.is_exact():
            return exact_inverse(self.R)
        return np.linalg.inv(self.R_float())

    def det(self):
        if self.is_exact():
            return exact_det(self.R)
        return float(np.linalg.det(self.R_float()))

    def dual(self, translations) -> "AffineSystem":
        return AffineSystem(self.R, translations, "tau" if self.side == "sigma" else "sigma")


def _check_invertible(R) -> None:
    if all(is_exact(c) for row in R for c in row):
        if exact_det(R) == 0:
            raise ArgumentError("R is singular")
    else:
        m = np.array([[to_float(c) for c in row] for row in R])
        if np.linalg.cond(m) > 1e14:
            raise ArgumentError("R is singular to working precision")


def spectral_radius(a: np.ndarray, tol: float = 1e-12, max_squarings: int = 64) -> float:
    """``lim ||A^n||^(1/n)`` by repeated normalized squaring."""
    a = np.asarray(a, dtype=float)
    nrm = np.linalg.norm(a, 2)
    if nrm == 0:
        return 0.0
    b = a / nrm
    log_scale = math.log(nrm)
    est_prev = nrm
    power = 1
    for _ in range(max_squarings):
        b = b @ b
        nb = np.linalg.norm(b, 2)
        power *= 2
        if nb == 0:
            return 0.0
        log_scale = 2 * log_scale + math.log(nb)
        b = b / nb
        est = math.exp(log_scale / power)
        if abs(est - est_prev) <= tol * est:
            return est
        est_prev = est
    return est_prev


def is_expansive(R) -> bool:
    """True iff every eigenvalue of ``R`` lies strictly outside the unit disc
    with margin: spectral radius of ``R^{-1}`` below ``1 - 1e-9``.

    Raises :class:`IndeterminateError` when that radius sits in
    ``[1 - 1e-9, 1 - 1e-12)``, where floating point cannot tell a weakly
    expansive map from the threshold.
    """
    rows = tuple(tuple(as_vector(r)) for r in (R if not np.isscalar(R) and not is_exact(R) else [[R]]))
    if len(rows) == 0 or any(len(r) != len(rows) for r in rows):
        raise ArgumentError("R must be square")
    _check_invertible(rows)
    if all(is_exact(c) for row in rows for c in row):
        inv = np.array([[to_float(c) for c in row] for row in exact_inverse(rows)])
    else:
        inv = np.linalg.inv(np.array([[to_float(c) for c in row] for row in rows]))
    rho = spectral_radius(inv)
    if rho < 1 - 1e-9:
        return True
    if rho >= 1 - 1e-12:
        return False
    raise IndeterminateError(f"spectral radius of R^-1 is {rho!r}, within 1e-9 of 1")


# annihilators ----------------------------------------------------------------

def _generator_witnesses(spectrum):
    """Yield ``(value, witness)`` pairs whose integrality decides membership."""
    gens, offs = spectrum.generators_and_offsets()
    for o in offs:
        yield o, o
    base = offs[0] if offs else None
    for g in gens:
        yield g, _vec_add(base, g)


def _check_exact_inputs(t, spectrum, allow_surds: bool):
    t = tuple(as_vector(t, spectrum.dim))
    values = list(itertools.chain(t, spectrum.data_values()))
    if any(not is_exact(v) for v in values):
        raise ExactnessError("annihilator tests need exact data")
    if not allow_surds and any(isinstance(v, Surd) for v in values):
        raise ExactnessError("tagged-irrational data; use the tolerance-based variant")
    return tuple(to_exact(c) for c in t)


def annihilator_witness(t, spectrum, *, allow_surds: bool = False):
    """First point ``lam`` of the spectrum with ``t . lam`` not an integer, or None."""
    t = _check_exact_inputs(t, spectrum, allow_surds)
    offs = spectrum.generators_and_offsets()[1]
    for v, w in _generator_witnesses(spectrum):
        if not is_integer(dot(t, v)):
            if v is not w and any(not is_integer(dot(t, o)) for o in offs):
                continue
            return w
    return None


def annihilator_contains(t, spectrum, *, allow_surds: bool = False) -> bool:
    """Exact decision of ``t . lam in Z`` for every point ``lam``."""
    return annihilator_witness(t, spectrum, allow_surds=allow_surds) is None


def rational_annihilator_witness(t, spectrum):
    """First point ``lam`` with ``t . lam`` irrational, or None."""
    t = _check_exact_inputs(t, spectrum, allow_surds=True)
    for v, w in _generator_witnesses(spectrum):
        if isinstance(dot(t, v), Surd):
            return w
    return None


def rational_annihilator_contains(t, spectrum) -> bool:
    return rational_annihilator_witness(t, spectrum) is None


# affine images ---------------------------------------------------------------

def _signed_permutation(m) -> list[int]:
    perm = []
    for row in m:
        nz = [j for j, c in enumerate(row) if c != 0]
        if len(nz) != 1:
            raise UnsupportedGeometryError(
                "domain-side maps must be scaled signed permutations")
        perm.append(nz[0])
    if sorted(perm) != list(range(len(m))):
        raise UnsupportedGeometryError("domain-side map is not a permutation pattern")
    return perm


def _map_domain(linear, shifts, domain: Domain):
    if not all(is_exact(c) for row in linear for c in row):
        raise ExactnessError("domain-side maps need an exact matrix")
    perm = _signed_permutation(linear)
    lo, edges = [], []
    for i, j in enumerate(perm):
        f = linear[i][j]
        a = f * domain.corner[j]
        b = f * (domain.corner[j] + domain.edges[j])
        lo.append(min(a, b))
        edges.append(abs(b - a))
    translates = [exact_matvec(linear, _vec_add(t, s)) for s in shifts for t in domain.translates]
    cells = []
    hi0 = _vec_add(tuple(lo), tuple(edges))
    for t in translates:
        cells.append((_vec_add(tuple(lo), t), _vec_add(hi0, t)))
    if len(set(translates)) != len(translates):
        return None, Overlap.OVERLAP
    cls = classify_cells(cells)
    if cls is Overlap.OVERLAP:
        return None, cls
    return Domain(tuple(lo), tuple(edges), tuple(translates)), cls


def _map_points(linear, shifts, points):
    exact = all(is_exact(c) for row in linear for c in row)
    out = []
    for s in shifts:
        for p in points:
            q = _vec_add(p, s)
            if exact and all(is_exact(c) for c in q):
                out.append(exact_matvec(linear, q))
            else:
                lin = np.array([[to_float(c) for c in row] for row in linear])
                out.append(tuple(float(x) for x in lin @ np.array([to_float(c) for c in q])))
    return out


def apply_affine(system: AffineSystem, obj, *, return_overlap: bool = False):
    """Union of the images of a domain or spectrum under every map of the system.

    Domains map to domains (raising :class:`HypothesisError` if images overlap
    in positive volume); spectra map to spectra.  With ``return_overlap`` the
    overlap classification of the union is returned alongside.
    """
    if obj.dim != system.dim:
        raise ArgumentError("dimension mismatch between system and set")
    linear = system.linear_part()
    if isinstance(linear, np.ndarray):
        linear = tuple(tuple(float(c) for c in row) for row in linear)
    shifts = system.translations
    if isinstance(obj, Domain):
        image, cls = _map_domain(linear, shifts, obj)
        if image is None:
            raise HypothesisError("affine images of the domain overlap in positive volume")
    elif isinstance(obj, LatticeSpectrum):
        if not all(is_exact(c) for row in linear for c in row):
            raise ExactnessError("lattice images need an exact matrix")
        gens = tuple(exact_matvec(linear, g) for g in obj.generators)
        raw = [exact_matvec(linear, _vec_add(o, s)) for s in shifts for o in obj.offsets]
        probe = LatticeSpectrum(gens)
        kept: list = []
        for p in raw:
            if not any(probe._in_lattice(_vec_sub(p, k)) for k in kept):
                kept.append(p)
        cls = Overlap.DISJOINT if len(kept) == len(raw) else Overlap.OVERLAP
        image = LatticeSpectrum(gens, tuple(kept))
    elif isinstance(obj, (FiniteSpectrum, IfsSpectrum)):
        pts = obj.expand().points if isinstance(obj, IfsSpectrum) else obj.points
        raw = _map_points(linear, shifts, pts)
        image = FiniteSpectrum(tuple(raw))
        cls = Overlap.DISJOINT if len(image.points) == len(raw) else Overlap.OVERLAP
    else:
        raise ArgumentError(f"cannot apply an affine system to {type(obj).__name__}")
    return (image, cls) if return_overlap else image
