"""Spectral pairs and exponential frames for affine fractals.

Exact constructions (tiling by translates, dual affine iteration, two-translate
extensions, reverse construction, 1-D Hadamard classification) with frame
certificates, plus numerical estimators used to cross-check them.
"""

from .certificates import FrameCertificate
from .ellipticity import EllipticityReport, build_report, propagate_constants, q_lambda
from .errors import (
    AffineFramesError,
    ArgumentError,
    ConfigError,
    ExactnessError,
    HypothesisError,
    IndeterminateError,
    NotEllipticError,
    NumericDomainError,
    SpectrumOverlapError,
    UnsupportedGeometryError,
)
from .frames import estimate_bounds, scale_check, scale_pair
from .geometry import (
    AffineSystem,
    Domain,
    FiniteSpectrum,
    IfsSpectrum,
    LatticeSpectrum,
    Overlap,
    annihilator_contains,
    apply_affine,
    is_expansive,
)
from .ifs import (
    chaos_game_sample,
    empirical_transform,
    iterate,
    iterate_to,
    lower_bound_estimate,
    orthogonality_defect,
    spectral_series,
    spectral_sum,
    start,
)
from .kernel import hermitian_eigenvalues, hermitian_eigh
from .reverse import classify_1d, reverse_spectrum, search_L, verify_lattice_classification
from .surd import Surd, sqrt
from .transforms import chi_hat, f_dmu_hat, mu_hat_n, phi_B
from .two_translate import (
    TwoTranslateProblem,
    decide_gsp,
    r_pm,
    r_pm_theta,
    spectral_resolution,
)

__version__ = "0.1.0"
