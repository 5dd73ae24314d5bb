"""Computation and verification toolkit for conformal Hessians on round spheres.

Subpackages by theme:

* :mod:`spherehess.ktypes` — dominant weights, restriction branching, and the
  two-parameter mode families carried by trace-free symmetric tensors.
* :mod:`spherehess.spectrum` — Casimir bookkeeping, the two-term eigenvalue
  recursion on the mode lattice, its product closed form, and the sign
  classification of the resulting quadratic forms.
* :mod:`spherehess.greens` — radial Green's functions of the scalar
  intertwining operators on odd spheres, their exact tail integrals, regular
  parts, and regularized traces.
* :mod:`spherehess.symbols` — leading-symbol quadratic forms of the
  determinant and zeta functionals, exact gamma prefactors, and the extremal
  classification chain.
* :mod:`spherehess.qcurv` — exact rational symbol calculus for the
  linearized curvature operators and the Hessian symbol identity.
* :mod:`spherehess.confgroup` — the Moebius group acting on tensor fields,
  invariant pairings on quadrature grids, and the chart-level conformal
  Killing operator with its covariance checks.
* :mod:`spherehess.cli` — the ``spherehess`` command-line interface.
"""

from __future__ import annotations

__version__ = "1.0.0"

from .errors import (
    Degenerate,
    DomainError,
    FitUnstable,
    InconsistentSystem,
    InvalidStep,
    NotAdjacent,
    ParityError,
    PreconditionViolation,
    QuadratureFailure,
    RankMismatch,
    SphereHessError,
    UnsupportedSigma,
    ZeroCovector,
)
from .exact import ExactConst, gamma_half_integer, rising, sphere_volume
from .ktypes import (
    DominantWeight,
    KType,
    branches,
    bundle_ktypes_bruteforce,
    bundle_weights,
    enumerate_bundle_ktypes,
    enumerate_bundle_ktypes3,
    is_dominant,
)
from .spectrum import (
    Classification,
    HessianKind,
    SpectrumTable,
    StepDirection,
    classify_hessian,
    closed_form_table,
    kappa,
    kappa_inner_product,
    kappa_step,
    recursion_matches_closed_form,
    spectrum_generate,
    spectrum_generate3,
    t0_eigenvalue,
    transition_coeff,
)
from .greens import (
    RadialGreen,
    RegularPartConfig,
    RegularPartResult,
    TauTailIntegral,
    TraceKind,
    chart_radius,
    green_D2,
    green_L,
    green_L2,
    kv_trace_D2,
    kv_trace_L2,
    ode_residual_L,
    ode_residual_L2,
    regular_part,
    spectral_convention_factor,
    spectral_trace_reference,
    tau_tail_exact,
    tau_tail_quadrature,
    trace_from_pipeline,
    trace_sign_expected,
)
from .symbols import (
    ExtremalStatement,
    FormDefiniteness,
    Functional,
    PointData,
    PrefactorMode,
    QuadFormCoeffs,
    bracket_D2,
    bracket_L,
    bracket_definiteness,
    evaluate_form,
    extremal_classification,
    gamma_prefactor,
    gamma_prefactor_exact,
    zeta0_prefactor_richardson,
)
from .qcurv import (
    SymbolValue,
    ahlfors_symbol,
    lin_obstruction_symbol,
    lin_ricci_symbol,
    lin_scalar_symbol,
    lin_schouten_symbol,
    project_tt,
    q_hessian_expected,
    q_hessian_symbol,
)
from .confgroup import (
    ChartMap,
    MoebiusElement,
    RepWeight,
    SphereGrid,
    TensorField,
    act,
    ahlfors_chart,
    check_ahlfors_covariance,
    check_pairing_invariance,
    compose,
    conformal_factor,
    moebius_boost,
    moebius_rotation,
    pairing,
    sphere_conformal_fields,
    sphere_grid,
    u_action,
)

__all__ = [name for name in dir() if not name.startswith("_")]
