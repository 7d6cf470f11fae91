"""Operator-algebraic Poisson geometry on finite-dimensional W*-algebras.

The package realizes, in exact matrix arithmetic, the geometry that a direct
sum of matrix algebras carries through its normal functionals: groupoids of
partial isometries and of partially invertible elements, the polar groupoid
of functionals with its coadjoint picture, chart atlases on projection
Grassmannians and isometry bundles, the canonical connection and orbit
two-form with their degeneracy analysis, Lie-Poisson brackets on the predual
in duality with a commuting pair of momentum maps, and modular flows on the
standard form.  Every structural identity ships with a seeded numerical
property suite (:mod:`wstargeo.suites`) and a command line (``wstargeo``).
"""
from __future__ import annotations

from .algebra import (
    BlockAlgebra,
    NormalFunctional,
    StabilizerData,
    centralizer_basis,
    coadjoint_apply,
    conditional_expectation,
    functional_polar,
    functional_support,
    functional_supports,
    modular_automorphism,
    mvn_equivalent,
    mvn_witness,
    orbit_equivalent,
    orbit_invariant,
    stabilizer_lie_algebra,
    unitary_equivalent,
    unitary_witness,
)
from .charts import (
    Gamma0,
    chart_G,
    chart_G_inv,
    chart_Theta,
    chart_Theta_inv,
    chart_domain_member,
    connection_alpha,
    curvature_Omega,
    dGamma0,
    fd_surface_dGamma0,
    hv_split,
    jay_corner,
    phi_p,
    phi_p_inv,
    sigma_p,
    theta_P0,
    theta_P0_inv,
    transition_L,
    u_p,
)
from .errors import (
    AlgebraMismatch,
    DegenerateBase,
    DomainError,
    InvalidArrow,
    InvalidFamily,
    InvalidTangent,
    InvalidTrials,
    NotComposable,
    NotFaithful,
    NotHermitian,
    NotInDomain,
    NotInOverlap,
    NotPartiallyInvertible,
    NotPositive,
    NotUnitVector,
    ParseError,
    UnknownSuite,
    UsageError,
)
from .groupoids import (
    GROUPOIDS,
    AxiomReport,
    CoadjointArrow,
    axiom_check,
    chain_law_residuals,
    coadjoint_compose,
    coadjoint_inverse,
    coadjoint_source,
    coadjoint_target,
    coadjoint_unit,
    coadjoint_validate,
    composable_chain,
    g_compose,
    g_inverse,
    g_source,
    g_target,
    g_unit,
    gauge_iso_Psi,
    iso_Xi,
    iso_Xi_inv,
    jay,
    pi0,
    pi_compose,
    pi_inverse,
    pi_source,
    pi_target,
    pi_unit,
    predual_compose,
    predual_inverse,
    predual_source,
    predual_target,
    predual_unit,
    psi_intertwining_residual,
    xi_intertwining_residual,
)
from .linalg import (
    DEFAULT_TOL,
    GUARD_FACTOR,
    ToleranceProfile,
    frobenius,
    hermitian_eig,
    hs_inner,
    left_support,
    matrix_imaginary_power,
    matrix_sqrt,
    partial_inverse,
    polar_decompose,
    restricted_power,
    right_support,
    support_projection,
)
from .poisson import (
    AmplitudeReport,
    ComposableFamily,
    DegeneracyReport,
    FubiniStudyReport,
    HilbertObservable,
    KKSReport,
    Observable,
    calibrate_kappa,
    canonical_bracket,
    commutant_bracket_check,
    degeneracy_kernel_check,
    exactness_residual,
    feynman_amplitude,
    field_duality_residual,
    field_morphism_residual,
    fubini_study_compare,
    hamiltonian_field,
    jacobi_residual,
    kks_check,
    leibniz_residual,
    linear_closure_residual,
    lp_bracket,
    multiplicativity_residual,
    orbit_drift,
    orbit_form,
    orbit_form_invariance_residual,
    pair_groupoid_fs_residual,
    poisson_map_residual,
    sample_family,
    sample_family_pair,
    vertical_form_residual,
)
from .standard import (
    DualPairReport,
    FlowReport,
    ModularData,
    beta_action,
    canonical_implementation,
    cone_member,
    conjugation_J,
    dual_pair_orthogonality_check,
    expectation_E,
    expectation_Eprime,
    fiber_kernel_E,
    fiber_kernel_Eprime,
    fiber_kernel_dimension,
    flow_automorphism_check,
    iso_Phi,
    iso_Phi_inv,
    j_split,
    modular_Delta,
    momentum_mu,
    momentum_mu_prime,
    phi_intertwining_residual,
    std_inverse,
    std_mul,
    std_source,
    std_target,
    std_unit,
    symplectic_omega,
    theta_action,
    tomita_S,
    transport_witness,
)
from .suites import SUITE_NAMES, SuiteResult, run_suite, suite_rows

__version__ = "0.1.0"

__all__ = [
    "AlgebraMismatch",
    "AmplitudeReport",
    "AxiomReport",
    "BlockAlgebra",
    "CoadjointArrow",
    "ComposableFamily",
    "DEFAULT_TOL",
    "DegeneracyReport",
    "DegenerateBase",
    "DomainError",
    "DualPairReport",
    "FlowReport",
    "FubiniStudyReport",
    "GROUPOIDS",
    "GUARD_FACTOR",
    "Gamma0",
    "HilbertObservable",
    "InvalidArrow",
    "InvalidFamily",
    "InvalidTangent",
    "InvalidTrials",
    "KKSReport",
    "ModularData",
    "NormalFunctional",
    "NotComposable",
    "NotFaithful",
    "NotHermitian",
    "NotInDomain",
    "NotInOverlap",
    "NotPartiallyInvertible",
    "NotPositive",
    "NotUnitVector",
    "Observable",
    "ParseError",
    "SUITE_NAMES",
    "StabilizerData",
    "SuiteResult",
    "ToleranceProfile",
    "UnknownSuite",
    "UsageError",
    "axiom_check",
    "beta_action",
    "calibrate_kappa",
    "canonical_bracket",
    "canonical_implementation",
    "centralizer_basis",
    "chain_law_residuals",
    "chart_G",
    "chart_G_inv",
    "chart_Theta",
    "chart_Theta_inv",
    "chart_domain_member",
    "coadjoint_apply",
    "coadjoint_compose",
    "coadjoint_inverse",
    "coadjoint_source",
    "coadjoint_target",
    "coadjoint_unit",
    "coadjoint_validate",
    "commutant_bracket_check",
    "composable_chain",
    "conditional_expectation",
    "cone_member",
    "conjugation_J",
    "connection_alpha",
    "curvature_Omega",
    "dGamma0",
    "degeneracy_kernel_check",
    "dual_pair_orthogonality_check",
    "exactness_residual",
    "expectation_E",
    "expectation_Eprime",
    "fd_surface_dGamma0",
    "feynman_amplitude",
    "fiber_kernel_E",
    "fiber_kernel_Eprime",
    "fiber_kernel_dimension",
    "field_duality_residual",
    "field_morphism_residual",
    "flow_automorphism_check",
    "frobenius",
    "fubini_study_compare",
    "functional_polar",
    "functional_support",
    "functional_supports",
    "g_compose",
    "g_inverse",
    "g_source",
    "g_target",
    "g_unit",
    "gauge_iso_Psi",
    "hamiltonian_field",
    "hermitian_eig",
    "hs_inner",
    "hv_split",
    "iso_Phi",
    "iso_Phi_inv",
    "iso_Xi",
    "iso_Xi_inv",
    "j_split",
    "jacobi_residual",
    "jay",
    "jay_corner",
    "kks_check",
    "left_support",
    "leibniz_residual",
    "linear_closure_residual",
    "lp_bracket",
    "matrix_imaginary_power",
    "matrix_sqrt",
    "modular_Delta",
    "modular_automorphism",
    "momentum_mu",
    "momentum_mu_prime",
    "multiplicativity_residual",
    "mvn_equivalent",
    "mvn_witness",
    "orbit_drift",
    "orbit_equivalent",
    "orbit_form",
    "orbit_form_invariance_residual",
    "orbit_invariant",
    "pair_groupoid_fs_residual",
    "partial_inverse",
    "phi_intertwining_residual",
    "phi_p",
    "phi_p_inv",
    "pi0",
    "pi_compose",
    "pi_inverse",
    "pi_source",
    "pi_target",
    "pi_unit",
    "poisson_map_residual",
    "polar_decompose",
    "predual_compose",
    "predual_inverse",
    "predual_source",
    "predual_target",
    "predual_unit",
    "psi_intertwining_residual",
    "restricted_power",
    "right_support",
    "run_suite",
    "sample_family",
    "sample_family_pair",
    "sigma_p",
    "stabilizer_lie_algebra",
    "std_inverse",
    "std_mul",
    "std_source",
    "std_target",
    "std_unit",
    "suite_rows",
    "support_projection",
    "symplectic_omega",
    "theta_P0",
    "theta_P0_inv",
    "theta_action",
    "tomita_S",
    "transition_L",
    "transport_witness",
    "u_p",
    "unitary_equivalent",
    "unitary_witness",
    "vertical_form_residual",
    "xi_intertwining_residual",
]
