"""Physics of two relativistic point interactions on the line."""

from .lambda_algebra import (
    Arrangement,
    LambdaParams,
    Parity,
    PhysicalStrengths,
    even_partner,
    is_permeable,
    lambda_from_matrix,
    lambda_to_strengths,
    make_arrangement,
    make_even_arrangement,
    make_odd_arrangement,
    odd_partner,
    strengths_to_lambda,
)
from .transfer_core import (
    ComplexEnergy,
    MatrixKind,
    ParityClass,
    ScatteringAmplitudes,
    TransferMatrix2,
    connection_matrix,
    critical_transfer,
    m22_values,
    momentum,
    plane_wave_matrix,
    s_matrix,
    scattering_amplitudes,
    single_point_limit,
    supercritical_transfer,
    transfer_matrix,
    transfer_matrix_at,
)
from .spectra import (
    BoundState,
    SpectrumReport,
    ThresholdCheck,
    check_critical,
    check_supercritical,
    count_bound_states,
    find_bound_states,
)
from .special_cases import (
    CaseKind,
    SpecialCaseId,
    all_cases,
    bound_residual,
    bound_roots,
    expectations,
    instantiate,
    resonance_residual,
)
from .locus import ComplexRegion
from .resonance import (
    BoxBoundary,
    BoxSpectrum,
    LocusCurve,
    ResonancePole,
    box_boundary_for,
    find_resonances,
    impermeable_box_spectrum,
    parse_boundary,
    search_resonances,
    trace_imaginary_locus,
)
from .nonrel_limit import (
    ConsistencyStatus,
    NonRelKind,
    NonRelLambda,
    NonRelReport,
    nonrel_consistency_check,
    nonrel_matching,
    schrodinger_double_delta_bound,
    schrodinger_pair_bound,
)
from .convergence import TrendResult, build_deviation_ladder, fit_deviation_trend

__all__ = [
    "Arrangement",
    "LambdaParams",
    "Parity",
    "PhysicalStrengths",
    "even_partner",
    "is_permeable",
    "lambda_from_matrix",
    "lambda_to_strengths",
    "make_arrangement",
    "make_even_arrangement",
    "make_odd_arrangement",
    "odd_partner",
    "strengths_to_lambda",
    "ComplexEnergy",
    "MatrixKind",
    "ParityClass",
    "ScatteringAmplitudes",
    "TransferMatrix2",
    "connection_matrix",
    "critical_transfer",
    "m22_values",
    "momentum",
    "plane_wave_matrix",
    "s_matrix",
    "scattering_amplitudes",
    "single_point_limit",
    "supercritical_transfer",
    "transfer_matrix",
    "transfer_matrix_at",
    "BoundState",
    "SpectrumReport",
    "ThresholdCheck",
    "check_critical",
    "check_supercritical",
    "count_bound_states",
    "find_bound_states",
    "CaseKind",
    "SpecialCaseId",
    "all_cases",
    "bound_residual",
    "bound_roots",
    "expectations",
    "instantiate",
    "resonance_residual",
    "ComplexRegion",
    "BoxBoundary",
    "BoxSpectrum",
    "LocusCurve",
    "ResonancePole",
    "box_boundary_for",
    "find_resonances",
    "impermeable_box_spectrum",
    "parse_boundary",
    "search_resonances",
    "trace_imaginary_locus",
    "ConsistencyStatus",
    "NonRelKind",
    "NonRelLambda",
    "NonRelReport",
    "nonrel_consistency_check",
    "nonrel_matching",
    "schrodinger_double_delta_bound",
    "schrodinger_pair_bound",
    "TrendResult",
    "build_deviation_ladder",
    "fit_deviation_trend",
]
