"""Ruled minimal surfaces in pseudo-Euclidean spaces R^n_p.

Exact inner-product geometry for any signature, closed-form curve algebra
with exact jets, minimality verification of ruled immersions f(s,t) =
gamma(s) t + x(s), classification into the minimal families, catalog
generators with causal-character maps, and existence decisions with
constructive witnesses or machine-checked non-existence certificates.
"""

from .basisfn import Atom, ScalarFn
from .catalog import (
    BernsteinReport,
    CausalRegion,
    CausalRegionReport,
    DEG_BAND,
    DetGForm,
    SpanType,
    bernstein_check,
    causal_map,
    degenerate_span_check,
    det_g_closed_form,
    generate,
    pick_signs,
    scale_surface,
)
from .classify import (
    CaseInvariants,
    CaseLabel,
    ClassificationResult,
    CylinderReport,
    CylinderVerdict,
    GenericityReport,
    MuProfile,
    ScalarProfile,
    StructureReport,
    case_invariants,
    cylinder_check,
    genericity_scan,
    identify_family,
    table1_case,
    verify_structure_odes,
)
from .curves import (
    CurveExpr,
    SampledCurve,
    UnitSpeedClass,
    eval_curve,
    fd_derivative,
    is_null_curve,
    reparametrize_unit_speed,
    symbolic_inner,
    uniform_grid,
    unit_speed_check,
)
from .errors import (
    ConventionError,
    DegenerateMetricError,
    DimensionMismatchError,
    EverywhereDegenerateError,
    NonExistenceError,
    NoWitnessError,
    NullDirectionError,
    PreconditionError,
    RuledminError,
    UsageError,
)
from .existence import (
    Certificate,
    CertificateKind,
    CylinderWitness,
    ExistenceResult,
    ProofTrace,
    SearchResult,
    TableRow,
    Verdict,
    admits_cylinder,
    admits_pattern,
    brute_force_cross_check,
    cells_for,
    existence_oracle,
    existence_table,
    find_witness,
    frame_for_signs,
    replay_certificate,
)
from .families import (
    ADMISSIBLE_SIGNS,
    CLI_NAMES,
    TABLE_FAMILIES,
    FamilyId,
    FrameSpec,
    NormPattern,
    SignChoice,
    pattern_of_signs,
    validate_signs,
)
from .metric import (
    CausalCharacter,
    Signature,
    TAU_NULL,
    causal_character,
    gram_matrix,
    inner_product,
    ip_array,
)
from .surface import (
    FirstForm,
    FormBundle,
    GaugeResult,
    H_TOL,
    Jet2,
    MinimalityReport,
    MinimalityVerdict,
    RuledSurface,
    SecondForm,
    SurfaceSweep,
    TAU_DEG,
    c_function,
    c_function_grid,
    first_form,
    form_bundle,
    gauge_normalize,
    immersion_jet,
    is_minimal,
    is_totally_geodesic,
    mean_curvature,
    second_form,
    sweep_grid,
)

__version__ = "0.1.0"
