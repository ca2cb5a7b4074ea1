"""matwalk: a desk-scale laboratory for products of i.i.d. random matrices.

Walk products are evaluated through renormalized frames and vectors (never
multiplied out), stationary measures are independent-trajectory particle
clouds, and every experiment is a deterministic function of its parameters
and a master seed.
"""

from .errors import (
    ConfigError,
    DegenerateGapError,
    DimensionError,
    MatwalkError,
    NotUnimodularError,
    SingularEvaluationError,
    SingularMatrixError,
)
from .linalg import (
    CartanTriple,
    DualProjectivePoint,
    ProjectivePoint,
    act,
    cartan,
    check_group_element,
    delta,
    density_points,
    exterior_power,
    exterior_square,
    first_gap,
    operator_norm,
    proj_distance,
    wedge_norm,
)
from .measures import (
    GeneratorMeasure,
    MomentReport,
    WalkSampler,
    WordSample,
    big_n,
    check_mu,
    free_semigroup_pair,
    moment,
    proximality_certificate,
    rotating_diagonal_measure,
    sample_word,
    scalar_exponential_pair,
    shear_pair_sl3,
)
from .cocycles import (
    FlagPoint,
    cartan_partial_sums,
    cartan_projection,
    drift,
    ensure_unimodular,
    flag_apply,
    iwasawa_cocycle,
    jordan_projection,
    multinorm_cocycle,
    norm_cocycle,
    sup_norm,
)
from .stationary import (
    EmpiricalMeasure,
    PsiFunction,
    ResidualReport,
    advance_cloud,
    cohomological_residual,
    estimate_dual_stationary,
    estimate_stationary,
    log_regularity_integral,
    markov_apply,
    principal_direction,
    psi_eval,
    push_cloud,
    start_cloud,
)
from .martingales import (
    AzumaReport,
    BrownReport,
    DifferenceStream,
    TriangularArraySpec,
    WeightedSumReport,
    azuma_bound,
    azuma_check,
    baum_katz_sums,
    brown_triangular_check,
    checkpoint_sums,
)
from .limits import (
    CltReport,
    DeviationCurve,
    LilReport,
    LyapunovEstimate,
    VarianceEstimate,
    clt_experiment,
    large_deviation_curve,
    lil_diagnostic,
    lyapunov_pair,
    lyapunov_top,
    multidim_clt_cartan,
    variance_estimate,
    variance_via_corrector,
    wedge_square_measure,
)
from .stats import (
    CovarianceFit,
    Ecdf,
    covariance_fit,
    folded_gaussian_cdf,
    gaussian_cdf,
    ks_statistic,
    ks_two_sample,
)
from .scenarios import ScenarioConfig, bundled_scenarios, load_config, validate_config
from .runner import run_scenario
from .walks import set_thread_count

__version__ = "0.1.0"
