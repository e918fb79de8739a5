"""Length spectra, systoles and tiling levels of hyperbolic triangle groups Γ(2, p, q)."""

from .closed_form import (
    LengthValue,
    SpectrumPrefix,
    d1,
    d2,
    l1,
    l2,
    merged_low_levels,
    spectrum_begin,
    systole,
)
from .config import DEFAULT, Tolerances
from .errors import (
    BallTooSmallError,
    ConstructionError,
    DomainError,
    InconsistencyError,
    NonHyperbolicError,
    OrderingError,
    ParameterError,
    PrecisionError,
    TrispectrumError,
)
from .hyperbolic import (
    HPoint,
    Isometry,
    IsometryClass,
    apply,
    canonical_key,
    classify,
    hyp_distance,
    rotation_about,
    translation_length,
)
from .oracle import OracleReport, enumerate_elements, oracle_spectrum, witness_word
from .rigidity import (
    TwoLengths,
    invert_two_lengths,
    isospectral_prefix_equal,
    rigidity_scan,
    systole_collision_scan,
)
from .tiling import (
    PathClass,
    TilingBall,
    big_c,
    build_tiling_ball,
    combinatorial_distance,
    cosh_d_closed,
    cosh_d_general,
    level_bound,
    level_of,
    rho3,
    rho_empirical,
    verify_level3_bound,
)
from .triangle import GeneratorTriple, GroupParams, build_generators, evaluate_word, validate_params

__version__ = "0.1.0"
