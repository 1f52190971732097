"""Numerical laboratory for weakly chaotic interval-map dynamics.

The package measures how fast nearby orbits separate (orbit tubes),
how much information an orbit carries (compression estimators), and how
often an intermittent orbit revisits its chaotic region (renewal
statistics), then classifies the growth of any of these against n.
"""

from .asymptotics import (
    MODEL_ORDER,
    OrderClass,
    SeriesSample,
    compare_orders,
    fit_order,
    make_order,
    make_series,
)
from .codes import (
    decode_nat,
    dyadic_distance,
    dyadic_value,
    encode_nat,
    encoded_nat_length,
    nat_to_string,
    pair_encode,
    self_delim_decode,
    self_delim_encode,
    string_to_nat,
)
from .complexity import (
    ESTIMATORS,
    ComplexityCurve,
    LZDictionary,
    cover_index_sequence,
    lz_compress,
    orbit_information_curve,
    point_information_model,
)
from .errors import (
    AlphabetError,
    ConfigError,
    CoverError,
    DescentError,
    DomainError,
    EpsilonError,
    EstimatorError,
    FixedPointError,
    InsufficientDataError,
    NumericsError,
    StreamError,
    WeakChaosError,
)
from .maps import (
    MapSpec,
    Orbit,
    PLMannevilleMap,
    binary_orbit_extension,
    branch_indices,
    custom_map,
    doubling_map,
    identity_map,
    iterate,
    parse_map,
    pl_manneville_map,
    rotation_map,
    smooth_manneville_map,
    step,
)
from .recurrence import (
    NnSamples,
    RenewalModel,
    excursion_log_mean,
    ks_two_sample,
    landing_block,
    landing_sequence,
    landing_sequences,
    sample_landing,
    scaled_distribution_check,
    simulate_Nn,
    visit_counts,
)
from .rng import CounterRNG, normal_block, raw_u64, stream_key, uniform
from .sensitivity import (
    TubeResult,
    sensitivity_curve,
    tube_brute_force,
    tube_inner,
    tube_outer,
)
from .symbolic import (
    CodecOutput,
    EpsilonCover,
    RecurrenceRecord,
    SymbolSequence,
    ceil_log2,
    codec_length_from_landings,
    containment_threshold,
    decode_orbit,
    encode_orbit,
    make_cover,
    reconstruct,
    symbolize,
    to_recurrence,
)

__version__ = "0.1.0"
