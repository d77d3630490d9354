"""Unambiguous range of multi-carrier phase ranging with hopped frequencies."""

__version__ = "0.1.0"

from .numtheory import (  # noqa: E402
    CoprimeCountResult,
    MobiusTable,
    coprime_count_exact,
    coprime_count_segments,
    gcd_set,
    mobius_sieve,
    zeta_inverse,
)
from .freqset import (  # noqa: E402
    SPEED_OF_LIGHT,
    FrequencyPlan,
    FrequencySet,
    PlanViolation,
    SpectrumSegment,
    build_lsf,
    lsf_equal_bandwidth,
    random_layout,
    sample_rsf,
    unambiguous_range,
)
from .estimator import (  # noqa: E402
    EstimateResult,
    Lobe,
    PhaseVector,
    classify_unambiguous,
    discrepancy,
    estimate_range,
    find_lobes,
    rsf_window,
    synth_phases,
)
