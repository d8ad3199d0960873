"""Bit-wise demodulation thresholds and error rates for M-PAM labelings."""

__version__ = "0.1.0"

from .ber import (
    ber_labeling,
    ber_labeling_abd_by_patterns,
    pber,
    pber_abd,
    pber_bd_scan,
    pber_closed_form,
    pber_curve,
    pber_from_regions,
)
from .constellation import Constellation, Snr, make_constellation, q_function, snr_from_db, snr_from_linear
from .estimator import BitwiseDemodulator, PamModulator
from .exceptions import *  # noqa: F401,F403
from .labelings import (
    Labeling,
    builtin_labeling,
    builtin_labelings,
    count_distinct_labelings,
    labeling_from_columns,
)
from .llr import llr_exact, llr_maxlog
from .patterns import (
    Pattern,
    PatternClass,
    SymType,
    abd_weights,
    class_counts,
    class_of,
    classify_symmetry,
    enumerate_classes,
    pattern_from_index,
)
from .simulation import SimConfig, SimResult, run_ber_sim, run_pber_sim
from .thresholds import (
    ThresholdEntry,
    ThresholdSet,
    abd_thresholds,
    bd_thresholds,
    merge_snr_db,
    track_bd_thresholds,
)
