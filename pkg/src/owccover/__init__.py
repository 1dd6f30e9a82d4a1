"""Cover-order analysis, nonnegative space-time block codes and log-normal
fading simulation for intensity-modulated optical MIMO links."""

from .channel import ChannelStats, NoiseModel, sample_channel
from .codes import (
    Codebook,
    cstbc_from_constellation,
    golden_code,
    optimal_linear_code,
    repetition_code,
    strc_code,
    validate_codebook,
    zcc_code,
)
from .constellations import (
    Constellation,
    diophantine_constellation,
    pam_product_constellation,
)
from .cover import (
    CoverReport,
    GramMatrix,
    cover_lengths,
    cover_order,
    cover_order_echelon,
    cover_report,
    coverable_index,
    is_full_cover,
    min_unit_quadratic,
    nonneg_kernel_witness,
)
from .detect import fast_ml_detect, ml_detect
from .diversity import (
    DiversityReport,
    energy_report,
    fit_diversity_from_curve,
    golden_min_metric,
    large_scale_diversity,
    linear_loss_lower_bound,
    pep_bounds,
    small_scale_loss,
)
from .qfunc import q_function
from .simulate import ErrorCurve, semianalytic_error_rate, simulate_error_rate

__version__ = "0.1.0"
