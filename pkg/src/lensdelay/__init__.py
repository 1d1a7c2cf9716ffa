"""lensdelay: photon-starved gravitational-lensing time-delay estimation.

Spectral photon models of microlensed light, the sample-optimal
frequency-basis delay estimators and their undersampled variant,
multi-flare combination, point-lens geometry, astrophysical yield and
robustness calculators, and a seeded Monte Carlo harness.
"""

from .array_cal import ArraySpec, estimate_pairwise_delays, sample_array_photons
from .dust import (
    DustModelConfig,
    coherence_offdiag,
    layer_survival,
    loss_rate,
    simulate_tree,
    simulate_tree_batch,
    variance_bound,
)
from .estimators import (
    CandidateGrid,
    EstimationResult,
    FlareBatch,
    build_grid,
    estimate_alg1,
    estimate_multiflare,
    multiflare_scores,
    mz_scan_estimate,
    required_flares,
    required_photons,
    score_alg1,
)
from .geometry import (
    LensGeometry,
    SourceGeometry,
    crossing_time,
    delay_factor,
    einstein_radius,
    finite_source_lambda_min,
    image_positions,
    magnification,
    time_delay,
)
from .rng import RngStream, stream, substreams
from .signal_model import (
    LensSignalSpec,
    PhotonSample,
    PhotonSet,
    WavePacketSpec,
    channel_cdf,
    channel_pdf,
    gamma_factor,
    sample_photon,
    sample_photons,
    score_expectation,
)
from .theory import CapacityGrid, holevo_capacity_numeric, suppression_factor
from .undersampling import (
    AliasedSample,
    AliasedSet,
    UndersampleSpec,
    alias_frequency,
    aliased_pdf,
    estimate_alg2,
    sample_aliased,
    sample_aliased_batch,
)
from .yields import (
    ExtinctionCurve,
    FlareModel,
    TelescopeSpec,
    default_extinction,
    flare_rate,
    ism_phase_sigma,
    passband_lambda_min,
    photons_per_flare,
    telescope_examples,
)

__version__ = "0.1.0"
