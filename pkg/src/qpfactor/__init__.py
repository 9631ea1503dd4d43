"""qpfactor: quasiperiodic factorization of sampled signals.

Factor a signal u into U(phase) where the phase lives on a circle, an
interval, or a point, construct the phase from the topology of a delay
embedding, and compare candidate phases for refinement and equivalence.
"""

from .circular import (
    PhaseAssignment,
    PhaseGauge,
    assign_phase,
    circular_distance,
    harmonic_smooth,
    lift_to_integers,
    load_phase_csv,
    save_phase_csv,
    winding,
    wrap_unit,
)
from .embedding import (
    OffsetSet,
    PointCloud,
    auto_offsets,
    delay_embed,
    derivative_embed,
    dominant_fft_period,
    maxmin_landmarks,
    takens_dimension,
)
from .errors import (
    CoverageError,
    EmptyEmbeddingError,
    FormatError,
    InvalidArgumentError,
    LiftFailureError,
    NotPeriodicError,
    QpfactorError,
    SignalIOError,
)
from .factorize import (
    DelayEmbedding,
    Factorization,
    InjectivityReport,
    QuasiperiodicFactorizer,
    UModel,
    build_U,
    classify,
    estimate_period,
    factorize_signal,
    injectivity_windows,
    residual,
)
from .persistence import (
    Bar,
    Barcode,
    Filtration,
    compute_persistence,
    dominant_h1,
    ranked_h1,
    rips_filtration,
    save_barcode_csv,
    save_cocycle_csv,
)
from .signal import (
    SampledSignal,
    codomain_representation,
    gen_arctan_circle,
    gen_chirp_recip,
    gen_constant,
    gen_modulated_periodic,
    load_signal,
    modulated_waveform,
    save_signal,
)
from .universality import (
    QuotientPartition,
    equivalent,
    join,
    refines,
)

__version__ = "0.1.0"

__all__ = [
    "Bar",
    "Barcode",
    "CoverageError",
    "DelayEmbedding",
    "EmptyEmbeddingError",
    "Factorization",
    "Filtration",
    "FormatError",
    "InjectivityReport",
    "InvalidArgumentError",
    "LiftFailureError",
    "NotPeriodicError",
    "OffsetSet",
    "PhaseAssignment",
    "PhaseGauge",
    "PointCloud",
    "QpfactorError",
    "QuasiperiodicFactorizer",
    "QuotientPartition",
    "SampledSignal",
    "SignalIOError",
    "UModel",
    "assign_phase",
    "auto_offsets",
    "build_U",
    "circular_distance",
    "classify",
    "codomain_representation",
    "compute_persistence",
    "delay_embed",
    "derivative_embed",
    "dominant_fft_period",
    "dominant_h1",
    "equivalent",
    "estimate_period",
    "factorize_signal",
    "gen_arctan_circle",
    "gen_chirp_recip",
    "gen_constant",
    "gen_modulated_periodic",
    "harmonic_smooth",
    "injectivity_windows",
    "join",
    "lift_to_integers",
    "load_phase_csv",
    "load_signal",
    "maxmin_landmarks",
    "modulated_waveform",
    "ranked_h1",
    "refines",
    "residual",
    "rips_filtration",
    "save_barcode_csv",
    "save_cocycle_csv",
    "save_phase_csv",
    "save_signal",
    "takens_dimension",
    "winding",
    "wrap_unit",
]
