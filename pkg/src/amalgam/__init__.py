"""Frequency-uniform band decompositions, Wiener amalgam norms, and the
trace/extension operator pair on periodic sampled fields, with a
property-verification harness."""

from .windows import (
    BumpProfile,
    WindowFamily,
    eval_eta,
    eval_window,
    window_values,
    eval_mixed_window,
    window_support,
)
from .fields import (
    GridSpec,
    SampledField,
    Spectrum,
    forward_transform,
    inverse_transform,
    lp_norm,
    slice_last_axis,
    tone,
    read_amf,
    write_amf,
)
from .bands import (
    BandComponent,
    BandSet,
    box_op,
    decompose,
    reconstruct,
    mixed_box_op,
    maximal_op,
    shift_maximal,
    band_leakage,
    export_band_set,
    load_band_set,
)
from .norms import (
    NormSpec,
    WeightedSequence,
    bracket,
    wiener_norm,
    aniso_norm,
    aniso2_norm,
    maximal_wiener_norm,
    sequence_mixed_norm,
    evaluate_norm,
)
from .traceops import (
    ExtensionProfile,
    trace,
    extend,
    extension_weight,
    trace_band_identity_residual,
    band_margin,
    pointwise_maximal_bound_margin,
)
from .embeddings import (
    EmbeddingCase,
    embedding_bound,
    check_embedding,
    random_sequences,
)
from .corpus import ExperimentConfig, generate_corpus, make_corpus
from .checks import (
    check_trace_inequality,
    check_retraction,
    check_maximal_equivalence,
    check_triebel_maximal,
    regularity_scan,
)
from .report import ReportRow, write_report, write_summary
from .suites import run_suites

__version__ = "0.1.0"
