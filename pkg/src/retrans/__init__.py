"""Deterministic re-translation over streaming transcripts, and metrics
for what that does to viewers: quality (segmented corpus BLEU), latency
(translation lag) and stability (normalized erasure)."""

from .align import Segmentation, lcp_len, levenshtein, mwer_segment, split_by_boundaries
from .cli import (
    CaptionCue,
    SweepRow,
    ingest_captions,
    load_caption_cues,
    load_sweep_rows,
    main,
    pareto_subset,
    save_sweep_rows,
    sweep,
)
from .decoder import (
    ANY_CONTEXT,
    END_OF_SOURCE,
    EOS_TOKEN,
    DecoderConfig,
    Hypothesis,
    ScoringModel,
    TableModel,
    biased_beam_search,
    load_table_model,
    mask_tail,
)
from .eventlog import (
    Event,
    EventLog,
    TimedToken,
    append_event,
    load_event_log,
    save_event_log,
    tokenize,
)
from .metrics import (
    CorrespondenceMap,
    FinalizationMap,
    MetricsReport,
    ReferenceDocument,
    ReferenceSegment,
    TokenCorrespondence,
    bleu_corpus,
    correspondence,
    erasure,
    evaluate_all,
    evaluate_quality,
    finalization,
    load_reference_document,
    load_report,
    normalized_erasure,
    save_reference_document,
    save_report,
    token_lags,
    translation_lag,
)
from .pipeline import (
    SessionState,
    TimedTranscript,
    load_transcript,
    run_simulation,
    save_transcript,
    split_sentences,
    step,
)

__version__ = "0.1.0"

__all__ = [
    "ANY_CONTEXT",
    "CaptionCue",
    "CorrespondenceMap",
    "DecoderConfig",
    "END_OF_SOURCE",
    "EOS_TOKEN",
    "Event",
    "EventLog",
    "FinalizationMap",
    "Hypothesis",
    "MetricsReport",
    "ReferenceDocument",
    "ReferenceSegment",
    "ScoringModel",
    "Segmentation",
    "SessionState",
    "SweepRow",
    "TableModel",
    "TimedToken",
    "TimedTranscript",
    "TokenCorrespondence",
    "append_event",
    "biased_beam_search",
    "bleu_corpus",
    "correspondence",
    "erasure",
    "evaluate_all",
    "evaluate_quality",
    "finalization",
    "ingest_captions",
    "lcp_len",
    "levenshtein",
    "load_caption_cues",
    "load_event_log",
    "load_reference_document",
    "load_report",
    "load_sweep_rows",
    "load_table_model",
    "load_transcript",
    "main",
    "mask_tail",
    "mwer_segment",
    "normalized_erasure",
    "pareto_subset",
    "run_simulation",
    "save_event_log",
    "save_reference_document",
    "save_report",
    "save_sweep_rows",
    "save_transcript",
    "split_by_boundaries",
    "split_sentences",
    "step",
    "sweep",
    "token_lags",
    "tokenize",
    "translation_lag",
]
