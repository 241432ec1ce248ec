"""Replaying a timed transcript end to end.

A document's transcript is fed to the translator token by token, at the
times the words were spoken.  Completed sentences are translated once
more with their full source in view and then frozen; only the last,
still-open sentence keeps being rewritten.  The resulting event log is
scored on all three axes against the reference document.
"""

from pathlib import Path

from retrans import (
    DecoderConfig,
    evaluate_all,
    load_reference_document,
    load_table_model,
    load_transcript,
    run_simulation,
)

toy = Path(__file__).resolve().parents[1] / "data" / "toy"
model = load_table_model(toy / "model.tsv")
transcript = load_transcript(toy / "transcripts" / "news.jsonl")
reference = load_reference_document(toy / "references" / "news.jsonl")

log = run_simulation(transcript, model, DecoderConfig(beam_size=2))
print(f"{len(transcript)} source tokens became {len(log)} display events:")
for event in log:
    print(f"  t={event.time:<5} {event.output_text!r}")

report = evaluate_all(log, reference)
print()
print(f"BLEU {report.bleu:.2f}   lag {report.translation_lag:.3f}s   "
      f"normalized erasure {report.normalized_erasure:.4f}")
print("erased tokens per event:", report.per_event_erasure)
