"""
Trading quality, latency and stability against each other
==========================================================

Both knobs reduce flicker by different means: bias keeps the decoder on
its earlier output, masking simply delays the unstable tail.  Sweeping a
small grid over the bundled six-document corpus shows the usual picture:
masking buys stability with latency, bias buys it with quality, and the
Pareto subset collects the settings worth considering.
"""

from pathlib import Path

from retrans import load_reference_document, load_transcript, pareto_subset, sweep
from retrans.decoder import load_table_model

toy = Path(__file__).resolve().parents[1] / "data" / "toy"
model = load_table_model(toy / "model.tsv")
documents = []
for path in sorted((toy / "transcripts").glob("*.jsonl")):
    documents.append(
        (
            path.name,
            load_transcript(path),
            load_reference_document(toy / "references" / path.name),
        )
    )

rows = sweep(model, documents, bias_weights=[0.0, 0.5], mask_lengths=[0, 2, 5], beam_size=2)

print(f"{'beta':>5} {'k':>3} {'bleu':>7} {'lag':>7} {'ne':>7}")
for row in rows:
    print(
        f"{row.bias_weight:>5} {row.mask_length:>3} {row.bleu:>7.2f} "
        f"{row.translation_lag:>7.3f} {row.normalized_erasure:>7.4f}"
    )

front = pareto_subset(rows, erasure_ceiling=0.05)
print()
print("Pareto subset under normalized erasure <= 0.05:")
for row in front:
    print(f"  beta={row.bias_weight} k={row.mask_length}: "
          f"bleu {row.bleu:.2f} at {row.translation_lag:.3f}s lag")
