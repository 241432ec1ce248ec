"""Command-line surface and batch helpers.

Four subcommands cover the full workflow: ``ingest-captions`` turns caption
cues into a timed transcript, ``simulate`` replays a transcript through the
translator and writes the session log, ``evaluate`` scores one session
log against its reference, and ``sweep`` grids over bias weights and mask
lengths, aggregates over a directory of documents, and writes the rows plus
their Pareto-optimal subset as CSV.

Every command exits 0 on success and nonzero with a diagnostic on stderr
for invalid inputs.  Outputs are deterministic: identical inputs produce
byte-identical files.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .align import mwer_segment, split_by_boundaries
from .decoder import DecoderConfig, ScoringModel, load_table_model
from .eventlog import EventLog, TimedToken, load_event_log, save_event_log, tokenize
from .metrics import (
    ReferenceDocument,
    erasure,
    evaluate_all,
    bleu_corpus,
    load_reference_document,
    save_report,
    token_lags,
)
from .pipeline import TimedTranscript, load_transcript, run_simulation, save_transcript

CSV_HEADER = "beta,k,bleu,tl,ne"


# ---------------------------------------------------------------------------
# Caption ingestion


@dataclass(frozen=True, slots=True)
class CaptionCue:
    """One caption: a display window in seconds and its text."""

    start: float
    end: float
    text: str

    def __post_init__(self) -> None:
        if not (math.isfinite(self.start) and math.isfinite(self.end)):
            raise ValueError("cue times must be finite")
        if self.start < 0.0 or self.start >= self.end:
            raise ValueError(f"cue window must satisfy 0 <= start < end, got [{self.start!r}, {self.end!r})")


def load_caption_cues(path: str | Path) -> list[CaptionCue]:
    """Read cues from a 3-column TSV: start seconds, end seconds, text."""
    cues = []
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, 1):
            line = raw.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split("\t", 2)
            if len(parts) != 3:
                raise ValueError(f"{path}: line {lineno}: expected 3 tab-separated columns")
            try:
                start, end = float(parts[0]), float(parts[1])
            except ValueError:
                raise ValueError(f"{path}: line {lineno}: bad cue times") from None
            try:
                cues.append(CaptionCue(start, end, parts[2]))
            except ValueError as exc:
                raise ValueError(f"{path}: line {lineno}: {exc}") from None
    return cues


def ingest_captions(cues: Sequence[CaptionCue]) -> TimedTranscript:
    """Spread each cue's tokens evenly over its display window.

    Token ``m`` of ``n`` starts at ``start + (m / n) * (end - start)``,
    counting from zero, so the first token of a cue is spoken at the cue's
    start.  Cues must be ordered and non-overlapping.
    """
    tokens: list[TimedToken] = []
    previous: CaptionCue | None = None
    for cue in cues:
        if previous is not None and cue.start < previous.end:
            raise ValueError(
                f"cue starting at {cue.start!r} overlaps or precedes the cue ending at {previous.end!r}"
            )
        words = tokenize(cue.text)
        for m, word in enumerate(words):
            tokens.append(TimedToken(word, cue.start + (m / len(words)) * (cue.end - cue.start)))
        previous = cue
    return TimedTranscript(tuple(tokens))


# ---------------------------------------------------------------------------
# Grid sweep


@dataclass(frozen=True, slots=True)
class SweepRow:
    """Corpus-level scores for one (bias weight, mask length) setting."""

    bias_weight: float
    mask_length: int
    bleu: float
    translation_lag: float
    normalized_erasure: float


def sweep(
    model: ScoringModel,
    documents: Sequence[tuple[str, TimedTranscript, ReferenceDocument]],
    bias_weights: Sequence[float],
    mask_lengths: Sequence[int],
    beam_size: int,
    chunk_size: int = 1,
    delay: float = 0.0,
) -> list[SweepRow]:
    """Simulate and evaluate every document under every setting.

    BLEU is computed corpus-wide by pooling all documents' segment pairs;
    lag and erasure are pooled per token, which equals averaging per-document
    scores weighted by their final output token counts.  Documents are
    processed in the given order and rows come out ordered by the grids.
    Any failure aborts the sweep, naming the setting and document.
    """
    if not documents:
        raise ValueError("sweep needs at least one document")
    if not bias_weights or not mask_lengths:
        raise ValueError("sweep needs at least one bias weight and one mask length")
    rows = []
    for bias_weight in bias_weights:
        for mask_length in mask_lengths:
            config = DecoderConfig(
                beam_size=beam_size, bias_weight=bias_weight, mask_length=mask_length
            )
            pooled_pieces: list[list[str]] = []
            pooled_refs: list[list[str]] = []
            pooled_lags: list[float] = []
            erased = 0
            final_tokens = 0
            for name, transcript, reference in documents:
                try:
                    log = run_simulation(transcript, model, config, chunk_size, delay)
                    hyp = tokenize(log.events[-1].output_text) if log.events else []
                    refs = reference.reference_token_segments()
                    pooled_pieces.extend(split_by_boundaries(hyp, mwer_segment(hyp, refs).boundaries))
                    pooled_refs.extend(refs)
                    pooled_lags.extend(token_lags(log, reference))
                    erased += sum(erasure(log))
                    final_tokens += len(hyp)
                except ValueError as exc:
                    raise ValueError(
                        f"sweep failed at beta={bias_weight!r} k={mask_length} document={name}: {exc}"
                    ) from None
            rows.append(
                SweepRow(
                    bias_weight,
                    mask_length,
                    bleu_corpus(pooled_pieces, pooled_refs),
                    math.fsum(pooled_lags) / len(pooled_lags),
                    erased / final_tokens,
                )
            )
    return rows


def pareto_subset(rows: Sequence[SweepRow], erasure_ceiling: float | None = None) -> list[SweepRow]:
    """Rows not dominated in (BLEU up, lag down), among those whose
    normalized erasure stays within ``erasure_ceiling`` (no ceiling: all
    rows are eligible).  Input order is preserved; rows with identical BLEU
    and lag do not dominate each other."""
    eligible = [
        row
        for row in rows
        if erasure_ceiling is None or row.normalized_erasure <= erasure_ceiling
    ]
    front = []
    for row in eligible:
        dominated = any(
            other.bleu >= row.bleu
            and other.translation_lag <= row.translation_lag
            and (other.bleu > row.bleu or other.translation_lag < row.translation_lag)
            for other in eligible
        )
        if not dominated:
            front.append(row)
    return front


def save_sweep_rows(rows: Sequence[SweepRow], path: str | Path) -> None:
    """Write rows as CSV with the header ``beta,k,bleu,tl,ne``.  Floats are
    written in shortest round-trip form, so reading the file back yields
    the exact same values."""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(CSV_HEADER + "\n")
        for row in rows:
            handle.write(
                f"{row.bias_weight!r},{row.mask_length},{row.bleu!r},"
                f"{row.translation_lag!r},{row.normalized_erasure!r}\n"
            )


def load_sweep_rows(path: str | Path) -> list[SweepRow]:
    with open(path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file, expected header {CSV_HEADER!r}") from None
        if header != CSV_HEADER.split(","):
            raise ValueError(f"{path}: expected header {CSV_HEADER!r}")
        rows = []
        for lineno, record in enumerate(reader, 2):
            if not record:
                continue
            if len(record) != 5:
                raise ValueError(f"{path}: line {lineno}: expected 5 columns")
            try:
                rows.append(
                    SweepRow(
                        float(record[0]),
                        int(record[1]),
                        float(record[2]),
                        float(record[3]),
                        float(record[4]),
                    )
                )
            except ValueError:
                raise ValueError(f"{path}: line {lineno}: bad numeric field") from None
    return rows


def _pareto_path(out: Path) -> Path:
    return out.with_suffix(".pareto.csv")


# ---------------------------------------------------------------------------
# Command surface


def _parse_grid_floats(text: str) -> list[float]:
    values = [float(part) for part in text.split(",") if part.strip()]
    if not values:
        raise ValueError("expected a comma-separated list of numbers")
    return values


def _parse_grid_ints(text: str) -> list[int]:
    values = [int(part) for part in text.split(",") if part.strip()]
    if not values:
        raise ValueError("expected a comma-separated list of integers")
    return values


def _cmd_ingest_captions(args: argparse.Namespace) -> int:
    transcript = ingest_captions(load_caption_cues(args.cues))
    save_transcript(transcript, args.out)
    return 0


def _cmd_simulate(args: argparse.Namespace) -> int:
    model = load_table_model(args.model)
    transcript = load_transcript(args.transcript)
    config = DecoderConfig(beam_size=args.beam, bias_weight=args.beta, mask_length=args.k)
    log = run_simulation(transcript, model, config, args.chunk, args.delay)
    save_event_log(log, args.out)
    return 0


def _cmd_evaluate(args: argparse.Namespace) -> int:
    log = load_event_log(args.events)
    reference = load_reference_document(args.reference)
    report = evaluate_all(log, reference, mode=args.correspondence)
    save_report(report, args.out)
    return 0


def _collect_documents(
    transcripts_dir: Path, references_dir: Path
) -> list[tuple[str, TimedTranscript, ReferenceDocument]]:
    paths = sorted(transcripts_dir.glob("*.jsonl"))
    if not paths:
        raise ValueError(f"no *.jsonl transcripts found in {transcripts_dir}")
    documents = []
    for path in paths:
        reference_path = references_dir / path.name
        if not reference_path.is_file():
            raise ValueError(f"missing reference for {path.name} in {references_dir}")
        documents.append((path.name, load_transcript(path), load_reference_document(reference_path)))
    return documents


def _cmd_sweep(args: argparse.Namespace) -> int:
    model = load_table_model(args.model)
    documents = _collect_documents(Path(args.transcripts), Path(args.references))
    rows = sweep(model, documents, args.betas, args.ks, args.beam)
    out = Path(args.out)
    save_sweep_rows(rows, out)
    save_sweep_rows(pareto_subset(rows, args.ne_ceiling), _pareto_path(out))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="retrans",
        description="Simulate re-translation over streaming transcripts and score the sessions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    ingest = sub.add_parser(
        "ingest-captions", help="turn caption cues (start/end/text TSV) into a timed transcript"
    )
    ingest.add_argument("--cues", required=True, help="cue TSV: start seconds, end seconds, text")
    ingest.add_argument("--out", required=True, help="transcript JSONL to write")
    ingest.set_defaults(handler=_cmd_ingest_captions)

    simulate = sub.add_parser("simulate", help="replay a transcript and write the session log")
    simulate.add_argument("--model", required=True, help="translation table TSV")
    simulate.add_argument("--transcript", required=True, help="timed transcript JSONL")
    simulate.add_argument("--beta", required=True, type=float, help="bias toward the previous translation, 0..1")
    simulate.add_argument("--k", required=True, type=int, help="tokens held back while a sentence is incomplete")
    simulate.add_argument("--beam", required=True, type=int, help="beam size")
    simulate.add_argument("--chunk", type=int, default=1, help="source tokens fed per event (default 1)")
    simulate.add_argument("--delay", type=float, default=0.0, help="constant processing delay in seconds")
    simulate.add_argument("--out", required=True, help="event log JSONL to write")
    simulate.set_defaults(handler=_cmd_simulate)

    evaluate = sub.add_parser("evaluate", help="score one session log against its reference")
    evaluate.add_argument("--events", required=True, help="event log JSONL")
    evaluate.add_argument("--reference", required=True, help="reference document JSONL")
    evaluate.add_argument(
        "--correspondence",
        choices=("segment", "document"),
        default="segment",
        help="how output tokens map back to source positions (default: segment)",
    )
    evaluate.add_argument("--out", required=True, help="report JSON to write")
    evaluate.set_defaults(handler=_cmd_evaluate)

    grid = sub.add_parser("sweep", help="grid over bias/mask settings and write CSV rows plus the Pareto subset")
    grid.add_argument("--model", required=True, help="translation table TSV")
    grid.add_argument("--transcripts", required=True, help="directory of transcript JSONL files")
    grid.add_argument("--references", required=True, help="directory of same-named reference JSONL files")
    grid.add_argument("--betas", required=True, type=_parse_grid_floats, help="comma-separated bias weights")
    grid.add_argument("--ks", required=True, type=_parse_grid_ints, help="comma-separated mask lengths")
    grid.add_argument("--beam", required=True, type=int, help="beam size")
    grid.add_argument(
        "--ne-ceiling",
        type=float,
        default=None,
        help="only rows with normalized erasure at or below this enter the Pareto subset",
    )
    grid.add_argument("--out", required=True, help="CSV of all rows; the Pareto subset lands next to it as *.pareto.csv")
    grid.set_defaults(handler=_cmd_sweep)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
