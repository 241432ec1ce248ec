"""Session-level evaluation on three axes: quality, latency and stability.

Quality is corpus BLEU computed after re-segmenting the session's final
translation against the reference segments (the session translates an
unsegmented stream, so its output has no segment borders of its own).
Latency is translation lag: for each token of the final translation, the
time it stopped changing minus the time its corresponding source words were
spoken.  Stability is normalized erasure: how many displayed tokens were
retracted per token of final output.

All three read the same :class:`~retrans.eventlog.EventLog`; quality and
latency additionally need a :class:`ReferenceDocument` carrying the timed
source transcript and the reference translation, segment by segment.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .align import lcp_len, mwer_segment, split_by_boundaries
from .eventlog import EventLog, TimedToken, format_seconds, tokenize


@dataclass(frozen=True, slots=True)
class ReferenceSegment:
    """One reference sentence: its timed source tokens and its translation."""

    source_tokens: tuple[TimedToken, ...]
    reference_text: str

    def __post_init__(self) -> None:
        if not self.source_tokens:
            raise ValueError("a reference segment needs at least one source token")
        if not tokenize(self.reference_text):
            raise ValueError("a reference segment needs a non-empty reference text")


@dataclass(frozen=True, slots=True)
class ReferenceDocument:
    """A document's reference: parallel source and target segments.

    Source token times must be non-decreasing across the whole document,
    not just within each segment.
    """

    segments: tuple[ReferenceSegment, ...]

    def __post_init__(self) -> None:
        if not self.segments:
            raise ValueError("a reference document needs at least one segment")
        times = [tok.time for seg in self.segments for tok in seg.source_tokens]
        for prev, cur in zip(times, times[1:]):
            if cur < prev:
                raise ValueError("source token times must be non-decreasing")

    def source_times(self) -> list[float]:
        return [tok.time for seg in self.segments for tok in seg.source_tokens]

    def reference_token_segments(self) -> list[list[str]]:
        return [tokenize(seg.reference_text) for seg in self.segments]


def save_reference_document(doc: ReferenceDocument, path: str | Path) -> None:
    """Write one JSON line per segment: {"src": [{"w", "time"}...], "ref": text}."""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for seg in doc.segments:
            src = ", ".join(
                '{"w": %s, "time": %s}' % (json.dumps(tok.token, ensure_ascii=False), format_seconds(tok.time))
                for tok in seg.source_tokens
            )
            ref = json.dumps(seg.reference_text, ensure_ascii=False)
            handle.write('{"src": [%s], "ref": %s}\n' % (src, ref))


def load_reference_document(path: str | Path) -> ReferenceDocument:
    segments: list[ReferenceSegment] = []
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, 1):
            line = raw.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path}: line {lineno}: not valid JSON: {exc}") from None
            if not isinstance(record, dict) or set(record) != {"src", "ref"}:
                raise ValueError(f'{path}: line {lineno}: expected an object with keys "src", "ref"')
            if not isinstance(record["src"], list) or not isinstance(record["ref"], str):
                raise ValueError(f"{path}: line {lineno}: \"src\" must be a list and \"ref\" a string")
            tokens = []
            for item in record["src"]:
                if not isinstance(item, dict) or set(item) != {"w", "time"}:
                    raise ValueError(
                        f'{path}: line {lineno}: source entries need exactly the keys "w", "time"'
                    )
                if not isinstance(item["w"], str):
                    raise ValueError(f"{path}: line {lineno}: \"w\" must be a string")
                if not isinstance(item["time"], (int, float)) or isinstance(item["time"], bool):
                    raise ValueError(f"{path}: line {lineno}: \"time\" must be a number")
                tokens.append(TimedToken(item["w"], float(item["time"])))
            try:
                segments.append(ReferenceSegment(tuple(tokens), record["ref"]))
            except ValueError as exc:
                raise ValueError(f"{path}: line {lineno}: {exc}") from None
    return ReferenceDocument(tuple(segments))


# ---------------------------------------------------------------------------
# Stability


def erasure(log: EventLog) -> list[int]:
    """Tokens retracted at each event: the length of the previous display
    minus the common prefix kept by the new one.  The first event is
    compared against an empty display, so its erasure is always zero."""
    previous: list[str] = []
    retracted = []
    for event in log:
        current = tokenize(event.output_text)
        retracted.append(len(previous) - lcp_len(current, previous))
        previous = current
    return retracted


def normalized_erasure(log: EventLog) -> float:
    """Total erasure per token of final output."""
    if not log.events:
        raise ValueError("normalized erasure needs at least one event")
    final_len = len(tokenize(log.events[-1].output_text))
    if final_len == 0:
        raise ValueError("normalized erasure is undefined for an empty final translation")
    return sum(erasure(log)) / final_len


# ---------------------------------------------------------------------------
# Latency


@dataclass(frozen=True, slots=True)
class FinalizationMap:
    """For each token of the final translation (by position), the 1-based
    index and timestamp of the event where it stopped changing."""

    event_indices: tuple[int, ...]
    times: tuple[float, ...]


def finalization(log: EventLog) -> FinalizationMap:
    """Earliest event from which each final-output token was both present
    and never changed again, position by position.

    A token counts as changed while it is absent, so a token that flickers
    out and back in is finalized only by its last reappearance.
    """
    if not log.events:
        raise ValueError("finalization needs at least one event")
    final_tokens = tokenize(log.events[-1].output_text)
    agree = [lcp_len(tokenize(event.output_text), final_tokens) for event in log]
    for i in range(len(agree) - 2, -1, -1):
        agree[i] = min(agree[i], agree[i + 1])
    indices = []
    event = 0
    for position in range(1, len(final_tokens) + 1):
        while agree[event] < position:
            event += 1
        indices.append(event + 1)
    times = tuple(log.events[i - 1].time for i in indices)
    return FinalizationMap(tuple(indices), times)


@dataclass(frozen=True, slots=True)
class TokenCorrespondence:
    """Where one final-output token points back into the timed source.

    ``output_start``/``output_len`` describe the output segment the token
    sits in, ``source_start``/``source_len`` the paired source segment, all
    as 0-based positions counted across the whole document.
    ``source_position`` is the (possibly fractional) source position the
    token corresponds to, clamped to its segment.
    """

    segment_index: int
    output_start: int
    output_len: int
    source_start: int
    source_len: int
    source_position: float


@dataclass(frozen=True, slots=True)
class CorrespondenceMap:
    """Per-token source correspondences for the final translation, indexed
    by output token position."""

    tokens: tuple[TokenCorrespondence, ...]


def correspondence(log: EventLog, doc: ReferenceDocument, mode: str = "segment") -> CorrespondenceMap:
    """Map each final-output token to a source position.

    In the default "segment" mode the final translation is first split
    against the reference segments (same segmentation that scoring uses);
    a token at offset ``d`` inside an output segment of length ``n`` points
    at offset ``d * source_len / n`` inside the paired source segment.

    Mode "document" is a diagnostic alternative that skips segmentation and
    scales positions document-wide: token ``j`` of the final output points
    at ``j * |final source| / |final output|``.  It is kept for comparison
    only; positions are clamped to the timed source range.
    """
    if not log.events:
        raise ValueError("correspondence needs at least one event")
    final = log.events[-1]
    hyp = tokenize(final.output_text)

    if mode == "document":
        source_len = len(tokenize(final.source_text))
        timed_len = len(doc.source_times())
        if hyp and source_len == 0:
            raise ValueError("document mode needs a non-empty final source")
        records = []
        for j in range(len(hyp)):
            position = j * source_len / len(hyp)
            position = min(max(position, 0.0), float(min(source_len, timed_len) - 1))
            records.append(
                TokenCorrespondence(-1, 0, len(hyp), 0, source_len, position)
            )
        return CorrespondenceMap(tuple(records))
    if mode != "segment":
        raise ValueError(f'correspondence mode must be "segment" or "document", got {mode!r}')

    refs = doc.reference_token_segments()
    pieces = split_by_boundaries(hyp, mwer_segment(hyp, refs).boundaries)
    source_lens = [len(seg.source_tokens) for seg in doc.segments]

    records = []
    output_start = 0
    source_start = 0
    for index, piece in enumerate(pieces):
        piece_len = len(piece)
        src_len = source_lens[index]
        for j in range(output_start, output_start + piece_len):
            position = (j - output_start) * src_len / piece_len + source_start
            position = min(max(position, float(source_start)), float(source_start + src_len - 1))
            records.append(
                TokenCorrespondence(index, output_start, piece_len, source_start, src_len, position)
            )
        output_start += piece_len
        source_start += src_len
    return CorrespondenceMap(tuple(records))


def _time_at(times: Sequence[float], position: float, round_positions: bool) -> float:
    # Positions arrive clamped, so any fractional position has a right
    # neighbour inside the same segment.
    if round_positions:
        return times[int(math.floor(position + 0.5))]
    base = int(math.floor(position))
    frac = position - base
    if frac == 0.0:
        return times[base]
    return times[base] * (1.0 - frac) + times[base + 1] * frac


def token_lags(
    log: EventLog,
    doc: ReferenceDocument,
    mode: str = "segment",
    round_positions: bool = False,
) -> list[float]:
    """Per-token lag: finalization time minus the spoken time of the
    corresponding source position.

    Fractional source positions take the linear interpolation of the two
    neighbouring token times; pass ``round_positions=True`` to snap to the
    nearest token instead (half rounds up).  Lags may be negative when the
    display commits to a token before its source words are fully spoken.
    """
    if not log.events:
        raise ValueError("lag needs at least one event")
    if not tokenize(log.events[-1].output_text):
        raise ValueError("lag is undefined for an empty final translation")
    fin = finalization(log)
    cmap = correspondence(log, doc, mode=mode)
    times = doc.source_times()
    return [
        fin.times[j] - _time_at(times, record.source_position, round_positions)
        for j, record in enumerate(cmap.tokens)
    ]


def translation_lag(
    log: EventLog,
    doc: ReferenceDocument,
    mode: str = "segment",
    round_positions: bool = False,
) -> float:
    """Mean of :func:`token_lags` over the final translation."""
    lags = token_lags(log, doc, mode=mode, round_positions=round_positions)
    return math.fsum(lags) / len(lags)


# ---------------------------------------------------------------------------
# Quality


def bleu_corpus(hypotheses: Sequence[Sequence[str]], references: Sequence[Sequence[str]]) -> float:
    """Corpus BLEU over parallel token segments, as a percentage.

    Case-sensitive, n-grams up to 4, modified (clipped) precisions pooled
    over the corpus, geometric mean, multiplicative brevity penalty.  No
    smoothing: if any n-gram order has zero matches the score is 0.0, which
    also covers empty hypotheses.  A reference corpus with no tokens at all
    raises ``ValueError``.
    """
    if len(hypotheses) != len(references):
        raise ValueError("hypothesis and reference segment counts differ")
    ref_len = sum(len(ref) for ref in references)
    if ref_len == 0:
        raise ValueError("BLEU is undefined for an empty reference corpus")
    hyp_len = sum(len(hyp) for hyp in hypotheses)

    matched = [0] * 4
    possible = [0] * 4
    for hyp, ref in zip(hypotheses, references):
        for n in range(1, 5):
            if len(hyp) < n:
                break
            hyp_counts = Counter(tuple(hyp[i:i + n]) for i in range(len(hyp) - n + 1))
            ref_counts = Counter(tuple(ref[i:i + n]) for i in range(len(ref) - n + 1))
            possible[n - 1] += len(hyp) - n + 1
            matched[n - 1] += sum(min(count, ref_counts[gram]) for gram, count in hyp_counts.items())

    if any(p == 0 for p in possible) or any(m == 0 for m in matched):
        return 0.0
    log_precision = math.fsum(math.log(m / p) for m, p in zip(matched, possible)) / 4.0
    brevity = 1.0 if hyp_len >= ref_len else math.exp(1.0 - ref_len / hyp_len)
    return 100.0 * brevity * math.exp(log_precision)


def evaluate_quality(log: EventLog, doc: ReferenceDocument) -> float:
    """BLEU of the final translation against the reference, after splitting
    the translation to minimize total edit distance to the reference
    segments."""
    if not log.events:
        raise ValueError("quality needs at least one event")
    hyp = tokenize(log.events[-1].output_text)
    refs = doc.reference_token_segments()
    pieces = split_by_boundaries(hyp, mwer_segment(hyp, refs).boundaries)
    return bleu_corpus(pieces, refs)


# ---------------------------------------------------------------------------
# Combined report


@dataclass(frozen=True, slots=True)
class MetricsReport:
    """All three session metrics plus their per-token/per-event breakdowns."""

    bleu: float
    translation_lag: float
    normalized_erasure: float
    per_event_erasure: tuple[int, ...]
    per_token_lag: tuple[float, ...]


def evaluate_all(
    log: EventLog,
    doc: ReferenceDocument,
    mode: str = "segment",
    round_positions: bool = False,
) -> MetricsReport:
    """Evaluate one session end to end; errors from the individual metrics
    propagate unchanged."""
    lags = token_lags(log, doc, mode=mode, round_positions=round_positions)
    return MetricsReport(
        bleu=evaluate_quality(log, doc),
        translation_lag=math.fsum(lags) / len(lags),
        normalized_erasure=normalized_erasure(log),
        per_event_erasure=tuple(erasure(log)),
        per_token_lag=tuple(lags),
    )


def save_report(report: MetricsReport, path: str | Path) -> None:
    """Write a report as a single JSON object with keys "bleu", "tl", "ne",
    "erasure" and "lags"."""
    payload = {
        "bleu": report.bleu,
        "tl": report.translation_lag,
        "ne": report.normalized_erasure,
        "erasure": list(report.per_event_erasure),
        "lags": list(report.per_token_lag),
    }
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(json.dumps(payload, ensure_ascii=False) + "\n")


def load_report(path: str | Path) -> MetricsReport:
    with open(path, "r", encoding="utf-8") as handle:
        payload = json.load(handle)
    if not isinstance(payload, dict) or set(payload) != {"bleu", "tl", "ne", "erasure", "lags"}:
        raise ValueError(f'{path}: expected an object with keys "bleu", "tl", "ne", "erasure", "lags"')
    return MetricsReport(
        bleu=float(payload["bleu"]),
        translation_lag=float(payload["tl"]),
        normalized_erasure=float(payload["ne"]),
        per_event_erasure=tuple(int(v) for v in payload["erasure"]),
        per_token_lag=tuple(float(v) for v in payload["lags"]),
    )
