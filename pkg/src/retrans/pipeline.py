"""Replay a timed transcript through the translator and record what a
viewer would have seen.

The stream is split into sentences as it grows; only the last, possibly
still incomplete sentence is ever (re)translated.  Completed sentences are
translated once more with the end of the sentence in view, then frozen:
their translations never change again.  The display is the frozen
translations followed by the masked translation of the live sentence, and
every feed of new tokens appends one event to the session log, stamped
with the time the last fed token was spoken (plus a constant processing
delay if configured).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Sequence

from .decoder import DecoderConfig, ScoringModel, biased_beam_search, mask_tail
from .eventlog import Event, EventLog, TimedToken, append_event, format_seconds

_SENTENCE_FINAL = (".", "!", "?")


@dataclass(frozen=True, slots=True)
class TimedTranscript:
    """A tokenized source stream with one timestamp per token."""

    tokens: tuple[TimedToken, ...] = ()

    def __post_init__(self) -> None:
        for prev, cur in zip(self.tokens, self.tokens[1:]):
            if cur.time < prev.time:
                raise ValueError("transcript times must be non-decreasing")

    def __len__(self) -> int:
        return len(self.tokens)


def save_transcript(transcript: TimedTranscript, path: str | Path) -> None:
    """Write one JSON line per token: {"w": word, "time": seconds}."""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for tok in transcript.tokens:
            handle.write(
                '{"w": %s, "time": %s}\n'
                % (json.dumps(tok.token, ensure_ascii=False), format_seconds(tok.time))
            )


def load_transcript(path: str | Path) -> TimedTranscript:
    tokens = []
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, 1):
            line = raw.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path}: line {lineno}: not valid JSON: {exc}") from None
            if not isinstance(record, dict) or set(record) != {"w", "time"}:
                raise ValueError(f'{path}: line {lineno}: expected an object with keys "w", "time"')
            if not isinstance(record["w"], str):
                raise ValueError(f"{path}: line {lineno}: \"w\" must be a string")
            if not isinstance(record["time"], (int, float)) or isinstance(record["time"], bool):
                raise ValueError(f"{path}: line {lineno}: \"time\" must be a number")
            try:
                token = TimedToken(record["w"], float(record["time"]))
            except ValueError as exc:
                raise ValueError(f"{path}: line {lineno}: {exc}") from None
            if tokens and token.time < tokens[-1].time:
                raise ValueError(f"{path}: line {lineno}: transcript times must be non-decreasing")
            tokens.append(token)
    try:
        return TimedTranscript(tuple(tokens))
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from None


def split_sentences(tokens: Sequence[str]) -> tuple[list[list[str]], bool]:
    """Group tokens into sentences, cutting after any token that ends in
    '.', '!' or '?'.  The second result says whether the last sentence is
    complete; an empty input counts as complete."""
    sentences: list[list[str]] = []
    current: list[str] = []
    for token in tokens:
        current.append(token)
        if token.endswith(_SENTENCE_FINAL):
            sentences.append(current)
            current = []
    if current:
        sentences.append(current)
        return sentences, False
    return sentences, True


@dataclass(frozen=True, slots=True)
class SessionState:
    """Everything the simulator carries between feeds.

    ``frozen_translations`` holds one finished translation per completed
    sentence, in order.  ``live_translation`` is the masked translation of
    the incomplete last sentence, exactly as displayed.
    ``previous_unmasked`` is that sentence's latest unmasked translation,
    kept as the bias target for its next retranslation.
    """

    transcript: tuple[TimedToken, ...] = ()
    frozen_translations: tuple[tuple[str, ...], ...] = ()
    live_translation: tuple[str, ...] = ()
    previous_unmasked: tuple[str, ...] = ()

    def displayed_tokens(self) -> list[str]:
        shown = [token for sentence in self.frozen_translations for token in sentence]
        shown.extend(self.live_translation)
        return shown


def step(
    state: SessionState,
    new_tokens: Sequence[TimedToken],
    model: ScoringModel,
    config: DecoderConfig,
    delay: float = 0.0,
) -> tuple[SessionState, Event]:
    """Feed freshly recognized tokens and retranslate.

    Sentences completed by this feed are translated one last time with the
    sentence end in view (still biased toward their previous translation)
    and frozen.  The last sentence, if incomplete, is retranslated biased
    toward its own previous unmasked translation, then masked for display.
    Returns the new state and the logged event; the event's timestamp is
    the last fed token's time plus ``delay``.
    """
    new_tokens = tuple(new_tokens)
    if not new_tokens:
        raise ValueError("step needs at least one new token")
    if state.transcript and new_tokens[0].time < state.transcript[-1].time:
        raise ValueError("new tokens must not precede the transcript seen so far")

    transcript = TimedTranscript(state.transcript + new_tokens).tokens
    words = [tok.token for tok in transcript]
    sentences, last_complete = split_sentences(words)

    frozen = list(state.frozen_translations)
    live_index = len(frozen)  # the sentence state.previous_unmasked belongs to
    live: tuple[str, ...] = ()
    previous_unmasked: tuple[str, ...] = ()
    for index in range(len(frozen), len(sentences)):
        sentence = sentences[index]
        complete = last_complete or index < len(sentences) - 1
        bias_target = state.previous_unmasked if index == live_index else ()
        translated = biased_beam_search(
            model,
            sentence,
            complete,
            replace(config, previous_translation=bias_target),
        )
        if complete:
            frozen.append(translated)
        else:
            previous_unmasked = translated
            live = mask_tail(translated, config.mask_length, source_complete=False)

    next_state = SessionState(transcript, tuple(frozen), live, previous_unmasked)
    event = Event(
        new_tokens[-1].time + delay,
        " ".join(words),
        " ".join(next_state.displayed_tokens()),
    )
    return next_state, event


def run_simulation(
    transcript: TimedTranscript,
    model: ScoringModel,
    config: DecoderConfig,
    chunk_size: int = 1,
    delay: float = 0.0,
) -> EventLog:
    """Replay ``transcript`` in time order and collect the session log.

    Tokens are fed one at a time by default; ``chunk_size`` feeds fixed-size
    groups instead, emitting one event per group.  An empty transcript
    yields an empty log.
    """
    if chunk_size < 1:
        raise ValueError(f"chunk_size must be >= 1, got {chunk_size}")
    if delay < 0.0:
        raise ValueError(f"delay must be >= 0, got {delay!r}")
    log = EventLog()
    state = SessionState()
    for start in range(0, len(transcript.tokens), chunk_size):
        state, event = step(state, transcript.tokens[start:start + chunk_size], model, config, delay)
        log = append_event(log, event)
    return log
