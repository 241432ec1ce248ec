"""Event timelines for streaming re-translation sessions.

A session is recorded as a sequence of timestamped snapshots: whenever the
source transcript or the displayed translation changes, the new pair of
texts is appended together with the wall-clock time of the change.  The log
is the single input to every downstream metric, so the on-disk format is
kept deliberately small: one JSON object per line with keys "t", "src" and
"out", ordered by time.

Timestamps are seconds.  Text is compared token-wise everywhere in this
package, and :func:`tokenize` is the one tokenizer all modules share.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator


def tokenize(text: str) -> list[str]:
    """Split ``text`` on runs of whitespace.

    Punctuation stays attached to its word and case is preserved.  Every
    token count and token comparison in this package is defined in terms of
    this function.
    """
    return text.split()


@dataclass(frozen=True, slots=True)
class TimedToken:
    """A single spoken token and the moment it became available."""

    token: str
    time: float

    def __post_init__(self) -> None:
        if not self.token or any(c.isspace() for c in self.token):
            raise ValueError(f"token must be non-empty and whitespace-free, got {self.token!r}")
        if not math.isfinite(self.time) or self.time < 0.0:
            raise ValueError(f"token time must be finite and >= 0, got {self.time!r}")


@dataclass(frozen=True, slots=True)
class Event:
    """One snapshot of a session.

    At ``time`` the recognized source read ``source_text`` and the display
    showed ``output_text``.  Either side may be empty; the pair as a whole
    describes what a viewer saw at that moment.
    """

    time: float
    source_text: str
    output_text: str

    def __post_init__(self) -> None:
        if not math.isfinite(self.time) or self.time < 0.0:
            raise ValueError(f"event time must be finite and >= 0, got {self.time!r}")

    def state(self) -> tuple[str, str]:
        return (self.source_text, self.output_text)


@dataclass(frozen=True, slots=True)
class EventLog:
    """An ordered, change-only sequence of :class:`Event` snapshots.

    Invariants: timestamps never decrease, and consecutive events differ in
    their (source, output) state.  Build logs through :func:`append_event`,
    which silently drops no-change events and rejects clock regressions.
    """

    events: tuple[Event, ...] = ()

    def __post_init__(self) -> None:
        for prev, cur in zip(self.events, self.events[1:]):
            if cur.time < prev.time:
                raise ValueError(
                    f"event times must be non-decreasing, got {cur.time!r} after {prev.time!r}"
                )
            if cur.state() == prev.state():
                raise ValueError("consecutive events must differ in source or output")

    def __len__(self) -> int:
        return len(self.events)

    def __iter__(self) -> Iterator[Event]:
        return iter(self.events)

    def __getitem__(self, index: int) -> Event:
        return self.events[index]


def append_event(log: EventLog, event: Event) -> EventLog:
    """Return ``log`` extended by ``event``.

    The log records change only: an event repeating the last (source,
    output) state is dropped and ``log`` itself is returned.  A timestamp
    earlier than the last one signals a corrupted session and raises
    ``ValueError``.
    """
    if log.events:
        last = log.events[-1]
        if event.time < last.time:
            raise ValueError(
                f"event time {event.time!r} precedes the last logged time {last.time!r}"
            )
        if event.state() == last.state():
            return log
    return EventLog(log.events + (event,))


def format_seconds(value: float) -> str:
    """Canonical wire form of a timestamp: at most 3 decimals, at least 1."""
    text = f"{value:.3f}".rstrip("0")
    return text + "0" if text.endswith(".") else text


def _event_line(event: Event) -> str:
    # Built by hand so the byte layout is pinned down, not left to json.dumps
    # float formatting.
    return '{"t": %s, "src": %s, "out": %s}' % (
        format_seconds(event.time),
        json.dumps(event.source_text, ensure_ascii=False),
        json.dumps(event.output_text, ensure_ascii=False),
    )


def save_event_log(log: EventLog, path: str | Path) -> None:
    """Write ``log`` as JSONL, one event per line, ordered by time."""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for event in log.events:
            handle.write(_event_line(event) + "\n")


def load_event_log(path: str | Path) -> EventLog:
    """Read a JSONL event log written by :func:`save_event_log`.

    Each line must be a JSON object with exactly the keys "t", "src" and
    "out".  Saving the result again reproduces the input byte for byte, as
    long as the input was itself in canonical form.
    """
    log = EventLog()
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, 1):
            line = raw.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path}: line {lineno}: not valid JSON: {exc}") from None
            if not isinstance(record, dict) or set(record) != {"t", "src", "out"}:
                raise ValueError(
                    f'{path}: line {lineno}: expected an object with keys "t", "src", "out"'
                )
            if not isinstance(record["t"], (int, float)) or isinstance(record["t"], bool):
                raise ValueError(f"{path}: line {lineno}: \"t\" must be a number")
            if not isinstance(record["src"], str) or not isinstance(record["out"], str):
                raise ValueError(f"{path}: line {lineno}: \"src\" and \"out\" must be strings")
            try:
                event = Event(float(record["t"]), record["src"], record["out"])
                log = append_event(log, event)
            except ValueError as exc:
                raise ValueError(f"{path}: line {lineno}: {exc}") from None
    return log
