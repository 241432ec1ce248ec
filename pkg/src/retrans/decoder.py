"""A deterministic word-table translation model and a beam search that can
be biased toward the previous translation of the same sentence.

The model translates word for word, left to right: target position ``j``
consumes source position ``j``.  Each source word's distribution over
target words may depend on the word that follows it, so a translation can
legitimately change when one more source word arrives.  That is exactly the
behaviour the rest of the package measures, and the bias knob exists to
suppress it: while a hypothesis has followed the previous translation token
for token, the search mixes a point mass on the previous translation's next
token into the model distribution.  From the first divergence on, the model
distribution is used unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Protocol, Sequence

EOS_TOKEN = "</s>"
END_OF_SOURCE = "⟨END⟩"  # context marker: the source sentence ends here
ANY_CONTEXT = "∗"  # context marker: the next source word is unknown or unlisted


class ScoringModel(Protocol):
    """What the search needs from a model: a finite vocabulary including
    :data:`EOS_TOKEN`, and a next-token distribution that depends only on
    the source, its completeness, and the target prefix."""

    @property
    def vocabulary(self) -> frozenset[str]:
        ...

    def next_distribution(
        self, source: Sequence[str], source_complete: bool, prefix: Sequence[str]
    ) -> dict[str, float]:
        ...


@dataclass(frozen=True)
class TableModel:
    """Word-for-word translation table.

    Entries map (source_word, context) to a distribution over target words.
    The context is the source word that follows, :data:`END_OF_SOURCE` when
    the source sentence verifiably ends there, or :data:`ANY_CONTEXT` when
    the future is unseen or unlisted.  Lookup falls back from the exact
    context to :data:`ANY_CONTEXT`; a source word with no entries at all
    translates to itself.
    """

    entries: Mapping[tuple[str, str], tuple[tuple[str, float], ...]]

    def __post_init__(self) -> None:
        words_with_exact = {word for word, ctx in self.entries if ctx != ANY_CONTEXT}
        for word in words_with_exact:
            if (word, ANY_CONTEXT) not in self.entries:
                raise ValueError(
                    f"source word {word!r} has context-specific entries but no {ANY_CONTEXT} entry"
                )
        for (word, ctx), dist in self.entries.items():
            if not dist:
                raise ValueError(f"empty distribution for ({word!r}, {ctx!r})")
            total = math.fsum(p for _, p in dist)
            if abs(total - 1.0) > 1e-6:
                raise ValueError(
                    f"distribution for ({word!r}, {ctx!r}) sums to {total!r}, expected 1"
                )
            if any(p <= 0.0 for _, p in dist):
                raise ValueError(f"probabilities for ({word!r}, {ctx!r}) must be positive")

    @property
    def vocabulary(self) -> frozenset[str]:
        targets = {target for dist in self.entries.values() for target, _ in dist}
        return frozenset(targets | {EOS_TOKEN})

    def next_distribution(
        self, source: Sequence[str], source_complete: bool, prefix: Sequence[str]
    ) -> dict[str, float]:
        """Distribution over the next target word given ``prefix``.

        Past the end of the source only :data:`EOS_TOKEN` remains.  Before
        that, the next target word is drawn from the entry for the source
        word at the prefix's position, keyed by the following source word
        when it is already visible, by :data:`END_OF_SOURCE` when the word
        is last and the source is complete, and by :data:`ANY_CONTEXT`
        otherwise.
        """
        if len(prefix) >= len(source):
            return {EOS_TOKEN: 1.0}
        word = source[len(prefix)]
        after = len(prefix) + 1
        if after < len(source):
            context = source[after]
        elif source_complete:
            context = END_OF_SOURCE
        else:
            context = ANY_CONTEXT
        dist = self.entries.get((word, context))
        if dist is None:
            dist = self.entries.get((word, ANY_CONTEXT))
        if dist is None:
            return {word: 1.0}
        return dict(dist)


def load_table_model(path: str | Path) -> TableModel:
    """Read a model from a UTF-8 TSV file.

    Four tab-separated columns per line: source word, context (a token,
    ``⟨END⟩`` or ``∗``), target word, probability.  Lines starting with
    ``#`` and blank lines are skipped.  Rows with the same source word and
    context accumulate into one distribution, which must sum to 1 within
    1e-6; an exact duplicate (source, context, target) row is an error, as
    is a context-specific entry without the ``∗`` fallback for that word.
    """
    table: dict[tuple[str, str], dict[str, float]] = {}
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, 1):
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 4:
                raise ValueError(
                    f"{path}: line {lineno}: expected 4 tab-separated columns, got {len(parts)}"
                )
            word, context, target, prob_text = parts
            try:
                prob = float(prob_text)
            except ValueError:
                raise ValueError(f"{path}: line {lineno}: bad probability {prob_text!r}") from None
            if not math.isfinite(prob) or not 0.0 < prob <= 1.0:
                raise ValueError(f"{path}: line {lineno}: probability must be in (0, 1]")
            dist = table.setdefault((word, context), {})
            if target in dist:
                raise ValueError(
                    f"{path}: line {lineno}: duplicate row for ({word!r}, {context!r}, {target!r})"
                )
            dist[target] = prob
    entries = {
        key: tuple(sorted(dist.items()))
        for key, dist in table.items()
    }
    try:
        return TableModel(entries)
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from None


@dataclass(frozen=True, slots=True)
class DecoderConfig:
    """Search settings.

    ``previous_translation`` is the unmasked translation this sentence got
    last time around; ``bias_weight`` is how much probability mass to put on
    sticking with it.  ``max_len`` of None means 2 * len(source) + 5, a
    cutoff that word-for-word models never reach.
    """

    beam_size: int = 1
    bias_weight: float = 0.0
    mask_length: int = 0
    max_len: int | None = None
    previous_translation: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.beam_size < 1:
            raise ValueError(f"beam_size must be >= 1, got {self.beam_size}")
        if not 0.0 <= self.bias_weight <= 1.0:
            raise ValueError(f"bias_weight must be in [0, 1], got {self.bias_weight!r}")
        if self.mask_length < 0:
            raise ValueError(f"mask_length must be >= 0, got {self.mask_length}")
        if self.max_len is not None and self.max_len < 1:
            raise ValueError(f"max_len must be >= 1, got {self.max_len}")


@dataclass(frozen=True, slots=True)
class Hypothesis:
    """A partial or finished translation: its tokens, accumulated log
    probability, and whether it is still a prefix of the previous
    translation."""

    tokens: tuple[str, ...]
    logscore: float
    following_previous: bool
    finished: bool = False


def _rank(hyp: Hypothesis) -> tuple:
    # Best first: higher score, then still-following, then lexicographically
    # earlier tokens.  The finished flag settles what little remains.
    return (-hyp.logscore, not hyp.following_previous, hyp.tokens, not hyp.finished)


def _biased_step(
    dist: Mapping[str, float], target: str, weight: float
) -> dict[str, float]:
    """Mix a point mass on ``target`` into ``dist``: every probability is
    scaled by (1 - weight) and ``target`` gains ``weight`` on top.

    ``target`` enters the support even when the model gives it no mass, as
    a one-hot over the extended vocabulary; the result still sums to 1, so
    no renormalization pass is needed (renormalizing over the model's own
    support would be the alternative, and would change scores for every
    candidate rather than only the targeted one).
    """
    step = {token: (1.0 - weight) * p for token, p in dist.items()}
    step[target] = step.get(target, 0.0) + weight
    return step


def biased_beam_search(
    model: ScoringModel,
    source: Sequence[str],
    source_complete: bool,
    config: DecoderConfig,
) -> tuple[str, ...]:
    """Beam search over ``model``'s distributions, optionally biased toward
    ``config.previous_translation``.

    While a hypothesis has followed the previous translation exactly and
    has not outgrown it, each step's distribution is mixed with a point
    mass on the previous translation's next token (see :func:`_biased_step`);
    after the first divergence the model distribution applies unchanged.
    Scores are accumulated log probabilities of the mixed distributions.

    Finished hypotheses stay in the beam and compete by score.  The search
    stops when every surviving hypothesis is finished or has ``max_len``
    tokens, and returns the best finished one, or the best partial if
    nothing finished in time.  Ties prefer the hypothesis still following
    the previous translation, then the lexicographically earlier one.  An
    empty source translates to an empty output without consulting the model.
    """
    source = tuple(source)
    if not source:
        return ()
    previous = tuple(config.previous_translation)
    weight = config.bias_weight
    max_len = config.max_len if config.max_len is not None else 2 * len(source) + 5

    beam = [Hypothesis((), 0.0, True)]
    while not all(h.finished or len(h.tokens) >= max_len for h in beam):
        candidates = []
        for hyp in beam:
            if hyp.finished or len(hyp.tokens) >= max_len:
                candidates.append(hyp)
                continue
            dist = model.next_distribution(source, source_complete, hyp.tokens)
            position = len(hyp.tokens)
            biased = weight > 0.0 and hyp.following_previous and position < len(previous)
            step = _biased_step(dist, previous[position], weight) if biased else dist
            for token, prob in step.items():
                if prob <= 0.0:
                    continue
                score = hyp.logscore + math.log(prob)
                if token == EOS_TOKEN:
                    candidates.append(
                        Hypothesis(hyp.tokens, score, hyp.following_previous, True)
                    )
                else:
                    follows = (
                        hyp.following_previous
                        and position < len(previous)
                        and token == previous[position]
                    )
                    candidates.append(Hypothesis(hyp.tokens + (token,), score, follows))
        candidates.sort(key=_rank)
        beam = candidates[: config.beam_size]

    finished = [h for h in beam if h.finished]
    best = min(finished or beam, key=_rank)
    return best.tokens


def mask_tail(tokens: Sequence[str], mask_length: int, source_complete: bool) -> tuple[str, ...]:
    """Hold back the last ``mask_length`` tokens while the source sentence
    is still growing; once it is complete, show everything."""
    if mask_length < 0:
        raise ValueError(f"mask_length must be >= 0, got {mask_length}")
    tokens = tuple(tokens)
    if source_complete:
        return tokens
    keep = max(0, len(tokens) - mask_length)
    return tokens[:keep]
