"""Token alignment primitives: edit distance, common prefixes, and
minimum-error segmentation of an unsegmented hypothesis against a list of
reference segments."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

_INF = 10**9


def levenshtein(a: Sequence[str], b: Sequence[str]) -> int:
    """Token-level edit distance with unit insert/delete/substitute costs."""
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, tok_a in enumerate(a, 1):
        cur = [i]
        for j, tok_b in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[-1] + 1, prev[j - 1] + (tok_a != tok_b)))
        prev = cur
    return prev[-1]


def lcp_len(a: Sequence[str], b: Sequence[str]) -> int:
    """Length of the longest common prefix of two token sequences."""
    n = 0
    for tok_a, tok_b in zip(a, b):
        if tok_a != tok_b:
            break
        n += 1
    return n


@dataclass(frozen=True, slots=True)
class Segmentation:
    """Result of :func:`mwer_segment`.

    ``boundaries`` holds one cut index per internal segment border, so its
    length is one less than the number of reference segments.  Cut ``b``
    means the hypothesis piece for the next segment starts at token ``b``.
    Boundaries are non-decreasing and empty pieces are legal.
    """

    boundaries: tuple[int, ...]
    total_edit_distance: int


def _segment_prefix_costs(hyp: Sequence[str], refs: Sequence[Sequence[str]]) -> list[list[int]]:
    """rows[r][j]: least summed edit distance of refs[:r] against any split
    of hyp[:j] into r contiguous pieces."""
    width = len(hyp)
    rows = [[0] + [_INF] * width]
    for ref in refs:
        prev = rows[-1]
        # Row for zero consumed reference tokens.  Folding the running
        # minimum in here lets the current piece start at any earlier cut,
        # paying one insertion per hypothesis token skipped since the cut.
        acc = [prev[0]] + [0] * width
        for j in range(1, width + 1):
            acc[j] = min(prev[j], acc[j - 1] + 1)
        for ref_tok in ref:
            nxt = [acc[0] + 1] + [0] * width
            for j in range(1, width + 1):
                sub = acc[j - 1] + (hyp[j - 1] != ref_tok)
                nxt[j] = min(acc[j] + 1, nxt[j - 1] + 1, sub)
            acc = nxt
        rows.append(acc)
    return rows


def _distances_from(hyp: Sequence[str], start: int, ref: Sequence[str]) -> list[int]:
    """costs[j - start] = levenshtein(hyp[start:j], ref) for j in start..len(hyp)."""
    width = len(hyp) - start
    prev = list(range(width + 1))
    for ref_tok in ref:
        cur = [prev[0] + 1]
        for c in range(1, width + 1):
            sub = prev[c - 1] + (hyp[start + c - 1] != ref_tok)
            cur.append(min(prev[c] + 1, cur[-1] + 1, sub))
        prev = cur
    return prev


def mwer_segment(hyp: Sequence[str], refs: Sequence[Sequence[str]]) -> Segmentation:
    """Split ``hyp`` into one piece per reference segment, minimizing the
    summed edit distance between each piece and its reference.

    The search considers every cut position; only cuts between reference
    segments are allowed, which is what makes the result comparable to a
    score computed on pre-segmented text.  Among equally cheap splits the
    one with the leftmost cuts wins, decided left to right.

    Raises ``ValueError`` when ``refs`` is empty or contains an empty
    segment.
    """
    if not refs:
        raise ValueError("at least one reference segment is required")
    if any(len(ref) == 0 for ref in refs):
        raise ValueError("reference segments must be non-empty")

    hyp = list(hyp)
    count = len(refs)
    width = len(hyp)

    # suffix[r][j]: cheapest alignment of refs[r:] against hyp[j:].  Computed
    # by running the prefix recurrence on the reversed problem; edit distance
    # is invariant under reversing both sequences.
    rev_rows = _segment_prefix_costs(hyp[::-1], [list(ref)[::-1] for ref in refs[::-1]])
    suffix = [[rev_rows[count - r][width - j] for j in range(width + 1)] for r in range(count + 1)]

    total = suffix[0][0]
    boundaries: list[int] = []
    pos = 0
    for r in range(1, count):
        piece_costs = _distances_from(hyp, pos, refs[r - 1])
        for j in range(pos, width + 1):
            if piece_costs[j - pos] + suffix[r][j] == suffix[r - 1][pos]:
                boundaries.append(j)
                pos = j
                break
        else:
            raise AssertionError("segmentation table is inconsistent")
    return Segmentation(tuple(boundaries), total)


def split_by_boundaries(hyp: Sequence[str], boundaries: Sequence[int]) -> list[list[str]]:
    """Cut ``hyp`` at ``boundaries`` into len(boundaries) + 1 pieces."""
    edges = [0, *boundaries, len(hyp)]
    return [list(hyp[edges[i]:edges[i + 1]]) for i in range(len(edges) - 1)]
