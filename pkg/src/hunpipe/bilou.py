"""BILOU tag sequences <-> entity spans.

Encoding is exact; decoding is total: dangling I/L tags open a new span
and spans left open at O/B/end are closed at the previous token, so noisy
corpora never crash the reader. ``decode(encode(spans)) == spans`` holds
for every valid span set.
"""

from __future__ import annotations

from .doc import EntitySpan

_PREFIXES = ("B", "I", "L", "U")
#: E (end) and S (single) are accepted as aliases on input.
_ALIASES = {"E": "L", "S": "U"}


def normalize_tag(tag: str) -> str:
    """Validate a BILOU/IOB tag and map E->L, S->U. Raises ValueError."""
    if tag == "O":
        return tag
    prefix, sep, label = tag.partition("-")
    if not sep or not label or prefix not in _PREFIXES + tuple(_ALIASES):
        raise ValueError(f"malformed entity tag {tag!r}")
    return f"{_ALIASES.get(prefix, prefix)}-{label}"


def spans_to_bilou(spans, n_tokens: int) -> list[str]:
    """Encode sorted, non-overlapping spans over ``n_tokens`` tokens."""
    tags = ["O"] * n_tokens
    prev_end = 0
    for span in spans:
        if span.start < prev_end:
            raise ValueError(f"overlapping or unsorted span {span}")
        if span.end > n_tokens:
            raise ValueError(f"span {span} exceeds {n_tokens} tokens")
        prev_end = span.end
        if span.end - span.start == 1:
            tags[span.start] = f"U-{span.label}"
        else:
            tags[span.start] = f"B-{span.label}"
            for i in range(span.start + 1, span.end - 1):
                tags[i] = f"I-{span.label}"
            tags[span.end - 1] = f"L-{span.label}"
    return tags


def bilou_to_spans(tags) -> list[EntitySpan]:
    """Decode a tag sequence, repairing invalid transitions."""
    spans: list[EntitySpan] = []
    open_start = None
    open_label = None

    def close(end: int):
        nonlocal open_start, open_label
        if open_start is not None and end > open_start:
            spans.append(EntitySpan(open_start, end, open_label))
        open_start = open_label = None

    for i, tag in enumerate(tags):
        tag = normalize_tag(tag)
        if tag == "O":
            close(i)
            continue
        prefix, _, label = tag.partition("-")
        if prefix == "U":
            close(i)
            spans.append(EntitySpan(i, i + 1, label))
        elif prefix == "B":
            close(i)
            open_start, open_label = i, label
        elif prefix == "I":
            if open_label != label:
                close(i)
                open_start, open_label = i, label
        else:  # L
            if open_label != label:
                close(i)
                open_start, open_label = i, label
            close(i + 1)
    close(len(tags))
    return spans
