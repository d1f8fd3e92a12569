"""Two-column NER TSV: token TAB tag, blank line between sentences.

Accepts IOB2 and BILOU tags (E/S as aliases of L/U); writes BILOU.
"""

from __future__ import annotations

from .bilou import bilou_to_spans, normalize_tag, spans_to_bilou
from .doc import EntitySpan
from .errors import ParseError

Sentence = tuple[list[str], list[EntitySpan]]


def read_ner_tsv(data: str | bytes) -> list[Sentence]:
    """Parse into per-sentence (token texts, entity spans) pairs."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    sentences: list[Sentence] = []
    texts: list[str] = []
    tags: list[str] = []

    def flush():
        nonlocal texts, tags
        if texts:
            sentences.append((texts, bilou_to_spans(tags)))
        texts, tags = [], []

    for line_no, line in enumerate(data.split("\n"), start=1):
        if not line.strip():
            flush()
            continue
        columns = line.split("\t")
        if len(columns) != 2:
            raise ParseError(
                f"expected 2 tab-separated columns, found {len(columns)}", line=line_no
            )
        text, tag = columns
        if not text:
            raise ParseError("empty token text", line=line_no)
        try:
            tag = normalize_tag(tag)
        except ValueError as exc:
            raise ParseError(str(exc), line=line_no) from exc
        texts.append(text)
        tags.append(tag)
    flush()
    return sentences


def write_ner_tsv(sentences) -> str:
    """Serialize (token texts, spans) pairs; inverse of :func:`read_ner_tsv`."""
    blocks = []
    for texts, spans in sentences:
        tags = spans_to_bilou(spans, len(texts))
        blocks.append("\n".join(f"{t}\t{tag}" for t, tag in zip(texts, tags)))
    return "\n\n".join(blocks) + ("\n" if blocks else "")
