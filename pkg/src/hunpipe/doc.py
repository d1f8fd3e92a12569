"""Document and token data model shared by every pipeline stage.

All types are immutable after construction; pipeline stages produce new
documents via :func:`with_tokens` rather than mutating in place.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

#: Sentinel head value marking attachment to the artificial root node.
ROOT = -1


@dataclass(frozen=True)
class MorphFeats:
    """Morphological feature bundle: unique keys, canonical sorted order."""

    pairs: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        keys = [k for k, _ in self.pairs]
        if len(set(keys)) != len(keys):
            raise ValueError(f"duplicate feature keys in {self.pairs!r}")
        object.__setattr__(self, "pairs", tuple(sorted(self.pairs)))

    @classmethod
    def parse(cls, text: str) -> "MorphFeats":
        """Parse the pipe-joined ``k=v`` serialization; "_" is the empty set."""
        if text == "_" or text == "":
            return cls(())
        pairs = []
        for item in text.split("|"):
            key, sep, value = item.partition("=")
            if not sep or not key:
                raise ValueError(f"malformed feature {item!r} in {text!r}")
            pairs.append((key, value))
        return cls(tuple(pairs))

    def __str__(self) -> str:
        if not self.pairs:
            return "_"
        return "|".join(f"{k}={v}" for k, v in self.pairs)

    def __bool__(self) -> bool:
        return bool(self.pairs)


@dataclass(frozen=True)
class Token:
    """One token plus every annotation the pipeline can attach to it.

    ``head`` is a document-level token index, or :data:`ROOT`.
    ``is_sent_start`` is tri-state: None means "not decided yet".
    """

    index: int
    text: str
    char_start: int
    char_end: int
    trailing_ws: str = " "
    is_sent_start: bool | None = None
    upos: str | None = None
    feats: MorphFeats | None = None
    lemma: str | None = None
    head: int | None = None
    deprel: str | None = None
    ent: str | None = None

    def __post_init__(self):
        if not self.text:
            raise ValueError("empty token text")
        if not all(c.isspace() for c in self.trailing_ws):
            raise ValueError(f"trailing_ws {self.trailing_ws!r} is not whitespace")
        if self.char_end - self.char_start != len(self.text):
            raise ValueError(
                f"span [{self.char_start}, {self.char_end}) does not cover {self.text!r}"
            )
        if self.head is not None and self.head == self.index:
            raise ValueError(f"token {self.index} cannot head itself")
        if (self.head is None) != (self.deprel is None):
            raise ValueError("head and deprel must be set together")


@dataclass(frozen=True)
class EntitySpan:
    """Half-open token-index range [start, end) with an entity class label."""

    start: int
    end: int
    label: str

    def __post_init__(self):
        if not self.start < self.end:
            raise ValueError(f"empty entity span [{self.start}, {self.end})")
        if not self.label:
            raise ValueError("empty entity label")


@dataclass(frozen=True)
class AnnotatedDoc:
    """A source text and its token sequence.

    Invariant: ``leading_ws`` plus each token's text and trailing whitespace
    concatenate back to ``source_text`` exactly.
    """

    source_text: str
    tokens: tuple[Token, ...]
    leading_ws: str = ""

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))
        pos = len(self.leading_ws)
        for i, tok in enumerate(self.tokens):
            if tok.index != i:
                raise ValueError(f"token {i} carries index {tok.index}")
            if tok.char_start != pos:
                raise ValueError(
                    f"token {i} starts at {tok.char_start}, expected {pos}"
                )
            if self.source_text[tok.char_start : tok.char_end] != tok.text:
                raise ValueError(f"token {i} text differs from its source slice")
            pos = tok.char_end + len(tok.trailing_ws)
            if self.source_text[tok.char_end : pos] != tok.trailing_ws:
                raise ValueError(f"token {i} trailing whitespace differs from source")
        if pos != len(self.source_text):
            raise ValueError("tokens do not cover the full source text")
        if self.tokens and self.tokens[0].is_sent_start is False:
            raise ValueError("token 0 must start a sentence")

    def __len__(self) -> int:
        return len(self.tokens)


def with_tokens(doc: AnnotatedDoc, tokens) -> AnnotatedDoc:
    """Copy of ``doc`` with a replacement token tuple (same source text)."""
    return replace(doc, tokens=tuple(tokens))


def doc_from_texts(texts, trailing=" ") -> AnnotatedDoc:
    """Build a doc from plain token strings, joined by single spaces.

    Convenience for tests and format readers that have no raw text.
    """
    tokens = []
    pos = 0
    for i, text in enumerate(texts):
        ws = trailing if i < len(texts) - 1 else ""
        tokens.append(
            Token(
                index=i,
                text=text,
                char_start=pos,
                char_end=pos + len(text),
                trailing_ws=ws,
                is_sent_start=True if i == 0 else None,
            )
        )
        pos += len(text) + len(ws)
    source = "".join(t.text + t.trailing_ws for t in tokens)
    return AnnotatedDoc(source_text=source, tokens=tuple(tokens))


def sentence_ranges(doc: AnnotatedDoc) -> list[tuple[int, int]]:
    """Maximal token-index runs starting at each sentence-start token.

    Requires every token's ``is_sent_start`` to be decided; the returned
    half-open ranges partition the document.
    """
    if not doc.tokens:
        return []
    starts = []
    for tok in doc.tokens:
        if tok.is_sent_start is None:
            raise ValueError(f"token {tok.index} has undecided sentence flag")
        if tok.is_sent_start:
            starts.append(tok.index)
    ranges = []
    for i, start in enumerate(starts):
        end = starts[i + 1] if i + 1 < len(starts) else len(doc.tokens)
        ranges.append((start, end))
    return ranges
