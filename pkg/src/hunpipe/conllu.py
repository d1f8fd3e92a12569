"""CoNLL-U reading and writing.

Documents split at ``# newdoc``. Source text comes from ``# text =``
comments when every sentence has one (sentences joined by single spaces),
otherwise from token forms with ``SpaceAfter=No`` honored. Whitespace that
is not a single space survives round trips through the UDPipe-style
``SpacesAfter=`` MISC escape. Entity tags ride along in MISC as ``NER=``.

Multiword-token ranges ("3-4") and empty nodes ("3.1") are rejected
outright: the corpora this pipeline targets contain none, and skipping
them silently would corrupt evaluation.
"""

from __future__ import annotations

from .doc import ROOT, AnnotatedDoc, MorphFeats, Token
from .errors import ParseError, UnsupportedConstructError

_WS_ESCAPES = [("\\", "\\\\"), (" ", "\\s"), ("\t", "\\t"),
               ("\r", "\\r"), ("\n", "\\n"), ("|", "\\p")]
_WS_UNESCAPES = {"s": " ", "t": "\t", "r": "\r", "n": "\n", "p": "|", "\\": "\\"}


def _escape_ws(ws: str) -> str:
    for raw, esc in _WS_ESCAPES:
        ws = ws.replace(raw, esc)
    return ws


def _unescape_ws(text: str) -> str:
    out = []
    i = 0
    while i < len(text):
        if text[i] == "\\" and i + 1 < len(text) and text[i + 1] in _WS_UNESCAPES:
            out.append(_WS_UNESCAPES[text[i + 1]])
            i += 2
        else:
            out.append(text[i])
            i += 1
    return "".join(out)


class _RawSentence:
    __slots__ = ("rows", "text", "first_line")

    def __init__(self):
        self.rows = []        # (line_no, columns) per token
        self.text = None      # "# text =" payload, if any
        self.first_line = None


def _opt(column: str) -> str | None:
    return None if column == "_" else column


def _parse_misc(misc: str, *, doc_final: bool) -> tuple[str, str | None, bool]:
    """Return (trailing_ws, ent_tag, explicit_ws) decoded from a MISC column."""
    trailing = "" if doc_final else " "
    explicit = False
    ent = None
    if misc == "_":
        return trailing, ent, explicit
    for item in misc.split("|"):
        key, _, value = item.partition("=")
        if key == "SpaceAfter" and value == "No":
            trailing, explicit = "", True
        elif key == "SpacesAfter":
            trailing, explicit = _unescape_ws(value), True
        elif key == "NER":
            ent = value
    return trailing, ent, explicit


def _split_sentences(lines) -> list[list[_RawSentence]]:
    """Group token rows into sentences, and sentences into documents."""
    docs: list[list[_RawSentence]] = []
    sentences: list[_RawSentence] = []
    current = _RawSentence()

    def flush_sentence():
        nonlocal current
        if current.rows:
            sentences.append(current)
        current = _RawSentence()

    def flush_doc():
        nonlocal sentences
        flush_sentence()
        if sentences:
            docs.append(sentences)
        sentences = []

    for line_no, line in enumerate(lines, start=1):
        if line.startswith("#"):
            if line.startswith("# newdoc"):
                flush_doc()
            elif line.startswith("# text ="):
                payload = line[len("# text ="):]
                current.text = payload[1:] if payload.startswith(" ") else payload
            continue
        if not line.strip():
            flush_sentence()
            continue
        columns = line.split("\t")
        if len(columns) != 10:
            raise ParseError(
                f"expected 10 tab-separated columns, found {len(columns)}", line=line_no
            )
        token_id = columns[0]
        if "-" in token_id:
            raise UnsupportedConstructError(
                f"multiword token range {token_id!r} is not supported", line=line_no
            )
        if "." in token_id:
            raise UnsupportedConstructError(
                f"empty node id {token_id!r} is not supported", line=line_no
            )
        if not token_id.isdigit():
            raise ParseError(f"malformed token id {token_id!r}", line=line_no)
        if int(token_id) != len(current.rows) + 1:
            raise ParseError(
                f"token id {token_id} out of sequence (expected {len(current.rows) + 1})",
                line=line_no,
            )
        if current.first_line is None:
            current.first_line = line_no
        current.rows.append((line_no, columns))
    flush_doc()
    return docs


def _build_doc(sentences: list[_RawSentence]) -> AnnotatedDoc:
    n_total = sum(len(s.rows) for s in sentences)
    use_text = all(s.text is not None for s in sentences)
    tokens: list[Token] = []
    pos = 0
    pieces: list[str] = []

    for s_idx, sent in enumerate(sentences):
        sent_start = len(tokens)
        sent_len = len(sent.rows)
        doc_last_sent = s_idx == len(sentences) - 1

        # Per-token trailing whitespace within the sentence, from MISC.
        decoded = []
        for t_idx, (line_no, cols) in enumerate(sent.rows):
            doc_final = doc_last_sent and t_idx == sent_len - 1
            trailing, ent, explicit = _parse_misc(cols[9], doc_final=doc_final)
            decoded.append((line_no, cols, trailing, ent, explicit))

        if use_text:
            text = sent.text
            cursor = 0
            trailings = []
            for t_idx, (line_no, cols, misc_ws, _e, explicit) in enumerate(decoded):
                form = cols[1]
                if text[cursor : cursor + len(form)] != form:
                    raise ParseError(
                        f"'# text =' comment does not match form {form!r}", line=line_no
                    )
                cursor += len(form)
                ws_start = cursor
                while cursor < len(text) and text[cursor].isspace():
                    cursor += 1
                # An explicit MISC marker wins: the text comment is
                # whitespace-normalized on write, MISC keeps the original.
                trailings.append(misc_ws if explicit else text[ws_start:cursor])
            if cursor != len(text):
                raise ParseError(
                    "'# text =' comment has residue after the last form",
                    line=decoded[-1][0],
                )
            # The sentence-final gap is not covered by the sentence text:
            # a single space joins sentences unless MISC says otherwise.
            line_no, cols, misc_ws, _e, explicit = decoded[-1]
            if not explicit and not trailings[-1]:
                trailings[-1] = "" if doc_last_sent else " "
        else:
            trailings = [d[2] for d in decoded]

        for t_idx, (line_no, cols, _w, ent, _x) in enumerate(decoded):
            form = cols[1]
            head_col, deprel_col = cols[6], cols[7]
            if (head_col == "_") != (deprel_col == "_"):
                raise ParseError("HEAD and DEPREL must be set together", line=line_no)
            if head_col == "_":
                head = None
                deprel = None
            else:
                if not head_col.isdigit():
                    raise ParseError(f"malformed HEAD {head_col!r}", line=line_no)
                rel = int(head_col)
                if rel > sent_len:
                    raise ParseError(
                        f"HEAD {rel} outside sentence of {sent_len} tokens", line=line_no
                    )
                head = ROOT if rel == 0 else sent_start + rel - 1
                deprel = deprel_col
            feats_col = cols[5]
            try:
                feats = None if feats_col == "_" else MorphFeats.parse(feats_col)
            except ValueError as exc:
                raise ParseError(str(exc), line=line_no) from exc
            trailing = trailings[t_idx]
            tokens.append(
                Token(
                    index=len(tokens),
                    text=form,
                    char_start=pos,
                    char_end=pos + len(form),
                    trailing_ws=trailing,
                    is_sent_start=(t_idx == 0),
                    upos=_opt(cols[3]),
                    feats=feats,
                    lemma=_opt(cols[2]),
                    head=head,
                    deprel=deprel,
                    ent=ent,
                )
            )
            pos += len(form) + len(trailing)
            pieces.append(form)
            pieces.append(trailing)

    assert len(tokens) == n_total
    return AnnotatedDoc(source_text="".join(pieces), tokens=tuple(tokens))


def read_conllu(data: str | bytes) -> list[AnnotatedDoc]:
    """Parse CoNLL-U text into annotated documents.

    Raises :class:`ParseError` on malformed rows and
    :class:`UnsupportedConstructError` on multiword tokens / empty nodes.
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    lines = data.split("\n")
    return [_build_doc(sents) for sents in _split_sentences(lines)]


def _sentence_starts(doc: AnnotatedDoc) -> list[int]:
    return [t.index for t in doc.tokens if t.index == 0 or t.is_sent_start]


def write_conllu(docs) -> str:
    """Serialize documents as CoNLL-U; inverse of :func:`read_conllu`."""
    out: list[str] = []
    for doc in docs:
        out.append("# newdoc")
        starts = _sentence_starts(doc)
        n_docs_tokens = len(doc.tokens)
        for s_idx, sent_start in enumerate(starts):
            sent_end = starts[s_idx + 1] if s_idx + 1 < len(starts) else n_docs_tokens
            sent_tokens = doc.tokens[sent_start:sent_end]
            text = "".join(
                t.text + (t.trailing_ws if t.index < sent_end - 1 else "")
                for t in sent_tokens
            )
            # the comment must stay single-line; MISC preserves the original
            text = "".join(" " if c.isspace() else c for c in text)
            out.append(f"# sent_id = {s_idx + 1}")
            out.append(f"# text = {text}")
            for t in sent_tokens:
                rel_id = t.index - sent_start + 1
                if t.head is None:
                    head_col = "_"
                    deprel_col = "_"
                elif t.head == ROOT:
                    head_col = "0"
                    deprel_col = t.deprel
                else:
                    if not sent_start <= t.head < sent_end:
                        raise ValueError(
                            f"token {t.index} has head {t.head} outside its sentence"
                        )
                    head_col = str(t.head - sent_start + 1)
                    deprel_col = t.deprel
                misc_parts = []
                if t.ent is not None:
                    misc_parts.append(f"NER={t.ent}")
                doc_final = t.index == n_docs_tokens - 1
                ws = t.trailing_ws
                if doc_final:
                    if ws:
                        misc_parts.append(f"SpacesAfter={_escape_ws(ws)}")
                elif ws == "":
                    misc_parts.append("SpaceAfter=No")
                elif ws != " ":
                    misc_parts.append(f"SpacesAfter={_escape_ws(ws)}")
                columns = [
                    str(rel_id),
                    t.text,
                    t.lemma if t.lemma is not None else "_",
                    t.upos if t.upos is not None else "_",
                    "_",
                    str(t.feats) if t.feats else "_",
                    head_col,
                    deprel_col,
                    "_",
                    "|".join(misc_parts) if misc_parts else "_",
                ]
                out.append("\t".join(columns))
            out.append("")
    return "\n".join(out) + ("\n" if out else "")
