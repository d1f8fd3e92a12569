"""Evaluation with shared-task alignment semantics.

Tokens are matched as character spans over the whitespace-stripped text,
so differing tokenizations are scored fairly: Tokens and Sentences are
span F1, the word-level metrics (UPOS, UFeats, Lemmas, UAS, LAS) count a
token correct only when it is span-aligned and the field matches. With
identical tokenizations the F1 values coincide with plain accuracies.
All F1 values are computed as 2*correct/(gold+system), which is exact
for the fixture fractions the tests pin down.
"""

from __future__ import annotations

from dataclasses import dataclass

from .doc import ROOT, AnnotatedDoc, sentence_ranges
from .errors import IncomparableInputError


@dataclass(frozen=True)
class Score:
    gold: int
    system: int
    correct: int

    def __post_init__(self):
        if self.correct > min(self.gold, self.system):
            raise ValueError(f"correct exceeds totals in {self}")

    @property
    def precision(self) -> float:
        return self.correct / self.system if self.system else 0.0

    @property
    def recall(self) -> float:
        return self.correct / self.gold if self.gold else 0.0

    @property
    def f1(self) -> float:
        denom = self.gold + self.system
        return 2.0 * self.correct / denom if denom else 0.0


METRICS = ("Tokens", "Sentences", "UPOS", "UFeats", "Lemmas", "UAS", "LAS")


@dataclass(frozen=True)
class EvalReport:
    scores: dict[str, Score]

    def __getitem__(self, name: str) -> Score:
        return self.scores[name]


def _char_spans(doc: AnnotatedDoc) -> tuple[str, list[tuple[int, int]]]:
    """Each token's span over the concatenated non-whitespace characters."""
    spans = []
    pos = 0
    pieces = []
    for token in doc.tokens:
        text = "".join(c for c in token.text if not c.isspace())
        spans.append((pos, pos + len(text)))
        pos += len(text)
        pieces.append(text)
    return "".join(pieces), spans


def _sentence_spans(doc: AnnotatedDoc, token_spans) -> list[tuple[int, int]]:
    return [
        (token_spans[start][0], token_spans[end - 1][1])
        for start, end in sentence_ranges(doc)
    ]


def _match_spans(gold_spans, sys_spans) -> list[tuple[int, int]]:
    """Pairs of indices whose (start, end) spans are identical."""
    pairs = []
    gi = si = 0
    while gi < len(gold_spans) and si < len(sys_spans):
        g, s = gold_spans[gi], sys_spans[si]
        if g == s:
            pairs.append((gi, si))
            gi += 1
            si += 1
        elif g[0] < s[0] or (g[0] == s[0] and g[1] < s[1]):
            gi += 1
        else:
            si += 1
    return pairs


def align(gold: AnnotatedDoc, system: AnnotatedDoc):
    """Token alignment between two views of the same underlying text.

    Returns (token pairs, gold token spans, system token spans). Raises
    :class:`IncomparableInputError` when the character streams differ.
    """
    gold_chars, gold_spans = _char_spans(gold)
    sys_chars, sys_spans = _char_spans(system)
    if gold_chars != sys_chars:
        raise IncomparableInputError(
            "gold and system non-whitespace character streams differ "
            f"({len(gold_chars)} vs {len(sys_chars)} chars)"
        )
    return _match_spans(gold_spans, sys_spans), gold_spans, sys_spans


def _field(value) -> str:
    return "_" if value is None else str(value)


def evaluate(gold_docs, sys_docs) -> EvalReport:
    """Aggregate CoNLL-18-style scores over parallel documents."""
    gold_docs = list(gold_docs)
    sys_docs = list(sys_docs)
    if len(gold_docs) != len(sys_docs):
        raise IncomparableInputError(
            f"{len(gold_docs)} gold documents vs {len(sys_docs)} system documents"
        )
    counts = {name: [0, 0, 0] for name in METRICS}  # gold, system, correct

    for gold, system in zip(gold_docs, sys_docs):
        pairs, gold_spans, sys_spans = align(gold, system)
        counts["Tokens"][0] += len(gold_spans)
        counts["Tokens"][1] += len(sys_spans)
        counts["Tokens"][2] += len(pairs)

        gold_sents = _sentence_spans(gold, gold_spans)
        sys_sents = _sentence_spans(system, sys_spans)
        counts["Sentences"][0] += len(gold_sents)
        counts["Sentences"][1] += len(sys_sents)
        counts["Sentences"][2] += len(_match_spans(gold_sents, sys_sents))

        for name in ("UPOS", "UFeats", "Lemmas", "UAS", "LAS"):
            counts[name][0] += len(gold.tokens)
            counts[name][1] += len(system.tokens)

        sys_of_gold = {gi: si for gi, si in pairs}
        for gi, si in pairs:
            g, s = gold.tokens[gi], system.tokens[si]
            if _field(g.upos) == _field(s.upos):
                counts["UPOS"][2] += 1
            if _field(g.feats) == _field(s.feats):
                counts["UFeats"][2] += 1
            if _field(g.lemma) == _field(s.lemma):
                counts["Lemmas"][2] += 1
            heads_align = False
            if g.head is None or s.head is None:
                heads_align = g.head is None and s.head is None
            elif g.head == ROOT or s.head == ROOT:
                heads_align = g.head == ROOT and s.head == ROOT
            else:
                heads_align = sys_of_gold.get(g.head) == s.head
            if heads_align:
                counts["UAS"][2] += 1
                if _field(g.deprel) == _field(s.deprel):
                    counts["LAS"][2] += 1

    return EvalReport(scores={
        name: Score(gold=c[0], system=c[1], correct=c[2]) for name, c in counts.items()
    })


def evaluate_ner(gold_sents, sys_sents) -> Score:
    """Micro-averaged exact-match span F1 on identical token sequences.

    Both arguments are sequences of (token texts, spans) pairs.
    """
    gold_sents = list(gold_sents)
    sys_sents = list(sys_sents)
    if len(gold_sents) != len(sys_sents):
        raise IncomparableInputError(
            f"{len(gold_sents)} gold sentences vs {len(sys_sents)} system sentences"
        )
    n_gold = n_sys = n_hit = 0
    for (gold_texts, gold_spans), (sys_texts, sys_spans) in zip(gold_sents, sys_sents):
        if list(gold_texts) != list(sys_texts):
            raise IncomparableInputError("token sequences differ; NER needs gold tokens")
        gold_set = {(s.start, s.end, s.label) for s in gold_spans}
        sys_set = {(s.start, s.end, s.label) for s in sys_spans}
        n_gold += len(gold_set)
        n_sys += len(sys_set)
        n_hit += len(gold_set & sys_set)
    return Score(gold=n_gold, system=n_sys, correct=n_hit)


def format_report(report: EvalReport, ner: Score | None = None) -> str:
    """Human-readable table."""
    rows = [f"{'Metric':<10} {'Precision':>10} {'Recall':>10} {'F1':>10}"]
    items = list(report.scores.items())
    if ner is not None:
        items.append(("NER", ner))
    for name, score in items:
        rows.append(
            f"{name:<10} {score.precision:>10.4f} {score.recall:>10.4f} {score.f1:>10.4f}"
        )
    return "\n".join(rows)


def report_lines(report: EvalReport, ner: Score | None = None) -> str:
    """Machine-readable "metric<TAB>precision<TAB>recall<TAB>f1" lines."""
    items = list(report.scores.items())
    if ner is not None:
        items.append(("NER", ner))
    return "\n".join(
        f"{name}\t{s.precision:.6f}\t{s.recall:.6f}\t{s.f1:.6f}" for name, s in items
    ) + "\n"
