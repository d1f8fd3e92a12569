"""Suffix-rule lemmatizer learned from (form, tag, lemma, count) tuples.

The rule engine induces strip/append suffix transforms from the longest
common prefix of each form-lemma pair and stores their frequencies in a
per-tag trie keyed by the reversed characters of the masked, lowercased
form. Three refinements on top of the basic engine: leading digit runs
are masked ("2021-ben" -> "0000-ben") so inflected numbers share rules,
sentence-initial non-proper-noun forms are lowercased before lookup, and
among competing transforms the most frequent one wins.
"""

from __future__ import annotations

from dataclasses import dataclass


def mask_digits(form: str) -> tuple[str, str]:
    """Replace the maximal leading digit run with zeros; returns the run."""
    i = 0
    while i < len(form) and form[i].isdecimal():
        i += 1
    if i == 0:
        return form, ""
    return "0" * i + form[i:], form[:i]


@dataclass(frozen=True, order=True)
class LemmaTransform:
    """Strip ``strip_len`` characters from the form's end, add ``append``."""

    strip_len: int
    append: str

    def applicable(self, form: str) -> bool:
        return self.strip_len <= len(form)

    def apply(self, form: str) -> str:
        return form[: len(form) - self.strip_len] + self.append


def transform_between(form: str, lemma: str) -> LemmaTransform:
    """The suffix transform mapping ``form`` to ``lemma`` via their LCP."""
    lcp = 0
    for a, b in zip(form, lemma):
        if a != b:
            break
        lcp += 1
    return LemmaTransform(strip_len=len(form) - lcp, append=lemma[lcp:])


class _Node:
    __slots__ = ("children", "counts")

    def __init__(self):
        self.children: dict[str, _Node] = {}
        self.counts: dict[LemmaTransform, int] = {}


class LemmaRuleTrie:
    """Per-tag tries over reversed masked forms; immutable after learning."""

    def __init__(self):
        self.roots: dict[str, _Node] = {}

    def __bool__(self) -> bool:
        return bool(self.roots)

    def _insert(self, tag: str, reversed_form: str, transform: LemmaTransform, count: int):
        node = self.roots.setdefault(tag, _Node())
        node.counts[transform] = node.counts.get(transform, 0) + count
        for ch in reversed_form:
            node = node.children.setdefault(ch, _Node())
            node.counts[transform] = node.counts.get(transform, 0) + count

    def deepest(self, tag: str, reversed_form: str) -> _Node | None:
        node = self.roots.get(tag)
        if node is None:
            return None
        best = node if node.counts else None
        for ch in reversed_form:
            node = node.children.get(ch)
            if node is None:
                break
            if node.counts:
                best = node
        return best


def learn(tuples) -> LemmaRuleTrie:
    """Build the rule trie from (form, tag, lemma, count) tuples.

    Forms and lemmas are lowercased and digit-masked; each tuple's count
    is added to its transform's tally at every node along the reversed
    form's path, root included.
    """
    trie = LemmaRuleTrie()
    for form, tag, lemma, count in tuples:
        if not lemma:
            raise ValueError(f"empty lemma for form {form!r}")
        masked_form, _ = mask_digits(form.lower())
        masked_lemma, _ = mask_digits(lemma.lower())
        transform = transform_between(masked_form, masked_lemma)
        trie._insert(tag, masked_form[::-1], transform, count)
    return trie


def lemmatize(text: str, tag: str, is_sent_start: bool, trie: LemmaRuleTrie,
              proper_tag: str = "PROPN") -> str:
    """Total lemmatization: falls back to the case-normalized form itself."""
    processed = text
    if is_sent_start and tag != proper_tag:
        processed = processed.lower()
    lowered = processed.lower()
    masked, run = mask_digits(lowered)

    transform = LemmaTransform(0, "")
    node = trie.deepest(tag, masked[::-1]) if trie else None
    if node is not None:
        candidates = [
            (t, c) for t, c in node.counts.items() if t.applicable(masked)
        ]
        if candidates:
            transform = min(candidates, key=lambda tc: (-tc[1], tc[0].strip_len, tc[0].append))[0]

    if tag == proper_tag and processed[:1].isupper():
        base, _ = mask_digits(processed)  # keep original casing of the kept prefix
    else:
        base = masked
    result = transform.apply(base)
    if run and result.startswith("0" * len(run)):
        result = run + result[len(run):]
    return result if result else lowered


def rules_to_lines(trie: LemmaRuleTrie) -> list[str]:
    """Dump as sorted "tag<TAB>reversed-suffix<TAB>strip<TAB>append<TAB>count" lines."""
    lines = []

    def walk(tag: str, prefix: str, node: _Node):
        for transform, count in node.counts.items():
            lines.append(f"{tag}\t{prefix}\t{transform.strip_len}\t{transform.append}\t{count}")
        for ch, child in node.children.items():
            walk(tag, prefix + ch, child)

    for tag, root in trie.roots.items():
        walk(tag, "", root)
    lines.sort()
    return lines


def rules_from_lines(lines) -> LemmaRuleTrie:
    """Rebuild a trie from its dump; exact inverse of :func:`rules_to_lines`."""
    trie = LemmaRuleTrie()
    for line in lines:
        if not line.strip():
            continue
        tag, suffix, strip_len, append, count = line.split("\t")
        node = trie.roots.setdefault(tag, _Node())
        for ch in suffix:
            node = node.children.setdefault(ch, _Node())
        transform = LemmaTransform(int(strip_len), append)
        node.counts[transform] = node.counts.get(transform, 0) + int(count)
    return trie


def training_consistency(trie: LemmaRuleTrie, tuples) -> float:
    """Fraction of unambiguous (masked form, tag) pairs whose training lemma
    is reproduced; pairs with conflicting gold lemmas are excluded."""
    gold: dict[tuple[str, str], set[str]] = {}
    for form, tag, lemma, _count in tuples:
        masked, _ = mask_digits(form.lower())
        gold.setdefault((masked, tag), set()).add(lemma.lower())
    unambiguous = [(key, lemmas.pop()) for key, lemmas in gold.items() if len(lemmas) == 1]
    if not unambiguous:
        return 1.0
    hits = 0
    for (masked, tag), lemma in unambiguous:
        predicted = lemmatize(masked, tag, False, trie)
        masked_lemma, _ = mask_digits(lemma)
        if predicted == masked_lemma:
            hits += 1
    return hits / len(unambiguous)
