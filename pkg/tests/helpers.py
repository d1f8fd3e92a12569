"""Shared test utilities: brute-force tree generation and independent
projectivity/validity oracles (kept deliberately separate from the
implementations they check)."""

from __future__ import annotations

import numpy as np


def descendants_contiguous(heads) -> bool:
    """Projectivity oracle: every node's descendant set (plus itself) must
    cover a contiguous index interval. ``heads[i]`` heads node i+1; 0=root."""
    n = len(heads)
    children = {i: [] for i in range(n + 1)}
    for dep, head in enumerate(heads, start=1):
        children[head].append(dep)

    def collect(node):
        out = {node}
        for c in children[node]:
            out |= collect(c)
        return out

    for node in range(1, n + 1):
        desc = collect(node)
        if max(desc) - min(desc) + 1 != len(desc):
            return False
    return True


def is_tree(heads) -> bool:
    """Single root, acyclic, everything reachable from the root."""
    n = len(heads)
    if n == 0:
        return True
    if sum(1 for h in heads if h == 0) != 1:
        return False
    for dep in range(1, n + 1):
        seen = set()
        node = dep
        while node != 0:
            if node in seen:
                return False
            seen.add(node)
            node = heads[node - 1]
    return True


def random_tree(rng: np.random.Generator, n: int) -> list[int]:
    """Uniform-ish random tree rooted at 0 via random attachment order."""
    order = list(rng.permutation(np.arange(1, n + 1)))
    heads = [0] * n
    added = [0]
    for node in order:
        heads[node - 1] = int(rng.choice(added))
        added.append(int(node))
    return heads


def random_projective_tree(rng: np.random.Generator, n: int, labels=("a", "b", "c")):
    """Rejection-sample a projective tree; returns (heads, labels)."""
    while True:
        heads = random_tree(rng, n)
        if descendants_contiguous(heads):
            deps = [str(rng.choice(labels)) for _ in range(n)]
            return heads, deps


def valid_bilou(tags) -> bool:
    """Independent BILOU grammar acceptor."""
    open_cls = None
    for tag in tags:
        prefix, _, cls = tag.partition("-")
        if open_cls is None:
            if prefix in ("I", "L"):
                return False
        else:
            if prefix not in ("I", "L") or cls != open_cls:
                return False
        if prefix == "B":
            open_cls = cls
        elif prefix == "I":
            pass
        else:
            open_cls = None
    return open_cls is None


def build_doc(sentences):
    """Build a fully annotated doc from per-sentence token dicts.

    Each token dict: text (required), upos, feats (string), lemma,
    head (sentence-relative, 0 = root, None = unset), deprel, ent.
    """
    from dataclasses import replace

    from hunpipe.doc import ROOT, MorphFeats, doc_from_texts, with_tokens

    texts = [tok["text"] for sent in sentences for tok in sent]
    doc = doc_from_texts(texts)
    new_tokens = []
    i = 0
    for sent in sentences:
        sent_start = i
        for j, spec in enumerate(sent):
            tok = doc.tokens[i]
            head = spec.get("head")
            if head is not None:
                head = ROOT if head == 0 else sent_start + head - 1
            feats = spec.get("feats")
            new_tokens.append(
                replace(
                    tok,
                    is_sent_start=(j == 0),
                    upos=spec.get("upos"),
                    feats=MorphFeats.parse(feats) if feats else None,
                    lemma=spec.get("lemma"),
                    head=head,
                    deprel=spec.get("deprel") if head is not None else None,
                    ent=spec.get("ent"),
                )
            )
            i += 1
    return with_tokens(doc, new_tokens)
