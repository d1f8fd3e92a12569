"""Greedy arc-eager dependency parsing over the shared encoder.

Monotonic transition system (SHIFT, REDUCE, LEFT-ARC, RIGHT-ARC) with a
static oracle for training targets. Non-projective gold trees cannot be
derived and are skipped by callers (counted, never silently dropped
mid-batch). Decoding masks illegal actions, and a post-processing step
attaches any leftover orphans so the output is always a single-rooted
tree.

State features: encoder vectors at eight state positions (stack top and
second, first two buffer nodes, outermost children of the stack top,
leftmost child of the buffer front, head of the stack top), with a
learned null vector for empty slots, fed through one maxout layer and a
softmax over actions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonProjectiveTreeError
from .model import MultitaskModel
from .nn import linear, linear_bwd, maxout, maxout_bwd, softmax_xent

SHIFT = "SHIFT"
REDUCE = "REDUCE"
LEFT = "LEFT"
RIGHT = "RIGHT"

#: number of encoder positions in the state feature vector
N_SLOTS = 8


class ParserState:
    """Arc-eager configuration over one sentence of n tokens (ids 1..n,
    id 0 is the artificial root). Mutated in place by :func:`apply`."""

    __slots__ = ("n", "stack", "front", "heads", "labels", "lmc", "rmc")

    def __init__(self, n: int):
        self.n = n
        self.stack = [0]
        self.front = 1
        self.heads: list[int | None] = [None] * (n + 1)
        self.labels: list[str | None] = [None] * (n + 1)
        self.lmc = [0] * (n + 1)  # leftmost child id, 0 = none
        self.rmc = [0] * (n + 1)

    def buffer_empty(self) -> bool:
        return self.front > self.n

    def arcs(self) -> list[tuple[int, int, str]]:
        return [
            (self.heads[d], d, self.labels[d])
            for d in range(1, self.n + 1)
            if self.heads[d] is not None
        ]

    def _note_child(self, head: int, dep: int) -> None:
        if self.lmc[head] == 0 or dep < self.lmc[head]:
            self.lmc[head] = dep
        if dep > self.rmc[head]:
            self.rmc[head] = dep


def legal_actions(state: ParserState) -> frozenset[str]:
    """The action kinds permitted in ``state``; empty means terminal."""
    legal = set()
    top = state.stack[-1]
    if not state.buffer_empty():
        legal.add(SHIFT)
        legal.add(RIGHT)
        if top != 0 and state.heads[top] is None:
            legal.add(LEFT)
    if top != 0 and state.heads[top] is not None:
        legal.add(REDUCE)
    return frozenset(legal)


def apply(state: ParserState, kind: str, label: str | None = None) -> ParserState:
    """Apply one transition; raises ValueError on an illegal action."""
    if kind not in legal_actions(state):
        raise ValueError(f"illegal action {kind} in state (stack={state.stack}, "
                         f"front={state.front})")
    if kind == SHIFT:
        state.stack.append(state.front)
        state.front += 1
    elif kind == LEFT:
        dep = state.stack.pop()
        state.heads[dep] = state.front
        state.labels[dep] = label
        state._note_child(state.front, dep)
    elif kind == RIGHT:
        dep = state.front
        state.heads[dep] = state.stack[-1]
        state.labels[dep] = label
        state._note_child(state.stack[-1], dep)
        state.stack.append(dep)
        state.front += 1
    else:  # REDUCE
        state.stack.pop()
    return state


def is_projective(heads) -> bool:
    """Pairwise arc-crossing check; ``heads[i]`` is the head of node i+1."""
    arcs = []
    for dep, head in enumerate(heads, start=1):
        lo, hi = min(head, dep), max(head, dep)
        arcs.append((lo, hi))
    for i, (lo1, hi1) in enumerate(arcs):
        for lo2, hi2 in arcs[i + 1:]:
            if lo1 < lo2 < hi1 < hi2 or lo2 < lo1 < hi2 < hi1:
                return False
    return True


def oracle_actions(heads, labels) -> list[tuple[str, str | None]]:
    """Static oracle: the transition sequence deriving the gold tree.

    ``heads``/``labels`` are sentence-relative, head 0 = root. Raises
    :class:`NonProjectiveTreeError` when no monotonic derivation exists.
    """
    n = len(heads)
    if not is_projective(heads):
        raise NonProjectiveTreeError("gold tree has crossing arcs")
    gold_head = [None] + list(heads)
    gold_label = [None] + list(labels)
    remaining_deps = [0] * (n + 1)
    for dep in range(1, n + 1):
        remaining_deps[gold_head[dep]] += 1

    state = ParserState(n)
    actions: list[tuple[str, str | None]] = []
    while True:
        legal = legal_actions(state)
        if not legal:
            break
        top = state.stack[-1]
        front = state.front
        if LEFT in legal and gold_head[top] == front:
            action = (LEFT, gold_label[top])
            remaining_deps[front] -= 1
        elif RIGHT in legal and gold_head[front] == top:
            action = (RIGHT, gold_label[front])
            remaining_deps[top] -= 1
        elif REDUCE in legal and (state.buffer_empty() or remaining_deps[top] == 0):
            action = (REDUCE, None)
        elif SHIFT in legal:
            action = (SHIFT, None)
        else:
            raise NonProjectiveTreeError("oracle stuck: no derivation")
        actions.append(action)
        apply(state, *action)

    derived = {(state.heads[d], d, state.labels[d]) for d in range(1, n + 1)}
    gold = {(gold_head[d], d, gold_label[d]) for d in range(1, n + 1)}
    if derived != gold:
        raise NonProjectiveTreeError("oracle did not reconstruct the gold arcs")
    return actions


def state_positions(state: ParserState) -> list[int]:
    """The eight feature node ids; 0 marks an empty slot (or the root)."""
    top = state.stack[-1]
    second = state.stack[-2] if len(state.stack) > 1 else 0
    front = state.front if state.front <= state.n else 0
    front2 = state.front + 1 if state.front + 1 <= state.n else 0
    top_head = state.heads[top] if top else None
    return [
        top,
        second,
        front,
        front2,
        state.lmc[top] if top else 0,
        state.rmc[top] if top else 0,
        state.lmc[front] if front else 0,
        top_head if top_head is not None else 0,
    ]


def action_inventory(deprels) -> tuple[str, ...]:
    """Frozen action label set for the parser softmax head."""
    labels = tuple(sorted(set(deprels)))
    return (SHIFT, REDUCE) + tuple(f"{LEFT}:{l}" for l in labels) + tuple(
        f"{RIGHT}:{l}" for l in labels
    )


def split_action(action: str) -> tuple[str, str | None]:
    kind, sep, label = action.partition(":")
    return kind, (label if sep else None)


def add_parser_params(model: MultitaskModel, actions) -> tuple[str, ...]:
    """Create the parser parameters for a fixed action inventory."""
    actions = tuple(actions)
    width = model.cfg.width
    model.add_tensor("parser.null", (width,), init="zeros")
    from .nn import add_maxout

    add_maxout(model.params, "parser.hidden", N_SLOTS * width, width,
               model.cfg.pieces, model._init_rng)
    model.add_head("parser", actions, input_dim=width)
    return actions


def add_parser_head(model: MultitaskModel, deprels) -> tuple[str, ...]:
    """Create the parser parameters on the shared model."""
    return add_parser_params(model, action_inventory(deprels))


def _gather_features(model: MultitaskModel, H: np.ndarray, positions: np.ndarray):
    """Stack encoder rows for (steps, 8) sentence-relative node ids."""
    width = model.cfg.width
    null = model.params.tensors["parser.null"]
    steps = positions.shape[0]
    F = np.empty((steps, N_SLOTS * width), dtype=H.dtype)
    for slot in range(N_SLOTS):
        ids = positions[:, slot]
        block = F[:, slot * width : (slot + 1) * width]
        block[...] = null
        present = ids > 0
        block[present] = H[ids[present] - 1]
    return F


def _scatter_features(model: MultitaskModel, dH: np.ndarray, positions: np.ndarray,
                      dF: np.ndarray) -> None:
    width = model.cfg.width
    null_grad = model.params.grads["parser.null"]
    for slot in range(N_SLOTS):
        ids = positions[:, slot]
        block = dF[:, slot * width : (slot + 1) * width]
        present = ids > 0
        np.add.at(dH, ids[present] - 1, block[present])
        if (~present).any():
            null_grad += block[~present].sum(axis=0)


def _action_scores(model: MultitaskModel, F: np.ndarray):
    hidden, mo_cache = maxout(model.params, "parser.hidden", F, model.cfg.pieces)
    logits, lin_cache = linear(model.params, "head.parser", hidden)
    return logits, (mo_cache, lin_cache)


def oracle_training_steps(heads, labels, action_ids: dict[str, int]):
    """(positions, action id) pairs along the oracle derivation."""
    actions = oracle_actions(heads, labels)
    state = ParserState(len(heads))
    positions = np.zeros((len(actions), N_SLOTS), dtype=np.intp)
    ids = np.zeros(len(actions), dtype=np.intp)
    for step, (kind, label) in enumerate(actions):
        positions[step] = state_positions(state)
        name = kind if label is None else f"{kind}:{label}"
        ids[step] = action_ids[name]
        apply(state, kind, label)
    return positions, ids


class ParserTask:
    """Multitask plug-in: cross-entropy over oracle actions."""

    name = "parser"

    def loss_and_grad(self, model: MultitaskModel, unit, H, dH, scale: float):
        positions, gold_ids = unit.gold[self.name]
        if len(gold_ids) == 0:
            return 0.0
        F = _gather_features(model, H, positions)
        logits, (mo_cache, lin_cache) = _action_scores(model, F)
        loss_sum, dlogits = softmax_xent(logits, gold_ids)
        if dH is not None:
            dlogits *= model.params.dtype(scale / len(gold_ids))
            dhidden = linear_bwd(model.params, lin_cache, dlogits)
            dF = maxout_bwd(model.params, mo_cache, dhidden)
            _scatter_features(model, dH, positions, dF)
        return loss_sum / len(gold_ids)


def attach_trees(model: MultitaskModel, H: np.ndarray, ranges):
    """Decode each sentence slice of encoder rows; returns doc-level
    (heads, deprels) lists with :data:`hunpipe.doc.ROOT` for roots."""
    from .doc import ROOT

    n = H.shape[0]
    heads: list[int | None] = [None] * n
    deprels: list[str | None] = [None] * n
    for lo, hi in ranges:
        sent_heads, sent_labels = decode(model, H[lo:hi])
        for off, (h, l) in enumerate(zip(sent_heads, sent_labels)):
            heads[lo + off] = ROOT if h == 0 else lo + h - 1
            deprels[lo + off] = l
    return heads, deprels


def parse(doc, model: MultitaskModel):
    """Fill head and deprel on a sentence-split document.

    Sentences are parsed independently, so attachments never cross the
    (predicted or gold) sentence boundaries.
    """
    from dataclasses import replace as _replace

    from .doc import sentence_ranges, with_tokens

    if not doc.tokens:
        return doc
    H, _ = model.forward([t.text for t in doc.tokens])
    heads, deprels = attach_trees(model, H, sentence_ranges(doc))
    return with_tokens(
        doc,
        [_replace(t, head=heads[i], deprel=deprels[i])
         for i, t in enumerate(doc.tokens)],
    )


def decode(model: MultitaskModel, H_sent: np.ndarray):
    """Greedy masked decoding for one sentence; returns (heads, labels),
    sentence-relative with head 0 = root, post-processed into a tree."""
    n = H_sent.shape[0]
    actions = model.labels("parser")
    kind_of = [split_action(a) for a in actions]
    state = ParserState(n)
    max_steps = 2 * n + 2
    for _ in range(max_steps):
        legal = legal_actions(state)
        if not legal:
            break
        positions = np.asarray([state_positions(state)], dtype=np.intp)
        F = _gather_features(model, H_sent, positions)
        logits, _ = _action_scores(model, F)
        scores = logits[0]
        best_id = -1
        best = -np.inf
        for idx, (kind, _label) in enumerate(kind_of):
            if kind in legal and scores[idx] > best:
                best = scores[idx]
                best_id = idx
        apply(state, *kind_of[best_id])

    heads = list(state.heads)
    labels = list(state.labels)
    roots = [d for d in range(1, n + 1) if heads[d] == 0]
    orphans = [d for d in range(1, n + 1) if heads[d] is None]
    if roots:
        root = roots[0]
    else:
        root = orphans[0] if orphans else 1
        heads[root] = 0
        labels[root] = "root"
        orphans = [d for d in orphans if d != root]
    for extra in roots[1:]:
        heads[extra] = root
        labels[extra] = "dep"
    for orphan in orphans:
        heads[orphan] = root
        labels[orphan] = "dep"
    return heads[1:], labels[1:]
