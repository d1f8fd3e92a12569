"""Greedy multitask tagger: UPOS, morphological-feature bundle, and the
binary sentence-start flag, all as softmax heads over the shared encoder.

Feature bundles are predicted as atomic labels (one canonical serialized
bundle per class), which matches how the evaluator compares them.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace

import numpy as np

from .doc import AnnotatedDoc, MorphFeats, sentence_ranges, with_tokens
from .encoder import EncoderConfig
from .model import MultitaskModel, TokenTagTask, TrainConfig, TrainUnit, train_loop
from .vectors import StaticVectors

logger = logging.getLogger(__name__)

#: re-exported here because sentence segmentation is this component's output
sentences = sentence_ranges

SENT_LABELS = ("no", "yes")


@dataclass(frozen=True)
class TagInventories:
    """Frozen label inventories collected from the training corpus."""

    upos: tuple[str, ...]
    feats: tuple[str, ...]
    sent_start: tuple[str, str] = SENT_LABELS


def _feats_label(token) -> str:
    return str(token.feats) if token.feats else "_"


def build_inventories(docs) -> TagInventories:
    upos = set()
    feats = set()
    for doc in docs:
        for token in doc.tokens:
            if token.upos is not None:
                upos.add(token.upos)
            feats.add(_feats_label(token))
    if not upos:
        raise ValueError("no UPOS annotation in the training corpus")
    return TagInventories(upos=tuple(sorted(upos)), feats=tuple(sorted(feats)))


def add_tagger_heads(model: MultitaskModel, inventories: TagInventories) -> None:
    model.add_head("upos", inventories.upos)
    model.add_head("feats", inventories.feats)
    model.add_head("sentstart", inventories.sent_start)


def tagger_units(docs, inventories: TagInventories) -> list[TrainUnit]:
    """One training unit per gold sentence."""
    upos_id = {l: i for i, l in enumerate(inventories.upos)}
    feats_id = {l: i for i, l in enumerate(inventories.feats)}
    units = []
    for doc in docs:
        for start, end in sentence_ranges(doc):
            toks = doc.tokens[start:end]
            units.append(
                TrainUnit(
                    texts=[t.text for t in toks],
                    gold={
                        "upos": np.asarray(
                            [upos_id.get(t.upos, -1) if t.upos else -1 for t in toks]
                        ),
                        "feats": np.asarray(
                            [feats_id.get(_feats_label(t), -1) for t in toks]
                        ),
                        "sentstart": np.asarray(
                            [1 if i == 0 else 0 for i in range(len(toks))]
                        ),
                    },
                )
            )
    return units


TAGGER_TASKS = [TokenTagTask("upos"), TokenTagTask("feats"), TokenTagTask("sentstart")]


def tag(doc: AnnotatedDoc, model: MultitaskModel) -> AnnotatedDoc:
    """Fill upos, feats, and sentence-start flags; token 0 is always a start."""
    if not doc.tokens:
        return doc
    upos_labels = model.labels("upos")
    feats_labels = model.labels("feats")
    H, _ = model.forward([t.text for t in doc.tokens])
    upos_pred = TokenTagTask("upos").predict(model, H)
    feats_pred = TokenTagTask("feats").predict(model, H)
    sent_pred = TokenTagTask("sentstart").predict(model, H)
    new_tokens = []
    for i, token in enumerate(doc.tokens):
        feats_str = feats_labels[feats_pred[i]]
        new_tokens.append(
            replace(
                token,
                upos=upos_labels[upos_pred[i]],
                feats=None if feats_str == "_" else MorphFeats.parse(feats_str),
                is_sent_start=True if i == 0 else bool(sent_pred[i]),
            )
        )
    return with_tokens(doc, new_tokens)


def upos_accuracy(model: MultitaskModel, dev_units) -> float:
    """Token-level UPOS accuracy over pre-built units."""
    task = TokenTagTask("upos")
    correct = 0
    total = 0
    for unit in dev_units:
        gold = np.asarray(unit.gold["upos"])
        mask = gold >= 0
        if not mask.any():
            continue
        H, _ = model.forward(unit.texts)
        pred = task.predict(model, H)
        correct += int((pred[mask] == gold[mask]).sum())
        total += int(mask.sum())
    return correct / total if total else 0.0


@dataclass
class TrainedTagger:
    model: MultitaskModel
    inventories: TagInventories
    history: list[dict]


def train_tagger(train_docs, dev_docs, config: TrainConfig, static: StaticVectors,
                 encoder_cfg: EncoderConfig | None = None) -> TrainedTagger:
    """Train the three tagging heads; returns the best-dev-UPOS epoch."""
    if not train_docs or not any(doc.tokens for doc in train_docs):
        raise ValueError("empty training set")
    encoder_cfg = encoder_cfg or EncoderConfig(static_dim=static.dim)
    inventories = build_inventories(train_docs)
    model = MultitaskModel(encoder_cfg, static, seed=config.seed)
    add_tagger_heads(model, inventories)
    units = tagger_units(train_docs, inventories)
    dev_units = tagger_units(dev_docs, inventories) if dev_docs else units
    history = train_loop(
        model, units, TAGGER_TASKS, config,
        dev_metric=lambda m: upos_accuracy(m, dev_units),
        log=lambda e: logger.info("tagger epoch %(epoch)d loss %(loss).4f dev %(dev).4f", e),
    )
    return TrainedTagger(model=model, inventories=inventories, history=history)
