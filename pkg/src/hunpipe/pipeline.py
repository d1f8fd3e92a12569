"""Pipeline assembly and the two-step training strategy.

Training step one (optional) pre-trains the encoder and the tagging and
sentence-boundary heads on a large transcribed corpus; step two continues
on the gold treebank with the parser head added and all weights updating.
Lemma rules are then learned from the available gold lemmas, and an
entity recognizer is trained last (warm-started from the tagger encoder)
when an entity corpus is configured.

Annotation runs the stages in order: tokenize, embed/encode once, tag
(UPOS, feature bundles, sentence starts), parse each predicted sentence,
lemmatize using the predicted tag and sentence flag, then recognize
entities.
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .doc import ROOT, AnnotatedDoc, MorphFeats, sentence_ranges, with_tokens
from .encoder import EncoderConfig
from .errors import NonProjectiveTreeError, PipelineError
from .lemmatizer import LemmaRuleTrie, learn, lemmatize
from .model import MultitaskModel, TokenTagTask, TrainConfig, TrainUnit, train_loop
from .ner import TrainedNer, recognize, train_ner
from .parser import (
    ParserTask,
    add_parser_head,
    attach_trees,
    decode,
    oracle_training_steps,
)
from .tagger import (
    TAGGER_TASKS,
    TagInventories,
    add_tagger_heads,
    tagger_units,
    upos_accuracy,
)
from .tokenizer import TokenizerRules, default_rules, load_rules, tokenize
from .vectors import StaticVectors, load_word_vectors

logger = logging.getLogger(__name__)


@dataclass
class PipelineConfig:
    """Everything a training run needs; load from JSON via :func:`load_config`."""

    train_path: str = ""
    dev_path: str = ""
    test_path: str = ""
    pretrain_path: str | None = None
    ner_train_path: str | None = None
    ner_dev_path: str | None = None
    vectors_path: str | None = None
    rules_path: str | None = None
    model_dir: str | None = None

    with_parser: bool = True
    with_lemmatizer: bool = True
    lemma_key_feats: bool = False

    width: int = 128
    pieces: int = 3
    feature_dim: int = 64
    norm_rows: int = 4096
    affix_rows: int = 1024

    learning_rate: float = 2e-3
    batch_size: int = 16
    epochs: int = 30
    pretrain_epochs: int = 10
    dropout: float = 0.1
    seed: int = 0
    block_sentences: int = 3

    def train_config(self, epochs: int | None = None) -> TrainConfig:
        return TrainConfig(
            learning_rate=self.learning_rate, batch_size=self.batch_size,
            epochs=self.epochs if epochs is None else epochs,
            dropout=self.dropout, seed=self.seed,
        )

    def encoder_config(self, static_dim: int) -> EncoderConfig:
        return EncoderConfig(
            static_dim=static_dim, feature_dim=self.feature_dim,
            norm_rows=self.norm_rows, affix_rows=self.affix_rows,
            width=self.width, pieces=self.pieces,
        )


def load_config(path) -> PipelineConfig:
    with open(path, encoding="utf-8") as handle:
        data = json.load(handle)
    known = {f for f in PipelineConfig.__dataclass_fields__}
    unknown = set(data) - known
    if unknown:
        raise PipelineError(f"unknown config keys: {sorted(unknown)}")
    return PipelineConfig(**data)


@dataclass
class Pipeline:
    """A trained, frozen pipeline: everything `annotate` needs."""

    rules: TokenizerRules
    model: MultitaskModel
    inventories: TagInventories
    lemma_trie: LemmaRuleTrie
    ner_model: MultitaskModel | None = None
    lemma_key_feats: bool = False
    counters: dict = field(default_factory=dict)

    def annotate_text(self, text: str) -> AnnotatedDoc:
        return self.annotate_doc(tokenize(text, self.rules))

    def annotate_doc(self, doc: AnnotatedDoc) -> AnnotatedDoc:
        if not doc.tokens:
            return doc
        model = self.model
        texts = [t.text for t in doc.tokens]
        H, _ = model.forward(texts)
        upos_labels = model.labels("upos")
        feats_labels = model.labels("feats")
        upos_ids = TokenTagTask("upos").predict(model, H)
        feats_ids = TokenTagTask("feats").predict(model, H)
        sent_ids = TokenTagTask("sentstart").predict(model, H)
        starts = [True] + [bool(s) for s in sent_ids[1:]]

        n = len(texts)
        heads: list[int | None] = [None] * n
        deprels: list[str | None] = [None] * n
        if "parser" in model.heads:
            boundaries = [i for i, s in enumerate(starts) if s] + [n]
            ranges = list(zip(boundaries, boundaries[1:]))
            heads, deprels = attach_trees(model, H, ranges)

        new_tokens = []
        for i, token in enumerate(doc.tokens):
            upos = upos_labels[upos_ids[i]]
            feats_str = feats_labels[feats_ids[i]]
            lemma = None
            if self.lemma_trie is not None:
                key = f"{upos}|{feats_str}" if self.lemma_key_feats else upos
                lemma = lemmatize(token.text, key, starts[i], self.lemma_trie)
            new_tokens.append(
                replace(
                    token,
                    upos=upos,
                    feats=None if feats_str == "_" else MorphFeats.parse(feats_str),
                    is_sent_start=starts[i],
                    lemma=lemma,
                    head=heads[i],
                    deprel=deprels[i],
                    ent=None,
                )
            )
        out = with_tokens(doc, new_tokens)
        if self.ner_model is not None:
            out, _spans = recognize(out, self.ner_model)
        return out

    def annotate_docs(self, docs, jobs: int = 1) -> list[AnnotatedDoc]:
        if jobs <= 1:
            return [self.annotate_doc(d) for d in docs]
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(self.annotate_doc, docs))


def _sentence_gold(doc: AnnotatedDoc, start: int, end: int):
    """Sentence-relative (heads, deprels) or None when annotation is partial."""
    heads = []
    deprels = []
    for token in doc.tokens[start:end]:
        if token.head is None:
            return None
        heads.append(0 if token.head == ROOT else token.head - start + 1)
        deprels.append(token.deprel)
    return heads, deprels


def _blocks(doc: AnnotatedDoc, block_sentences: int):
    ranges = sentence_ranges(doc)
    for i in range(0, len(ranges), block_sentences):
        group = ranges[i : i + block_sentences]
        yield group[0][0], group[-1][1], group


def joint_units(docs, inventories: TagInventories, action_ids: dict[str, int] | None,
                block_sentences: int, counters: dict | None = None) -> list[TrainUnit]:
    """Multi-sentence training blocks carrying tagging and parser gold."""
    upos_id = {l: i for i, l in enumerate(inventories.upos)}
    feats_id = {l: i for i, l in enumerate(inventories.feats)}
    counters = counters if counters is not None else {}
    units = []
    for doc in docs:
        for lo, hi, group in _blocks(doc, block_sentences):
            toks = doc.tokens[lo:hi]
            gold = {
                "upos": np.asarray(
                    [upos_id.get(t.upos, -1) if t.upos else -1 for t in toks]
                ),
                "feats": np.asarray(
                    [feats_id.get(str(t.feats) if t.feats else "_", -1) for t in toks]
                ),
                "sentstart": np.asarray(
                    [1 if t.is_sent_start else 0 for t in toks]
                ),
            }
            if action_ids is not None:
                positions_parts = []
                ids_parts = []
                for s, e in group:
                    sent_gold = _sentence_gold(doc, s, e)
                    if sent_gold is None:
                        continue
                    try:
                        positions, ids = oracle_training_steps(*sent_gold, action_ids)
                    except NonProjectiveTreeError:
                        counters["nonprojective_skipped"] = (
                            counters.get("nonprojective_skipped", 0) + 1
                        )
                        continue
                    offset = s - lo
                    shifted = np.where(positions > 0, positions + offset, 0)
                    positions_parts.append(shifted)
                    ids_parts.append(ids)
                if positions_parts:
                    gold["parser"] = (
                        np.concatenate(positions_parts),
                        np.concatenate(ids_parts),
                    )
            units.append(TrainUnit(texts=[t.text for t in toks], gold=gold))
    return units


def attachment_accuracy(model: MultitaskModel, docs) -> tuple[float, float]:
    """(UAS, LAS) on gold tokenization and gold sentence boundaries."""
    total = correct_u = correct_l = 0
    for doc in docs:
        if not doc.tokens:
            continue
        H, _ = model.forward([t.text for t in doc.tokens])
        for s, e in sentence_ranges(doc):
            gold = _sentence_gold(doc, s, e)
            if gold is None:
                continue
            heads, deprels = decode(model, H[s:e])
            for i, (gh, gl) in enumerate(zip(*gold)):
                total += 1
                if heads[i] == gh:
                    correct_u += 1
                    if deprels[i] == gl:
                        correct_l += 1
    if total == 0:
        return 0.0, 0.0
    return correct_u / total, correct_l / total


def _deprel_inventory(docs) -> tuple[str, ...]:
    labels = {t.deprel for doc in docs for t in doc.tokens if t.deprel is not None}
    return tuple(sorted(labels))


def train_pipeline(config: PipelineConfig, *, train_docs=None, dev_docs=None,
                   pretrain_docs=None, ner_train=None, ner_dev=None,
                   static: StaticVectors | None = None,
                   rules: TokenizerRules | None = None) -> Pipeline:
    """Run the full training recipe. Corpora can be passed directly (tests,
    notebooks) or read from the configured paths."""
    import os

    from .conllu import read_conllu
    from .nertsv import read_ner_tsv

    for label in ("train_path", "dev_path", "test_path", "pretrain_path",
                  "ner_train_path", "ner_dev_path", "vectors_path", "rules_path"):
        path = getattr(config, label)
        if path and not os.path.exists(path):
            raise PipelineError(f"{label} does not exist: {path}")

    def read_docs(path):
        with open(path, encoding="utf-8") as handle:
            return read_conllu(handle.read())

    if train_docs is None:
        if not config.train_path:
            raise PipelineError("no training corpus configured")
        train_docs = read_docs(config.train_path)
    if dev_docs is None:
        dev_docs = read_docs(config.dev_path) if config.dev_path else []
    if pretrain_docs is None and config.pretrain_path:
        pretrain_docs = read_docs(config.pretrain_path)
    if ner_train is None and config.ner_train_path:
        with open(config.ner_train_path, encoding="utf-8") as handle:
            ner_train = read_ner_tsv(handle.read())
    if ner_dev is None and config.ner_dev_path:
        with open(config.ner_dev_path, encoding="utf-8") as handle:
            ner_dev = read_ner_tsv(handle.read())
    if rules is None:
        rules = load_rules(config.rules_path) if config.rules_path else default_rules()
    if static is None:
        static = (load_word_vectors(config.vectors_path)
                  if config.vectors_path else StaticVectors(dim=0))

    if not train_docs or not any(d.tokens for d in train_docs):
        raise PipelineError("training corpus is empty")

    counters: dict = {}
    all_gold_docs = list(train_docs) + list(pretrain_docs or [])
    from .tagger import build_inventories

    inventories = build_inventories(all_gold_docs)
    encoder_cfg = config.encoder_config(static.dim)
    model = MultitaskModel(encoder_cfg, static, seed=config.seed)
    add_tagger_heads(model, inventories)
    action_ids = None
    if config.with_parser:
        deprels = _deprel_inventory(train_docs)
        actions = add_parser_head(model, deprels)
        action_ids = {a: i for i, a in enumerate(actions)}

    dev_tag_units = (tagger_units(dev_docs, inventories)
                     if dev_docs else tagger_units(train_docs, inventories))

    if pretrain_docs:
        units = joint_units(pretrain_docs, inventories, None,
                            config.block_sentences, counters)
        logger.info("step 1: pre-training tagger on %d blocks", len(units))
        train_loop(model, units, TAGGER_TASKS, config.train_config(config.pretrain_epochs),
                   dev_metric=lambda m: upos_accuracy(m, dev_tag_units))

    units = joint_units(train_docs, inventories, action_ids,
                        config.block_sentences, counters)
    tasks = list(TAGGER_TASKS) + ([ParserTask()] if action_ids else [])
    eval_docs = dev_docs if dev_docs else train_docs

    def dev_metric(m):
        upos = upos_accuracy(m, dev_tag_units)
        if not action_ids:
            return upos
        _, las = attachment_accuracy(m, eval_docs)
        return (upos + las) / 2.0

    logger.info("step 2: training on %d blocks (%d skipped non-projective)",
                len(units), counters.get("nonprojective_skipped", 0))
    train_loop(model, units, tasks, config.train_config(), dev_metric=dev_metric)

    lemma_trie = LemmaRuleTrie()
    if config.with_lemmatizer:
        from collections import Counter

        tally: Counter = Counter()
        for doc in all_gold_docs:
            for t in doc.tokens:
                if t.lemma is None or t.upos is None:
                    continue
                feats_str = str(t.feats) if t.feats else "_"
                key = f"{t.upos}|{feats_str}" if config.lemma_key_feats else t.upos
                tally[(t.text, key, t.lemma)] += 1
        lemma_trie = learn(
            (form, key, lemma, count) for (form, key, lemma), count in sorted(tally.items())
        )

    ner_model = None
    if ner_train:
        trained = train_ner(ner_train, ner_dev or [], config.train_config(),
                            static, encoder_cfg, base_model=model)
        ner_model = trained.model

    pipeline = Pipeline(
        rules=rules, model=model, inventories=inventories, lemma_trie=lemma_trie,
        ner_model=ner_model, lemma_key_feats=config.lemma_key_feats,
        counters=counters,
    )
    if config.model_dir:
        from .bundle import save

        save(pipeline, config.model_dir, config)
    return pipeline
