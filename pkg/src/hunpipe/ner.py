"""Greedy BILOU entity recognizer over the shared encoder.

The decision input for each token is its encoder vector, a learned
embedding of the previous tag, and the mean encoder vector of the most
recently completed entity (a learned null vector before the first one).
Decoding masks tags whose transition from the previous tag would break
the BILOU grammar, so predicted sequences are always well-formed and
spans never cross sentence boundaries.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, replace

import numpy as np

from .bilou import bilou_to_spans, spans_to_bilou
from .doc import AnnotatedDoc, EntitySpan, sentence_ranges, with_tokens
from .encoder import EncoderConfig
from .model import MultitaskModel, TrainConfig, TrainUnit, train_loop
from .nn import linear, linear_bwd, softmax_xent
from .vectors import StaticVectors

logger = logging.getLogger(__name__)

TAG_EMBED_DIM = 32

#: a sentence is a pair: token texts and their entity spans
NerSentence = tuple[list[str], list[EntitySpan]]


def tag_inventory(classes) -> tuple[str, ...]:
    labels = ["O"]
    for cls in sorted(set(classes)):
        labels.extend(f"{p}-{cls}" for p in "BILU")
    return tuple(labels)


def add_ner_head(model: MultitaskModel, labels, tag_dim: int = TAG_EMBED_DIM) -> None:
    width = model.cfg.width
    model.add_tensor("ner.tagemb", (len(labels) + 1, tag_dim), init="embed")
    model.add_tensor("ner.nullsum", (width,), init="zeros")
    model.add_head("ner", labels, input_dim=width + tag_dim + width)


def _transition_masks(labels) -> tuple[np.ndarray, np.ndarray]:
    """(prev_id or start) x tag legality, for mid-sentence and last-token."""
    k = len(labels)
    mid = np.zeros((k + 1, k), dtype=bool)  # row k: virtual sentence start
    last = np.zeros((k + 1, k), dtype=bool)
    for prev in range(k + 1):
        open_cls = None
        if prev < k and labels[prev][:1] in ("B", "I"):
            open_cls = labels[prev].partition("-")[2]
        for idx, tag in enumerate(labels):
            prefix, _, cls = tag.partition("-")
            if open_cls is None:
                mid[prev, idx] = tag == "O" or prefix in ("B", "U")
                last[prev, idx] = tag == "O" or prefix == "U"
            else:
                mid[prev, idx] = prefix in ("I", "L") and cls == open_cls
                last[prev, idx] = prefix == "L" and cls == open_cls
    return mid, last


def _gold_arrays(texts, spans, label_ids, labels):
    """Teacher-forcing inputs: gold tag ids, previous-tag ids, and the
    token span of the last completed entity before each position."""
    n = len(texts)
    k = len(labels)
    tags = spans_to_bilou(spans, n)
    tag_ids = np.asarray([label_ids[t] for t in tags], dtype=np.intp)
    prev_ids = np.empty(n, dtype=np.intp)
    summaries: list[tuple[int, int] | None] = []
    last_done: tuple[int, int] | None = None
    for i in range(n):
        prev_ids[i] = k if i == 0 else tag_ids[i - 1]
        summaries.append(last_done)
        prefix = tags[i][:1]
        if prefix in ("L", "U"):
            for span in spans:
                if span.end == i + 1:
                    last_done = (span.start, span.end)
                    break
    return tag_ids, prev_ids, summaries


def ner_units(sentences_with_spans, labels) -> list[TrainUnit]:
    label_ids = {l: i for i, l in enumerate(labels)}
    units = []
    for texts, spans in sentences_with_spans:
        if not texts:
            continue
        units.append(
            TrainUnit(
                texts=list(texts),
                gold={"ner": _gold_arrays(texts, spans, label_ids, labels)},
            )
        )
    return units


def _decision_matrix(model: MultitaskModel, H, prev_ids, summaries):
    width = model.cfg.width
    tagemb = model.params.tensors["ner.tagemb"]
    nullsum = model.params.tensors["ner.nullsum"]
    n = H.shape[0]
    X = np.empty((n, width + tagemb.shape[1] + width), dtype=H.dtype)
    X[:, :width] = H
    X[:, width : width + tagemb.shape[1]] = tagemb[prev_ids]
    for i, span in enumerate(summaries):
        X[i, width + tagemb.shape[1] :] = (
            nullsum if span is None else H[span[0] : span[1]].mean(axis=0)
        )
    return X


class NerTask:
    name = "ner"

    def loss_and_grad(self, model: MultitaskModel, unit, H, dH, scale: float):
        tag_ids, prev_ids, summaries = unit.gold[self.name]
        n = len(tag_ids)
        if n == 0:
            return 0.0
        X = _decision_matrix(model, H, prev_ids, summaries)
        logits, cache = linear(model.params, "head.ner", X)
        loss_sum, dlogits = softmax_xent(logits, tag_ids)
        if dH is not None:
            width = model.cfg.width
            tag_dim = model.params.tensors["ner.tagemb"].shape[1]
            dlogits *= model.params.dtype(scale / n)
            dX = linear_bwd(model.params, cache, dlogits)
            dH += dX[:, :width]
            np.add.at(model.params.grads["ner.tagemb"], prev_ids,
                      dX[:, width : width + tag_dim])
            null_grad = model.params.grads["ner.nullsum"]
            for i, span in enumerate(summaries):
                chunk = dX[i, width + tag_dim :]
                if span is None:
                    null_grad += chunk
                else:
                    dH[span[0] : span[1]] += chunk / (span[1] - span[0])
        return loss_sum / n


def _decode_sentence(model: MultitaskModel, H_sent, labels, masks) -> list[str]:
    mid_mask, last_mask = masks
    width = model.cfg.width
    tagemb = model.params.tensors["ner.tagemb"]
    nullsum = model.params.tensors["ner.nullsum"]
    k = len(labels)
    n = H_sent.shape[0]
    tags: list[str] = []
    prev = k
    last_done: tuple[int, int] | None = None
    open_start = None
    for i in range(n):
        summary = nullsum if last_done is None else H_sent[last_done[0] : last_done[1]].mean(axis=0)
        x = np.concatenate([H_sent[i], tagemb[prev], summary])[None, :]
        logits, _ = linear(model.params, "head.ner", x)
        scores = logits[0].astype(np.float64)
        mask = last_mask[prev] if i == n - 1 else mid_mask[prev]
        scores[~mask] = -np.inf
        choice = int(scores.argmax())
        tag = labels[choice]
        prefix = tag[:1]
        if prefix == "B":
            open_start = i
        elif prefix == "U":
            last_done = (i, i + 1)
            open_start = None
        elif prefix == "L":
            last_done = (open_start if open_start is not None else i, i + 1)
            open_start = None
        tags.append(tag)
        prev = choice
    return tags


def recognize(doc: AnnotatedDoc, model: MultitaskModel) -> tuple[AnnotatedDoc, list[EntitySpan]]:
    """Tag entities; returns the annotated doc and doc-level entity spans."""
    if not doc.tokens:
        return doc, []
    labels = model.labels("ner")
    masks = _transition_masks(labels)
    H, _ = model.forward([t.text for t in doc.tokens])
    all_tags: list[str] = []
    all_spans: list[EntitySpan] = []
    for start, end in sentence_ranges(doc):
        tags = _decode_sentence(model, H[start:end], labels, masks)
        all_tags.extend(tags)
        for span in bilou_to_spans(tags):
            all_spans.append(EntitySpan(span.start + start, span.end + start, span.label))
    tokens = [replace(t, ent=all_tags[i]) for i, t in enumerate(doc.tokens)]
    return with_tokens(doc, tokens), all_spans


def span_f1(gold_sents, predicted_spans_per_sent) -> float:
    """Micro-averaged exact-match span F1 over parallel sentence lists."""
    n_gold = n_sys = n_hit = 0
    for (texts, gold_spans), sys_spans in zip(gold_sents, predicted_spans_per_sent):
        gold = set((s.start, s.end, s.label) for s in gold_spans)
        sys = set((s.start, s.end, s.label) for s in sys_spans)
        n_gold += len(gold)
        n_sys += len(sys)
        n_hit += len(gold & sys)
    if n_gold + n_sys == 0:
        return 1.0
    return 2.0 * n_hit / (n_gold + n_sys)


def _sentence_doc(texts) -> AnnotatedDoc:
    from .doc import doc_from_texts

    doc = doc_from_texts(texts)
    tokens = [replace(t, is_sent_start=(i == 0)) for i, t in enumerate(doc.tokens)]
    return with_tokens(doc, tokens)


def recognize_sentences(model: MultitaskModel, sents) -> list[list[EntitySpan]]:
    out = []
    for texts, _spans in sents:
        if not texts:
            out.append([])
            continue
        _, spans = recognize(_sentence_doc(texts), model)
        out.append(spans)
    return out


@dataclass
class TrainedNer:
    model: MultitaskModel
    history: list[dict]


def clone_encoder(base: MultitaskModel, seed: int) -> MultitaskModel:
    """Fresh model initialized from a trained encoder (heads not copied)."""
    clone = MultitaskModel(base.cfg, base.static, seed=seed)
    for name, tensor in base.params.tensors.items():
        if name in clone.params.tensors:
            clone.params.tensors[name][...] = tensor
    return clone


def train_ner(train_sents, dev_sents, config: TrainConfig, static: StaticVectors,
              encoder_cfg: EncoderConfig | None = None,
              base_model: MultitaskModel | None = None) -> TrainedNer:
    """Teacher-forced training; the best dev span-F1 epoch is returned.

    ``train_sents``/``dev_sents`` are (texts, spans) pairs; multiple
    corpora can simply be concatenated. Dev labels missing from the
    training inventory are dropped with a warning.
    """
    train_sents = [s for s in train_sents if s[0]]
    if not train_sents:
        raise ValueError("empty training set")
    classes = {span.label for _, spans in train_sents for span in spans}
    labels = tag_inventory(classes)
    if base_model is not None:
        model = clone_encoder(base_model, seed=config.seed)
    else:
        cfg = encoder_cfg or EncoderConfig(static_dim=static.dim)
        model = MultitaskModel(cfg, static, seed=config.seed)
    add_ner_head(model, labels)

    dev_clean = []
    for texts, spans in dev_sents or []:
        kept = [s for s in spans if s.label in classes]
        if len(kept) != len(spans):
            dropped = sorted({s.label for s in spans if s.label not in classes})
            warnings.warn(f"dev entity classes {dropped} not in training data; "
                          f"treating those spans as O")
        dev_clean.append((texts, kept))
    eval_sents = dev_clean if dev_clean else train_sents

    units = ner_units(train_sents, labels)
    history = train_loop(
        model, units, [NerTask()], config,
        dev_metric=lambda m: span_f1(eval_sents, recognize_sentences(m, eval_sents)),
        log=lambda e: logger.info("ner epoch %(epoch)d loss %(loss).4f dev %(dev).4f", e),
    )
    return TrainedNer(model=model, history=history)
