import warnings

import numpy as np
import pytest

from helpers import build_doc, valid_bilou
from hunpipe.doc import EntitySpan
from hunpipe.encoder import EncoderConfig
from hunpipe.model import TrainConfig
from hunpipe.ner import (
    _gold_arrays,
    _transition_masks,
    recognize,
    recognize_sentences,
    span_f1,
    tag_inventory,
    train_ner,
)
from hunpipe.vectors import StaticVectors

TOY_CFG = EncoderConfig(static_dim=4, feature_dim=8, norm_rows=256, affix_rows=128,
                        width=16, pieces=2)

PER = ["Anna", "Péter", "Kata", "Zoltán", "Eszter"]
LOC = ["Budapest", "Szeged", "Pécs", "Győr", "Debrecen"]
VERB = ["fut", "ül", "áll", "néz", "vár"]


def toy_sents(n=20):
    """PER name + verb + LOC + '.'; entities are single capitalized tokens."""
    sents = []
    for i in range(n):
        texts = [PER[i % 5], VERB[(i // 5) % 5], LOC[(i + 2) % 5], "."]
        spans = [EntitySpan(0, 1, "PER"), EntitySpan(2, 3, "LOC")]
        sents.append((texts, spans))
    # a two-token organization in some sentences
    for i in range(n // 4):
        texts = ["A", "Magyar", "Posta", "vár", "."]
        spans = [EntitySpan(1, 3, "ORG")]
        sents.append((texts, spans))
    return sents


@pytest.fixture(scope="module")
def trained():
    sents = toy_sents()
    config = TrainConfig(learning_rate=5e-3, epochs=60, batch_size=8, dropout=0.0, seed=0)
    result = train_ner(sents, sents, config, StaticVectors(TOY_CFG.static_dim), TOY_CFG)
    return result, sents


class TestInventory:
    def test_tag_inventory_shape(self):
        labels = tag_inventory(["LOC", "PER"])
        assert labels == ("O", "B-LOC", "I-LOC", "L-LOC", "U-LOC",
                          "B-PER", "I-PER", "L-PER", "U-PER")


class TestGoldArrays:
    def test_summary_updates_only_after_l_or_u(self):
        labels = tag_inventory(["PER"])
        ids = {l: i for i, l in enumerate(labels)}
        texts = ["a", "b", "c", "d", "e"]
        spans = [EntitySpan(0, 2, "PER"), EntitySpan(3, 4, "PER")]
        tag_ids, prev_ids, summaries = _gold_arrays(texts, spans, ids, labels)
        # tags: B-PER L-PER O U-PER O
        assert [labels[t] for t in tag_ids] == ["B-PER", "L-PER", "O", "U-PER", "O"]
        assert summaries == [None, None, (0, 2), (0, 2), (3, 4)]
        assert prev_ids[0] == len(labels)  # virtual start
        assert prev_ids[1] == ids["B-PER"]


class TestMasks:
    def test_grammar_transitions(self):
        labels = tag_inventory(["PER", "LOC"])
        ids = {l: i for i, l in enumerate(labels)}
        mid, last = _transition_masks(labels)
        start = len(labels)
        assert mid[start, ids["O"]] and mid[start, ids["B-PER"]] and mid[start, ids["U-LOC"]]
        assert not mid[start, ids["I-PER"]] and not mid[start, ids["L-PER"]]
        assert mid[ids["B-PER"], ids["I-PER"]] and mid[ids["B-PER"], ids["L-PER"]]
        assert not mid[ids["B-PER"], ids["I-LOC"]]
        assert not mid[ids["B-PER"], ids["O"]]
        # at the last token an open span must close, a new one must be unit
        assert last[ids["B-PER"], ids["L-PER"]] and not last[ids["B-PER"], ids["I-PER"]]
        assert last[start, ids["U-PER"]] and not last[start, ids["B-PER"]]


class TestRecognize:
    def test_memorized_spans(self, trained):
        result, sents = trained
        predicted = recognize_sentences(result.model, sents)
        assert span_f1(sents, predicted) >= 0.95
        assert predicted[0] == sents[0][1]

    def test_predictions_always_grammatical(self, trained):
        result, sents = trained
        for texts, _spans in sents:
            doc = build_doc([[{"text": t} for t in texts]])
            tagged, _ = recognize(doc, result.model)
            assert valid_bilou([t.ent for t in tagged.tokens])

    def test_grammatical_even_with_random_weights(self):
        from hunpipe.model import MultitaskModel
        from hunpipe.ner import add_ner_head

        model = MultitaskModel(TOY_CFG, StaticVectors(TOY_CFG.static_dim), seed=99)
        add_ner_head(model, tag_inventory(["PER", "LOC"]))
        rng = np.random.default_rng(0)
        for trial in range(20):
            n = int(rng.integers(1, 8))
            texts = [f"t{rng.integers(100)}" for _ in range(n)]
            doc = build_doc([[{"text": t} for t in texts]])
            tagged, spans = recognize(doc, model)
            assert valid_bilou([t.ent for t in tagged.tokens])
            for s in spans:
                assert 0 <= s.start < s.end <= n

    def test_spans_respect_sentence_boundaries(self, trained):
        result, _ = trained
        doc = build_doc([
            [{"text": "Anna"}, {"text": "fut"}],
            [{"text": "Budapest"}, {"text": "."}],
        ])
        _, spans = recognize(doc, result.model)
        for span in spans:
            assert not (span.start < 2 <= span.end), "span crosses sentence boundary"

    def test_empty_doc(self, trained):
        from hunpipe.doc import AnnotatedDoc

        result, _ = trained
        doc = AnnotatedDoc(source_text="", tokens=())
        tagged, spans = recognize(doc, result.model)
        assert spans == [] and len(tagged.tokens) == 0


class TestTrainNer:
    def test_all_o_corpus_predicts_all_o(self):
        sents = [(["egy", "mondat", "."], []) for _ in range(5)]
        config = TrainConfig(epochs=3, dropout=0.0, seed=0)
        result = train_ner(sents, sents, config, StaticVectors(TOY_CFG.static_dim), TOY_CFG)
        predicted = recognize_sentences(result.model, sents)
        assert all(spans == [] for spans in predicted)

    def test_combined_corpora_concatenate(self):
        first = toy_sents(4)
        second = [(["Szeged", "szép"], [EntitySpan(0, 1, "LOC")])]
        config = TrainConfig(epochs=2, dropout=0.0, seed=0)
        result = train_ner(first + second, [], config,
                           StaticVectors(TOY_CFG.static_dim), TOY_CFG)
        assert "B-ORG" in result.model.labels("ner")
        assert "U-LOC" in result.model.labels("ner")

    def test_unseen_dev_label_warns_and_maps_to_o(self):
        train = [(["Anna", "fut"], [EntitySpan(0, 1, "PER")])] * 3
        dev = [(["Pécs", "szép"], [EntitySpan(0, 1, "LOC")])]
        config = TrainConfig(epochs=2, dropout=0.0, seed=0)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            train_ner(train, dev, config, StaticVectors(TOY_CFG.static_dim), TOY_CFG)
        assert any("LOC" in str(w.message) for w in caught)

    def test_empty_training_set_rejected(self):
        with pytest.raises(ValueError):
            train_ner([], [], TrainConfig(), StaticVectors(4), TOY_CFG)
