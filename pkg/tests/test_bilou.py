"""BILOU codec: exact encoding, total repairing decoder.

The exhaustive cases below implement the acceptance check directly:
decode(encode(s)) == s for every grammatically valid sequence of length
<= 4 over two entity classes, and the decoder never raises over any of
the 5^4 single-class sequences.
"""

import itertools

import pytest

from hunpipe.bilou import bilou_to_spans, normalize_tag, spans_to_bilou
from hunpipe.doc import EntitySpan


def valid_next(prev):
    """BILOU grammar: which tags may follow ``prev`` (None = sequence start)."""
    if prev is None or prev == "O" or prev[0] in ("U", "L"):
        return lambda t: t == "O" or t[0] in ("B", "U")
    # inside an open span: continue or close with the same class
    cls = prev.partition("-")[2]
    return lambda t: t in (f"I-{cls}", f"L-{cls}")


def is_valid_sequence(tags):
    prev = None
    for t in tags:
        if not valid_next(prev)(t):
            return False
        prev = t
    return prev is None or prev == "O" or prev[0] in ("U", "L")


TWO_CLASS_TAGS = ["O"] + [f"{p}-{c}" for p in "BILU" for c in ("PER", "LOC")]


class TestEncode:
    def test_two_token_span(self):
        spans = [EntitySpan(0, 2, "PER")]
        assert spans_to_bilou(spans, 3) == ["B-PER", "L-PER", "O"]

    def test_unit_span(self):
        assert spans_to_bilou([EntitySpan(1, 2, "LOC")], 2) == ["O", "U-LOC"]

    def test_long_span(self):
        assert spans_to_bilou([EntitySpan(0, 4, "ORG")], 4) == [
            "B-ORG", "I-ORG", "I-ORG", "L-ORG",
        ]

    def test_overlap_rejected(self):
        with pytest.raises(ValueError):
            spans_to_bilou([EntitySpan(0, 2, "A"), EntitySpan(1, 3, "B")], 4)


class TestDecodeRepair:
    def test_dangling_initial_i(self):
        assert bilou_to_spans(["I-PER", "L-PER"]) == [EntitySpan(0, 2, "PER")]

    def test_unclosed_at_end(self):
        assert bilou_to_spans(["B-PER", "I-PER"]) == [EntitySpan(0, 2, "PER")]

    def test_unclosed_at_o(self):
        assert bilou_to_spans(["B-PER", "O"]) == [EntitySpan(0, 1, "PER")]

    def test_class_switch_mid_span(self):
        assert bilou_to_spans(["B-PER", "I-LOC", "L-LOC"]) == [
            EntitySpan(0, 1, "PER"),
            EntitySpan(1, 3, "LOC"),
        ]

    def test_aliases(self):
        assert normalize_tag("E-PER") == "L-PER"
        assert normalize_tag("S-PER") == "U-PER"
        assert bilou_to_spans(["B-PER", "E-PER", "S-LOC"]) == [
            EntitySpan(0, 2, "PER"),
            EntitySpan(2, 3, "LOC"),
        ]

    def test_malformed_tag(self):
        with pytest.raises(ValueError):
            normalize_tag("Q-PER")
        with pytest.raises(ValueError):
            normalize_tag("B")


class TestExhaustive:
    def test_round_trip_on_all_valid_sequences(self):
        checked = 0
        for n in range(0, 5):
            for tags in itertools.product(TWO_CLASS_TAGS, repeat=n):
                if not is_valid_sequence(tags):
                    continue
                spans = bilou_to_spans(tags)
                assert spans_to_bilou(spans, n) == list(tags)
                checked += 1
        assert checked > 100

    def test_decoder_total_over_single_class_sequences(self):
        tags_one = ["O", "B-X", "I-X", "L-X", "U-X"]
        for tags in itertools.product(tags_one, repeat=4):
            spans = bilou_to_spans(tags)
            # output is always a valid, sorted, non-overlapping span set
            prev_end = 0
            for s in spans:
                assert s.start >= prev_end and s.end <= 4
                prev_end = s.end
