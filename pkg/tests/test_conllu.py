import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hunpipe.conllu import read_conllu, write_conllu
from hunpipe.doc import ROOT, MorphFeats, Token, doc_from_texts, with_tokens
from hunpipe.errors import ParseError, UnsupportedConstructError

# Two sentences, five tokens, full annotation. Heads are sentence-relative
# in the file; the doc model stores document-level indices.
FIXTURE = """\
# newdoc
# sent_id = 1
# text = Anna almát eszik.
1\tAnna\tAnna\tPROPN\t_\tCase=Nom\t3\tnsubj\t_\t_
2\talmát\talma\tNOUN\t_\tCase=Acc\t3\tobj\t_\t_
3\teszik\teszik\tVERB\t_\tMood=Ind\t0\troot\t_\tSpaceAfter=No
4\t.\t.\tPUNCT\t_\t_\t3\tpunct\t_\t_

# sent_id = 2
# text = Fut.
1\tFut\tfut\tVERB\t_\t_\t0\troot\t_\tSpaceAfter=No
2\t.\t.\tPUNCT\t_\t_\t1\tpunct\t_\t_
"""


class TestReadFixture:
    def test_doc_and_token_counts(self):
        docs = read_conllu(FIXTURE)
        assert len(docs) == 1
        assert len(docs[0].tokens) == 6

    def test_sentence_starts(self):
        (doc,) = read_conllu(FIXTURE)
        flags = [t.is_sent_start for t in doc.tokens]
        assert flags == [True, False, False, False, True, False]

    def test_fields(self):
        (doc,) = read_conllu(FIXTURE)
        t = doc.tokens[1]
        assert (t.text, t.lemma, t.upos) == ("almát", "alma", "NOUN")
        assert t.feats == MorphFeats.parse("Case=Acc")
        assert t.head == 2 and t.deprel == "obj"

    def test_head_zero_is_root(self):
        (doc,) = read_conllu(FIXTURE)
        assert doc.tokens[2].head == ROOT
        assert doc.tokens[4].head == ROOT  # second sentence's verb

    def test_source_text_from_comments(self):
        (doc,) = read_conllu(FIXTURE)
        assert doc.source_text == "Anna almát eszik. Fut."
        assert doc.tokens[2].trailing_ws == ""  # SpaceAfter=No before "."
        assert doc.tokens[3].trailing_ws == " "  # sentence joiner
        assert doc.tokens[5].trailing_ws == ""

    def test_underscore_means_unset(self):
        (doc,) = read_conllu(FIXTURE)
        t = doc.tokens[3]
        assert t.feats is None

    def test_empty_input(self):
        assert read_conllu("") == []
        assert read_conllu(b"") == []


class TestReadErrors:
    def test_wrong_column_count_names_line(self):
        bad = "1\ta\tb\tc\td\te\tf\tg\th\n"
        with pytest.raises(ParseError) as err:
            read_conllu(bad)
        assert err.value.line == 1
        assert "line 1" in str(err.value)

    def test_multiword_range_rejected(self):
        bad = "# text = ab\n1\tab\t_\t_\t_\t_\t_\t_\t_\t_\n\n3-4\tcd\t_\t_\t_\t_\t_\t_\t_\t_\n"
        with pytest.raises(UnsupportedConstructError) as err:
            read_conllu(bad)
        assert err.value.line == 4

    def test_empty_node_rejected(self):
        bad = "3.1\tab\t_\t_\t_\t_\t_\t_\t_\t_\n"
        with pytest.raises(UnsupportedConstructError):
            read_conllu(bad)

    def test_out_of_sequence_id(self):
        bad = "2\tab\t_\t_\t_\t_\t_\t_\t_\t_\n"
        with pytest.raises(ParseError):
            read_conllu(bad)

    def test_head_outside_sentence(self):
        bad = "1\tab\t_\t_\t_\t_\t5\tdep\t_\t_\n"
        with pytest.raises(ParseError):
            read_conllu(bad)

    def test_text_comment_mismatch(self):
        bad = "# text = xyz\n1\tab\t_\t_\t_\t_\t_\t_\t_\t_\n"
        with pytest.raises(ParseError):
            read_conllu(bad)


class TestWrite:
    def test_round_trip_is_field_identical(self):
        docs = read_conllu(FIXTURE)
        again = read_conllu(write_conllu(docs))
        assert again == docs

    def test_bare_token_line(self):
        doc = doc_from_texts(["foo"])
        out = write_conllu([doc])
        assert "1\tfoo\t_\t_\t_\t_\t_\t_\t_\t_" in out

    def test_space_after_no(self):
        doc = doc_from_texts(["a", "b"], trailing="")
        # force empty trailing on the first token
        toks = list(doc.tokens)
        assert toks[0].trailing_ws == ""
        out = write_conllu([doc])
        first = next(l for l in out.split("\n") if l.startswith("1\t"))
        assert "SpaceAfter=No" in first

    def test_unusual_whitespace_survives(self):
        from hunpipe.doc import AnnotatedDoc

        tokens = (
            Token(index=0, text="a", char_start=0, char_end=1, trailing_ws="\n\t",
                  is_sent_start=True),
            Token(index=1, text="b", char_start=3, char_end=4, trailing_ws=""),
        )
        doc = AnnotatedDoc(source_text="a\n\tb", tokens=tokens)
        again = read_conllu(write_conllu([doc]))[0]
        assert again.tokens[0].trailing_ws == "\n\t"
        assert again.source_text == "a\n\tb"

    def test_ent_round_trips_via_misc(self):
        doc = doc_from_texts(["Anna", "fut"])
        toks = [
            Token(**{**doc.tokens[0].__dict__, "ent": "U-PER"}),
            doc.tokens[1],
        ]
        doc = with_tokens(doc, toks)
        again = read_conllu(write_conllu([doc]))[0]
        assert again.tokens[0].ent == "U-PER"
        assert again.tokens[1].ent is None

    def test_multiple_docs_round_trip(self):
        docs = [doc_from_texts(["egy"]), doc_from_texts(["kettő", "három"])]
        again = read_conllu(write_conllu(docs))
        assert len(again) == 2
        assert [len(d.tokens) for d in again] == [1, 2]


_token_text = st.text(
    alphabet=st.characters(blacklist_categories=("Zs", "Zl", "Zp", "Cc", "Cs")),
    min_size=1,
    max_size=6,
).filter(lambda s: not any(c.isspace() for c in s))

_upos = st.sampled_from(["NOUN", "VERB", "ADJ", "PUNCT"])


@st.composite
def _docs(draw):
    n = draw(st.integers(min_value=1, max_value=8))
    texts = [draw(_token_text) for _ in range(n)]
    doc = doc_from_texts(texts)
    sent_flags = [True] + [draw(st.booleans()) for _ in range(n - 1)]
    starts = [i for i, f in enumerate(sent_flags) if f]
    toks = []
    for i, t in enumerate(doc.tokens):
        upos = draw(st.one_of(st.none(), _upos))
        # head stays inside the token's own sentence
        sent_start = max(s for s in starts if s <= i)
        sent_end = min((s for s in starts if s > i), default=n)
        candidates = [ROOT] + [j for j in range(sent_start, sent_end) if j != i]
        head = draw(st.one_of(st.none(), st.sampled_from(candidates)))
        toks.append(
            Token(
                **{
                    **t.__dict__,
                    "is_sent_start": sent_flags[i],
                    "upos": upos,
                    "lemma": draw(st.one_of(st.none(), _token_text)),
                    "head": head,
                    "deprel": None if head is None else "dep",
                }
            )
        )
    return with_tokens(doc, toks)


@given(_docs())
@settings(max_examples=60, deadline=None)
def test_round_trip_property(doc):
    (again,) = read_conllu(write_conllu([doc]))
    assert len(again.tokens) == len(doc.tokens)
    for a, b in zip(again.tokens, doc.tokens):
        assert (a.text, a.upos, a.lemma, a.head, a.deprel, a.feats) == (
            b.text, b.upos, b.lemma, b.head, b.deprel, b.feats,
        )
        assert a.is_sent_start == b.is_sent_start
        assert a.trailing_ws == b.trailing_ws
    assert again.source_text == doc.source_text
