import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hunpipe.errors import ParseError
from hunpipe.tokenizer import (
    TokenizerRules,
    default_rules,
    load_rules,
    parse_rules,
    rules_to_text,
    tokenize,
)


@pytest.fixture(scope="module")
def rules():
    return default_rules()


def texts(doc):
    return [t.text for t in doc.tokens]


class TestBasics:
    def test_empty_text(self, rules):
        doc = tokenize("", rules)
        assert len(doc.tokens) == 0
        assert doc.source_text == ""

    def test_whitespace_only(self, rules):
        doc = tokenize("  \t\n", rules)
        assert len(doc.tokens) == 0
        assert doc.leading_ws == "  \t\n"

    def test_paren_stripping(self, rules):
        assert texts(tokenize("(alma)", rules)) == ["(", "alma", ")"]

    def test_simple_sentence(self, rules):
        assert texts(tokenize("Ez jó.", rules)) == ["Ez", "jó", "."]

    def test_abbreviation_with_number_suffix(self, rules):
        doc = tokenize("Dr. Kovács 2021-ben.", rules)
        assert texts(doc) == ["Dr.", "Kovács", "2021-ben", "."]

    def test_abbrev_behind_suffix(self, rules):
        assert texts(tokenize("stb.)", rules)) == ["stb.", ")"]

    def test_percent(self, rules):
        assert texts(tokenize("12%", rules)) == ["12", "%"]

    def test_hyphen_never_split(self, rules):
        assert texts(tokenize("2021-ben", rules)) == ["2021-ben"]
        assert texts(tokenize("kutya-macska", rules)) == ["kutya-macska"]

    def test_nested_suffixes_in_reading_order(self, rules):
        assert texts(tokenize("(alma.)", rules)) == ["(", "alma", ".", ")"]

    def test_numeric_ordinal_kept(self, rules):
        assert texts(tokenize("3. fejezet", rules)) == ["3.", "fejezet"]
        assert texts(tokenize("XIV. kerület", rules)) == ["XIV.", "kerület"]

    def test_ellipsis(self, rules):
        assert texts(tokenize("alma...", rules)) == ["alma", "..."]
        assert texts(tokenize("alma…", rules)) == ["alma", "…"]

    def test_case_insensitive_first_letter_abbrev(self, rules):
        assert texts(tokenize("dr. Nagy", rules)) == ["dr.", "Nagy"]
        assert texts(tokenize("Dr. Nagy", rules)) == ["Dr.", "Nagy"]
        # only the first letter is case-folded
        assert texts(tokenize("DR. Nagy", rules)) == ["DR", ".", "Nagy"]

    def test_exception_protects_emoticon(self, rules):
        assert texts(tokenize("jó :-)", rules)) == ["jó", ":-)"]


class TestOffsets:
    def test_offsets_and_trailing(self, rules):
        doc = tokenize("  (alma) fa", rules)
        assert doc.leading_ws == "  "
        spans = [(t.char_start, t.char_end, t.trailing_ws) for t in doc.tokens]
        assert spans == [(2, 3, ""), (3, 7, ""), (7, 8, " "), (9, 11, "")]

    def test_first_token_marks_sentence_start(self, rules):
        doc = tokenize("Ez jó.", rules)
        assert doc.tokens[0].is_sent_start is True
        assert all(t.is_sent_start is None for t in doc.tokens[1:])


class TestCustomRules:
    def test_exception_split(self):
        rules = TokenizerRules(exceptions={"ab": ("a", "b")})
        doc = tokenize("ab", rules)
        assert texts(doc) == ["a", "b"]

    def test_exception_must_concatenate(self):
        with pytest.raises(ValueError):
            TokenizerRules(exceptions={"ab": ("a", "c")})

    def test_abbrev_must_end_with_period(self):
        with pytest.raises(ValueError):
            TokenizerRules(abbreviations=frozenset(["abc"]))

    def test_character_class_pattern(self):
        rules = TokenizerRules(suffix_patterns=("[0-9]",))
        assert texts(tokenize("ab12", rules)) == ["ab", "1", "2"]

    def test_longest_match_wins(self):
        rules = TokenizerRules(suffix_patterns=(".", "..."))
        assert texts(tokenize("a...", rules)) == ["a", "..."]

    def test_no_rules_pass_through(self):
        rules = TokenizerRules()
        assert texts(tokenize("(alma)", rules)) == ["(alma)"]


class TestRuleFiles:
    def test_round_trip(self, rules, tmp_path):
        path = tmp_path / "rules.txt"
        path.write_text(rules_to_text(rules), encoding="utf-8")
        again = load_rules(path)
        assert again.prefix_patterns == rules.prefix_patterns
        assert again.suffix_patterns == rules.suffix_patterns
        assert again.abbreviations == rules.abbreviations
        assert again.exceptions == rules.exceptions

    def test_shipped_list_is_substantial(self, rules):
        assert len(rules.abbreviations) >= 200
        assert "dr." in rules.abbreviations
        assert "kb." in rules.abbreviations
        assert "pl." in rules.abbreviations
        assert "stb." in rules.abbreviations

    def test_unknown_section_rejected(self):
        with pytest.raises(ParseError):
            parse_rules("[bogus]\nx\n")

    def test_entry_before_section_rejected(self):
        with pytest.raises(ParseError):
            parse_rules("x\n[prefix]\n")


_any_text = st.text(max_size=60)


@given(_any_text)
@settings(max_examples=200, deadline=None)
def test_detokenization_identity(text):
    doc = tokenize(text, _RULES)
    rebuilt = doc.leading_ws + "".join(t.text + t.trailing_ws for t in doc.tokens)
    assert rebuilt == text


@given(_any_text)
@settings(max_examples=200, deadline=None)
def test_no_empty_tokens(text):
    doc = tokenize(text, _RULES)
    assert all(t.text for t in doc.tokens)
    assert all(not any(c.isspace() for c in t.text) for t in doc.tokens)


@given(_any_text)
@settings(max_examples=200, deadline=None)
def test_idempotence(text):
    once = [t.text for t in tokenize(text, _RULES).tokens]
    twice = [t.text for t in tokenize(" ".join(once), _RULES).tokens]
    assert twice == once


_RULES = default_rules()
