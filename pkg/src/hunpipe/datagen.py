"""Deterministic synthetic Hungarian-like treebank for tests and demos.

Generates UD-style annotated documents with real agglutinative
morphology (vowel-harmony case endings, low-vowel lengthening such as
"alma" -> "almát", verb conjugation), genuine ambiguity ("vár" as noun
or verb, "az" as determiner or pronoun, "-nak" as dative or 3rd-plural),
suffixed numerals ("2021-ben"), abbreviations, entity mentions, and a
small share of non-projective sentences. The raw text follows normal
Hungarian spacing, so the rule tokenizer can be scored against the gold
tokenization.

This stands in for license-restricted corpora in offline environments;
every generator is seeded and stable across runs.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .doc import ROOT, AnnotatedDoc, EntitySpan, MorphFeats, Token
from .hashing import fnv1a_64
from .vectors import StaticVectors

BACK, FRONT, FRONT_R = "back", "front", "front_r"


@dataclass(frozen=True)
class Noun:
    lemma: str
    harmony: str
    link: str  # linking vowel before -t/-k, "" for vowel-final stems


@dataclass(frozen=True)
class Verb:
    lemma: str
    harmony: str
    past: str  # past-tense 3sg suffix: "t", "ott" or "ett"


NOUNS = [
    Noun("alma", BACK, ""), Noun("kutya", BACK, ""), Noun("macska", BACK, ""),
    Noun("szoba", BACK, ""), Noun("iskola", BACK, ""), Noun("hajó", BACK, ""),
    Noun("autó", BACK, ""), Noun("ház", BACK, "a"), Noun("ablak", BACK, "o"),
    Noun("asztal", BACK, "o"), Noun("vonat", BACK, "o"), Noun("pad", BACK, "o"),
    Noun("program", BACK, "o"), Noun("bolt", BACK, "o"), Noun("csapat", BACK, "o"),
    Noun("kert", FRONT, "e"), Noun("gyerek", FRONT, "e"), Noun("ember", FRONT, "e"),
    Noun("szék", FRONT, "e"), Noun("kép", FRONT, "e"), Noun("egyetem", FRONT, "e"),
    Noun("épület", FRONT, "e"), Noun("könyv", FRONT, "e"), Noun("körte", FRONT, ""),
    Noun("vár", BACK, "a"), Noun("út", BACK, "a"), Noun("étterem", FRONT, "e"),
]

VERBS = [
    Verb("lát", BACK, "ott"), Verb("vár", BACK, "t"), Verb("fut", BACK, "ott"),
    Verb("olvas", BACK, "ott"), Verb("tanul", BACK, "t"), Verb("mond", BACK, "ott"),
    Verb("ad", BACK, "ott"), Verb("kap", BACK, "ott"), Verb("rak", BACK, "ott"),
    Verb("kér", FRONT, "t"), Verb("néz", FRONT, "ett"), Verb("beszél", FRONT, "t"),
    Verb("ért", FRONT, "ett"), Verb("keres", FRONT, "ett"), Verb("szeret", FRONT, "ett"),
    Verb("emel", FRONT, "t"), Verb("épít", FRONT, "ett"), Verb("ül", FRONT_R, "t"),
]

ADJECTIVES = ["nagy", "kis", "szép", "új", "régi", "gyors", "lassú", "piros",
              "zöld", "fehér", "fekete", "okos", "magas", "híres"]
ADVERBS = ["ma", "tegnap", "most", "itt", "ott", "gyorsan", "lassan", "nagyon"]
POSTPOSITIONS = ["alatt", "mellett", "után", "előtt", "között"]
PERSON_FIRST = ["Anna", "Péter", "Kata", "Zoltán", "Eszter", "Balázs", "János", "Júlia"]
PERSON_LAST = ["Kovács", "Nagy", "Szabó", "Tóth", "Horváth", "Varga"]
PLACES = [
    Noun("Budapest", FRONT, "e"), Noun("Szeged", FRONT, "e"),
    Noun("Debrecen", FRONT, "e"), Noun("Pécs", FRONT, "e"),
    Noun("Sopron", BACK, "o"), Noun("Eger", FRONT, "e"),
]
ORGS = [("Magyar", "Posta"), ("Nemzeti", "Bank"), ("Európai", "Unió"),
        ("Szegedi", "Egyetem")]
YEARS = ["1998", "2005", "2010", "2015", "2019", "2020", "2021", "2023"]

_LOW_FINAL = {"a": "á", "e": "é"}

_CASE_SUFFIX = {
    # case: (back, front, front_rounded)
    "Ine": ("ban", "ben", "ben"),
    "Sub": ("ra", "re", "re"),
    "Dat": ("nak", "nek", "nek"),
    "Ela": ("ból", "ből", "ből"),
    "All": ("hoz", "hez", "höz"),
}


def _harmony_pick(options, harmony):
    return options[{BACK: 0, FRONT: 1, FRONT_R: 2}[harmony]]


def _lengthen(stem: str) -> str:
    if stem and stem[-1] in _LOW_FINAL:
        return stem[:-1] + _LOW_FINAL[stem[-1]]
    return stem


def inflect_noun(noun: Noun, case: str) -> str:
    """Inflect for one of Nom/Acc/Sup/Ine/Sub/Dat/Ela/All."""
    stem = noun.lemma
    if case == "Nom":
        return stem
    if case == "Acc":
        if noun.link == "":
            return _lengthen(stem) + "t"
        return stem + noun.link + "t"
    if case == "Sup":
        if stem[-1] in "aeiouáéíóúöőüű":
            return _lengthen(stem) + "n"
        return stem + _harmony_pick(("on", "en", "ön"), noun.harmony)
    stem = _lengthen(stem) if stem[-1] in _LOW_FINAL else stem
    return stem + _harmony_pick(_CASE_SUFFIX[case], noun.harmony)


def verb_form(verb: Verb, person: int, number: str, tense: str) -> str:
    stem = verb.lemma
    if tense == "Past":
        return stem + verb.past  # 3sg only in the grammar
    if person == 3 and number == "Sing":
        return stem
    if person == 3 and number == "Plur":
        return stem + _harmony_pick(("nak", "nek", "nek"), verb.harmony)
    if person == 1 and number == "Sing":
        return stem + _harmony_pick(("ok", "ek", "ök"), verb.harmony)
    raise ValueError(f"unsupported conjugation {person}/{number}/{tense}")


def _tok(text, lemma, upos, feats, head, deprel, ent=None):
    return {
        "text": text, "lemma": lemma, "upos": upos, "feats": feats,
        "head": head, "deprel": deprel, "ent": ent,
    }


def _noun_feats(case):
    return f"Case={case}|Number=Sing"


def _verb_feats(person, number, tense):
    return f"Mood=Ind|Number={number}|Person={person}|Tense={tense}|VerbForm=Fin"


class _SentenceFactory:
    """Stateful template sampler; all randomness from one seeded generator."""

    def __init__(self, rng: np.random.Generator):
        self.rng = rng

    def pick(self, seq):
        return seq[int(self.rng.integers(0, len(seq)))]

    def noun_phrase(self, head_slot, case, deprel, *, allow_det=True, out=None):
        """Append determiner + optional adjective + noun; returns head index
        (1-based position in ``out``) of the noun."""
        toks = []
        noun = self.pick(NOUNS)
        adj = self.pick(ADJECTIVES) if self.rng.random() < 0.45 else None
        if allow_det and self.rng.random() < 0.8:
            after_det = adj if adj is not None else noun.lemma
            det = "az" if after_det[0] in "aáeéiíoóöőuúüű" else "a"
            toks.append(_tok(det, det, "DET", "Definite=Def|PronType=Art", None, "det"))
        if adj is not None:
            toks.append(_tok(adj, adj, "ADJ", "Degree=Pos", None, "amod"))
        toks.append(_tok(inflect_noun(noun, case), noun.lemma, "NOUN",
                         _noun_feats(case), head_slot, deprel))
        base = len(out)
        out.extend(toks)
        noun_pos = base + len(toks)  # 1-based
        for i, t in enumerate(toks[:-1]):
            t["head"] = noun_pos
        return noun_pos

    def verb(self, tense=None, number="Sing", person=3):
        v = self.pick(VERBS)
        tense = tense or ("Past" if self.rng.random() < 0.4 else "Pres")
        if tense == "Past":
            person, number = 3, "Sing"
        form = verb_form(v, person, number, tense)
        return v, form, _verb_feats(person, number, tense)

    def person(self, out, head_slot, deprel):
        """PER entity, sometimes surname + given name (Hungarian order)."""
        base = len(out)
        if self.rng.random() < 0.35:
            last, first = self.pick(PERSON_LAST), self.pick(PERSON_FIRST)
            out.append(_tok(last, last, "PROPN", "Case=Nom|Number=Sing", head_slot, deprel))
            out.append(_tok(first, first, "PROPN", "Case=Nom|Number=Sing",
                            base + 1, "flat"))
            return base + 1, EntitySpan(base, base + 2, "PER")
        name = self.pick(PERSON_FIRST)
        out.append(_tok(name, name, "PROPN", "Case=Nom|Number=Sing", head_slot, deprel))
        return base + 1, EntitySpan(base, base + 1, "PER")

    # --- templates; each returns (tokens, entity spans) ---

    def transitive(self):
        out, ents = [], []
        subj = self.noun_phrase(None, "Nom", "nsubj", out=out)
        v, form, feats = self.verb()
        out.append(_tok(form, v.lemma, "VERB", feats, 0, "root"))
        verb_pos = len(out)
        out[subj - 1]["head"] = verb_pos
        self.noun_phrase(verb_pos, "Acc", "obj", out=out)
        out.append(_tok(".", ".", "PUNCT", None, verb_pos, "punct"))
        return out, ents

    def person_location(self):
        out, ents = [], []
        subj_pos, span = self.person(out, None, "nsubj")
        ents.append(span)
        place = self.pick(PLACES)
        case = self.pick(["Sup", "Ine"])
        out.append(_tok(inflect_noun(place, case), place.lemma, "PROPN",
                        _noun_feats(case), None, "obl",
                        ent="LOC"))
        loc_pos = len(out)
        ents.append(EntitySpan(loc_pos - 1, loc_pos, "LOC"))
        v, form, feats = self.verb()
        out.append(_tok(form, v.lemma, "VERB", feats, 0, "root"))
        verb_pos = len(out)
        out[subj_pos - 1]["head"] = verb_pos
        out[loc_pos - 1]["head"] = verb_pos
        out.append(_tok(".", ".", "PUNCT", None, verb_pos, "punct"))
        return out, ents

    def postposition(self):
        out, ents = [], []
        noun_pos = self.noun_phrase(None, "Nom", "obl", out=out)
        pp = self.pick(POSTPOSITIONS)
        out.append(_tok(pp, pp, "ADP", None, noun_pos, "case"))
        v, form, feats = self.verb()
        out.append(_tok(form, v.lemma, "VERB", feats, 0, "root"))
        verb_pos = len(out)
        out[noun_pos - 1]["head"] = verb_pos
        if self.rng.random() < 0.4:
            adv = self.pick(ADVERBS)
            out.append(_tok(adv, adv, "ADV", None, verb_pos, "advmod"))
        out.append(_tok(".", ".", "PUNCT", None, verb_pos, "punct"))
        return out, ents

    def subordinate(self):
        out, ents = [], []
        subj_pos, span = self.person(out, None, "nsubj")
        ents.append(span)
        out.append(_tok("mondta", "mond", "VERB",
                        _verb_feats(3, "Sing", "Past"), 0, "root"))
        main_pos = len(out)
        out[subj_pos - 1]["head"] = main_pos
        out.append(_tok(",", ",", "PUNCT", None, None, "punct"))
        comma_pos = len(out)
        out.append(_tok("hogy", "hogy", "SCONJ", None, None, "mark"))
        mark_pos = len(out)
        inner_subj = self.noun_phrase(None, "Nom", "nsubj", out=out)
        v, form, feats = self.verb(tense="Pres")
        out.append(_tok(form, v.lemma, "VERB", feats, main_pos, "ccomp"))
        sub_pos = len(out)
        out[comma_pos - 1]["head"] = sub_pos
        out[mark_pos - 1]["head"] = sub_pos
        out[inner_subj - 1]["head"] = sub_pos
        out.append(_tok(".", ".", "PUNCT", None, main_pos, "punct"))
        return out, ents

    def coordination(self):
        out, ents = [], []
        first = self.noun_phrase(None, "Nom", "nsubj", out=out)
        out.append(_tok("és", "és", "CCONJ", None, None, "cc"))
        cc_pos = len(out)
        second = self.noun_phrase(first, "Nom", "conj", allow_det=False, out=out)
        out[cc_pos - 1]["head"] = second
        v = self.pick(VERBS)
        form = verb_form(v, 3, "Plur", "Pres")
        out.append(_tok(form, v.lemma, "VERB", _verb_feats(3, "Plur", "Pres"), 0, "root"))
        verb_pos = len(out)
        out[first - 1]["head"] = verb_pos
        out.append(_tok(".", ".", "PUNCT", None, verb_pos, "punct"))
        return out, ents

    def dated(self):
        """Exercises masked-numeral lemmatization: '2021-ben' -> '2021'."""
        out, ents = [], []
        subj_pos, span = self.person(out, None, "nsubj")
        ents.append(span)
        year = self.pick(YEARS)
        out.append(_tok(f"{year}-ben", year, "NUM", "Case=Ine|NumType=Card",
                        None, "obl"))
        year_pos = len(out)
        place = self.pick(PLACES)
        out.append(_tok(inflect_noun(place, "Sup"), place.lemma, "PROPN",
                        _noun_feats("Sup"), None, "obl", ent="LOC"))
        loc_pos = len(out)
        ents.append(EntitySpan(loc_pos - 1, loc_pos, "LOC"))
        v = self.pick(VERBS)
        out.append(_tok(verb_form(v, 3, "Sing", "Past"), v.lemma, "VERB",
                        _verb_feats(3, "Sing", "Past"), 0, "root"))
        verb_pos = len(out)
        out[subj_pos - 1]["head"] = verb_pos
        out[year_pos - 1]["head"] = verb_pos
        out[loc_pos - 1]["head"] = verb_pos
        out.append(_tok(".", ".", "PUNCT", None, verb_pos, "punct"))
        return out, ents

    def abbreviated(self):
        out, ents = [], []
        out.append(_tok("Dr.", "dr.", "X", "Abbr=Yes", None, "nmod"))
        last = self.pick(PERSON_LAST)
        out.append(_tok(last, last, "PROPN", "Case=Nom|Number=Sing", None, "nsubj"))
        name_pos = len(out)
        out[0]["head"] = name_pos
        ents.append(EntitySpan(name_pos - 1, name_pos, "PER"))
        out.append(_tok("kb.", "kb.", "ADV", "Abbr=Yes", None, "advmod"))
        adv_pos = len(out)
        count = str(int(self.rng.integers(2, 90)))
        out.append(_tok(count, count, "NUM", "NumType=Card", None, "nummod"))
        num_pos = len(out)
        out[adv_pos - 1]["head"] = num_pos
        noun = self.pick(NOUNS)
        out.append(_tok(inflect_noun(noun, "Acc"), noun.lemma, "NOUN",
                        _noun_feats("Acc"), None, "obj"))
        obj_pos = len(out)
        out[num_pos - 1]["head"] = obj_pos
        v, form, feats = self.verb(tense="Pres")
        out.append(_tok(form, v.lemma, "VERB", feats, 0, "root"))
        verb_pos = len(out)
        out[name_pos - 1]["head"] = verb_pos
        out[obj_pos - 1]["head"] = verb_pos
        out.append(_tok(".", ".", "PUNCT", None, verb_pos, "punct"))
        return out, ents

    def org_subject(self):
        out, ents = [], []
        out.append(_tok("A", "a", "DET", "Definite=Def|PronType=Art", None, "det"))
        adj, org_head = self.pick(ORGS)
        out.append(_tok(adj, adj, "PROPN", "Case=Nom|Number=Sing", None, "amod"))
        adj_pos = len(out)
        out.append(_tok(org_head, org_head, "PROPN", "Case=Nom|Number=Sing",
                        None, "nsubj"))
        head_pos = len(out)
        out[0]["head"] = head_pos
        out[adj_pos - 1]["head"] = head_pos
        ents.append(EntitySpan(adj_pos - 1, head_pos, "ORG"))
        self.noun_phrase(None, self.pick(["Dat", "Ela", "All"]), "obl", out=out)
        obl_pos = len(out)
        v, form, feats = self.verb()
        out.append(_tok(form, v.lemma, "VERB", feats, 0, "root"))
        verb_pos = len(out)
        out[head_pos - 1]["head"] = verb_pos
        out[obl_pos - 1]["head"] = verb_pos
        out.append(_tok(".", ".", "PUNCT", None, verb_pos, "punct"))
        return out, ents

    def pronoun_subject(self):
        out, ents = [], []
        pron = self.pick(["ő", "ez", "az", "mi", "ők"])
        ptype = "Prs" if pron in ("ő", "mi", "ők") else "Dem"
        number = "Plur" if pron in ("mi", "ők") else "Sing"
        out.append(_tok(pron, pron, "PRON", f"Number={number}|PronType={ptype}",
                        None, "nsubj"))
        v = self.pick(VERBS)
        if number == "Plur":
            form = verb_form(v, 3, "Plur", "Pres")
            feats = _verb_feats(3, "Plur", "Pres")
        else:
            form = verb_form(v, 3, "Sing", "Pres")
            feats = _verb_feats(3, "Sing", "Pres")
        out.append(_tok(form, v.lemma, "VERB", feats, 0, "root"))
        verb_pos = len(out)
        out[0]["head"] = verb_pos
        if self.rng.random() < 0.5:
            adv = self.pick(ADVERBS)
            out.append(_tok(adv, adv, "ADV", None, verb_pos, "advmod"))
        out.append(_tok(self.pick([".", "!"]), None, "PUNCT", None, verb_pos, "punct"))
        out[-1]["lemma"] = out[-1]["text"]
        return out, ents

    def nonprojective(self):
        """Fronted locative attaching into the subordinate clause."""
        out, ents = [], []
        place = self.pick(PLACES)
        out.append(_tok(inflect_noun(place, "Sup"), place.lemma, "PROPN",
                        _noun_feats("Sup"), None, "obl", ent="LOC"))
        ents.append(EntitySpan(0, 1, "LOC"))
        out.append(_tok("mondta", "mond", "VERB", _verb_feats(3, "Sing", "Past"),
                        0, "root"))
        main_pos = len(out)
        subj_pos, span = self.person(out, main_pos, "nsubj")
        ents.append(span)
        out.append(_tok(",", ",", "PUNCT", None, None, "punct"))
        comma_pos = len(out)
        out.append(_tok("hogy", "hogy", "SCONJ", None, None, "mark"))
        mark_pos = len(out)
        name = self.pick(PERSON_FIRST)
        out.append(_tok(name, name, "PROPN", "Case=Nom|Number=Sing", None, "nsubj"))
        inner_pos = len(out)
        ents.append(EntitySpan(inner_pos - 1, inner_pos, "PER"))
        v, form, feats = self.verb(tense="Pres")
        out.append(_tok(form, v.lemma, "VERB", feats, main_pos, "ccomp"))
        sub_pos = len(out)
        out[0]["head"] = sub_pos  # crossing arc
        out[comma_pos - 1]["head"] = sub_pos
        out[mark_pos - 1]["head"] = sub_pos
        out[inner_pos - 1]["head"] = sub_pos
        out.append(_tok(".", ".", "PUNCT", None, main_pos, "punct"))
        return out, ents

    def sample(self):
        roll = self.rng.random()
        if roll < 0.01:
            return self.nonprojective()
        templates = [
            (0.22, self.transitive),
            (0.16, self.person_location),
            (0.14, self.postposition),
            (0.12, self.subordinate),
            (0.10, self.coordination),
            (0.09, self.dated),
            (0.09, self.abbreviated),
            (0.05, self.org_subject),
            (0.03, self.pronoun_subject),
        ]
        total = sum(w for w, _ in templates)
        point = self.rng.random() * total
        acc = 0.0
        for weight, template in templates:
            acc += weight
            if point <= acc:
                return template()
        return templates[-1][1]()


def _capitalize_first(sent):
    first = sent[0]
    text = first["text"]
    if text[:1].islower():
        first["text"] = text[0].upper() + text[1:]


def _build_doc(sentences) -> AnnotatedDoc:
    tokens: list[Token] = []
    pieces: list[str] = []
    pos = 0
    flat: list[tuple[dict, int, bool]] = []  # (spec, sent_start_idx, first)
    idx = 0
    for sent in sentences:
        start = idx
        for j, spec in enumerate(sent):
            flat.append((spec, start, j == 0))
            idx += 1
    n = len(flat)
    for i, (spec, sent_start, first) in enumerate(flat):
        text = spec["text"]
        if i + 1 < n:
            next_spec = flat[i + 1][0]
            next_is_first = flat[i + 1][2]
            no_space = (not next_is_first) and next_spec["text"] in (".", ",", "!", "?", "…")
            ws = "" if no_space else " "
        else:
            ws = ""
        head = spec["head"]
        if head is not None:
            head = ROOT if head == 0 else sent_start + head - 1
        feats = spec["feats"]
        tokens.append(
            Token(
                index=i,
                text=text,
                char_start=pos,
                char_end=pos + len(text),
                trailing_ws=ws,
                is_sent_start=first,
                upos=spec["upos"],
                feats=MorphFeats.parse(feats) if feats else None,
                lemma=spec["lemma"],
                head=head,
                deprel=spec["deprel"] if head is not None else None,
                ent=None,
            )
        )
        pos += len(text) + len(ws)
        pieces.append(text)
        pieces.append(ws)
    return AnnotatedDoc(source_text="".join(pieces), tokens=tuple(tokens))


@dataclass
class SyntheticCorpus:
    train: list[AnnotatedDoc]
    dev: list[AnnotatedDoc]
    test: list[AnnotatedDoc]
    ner_train: list[tuple[list[str], list[EntitySpan]]]
    ner_dev: list[tuple[list[str], list[EntitySpan]]]
    ner_test: list[tuple[list[str], list[EntitySpan]]]


def _make_sentences(rng, n):
    factory = _SentenceFactory(rng)
    sents = []
    for _ in range(n):
        toks, ents = factory.sample()
        _capitalize_first(toks)
        sents.append((toks, ents))
    return sents


def generate(n_train: int = 900, n_dev: int = 100, n_test: int = 100,
             seed: int = 0) -> SyntheticCorpus:
    """One document per split, plus per-sentence NER data from the same
    distribution."""
    rng = np.random.default_rng(seed)
    splits = {}
    ner_splits = {}
    for name, count in (("train", n_train), ("dev", n_dev), ("test", n_test)):
        sents = _make_sentences(rng, count)
        splits[name] = [_build_doc([toks for toks, _ in sents])]
        ner_splits[name] = [([t["text"] for t in toks], ents) for toks, ents in sents]
    return SyntheticCorpus(
        train=splits["train"], dev=splits["dev"], test=splits["test"],
        ner_train=ner_splits["train"], ner_dev=ner_splits["dev"],
        ner_test=ner_splits["test"],
    )


def build_vectors(corpus: SyntheticCorpus, dim: int = 300) -> StaticVectors:
    """Deterministic pseudo-embeddings for every lowercased form in the
    corpus: each token's vector is seeded by its own hash, so the table
    is stable regardless of corpus size or order."""
    vocab = set()
    for docs in (corpus.train, corpus.dev, corpus.test):
        for doc in docs:
            for token in doc.tokens:
                vocab.add(token.text.lower())
    for sents in (corpus.ner_train, corpus.ner_dev, corpus.ner_test):
        for texts, _ in sents:
            vocab.update(t.lower() for t in texts)
    table = {}
    for word in sorted(vocab):
        word_rng = np.random.default_rng(fnv1a_64(word.encode("utf-8")) % (2**63))
        table[word] = (word_rng.standard_normal(dim) * 0.3).astype(np.float32)
    return StaticVectors(dim=dim, table=table)
