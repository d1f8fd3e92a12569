"""CoNLL-U and NER TSV: reading, writing, round trips."""

from hunpipe import read_conllu, read_ner_tsv, write_conllu, write_ner_tsv
from hunpipe.datagen import generate

corpus = generate(n_train=5, n_dev=1, n_test=1, seed=42)
doc = corpus.train[0]

conllu = write_conllu([doc])
print("--- CoNLL-U (first 12 lines) ---")
print("\n".join(conllu.split("\n")[:12]))

again = read_conllu(conllu)[0]
assert again == doc
print("round trip is field-identical\n")

# NER TSV: IOB2 input is accepted, BILOU is written.
tsv_in = """\
Kovács\tB-PER
Anna\tI-PER
Szegeden\tB-LOC
tanult\tO
.\tO
"""
sents = read_ner_tsv(tsv_in)
print("--- parsed spans ---")
for texts, spans in sents:
    for span in spans:
        print(f"  {span.label}: {' '.join(texts[span.start:span.end])}")
print("\n--- written back as BILOU ---")
print(write_ner_tsv(sents))
assert read_ner_tsv(write_ner_tsv(sents)) == sents
