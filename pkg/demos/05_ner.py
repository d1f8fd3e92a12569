"""BILOU entity recognition with grammatical decoding and previous-entity
state features."""

from hunpipe import TrainConfig, spans_to_bilou
from hunpipe.datagen import build_vectors, generate
from hunpipe.encoder import EncoderConfig
from hunpipe.ner import recognize_sentences, span_f1, train_ner

corpus = generate(n_train=150, n_dev=30, n_test=30, seed=9)
static = build_vectors(corpus, dim=48)
cfg = EncoderConfig(static_dim=48, feature_dim=16, norm_rows=1024,
                    affix_rows=256, width=32, pieces=2)

config = TrainConfig(learning_rate=3e-3, epochs=10, batch_size=8,
                     dropout=0.05, seed=0)
trained = train_ner(corpus.ner_train, corpus.ner_dev, config, static, cfg)

predicted = recognize_sentences(trained.model, corpus.ner_test)
print(f"test span F1: {span_f1(corpus.ner_test, predicted):.3f}\n")

for (texts, gold), spans in list(zip(corpus.ner_test, predicted))[:5]:
    if not spans:
        continue
    print(" ".join(texts))
    print("  gold:", [(s.label, " ".join(texts[s.start:s.end])) for s in gold])
    print("  pred:", [(s.label, " ".join(texts[s.start:s.end])) for s in spans])
    print("  tags:", spans_to_bilou(spans, len(texts)))
    print()
