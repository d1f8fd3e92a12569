"""Shared-task-style evaluation and the throughput benchmark."""

from hunpipe import PipelineConfig, benchmark, evaluate, format_report
from hunpipe.datagen import build_vectors, generate
from hunpipe.pipeline import train_pipeline

corpus = generate(n_train=250, n_dev=40, n_test=60, seed=13)
static = build_vectors(corpus, dim=64)
config = PipelineConfig(width=48, feature_dim=24, norm_rows=2048, affix_rows=512,
                        epochs=10, dropout=0.05, batch_size=8,
                        learning_rate=3e-3, seed=0)
pipeline = train_pipeline(config, train_docs=corpus.train, dev_docs=corpus.dev,
                          static=static)

# evaluation aligns tokens as character spans, so it also scores runs
# where the system tokenized raw text itself
system = [pipeline.annotate_text(doc.source_text) for doc in corpus.test]
report = evaluate(corpus.test, system)
print(format_report(report))

# model loading is outside the timed region by construction: the pipeline
# object is already in memory
result = benchmark(pipeline, [doc.source_text for doc in corpus.test], runs=3)
print(f"\n{result}")
print("per-run rates:", [f"{r:.0f}" for r in result.run_rates])
