import pytest

from hunpipe.datagen import build_vectors, generate
from hunpipe.pipeline import PipelineConfig, train_pipeline


@pytest.fixture(scope="session")
def small_corpus():
    return generate(n_train=150, n_dev=40, n_test=40, seed=1)


@pytest.fixture(scope="session")
def small_static(small_corpus):
    return build_vectors(small_corpus, dim=32)


def small_config(**overrides):
    base = dict(width=32, feature_dim=16, norm_rows=2048, affix_rows=512,
                epochs=12, pretrain_epochs=3, dropout=0.05, batch_size=8,
                learning_rate=3e-3, seed=0)
    base.update(overrides)
    return PipelineConfig(**base)


@pytest.fixture(scope="session")
def small_pipeline(small_corpus, small_static):
    return train_pipeline(
        small_config(),
        train_docs=small_corpus.train,
        dev_docs=small_corpus.dev,
        ner_train=small_corpus.ner_train[:60],
        ner_dev=small_corpus.ner_dev[:20],
        static=small_static,
    )
