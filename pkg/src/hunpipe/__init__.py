"""hunpipe: a trainable, resource-efficient NLP pipeline for Hungarian.

Tokenization, sentence splitting, PoS and morphological tagging,
rule-learned lemmatization, arc-eager dependency parsing, and BILOU
entity recognition, with shared-task-style evaluation and a throughput
benchmark. Pure numpy; models are small, deterministic, and portable.
"""

from .bench import BenchmarkResult, benchmark
from .bilou import bilou_to_spans, spans_to_bilou
from .bundle import load, save
from .conllu import read_conllu, write_conllu
from .doc import (
    ROOT,
    AnnotatedDoc,
    EntitySpan,
    MorphFeats,
    Token,
    sentence_ranges,
)
from .encoder import EncoderConfig
from .errors import (
    BundleError,
    IncomparableInputError,
    NonProjectiveTreeError,
    ParseError,
    PipelineError,
    UnsupportedConstructError,
)
from .evaluate import EvalReport, Score, evaluate, evaluate_ner, format_report, report_lines
from .lemmatizer import LemmaRuleTrie, LemmaTransform, learn, lemmatize, mask_digits
from .model import TrainConfig
from .nertsv import read_ner_tsv, write_ner_tsv
from .pipeline import Pipeline, PipelineConfig, load_config, train_pipeline
from .tokenizer import TokenizerRules, default_rules, load_rules, tokenize
from .vectors import StaticVectors, load_word_vectors

__version__ = "0.1.0"
