"""Command-line interface.

Subcommands: tokenize, train, annotate, evaluate, evaluate-ner,
benchmark, inspect. Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import sys

from .errors import PipelineError


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        sys.exit(1)


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as handle:
        return handle.read()


def _write_output(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)


def _load_pipeline(model_dir: str):
    from .bundle import load

    return load(model_dir)


def _cmd_tokenize(args) -> int:
    from .conllu import write_conllu
    from .tokenizer import default_rules, load_rules, tokenize

    rules = load_rules(args.rules) if args.rules else default_rules()
    doc = tokenize(_read_input(args.input), rules)
    if args.format == "text":
        _write_output(args.output, "\n".join(t.text for t in doc.tokens) + "\n")
    else:
        _write_output(args.output, write_conllu([doc]))
    return 0


def _cmd_train(args) -> int:
    from .pipeline import load_config, train_pipeline

    config = load_config(args.config)
    if args.model:
        config.model_dir = args.model
    if args.seed is not None:
        config.seed = args.seed
    pipeline = train_pipeline(config)
    skipped = pipeline.counters.get("nonprojective_skipped", 0)
    if skipped:
        sys.stderr.write(f"skipped {skipped} non-projective training sentences\n")
    if config.model_dir:
        sys.stderr.write(f"model saved to {config.model_dir}\n")
    return 0


def _cmd_annotate(args) -> int:
    from .conllu import read_conllu, write_conllu
    from .nertsv import write_ner_tsv
    from .tokenizer import tokenize

    pipeline = _load_pipeline(args.model)
    data = _read_input(args.input)
    if args.format == "conllu":
        docs = read_conllu(data)
    else:
        docs = [tokenize(data, pipeline.rules)]
    annotated = pipeline.annotate_docs(docs, jobs=args.jobs)
    _write_output(args.output, write_conllu(annotated))
    if args.ner_output:
        from .bilou import bilou_to_spans
        from .doc import sentence_ranges

        sents = []
        for doc in annotated:
            for start, end in sentence_ranges(doc):
                toks = doc.tokens[start:end]
                tags = [t.ent or "O" for t in toks]
                sents.append(([t.text for t in toks], bilou_to_spans(tags)))
        _write_output(args.ner_output, write_ner_tsv(sents))
    return 0


def _cmd_evaluate(args) -> int:
    from .conllu import read_conllu
    from .evaluate import evaluate, format_report, report_lines

    gold = read_conllu(_read_input(args.gold))
    system = read_conllu(_read_input(args.system))
    report = evaluate(gold, system)
    sys.stdout.write(report_lines(report) if args.tsv else format_report(report) + "\n")
    return 0


def _cmd_evaluate_ner(args) -> int:
    from .evaluate import evaluate_ner
    from .nertsv import read_ner_tsv

    gold = read_ner_tsv(_read_input(args.gold))
    system = read_ner_tsv(_read_input(args.system))
    score = evaluate_ner(gold, system)
    if args.tsv:
        sys.stdout.write(f"NER\t{score.precision:.6f}\t{score.recall:.6f}\t{score.f1:.6f}\n")
    else:
        sys.stdout.write(
            f"NER span F1: P={score.precision:.4f} R={score.recall:.4f} F1={score.f1:.4f}\n"
        )
    return 0


def _cmd_benchmark(args) -> int:
    from .bench import benchmark
    from .conllu import read_conllu

    pipeline = _load_pipeline(args.model)  # loading excluded from timing
    data = _read_input(args.input)
    if args.format == "conllu":
        texts = [doc.source_text for doc in read_conllu(data)]
    else:
        texts = [data]
    result = benchmark(pipeline, texts, runs=args.runs)
    sys.stdout.write(str(result) + "\n")
    return 0


def _cmd_inspect(args) -> int:
    from .bundle import _read_manifest
    from .lemmatizer import rules_to_lines
    import os

    pipeline = _load_pipeline(args.model)
    manifest = _read_manifest(os.path.join(args.model, "manifest.txt"))
    for key in ("magic", "format_version", "hash_id", "components"):
        sys.stdout.write(f"{key} = {manifest.get(key)}\n")
    model = pipeline.model
    sys.stdout.write(f"encoder width = {model.cfg.width}\n")
    sys.stdout.write(f"static vectors = {len(model.static)} x {model.static.dim}\n")
    for head, labels in model.heads.items():
        sys.stdout.write(f"head {head}: {len(labels)} labels\n")
    if pipeline.ner_model is not None:
        sys.stdout.write(f"head ner: {len(pipeline.ner_model.labels('ner'))} labels\n")
    sys.stdout.write(f"lemma rules = {len(rules_to_lines(pipeline.lemma_trie))}\n")
    sys.stdout.write(f"abbreviations = {len(pipeline.rules.abbreviations)}\n")
    return 0


def build_parser() -> _ArgumentParser:
    parser = _ArgumentParser(prog="hunpipe",
                             description="Hungarian NLP pipeline: train, annotate, evaluate.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tokenize", help="rule-based tokenization")
    p.add_argument("--input", default="-")
    p.add_argument("--output", default="-")
    p.add_argument("--rules")
    p.add_argument("--format", choices=("conllu", "text"), default="conllu")
    p.set_defaults(func=_cmd_tokenize)

    p = sub.add_parser("train", help="train a pipeline from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--model", help="override the output model directory")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("annotate", help="run the full pipeline")
    p.add_argument("--model", required=True)
    p.add_argument("--input", default="-")
    p.add_argument("--output", default="-")
    p.add_argument("--format", choices=("text", "conllu"), default="text")
    p.add_argument("--ner-output", help="also write entities as NER TSV")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=_cmd_annotate)

    p = sub.add_parser("evaluate", help="CoNLL-18-style scores, gold vs system")
    p.add_argument("--gold", required=True)
    p.add_argument("--system", required=True)
    p.add_argument("--tsv", action="store_true", help="machine-readable output")
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("evaluate-ner", help="entity span F1, gold vs system TSV")
    p.add_argument("--gold", required=True)
    p.add_argument("--system", required=True)
    p.add_argument("--tsv", action="store_true")
    p.set_defaults(func=_cmd_evaluate_ner)

    p = sub.add_parser("benchmark", help="throughput and peak memory")
    p.add_argument("--model", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--format", choices=("text", "conllu"), default="conllu")
    p.add_argument("--runs", type=int, default=3)
    p.set_defaults(func=_cmd_benchmark)

    p = sub.add_parser("inspect", help="summarize a model bundle")
    p.add_argument("--model", required=True)
    p.set_defaults(func=_cmd_inspect)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (PipelineError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
