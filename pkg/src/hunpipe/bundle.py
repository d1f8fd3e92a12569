"""Model bundle persistence.

Directory layout: a line-based ``manifest.txt`` ("key = value"), one
label file per head, one binary blob per parameter tensor (ASCII header
naming the tensor, rank and dims, then row-major little-endian float32
values), the tokenizer rule file, the lemma rule dump, and the static
vector table (vocab list + one blob). Everything is written in a fixed
order with no timestamps, so identical pipelines produce byte-identical
bundles and save -> load -> save is the identity.
"""

from __future__ import annotations

import os

import numpy as np

from .encoder import EncoderConfig
from .errors import BundleError
from .hashing import HASH_ID
from .lemmatizer import rules_from_lines, rules_to_lines
from .model import MultitaskModel
from .ner import add_ner_head
from .parser import add_parser_params
from .tagger import TagInventories, add_tagger_heads
from .tokenizer import parse_rules, rules_to_text
from .vectors import StaticVectors

MAGIC = "hunpipe-bundle"
FORMAT_VERSION = 1
TENSOR_MAGIC = "hunpipe-tensor"

_DIM_KEYS = ("static_dim", "feature_dim", "norm_rows", "affix_rows", "width",
             "pieces", "depth", "prefix_len", "suffix_len")


def _write_manifest(path, entries: list[tuple[str, str]]) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for key, value in entries:
            handle.write(f"{key} = {value}\n")


def _read_manifest(path) -> dict[str, str]:
    entries: dict[str, str] = {}
    try:
        with open(path, encoding="utf-8") as handle:
            for line in handle:
                key, sep, value = line.rstrip("\n").partition(" = ")
                if sep:
                    entries[key] = value
    except OSError as exc:
        raise BundleError(f"cannot read manifest: {exc}") from exc
    return entries


def _write_tensor(path, name: str, tensor: np.ndarray) -> None:
    dims = " ".join(str(d) for d in tensor.shape)
    with open(path, "wb") as handle:
        handle.write(f"{TENSOR_MAGIC} {name} {tensor.ndim} {dims}\n".encode("ascii"))
        handle.write(np.ascontiguousarray(tensor, dtype="<f4").tobytes())


def _read_tensor(path, expect_name: str) -> np.ndarray:
    try:
        with open(path, "rb") as handle:
            header = handle.readline().decode("ascii", errors="replace").split()
            if len(header) < 3 or header[0] != TENSOR_MAGIC:
                raise BundleError(f"{path}: not a tensor blob")
            name = header[1]
            rank = int(header[2])
            if len(header) != 3 + rank:
                raise BundleError(f"{path}: malformed dimension header")
            dims = tuple(int(d) for d in header[3:])
            if name != expect_name:
                raise BundleError(f"{path}: holds {name!r}, expected {expect_name!r}")
            count = int(np.prod(dims)) if dims else 1
            payload = handle.read()
            if len(payload) != 4 * count:
                raise BundleError(
                    f"{path}: truncated blob ({len(payload)} bytes for {count} values)"
                )
            return np.frombuffer(payload, dtype="<f4").reshape(dims).copy()
    except OSError as exc:
        raise BundleError(f"cannot read tensor {path}: {exc}") from exc


def _save_params(model: MultitaskModel, directory) -> None:
    os.makedirs(directory, exist_ok=True)
    for name in sorted(model.params.tensors):
        _write_tensor(os.path.join(directory, f"{name}.bin"), name,
                      model.params.tensors[name])


def _load_params(model: MultitaskModel, directory) -> None:
    expected = sorted(model.params.tensors)
    present = sorted(
        f[:-4] for f in os.listdir(directory) if f.endswith(".bin")
    ) if os.path.isdir(directory) else []
    if present != expected:
        missing = set(expected) - set(present)
        extra = set(present) - set(expected)
        raise BundleError(
            f"tensor set mismatch in {directory}: missing {sorted(missing)}, "
            f"unexpected {sorted(extra)}"
        )
    for name in expected:
        tensor = _read_tensor(os.path.join(directory, f"{name}.bin"), name)
        if tensor.shape != model.params.tensors[name].shape:
            raise BundleError(
                f"{name}: stored shape {tensor.shape} does not match model "
                f"{model.params.tensors[name].shape}"
            )
        model.params.tensors[name][...] = tensor


def _write_labels(path, labels) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for label in labels:
            handle.write(label + "\n")


def _read_labels(path) -> tuple[str, ...]:
    try:
        with open(path, encoding="utf-8") as handle:
            return tuple(line.rstrip("\n") for line in handle if line != "\n")
    except OSError as exc:
        raise BundleError(f"cannot read labels: {exc}") from exc


def _save_vectors(static: StaticVectors, directory) -> None:
    vocab = list(static.table)
    _write_labels(os.path.join(directory, "vectors_vocab.txt"), vocab)
    matrix = (np.stack([static.table[w] for w in vocab])
              if vocab else np.zeros((0, static.dim), dtype=np.float32))
    _write_tensor(os.path.join(directory, "vectors.bin"), "static.vectors", matrix)


def _load_vectors(directory, dim: int, case_fallback: bool) -> StaticVectors:
    vocab = _read_labels(os.path.join(directory, "vectors_vocab.txt"))
    matrix = _read_tensor(os.path.join(directory, "vectors.bin"), "static.vectors")
    if matrix.shape != (len(vocab), dim):
        raise BundleError(
            f"vector table shape {matrix.shape} does not match vocab "
            f"{len(vocab)} x dim {dim}"
        )
    table = {word: matrix[i] for i, word in enumerate(vocab)}
    return StaticVectors(dim=dim, table=table, case_fallback=case_fallback)


def save(pipeline, directory, config=None) -> None:
    """Write the pipeline to ``directory`` (created if needed)."""
    os.makedirs(directory, exist_ok=True)
    model = pipeline.model
    cfg = model.cfg
    components = ["tagger"]
    if "parser" in model.heads:
        components.append("parser")
    if pipeline.lemma_trie:
        components.append("lemmatizer")
    if pipeline.ner_model is not None:
        components.append("ner")

    entries: list[tuple[str, str]] = [
        ("magic", MAGIC),
        ("format_version", str(FORMAT_VERSION)),
        ("hash_id", cfg.hash_id),
        ("components", ",".join(components)),
    ]
    for key in _DIM_KEYS:
        entries.append((key, str(getattr(cfg, key))))
    entries.append(("static_case_fallback", str(model.static.case_fallback)))
    entries.append(("lemma_key_feats", str(pipeline.lemma_key_feats)))
    if pipeline.ner_model is not None:
        entries.append(
            ("ner_tag_dim", str(pipeline.ner_model.params.tensors["ner.tagemb"].shape[1]))
        )
    if config is not None:
        for key in ("learning_rate", "batch_size", "epochs", "pretrain_epochs",
                    "dropout", "seed", "block_sentences"):
            entries.append((f"config.{key}", str(getattr(config, key))))
    _write_manifest(os.path.join(directory, "manifest.txt"), entries)

    _write_labels(os.path.join(directory, "labels_upos.txt"), model.labels("upos"))
    _write_labels(os.path.join(directory, "labels_feats.txt"), model.labels("feats"))
    if "parser" in model.heads:
        _write_labels(os.path.join(directory, "labels_parser.txt"), model.labels("parser"))
    if pipeline.ner_model is not None:
        _write_labels(os.path.join(directory, "labels_ner.txt"),
                      pipeline.ner_model.labels("ner"))

    with open(os.path.join(directory, "tokenizer_rules.txt"), "w", encoding="utf-8") as fh:
        fh.write(rules_to_text(pipeline.rules))
    with open(os.path.join(directory, "lemma_rules.txt"), "w", encoding="utf-8") as fh:
        for line in rules_to_lines(pipeline.lemma_trie):
            fh.write(line + "\n")

    _save_vectors(model.static, directory)
    _save_params(model, os.path.join(directory, "tensors", "main"))
    if pipeline.ner_model is not None:
        _save_params(pipeline.ner_model, os.path.join(directory, "tensors", "ner"))


def load(directory):
    """Load a bundle; raises :class:`BundleError` on any inconsistency."""
    from .pipeline import Pipeline

    manifest = _read_manifest(os.path.join(directory, "manifest.txt"))
    if manifest.get("magic") != MAGIC:
        raise BundleError(f"{directory}: bad magic {manifest.get('magic')!r}")
    if manifest.get("format_version") != str(FORMAT_VERSION):
        raise BundleError(
            f"{directory}: format version {manifest.get('format_version')!r} "
            f"not supported (want {FORMAT_VERSION})"
        )
    if manifest.get("hash_id") != HASH_ID:
        raise BundleError(
            f"{directory}: bundle hashed with {manifest.get('hash_id')!r}, "
            f"this build uses {HASH_ID!r}"
        )
    try:
        dims = {key: int(manifest[key]) for key in _DIM_KEYS}
    except (KeyError, ValueError) as exc:
        raise BundleError(f"manifest dimensions missing or malformed: {exc}") from exc
    components = manifest.get("components", "").split(",")

    case_fallback = manifest.get("static_case_fallback", "True") == "True"
    static = _load_vectors(directory, dims["static_dim"], case_fallback)
    cfg = EncoderConfig(**dims, hash_id=HASH_ID)

    inventories = TagInventories(
        upos=_read_labels(os.path.join(directory, "labels_upos.txt")),
        feats=_read_labels(os.path.join(directory, "labels_feats.txt")),
    )
    model = MultitaskModel(cfg, static, seed=0)
    add_tagger_heads(model, inventories)
    if "parser" in components:
        add_parser_params(model, _read_labels(os.path.join(directory, "labels_parser.txt")))
    _load_params(model, os.path.join(directory, "tensors", "main"))

    ner_model = None
    if "ner" in components:
        ner_labels = _read_labels(os.path.join(directory, "labels_ner.txt"))
        tag_dim = int(manifest.get("ner_tag_dim", "32"))
        ner_model = MultitaskModel(cfg, static, seed=0)
        add_ner_head(ner_model, ner_labels, tag_dim=tag_dim)
        _load_params(ner_model, os.path.join(directory, "tensors", "ner"))

    try:
        with open(os.path.join(directory, "lemma_rules.txt"), encoding="utf-8") as fh:
            lemma_trie = rules_from_lines(fh.read().split("\n"))
    except OSError as exc:
        raise BundleError(f"cannot read lemma rules: {exc}") from exc
    try:
        with open(os.path.join(directory, "tokenizer_rules.txt"), encoding="utf-8") as fh:
            rules = parse_rules(fh.read())
    except OSError as exc:
        raise BundleError(f"cannot read tokenizer rules: {exc}") from exc

    return Pipeline(
        rules=rules, model=model, inventories=inventories, lemma_trie=lemma_trie,
        ner_model=ner_model,
        lemma_key_feats=manifest.get("lemma_key_feats", "False") == "True",
    )
