"""Multitask model container and the shared training loop.

One parameter store backs the encoder and every task head; tasks plug in
through a small protocol (``name`` + ``loss_and_grad``) so the tagger,
the parser, and the entity recognizer all train through the same
:func:`train_step`.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .encoder import EncoderConfig, embed_bwd, embed_tokens, encode, encode_bwd, init_encoder
from .errors import PipelineError
from .nn import Adam, Params, add_linear, dropout_mask, linear, linear_bwd
from .vectors import StaticVectors


class TrainingDivergedError(PipelineError):
    """Loss became non-finite; carries the epoch/batch diagnostics."""


@dataclass
class TrainConfig:
    learning_rate: float = 2e-3
    batch_size: int = 16
    epochs: int = 30
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    clip_norm: float = 10.0
    dropout: float = 0.1
    seed: int = 0

    def make_optimizer(self, params: Params) -> Adam:
        return Adam(params, learning_rate=self.learning_rate, beta1=self.beta1,
                    beta2=self.beta2, eps=self.eps, clip_norm=self.clip_norm)


class MultitaskModel:
    """Shared encoder plus named softmax heads over it."""

    def __init__(self, cfg: EncoderConfig, static: StaticVectors, seed: int = 0,
                 dtype=np.float32):
        self.cfg = cfg
        self.static = static
        self.params = Params(dtype=dtype)
        self.heads: dict[str, tuple[str, ...]] = {}
        self._init_rng = np.random.default_rng(seed)
        init_encoder(self.params, cfg, self._init_rng)

    def add_head(self, name: str, labels, input_dim: int | None = None) -> None:
        """A linear softmax head; ``labels`` is frozen on creation."""
        labels = tuple(labels)
        if not labels:
            raise ValueError(f"head {name!r} needs a non-empty label inventory")
        if name in self.heads:
            raise ValueError(f"head {name!r} already exists")
        self.heads[name] = labels
        add_linear(self.params, f"head.{name}",
                   input_dim if input_dim is not None else self.cfg.width,
                   len(labels), self._init_rng)

    def add_tensor(self, name: str, shape, init: str = "zeros") -> None:
        self.params.add(name, shape, self._init_rng, init=init)

    def labels(self, name: str) -> tuple[str, ...]:
        return self.heads[name]

    def forward(self, texts, train: bool = False, dropout: float = 0.0,
                rng: np.random.Generator | None = None):
        X, rows = embed_tokens(texts, self.static, self.params, self.cfg)
        mask = None
        if train and dropout > 0.0:
            mask = dropout_mask(X.shape, dropout, rng, self.params.dtype)
            if mask is not None:
                X = X * mask
        H, enc_cache = encode(self.params, X, self.cfg)
        return H, (rows, mask, enc_cache)

    def backward(self, cache, dH: np.ndarray) -> None:
        rows, mask, enc_cache = cache
        dX = encode_bwd(self.params, self.cfg, enc_cache, dH)
        if mask is not None:
            dX = dX * mask
        embed_bwd(self.params, self.cfg, rows, dX)

    def head_logits(self, name: str, features: np.ndarray):
        return linear(self.params, f"head.{name}", features)

    def head_bwd(self, cache, dlogits: np.ndarray) -> np.ndarray:
        return linear_bwd(self.params, cache, dlogits)

    def as_dtype(self, dtype) -> "MultitaskModel":
        """Clone with converted parameters (for double-precision checks)."""
        clone = object.__new__(MultitaskModel)
        clone.cfg = self.cfg
        clone.static = self.static
        clone.params = self.params.astype(dtype)
        clone.heads = dict(self.heads)
        clone._init_rng = np.random.default_rng(0)
        return clone


@dataclass
class TrainUnit:
    """One training segment (normally a sentence) with per-task gold."""

    texts: list[str]
    gold: dict[str, object] = field(default_factory=dict)


class TokenTagTask:
    """Per-token classification against a model head.

    Gold payload: int array, one label id per token, -1 = no gold.
    """

    def __init__(self, name: str):
        self.name = name

    def loss_and_grad(self, model: MultitaskModel, unit: TrainUnit, H, dH, scale: float):
        from .nn import softmax_xent

        gold = np.asarray(unit.gold[self.name])
        idx = np.nonzero(gold >= 0)[0]
        if len(idx) == 0:
            return 0.0
        logits, cache = model.head_logits(self.name, H[idx])
        loss_sum, dlogits = softmax_xent(logits, gold[idx])
        if dH is not None:
            dlogits *= model.params.dtype(scale / len(idx))
            dH[idx] += model.head_bwd(cache, dlogits)
        return loss_sum / len(idx)

    def predict(self, model: MultitaskModel, H) -> np.ndarray:
        logits, _ = model.head_logits(self.name, H)
        return logits.argmax(axis=1)


def evaluate_loss(model: MultitaskModel, units, tasks, *, accumulate_grads: bool = False,
                  dropout: float = 0.0, rng: np.random.Generator | None = None) -> float:
    """Mean over units of the mean cross-entropy across the unit's active heads."""
    if not units:
        return 0.0
    total = 0.0
    for unit in units:
        active = [t for t in tasks if t.name in unit.gold]
        if not active:
            continue
        H, cache = model.forward(unit.texts, train=accumulate_grads, dropout=dropout, rng=rng)
        dH = np.zeros_like(H) if accumulate_grads else None
        scale = 1.0 / (len(units) * len(active))
        unit_loss = 0.0
        for task in active:
            unit_loss += task.loss_and_grad(model, unit, H, dH, scale)
        if accumulate_grads:
            model.backward(cache, dH)
        total += unit_loss / len(active)
    return total / len(units)


def train_step(model: MultitaskModel, units, tasks, optimizer: Adam, config: TrainConfig,
               rng: np.random.Generator) -> float:
    """One optimizer update over a batch of units; returns the batch loss."""
    model.params.zero_grads()
    loss = evaluate_loss(model, units, tasks, accumulate_grads=True,
                         dropout=config.dropout, rng=rng)
    if not np.isfinite(loss):
        raise TrainingDivergedError(
            f"non-finite loss {loss!r} on a batch of {len(units)} units "
            f"(lr={config.learning_rate}, clip={config.clip_norm})"
        )
    optimizer.step()
    return loss


def snapshot(model: MultitaskModel) -> dict[str, np.ndarray]:
    return {k: v.copy() for k, v in model.params.tensors.items()}


def restore(model: MultitaskModel, saved: dict[str, np.ndarray]) -> None:
    for name, tensor in model.params.tensors.items():
        tensor[...] = saved[name]


def train_loop(model: MultitaskModel, units, tasks, config: TrainConfig,
               dev_metric=None, log=None) -> list[dict]:
    """Epoch loop with shuffling, batching, and best-epoch selection.

    ``dev_metric`` is called with the model after each epoch; the epoch
    with the highest value is restored at the end. Returns the per-epoch
    history (loss and dev score).
    """
    if not units:
        raise ValueError("empty training set")
    optimizer = config.make_optimizer(model.params)
    rng = np.random.default_rng(config.seed)
    order = np.arange(len(units))
    best_score = -np.inf
    best_params = None
    history: list[dict] = []
    for epoch in range(config.epochs):
        rng.shuffle(order)
        epoch_loss = 0.0
        n_batches = 0
        for start in range(0, len(units), config.batch_size):
            batch = [units[i] for i in order[start : start + config.batch_size]]
            epoch_loss += train_step(model, batch, tasks, optimizer, config, rng)
            n_batches += 1
        entry = {"epoch": epoch, "loss": epoch_loss / max(n_batches, 1)}
        if dev_metric is not None:
            score = float(dev_metric(model))
            entry["dev"] = score
            if score > best_score:
                best_score = score
                best_params = snapshot(model)
        history.append(entry)
        if log is not None:
            log(entry)
    if best_params is not None:
        restore(model, best_params)
    return history
