"""Shared token representation: hashed feature embeddings concatenated
with static vectors, then a four-layer residual convolutional encoder
with maxout pooling (the pooling doubles as the attention step)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hashing import HASH_ID, feature_row, shape_of
from .nn import Params, add_maxout, linear, linear_bwd, maxout, maxout_bwd, window3, window3_bwd
from .vectors import StaticVectors

#: The four hashed feature tables and their row-count config fields.
HASH_TABLES = ("norm", "prefix", "suffix", "shape")


@dataclass(frozen=True)
class EncoderConfig:
    static_dim: int = 300
    feature_dim: int = 64
    norm_rows: int = 4096
    affix_rows: int = 1024
    width: int = 128
    pieces: int = 3
    depth: int = 4
    prefix_len: int = 1
    suffix_len: int = 3
    hash_id: str = HASH_ID

    @property
    def embed_dim(self) -> int:
        return self.static_dim + len(HASH_TABLES) * self.feature_dim

    def rows(self, table: str) -> int:
        return self.norm_rows if table == "norm" else self.affix_rows


def init_encoder(params: Params, cfg: EncoderConfig, rng: np.random.Generator) -> None:
    for table in HASH_TABLES:
        params.add(f"emb.{table}", (cfg.rows(table), cfg.feature_dim), rng, init="embed")
    params.add("proj.W", (cfg.embed_dim, cfg.width), rng, init="glorot")
    params.add("proj.b", (cfg.width,), rng, init="zeros")
    for layer in range(cfg.depth):
        add_maxout(params, f"conv{layer}", 3 * cfg.width, cfg.width, cfg.pieces, rng)


def token_features(text: str, cfg: EncoderConfig) -> dict[str, str]:
    norm = text.lower()
    return {
        "norm": norm,
        "prefix": norm[: cfg.prefix_len],
        "suffix": norm[-cfg.suffix_len :],
        "shape": shape_of(text),
    }


def embed_tokens(texts, static: StaticVectors, params: Params, cfg: EncoderConfig):
    """Per-token embedding rows: static vector then one hashed slice per table."""
    n = len(texts)
    rows = {
        table: np.empty(n, dtype=np.intp) for table in HASH_TABLES
    }
    X = np.zeros((n, cfg.embed_dim), dtype=params.dtype)
    for i, text in enumerate(texts):
        feats = token_features(text, cfg)
        X[i, : cfg.static_dim] = static.lookup(feats["norm"])
        for table in HASH_TABLES:
            rows[table][i] = feature_row(table, feats[table], cfg.rows(table))
    offset = cfg.static_dim
    for table in HASH_TABLES:
        X[:, offset : offset + cfg.feature_dim] = params.tensors[f"emb.{table}"][rows[table]]
        offset += cfg.feature_dim
    return X, rows


def embed_bwd(params: Params, cfg: EncoderConfig, rows, dX: np.ndarray) -> None:
    """Scatter gradients into the hashed tables; static vectors stay frozen."""
    offset = cfg.static_dim
    for table in HASH_TABLES:
        np.add.at(
            params.grads[f"emb.{table}"],
            rows[table],
            dX[:, offset : offset + cfg.feature_dim],
        )
        offset += cfg.feature_dim


def encode(params: Params, X: np.ndarray, cfg: EncoderConfig):
    """Projection then depth x (window-3 conv, maxout, residual add)."""
    if X.ndim != 2 or X.shape[1] != cfg.embed_dim:
        raise ValueError(f"encoder input width {X.shape} does not match {cfg.embed_dim}")
    h, proj_cache = linear(params, "proj", X)
    layer_caches = []
    for layer in range(cfg.depth):
        xw = window3(h)
        z, mo_cache = maxout(params, f"conv{layer}", xw, cfg.pieces)
        layer_caches.append(mo_cache)
        h = z + h
    return h, (proj_cache, layer_caches)


def encode_bwd(params: Params, cfg: EncoderConfig, cache, dH: np.ndarray) -> np.ndarray:
    proj_cache, layer_caches = cache
    dh = dH
    for layer in reversed(range(cfg.depth)):
        dxw = maxout_bwd(params, layer_caches[layer], dh)
        dh = dh + window3_bwd(dxw)
    return linear_bwd(params, proj_cache, dh)
