"""Minimal numpy neural-network kernel: named parameter store, layers
with hand-written backward passes, softmax cross-entropy, and Adam.

Everything is deterministic given the seed: parameters are created in a
fixed order from one Generator, and no operation depends on set or hash
iteration order.
"""

from __future__ import annotations

import numpy as np


class Params:
    """Named tensors plus matching gradient accumulators."""

    def __init__(self, dtype=np.float32):
        self.dtype = dtype
        self.tensors: dict[str, np.ndarray] = {}
        self.grads: dict[str, np.ndarray] = {}

    def add(self, name: str, shape, rng: np.random.Generator, init: str = "glorot"):
        if name in self.tensors:
            raise ValueError(f"parameter {name!r} already exists")
        if init == "zeros":
            tensor = np.zeros(shape, dtype=self.dtype)
        elif init == "glorot":
            fan_in, fan_out = shape[0], shape[-1]
            limit = float(np.sqrt(6.0 / (fan_in + fan_out)))
            tensor = rng.uniform(-limit, limit, size=shape).astype(self.dtype)
        elif init == "embed":
            tensor = rng.uniform(-0.1, 0.1, size=shape).astype(self.dtype)
        else:
            raise ValueError(f"unknown init {init!r}")
        self.tensors[name] = tensor
        self.grads[name] = np.zeros(shape, dtype=self.dtype)
        return tensor

    def zero_grads(self):
        for grad in self.grads.values():
            grad[...] = 0.0

    def astype(self, dtype) -> "Params":
        clone = Params(dtype=dtype)
        clone.tensors = {k: v.astype(dtype) for k, v in self.tensors.items()}
        clone.grads = {k: np.zeros_like(v) for k, v in clone.tensors.items()}
        return clone

    def names(self):
        return list(self.tensors)


def add_linear(params: Params, name: str, d_in: int, d_out: int, rng) -> None:
    params.add(f"{name}.W", (d_in, d_out), rng, init="glorot")
    params.add(f"{name}.b", (d_out,), rng, init="zeros")


def linear(params: Params, name: str, x: np.ndarray):
    y = x @ params.tensors[f"{name}.W"] + params.tensors[f"{name}.b"]
    return y, (name, x)


def linear_bwd(params: Params, cache, dy: np.ndarray) -> np.ndarray:
    name, x = cache
    params.grads[f"{name}.W"] += x.T @ dy
    params.grads[f"{name}.b"] += dy.sum(axis=0)
    return dy @ params.tensors[f"{name}.W"].T


def add_maxout(params: Params, name: str, d_in: int, d_out: int, pieces: int, rng) -> None:
    params.add(f"{name}.W", (d_in, d_out * pieces), rng, init="glorot")
    params.add(f"{name}.b", (d_out * pieces,), rng, init="zeros")


def maxout(params: Params, name: str, x: np.ndarray, pieces: int):
    z = x @ params.tensors[f"{name}.W"] + params.tensors[f"{name}.b"]
    n = z.shape[0]
    z = z.reshape(n, -1, pieces)
    winners = z.argmax(axis=2)
    y = np.take_along_axis(z, winners[:, :, None], axis=2)[:, :, 0]
    return y, (name, x, winners, z.shape)


def maxout_bwd(params: Params, cache, dy: np.ndarray) -> np.ndarray:
    name, x, winners, z_shape = cache
    dz = np.zeros(z_shape, dtype=dy.dtype)
    np.put_along_axis(dz, winners[:, :, None], dy[:, :, None], axis=2)
    dz = dz.reshape(z_shape[0], -1)
    params.grads[f"{name}.W"] += x.T @ dz
    params.grads[f"{name}.b"] += dz.sum(axis=0)
    return dz @ params.tensors[f"{name}.W"].T


def window3(x: np.ndarray) -> np.ndarray:
    """Concatenate each row with its neighbors; zero padding at the edges."""
    n, w = x.shape
    out = np.zeros((n, 3 * w), dtype=x.dtype)
    out[:, w : 2 * w] = x
    out[1:, :w] = x[:-1]
    out[:-1, 2 * w :] = x[1:]
    return out


def window3_bwd(dxw: np.ndarray) -> np.ndarray:
    w = dxw.shape[1] // 3
    dx = dxw[:, w : 2 * w].copy()
    dx[:-1] += dxw[1:, :w]
    dx[1:] += dxw[:-1, 2 * w :]
    return dx


def softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=-1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=-1, keepdims=True)


def softmax_xent(logits: np.ndarray, gold: np.ndarray):
    """Summed cross-entropy over rows and the unscaled dlogits.

    Callers divide both by whatever normalization they need.
    """
    probs = softmax(logits.astype(np.float64))
    rows = np.arange(len(gold))
    picked = np.clip(probs[rows, gold], 1e-300, None)
    loss = -np.log(picked).sum()
    dlogits = probs
    dlogits[rows, gold] -= 1.0
    return float(loss), dlogits.astype(logits.dtype)


def dropout_mask(shape, rate: float, rng: np.random.Generator, dtype) -> np.ndarray | None:
    if rate <= 0.0:
        return None
    keep = (rng.random(shape) >= rate).astype(dtype)
    return keep / dtype(1.0 - rate)


class Adam:
    """Adam with global L2 gradient clipping."""

    def __init__(self, params: Params, learning_rate: float = 1e-3, beta1: float = 0.9,
                 beta2: float = 0.999, eps: float = 1e-8, clip_norm: float = 10.0):
        self.params = params
        self.learning_rate = learning_rate
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.clip_norm = clip_norm
        self.t = 0
        self.m = {k: np.zeros_like(v) for k, v in params.tensors.items()}
        self.v = {k: np.zeros_like(v) for k, v in params.tensors.items()}

    def step(self):
        grads = self.params.grads
        if self.clip_norm:
            total = float(sum(float((g * g).sum()) for g in grads.values()))
            norm = total ** 0.5
            if norm > self.clip_norm:
                scale = self.clip_norm / norm
                for g in grads.values():
                    g *= scale
        self.t += 1
        bias1 = 1.0 - self.beta1 ** self.t
        bias2 = 1.0 - self.beta2 ** self.t
        for name, tensor in self.params.tensors.items():
            g = grads[name]
            m = self.m[name]
            v = self.v[name]
            m *= self.beta1
            m += (1.0 - self.beta1) * g
            v *= self.beta2
            v += (1.0 - self.beta2) * (g * g)
            update = (m / bias1) / (np.sqrt(v / bias2) + self.eps)
            tensor -= self.learning_rate * update
