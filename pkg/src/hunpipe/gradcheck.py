"""Finite-difference verification of the hand-written backward passes.

Central differences with h=1e-5 in double precision against the analytic
gradients, over a random sample of parameter entries. This is the
correctness oracle for every layer type; run it with tiny dimensions.
"""

from __future__ import annotations

import numpy as np

from .model import MultitaskModel, evaluate_loss


def gradient_check(model: MultitaskModel, units, tasks, n_samples: int = 1000,
                   h: float = 1e-5, seed: int = 0) -> float:
    """Max relative error between analytic and numeric gradients."""
    double = model.as_dtype(np.float64)
    double.params.zero_grads()
    evaluate_loss(double, units, tasks, accumulate_grads=True)
    analytic = {k: v.copy() for k, v in double.params.grads.items()}

    entries = []
    for name, tensor in double.params.tensors.items():
        for flat in range(tensor.size):
            entries.append((name, flat))
    rng = np.random.default_rng(seed)
    if len(entries) > n_samples:
        chosen = rng.choice(len(entries), size=n_samples, replace=False)
        entries = [entries[i] for i in chosen]

    worst = 0.0
    for name, flat in entries:
        tensor = double.params.tensors[name]
        flat_view = tensor.reshape(-1)
        original = flat_view[flat]
        flat_view[flat] = original + h
        loss_plus = evaluate_loss(double, units, tasks)
        flat_view[flat] = original - h
        loss_minus = evaluate_loss(double, units, tasks)
        flat_view[flat] = original
        numeric = (loss_plus - loss_minus) / (2.0 * h)
        a = float(analytic[name].reshape(-1)[flat])
        rel = abs(a - numeric) / max(abs(a), abs(numeric), 1e-5)
        worst = max(worst, rel)
    return worst
