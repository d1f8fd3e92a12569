import numpy as np

from hunpipe.encoder import EncoderConfig
from hunpipe.gradcheck import gradient_check
from hunpipe.model import MultitaskModel, TokenTagTask, TrainUnit
from hunpipe.nn import Params, add_linear, linear, linear_bwd, softmax_xent
from hunpipe.vectors import StaticVectors

SMALL = EncoderConfig(static_dim=6, feature_dim=4, norm_rows=32, affix_rows=16,
                      width=8, pieces=2)


def small_model_and_units(seed=0):
    rng = np.random.default_rng(seed)
    static = StaticVectors(
        SMALL.static_dim,
        {"alma": rng.normal(size=SMALL.static_dim).astype(np.float32)},
    )
    model = MultitaskModel(SMALL, static, seed=seed)
    model.add_head("upos", ["A", "B", "C"])
    units = [
        TrainUnit(texts=["alma", "fa", "Kis", "2021-ben", "."],
                  gold={"upos": np.array([0, 1, 2, 0, 1])}),
        TrainUnit(texts=["ez", "jó"], gold={"upos": np.array([2, 1])}),
    ]
    return model, units


def test_encoder_and_head_gradients():
    model, units = small_model_and_units()
    err = gradient_check(model, units, [TokenTagTask("upos")], n_samples=600, seed=1)
    assert err <= 1e-4


def test_head_only_gradients():
    # standalone linear + softmax, no encoder in the path
    rng = np.random.default_rng(2)
    params = Params(dtype=np.float64)
    add_linear(params, "head", 5, 4, rng)
    x = rng.normal(size=(6, 5))
    gold = rng.integers(0, 4, size=6)

    def loss_of():
        logits, _ = linear(params, "head", x)
        loss, _ = softmax_xent(logits, gold)
        return loss / len(gold)

    logits, cache = linear(params, "head", x)
    loss, dlogits = softmax_xent(logits, gold)
    linear_bwd(params, cache, dlogits / len(gold))

    h = 1e-5
    worst = 0.0
    for name, tensor in params.tensors.items():
        flat = tensor.reshape(-1)
        for i in range(flat.size):
            orig = flat[i]
            flat[i] = orig + h
            up = loss_of()
            flat[i] = orig - h
            down = loss_of()
            flat[i] = orig
            numeric = (up - down) / (2 * h)
            analytic = params.grads[name].reshape(-1)[i]
            worst = max(worst, abs(analytic - numeric) / max(abs(analytic), abs(numeric), 1e-5))
    assert worst <= 1e-4


def test_unused_norm_rows_get_no_gradient():
    model, units = small_model_and_units()
    double = model.as_dtype(np.float64)
    from hunpipe.model import evaluate_loss

    evaluate_loss(double, units[:1], [TokenTagTask("upos")], accumulate_grads=True)
    from hunpipe.encoder import token_features
    from hunpipe.hashing import feature_row

    used = {
        feature_row("norm", token_features(t, SMALL)["norm"], SMALL.norm_rows)
        for t in units[0].texts
    }
    grads = double.params.grads["emb.norm"]
    for row in range(SMALL.norm_rows):
        if row not in used:
            assert np.array_equal(grads[row], np.zeros(SMALL.feature_dim)), row
