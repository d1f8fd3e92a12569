import numpy as np
import pytest

from hunpipe.encoder import EncoderConfig, embed_tokens, encode, init_encoder
from hunpipe.hashing import feature_row
from hunpipe.nn import Params, add_maxout, maxout, softmax, softmax_xent, window3, window3_bwd
from hunpipe.vectors import StaticVectors

TOY = EncoderConfig(static_dim=4, feature_dim=4, norm_rows=64, affix_rows=32,
                    width=8, pieces=2)


def toy_params(seed=0, cfg=TOY):
    params = Params()
    init_encoder(params, cfg, np.random.default_rng(seed))
    return params


def empty_static(cfg=TOY):
    return StaticVectors(cfg.static_dim)


class TestEmbed:
    def test_width(self):
        params = toy_params()
        X, _ = embed_tokens(["alma", "fa"], empty_static(), params, TOY)
        assert X.shape == (2, TOY.embed_dim)

    def test_oov_static_slice_is_zero(self):
        params = toy_params()
        X, _ = embed_tokens(["nincs"], empty_static(), params, TOY)
        assert np.array_equal(X[0, : TOY.static_dim], np.zeros(TOY.static_dim))

    def test_static_slice_filled_for_known_token(self):
        static = StaticVectors(4, {"alma": np.array([1, 2, 3, 4], dtype=np.float32)})
        params = toy_params()
        X, _ = embed_tokens(["Alma"], static, params, TOY)  # lowercased lookup
        assert np.allclose(X[0, :4], [1, 2, 3, 4])

    def test_identical_features_identical_rows(self):
        params = toy_params()
        X, _ = embed_tokens(["alma", "alma"], empty_static(), params, TOY)
        assert np.array_equal(X[0], X[1])

    def test_suffix_change_leaves_prefix_and_shape_slices(self):
        # "alma" vs "almá": norm and suffix features change, prefix ("a")
        # and shape ("xxxx") do not. Collision checked explicitly.
        cfg = TOY
        feats = {}
        for text in ("alma", "almá"):
            norm = text.lower()
            feats[text] = {
                "prefix": feature_row("prefix", norm[:1], cfg.affix_rows),
                "suffix": feature_row("suffix", norm[-3:], cfg.affix_rows),
                "shape": feature_row("shape", "xxxx", cfg.affix_rows),
            }
        assert feats["alma"]["suffix"] != feats["almá"]["suffix"]
        params = toy_params()
        X, _ = embed_tokens(["alma", "almá"], empty_static(), params, cfg)
        d = cfg.feature_dim
        base = cfg.static_dim
        prefix_slice = slice(base + d, base + 2 * d)
        suffix_slice = slice(base + 2 * d, base + 3 * d)
        shape_slice = slice(base + 3 * d, base + 4 * d)
        assert np.array_equal(X[0, prefix_slice], X[1, prefix_slice])
        assert np.array_equal(X[0, shape_slice], X[1, shape_slice])
        assert not np.array_equal(X[0, suffix_slice], X[1, suffix_slice])


class TestEncode:
    def test_zero_parameters_zero_output(self):
        params = toy_params()
        for tensor in params.tensors.values():
            tensor[...] = 0.0
        X, _ = embed_tokens(["a", "b", "c"], empty_static(), params, TOY)
        H, _ = encode(params, X, TOY)
        assert np.array_equal(H, np.zeros_like(H))

    def test_output_width(self):
        params = toy_params()
        X, _ = embed_tokens(["egy"], empty_static(), params, TOY)
        H, _ = encode(params, X, TOY)
        assert H.shape == (1, TOY.width)

    def test_single_token_deterministic(self):
        params = toy_params()
        X, _ = embed_tokens(["egy"], empty_static(), params, TOY)
        H1, _ = encode(params, X, TOY)
        H2, _ = encode(params, X, TOY)
        assert np.array_equal(H1, H2)

    def test_receptive_field_is_four(self):
        params = toy_params(seed=3)
        texts = [f"t{i}" for i in range(20)]
        changed = ["MÁS"] + texts[1:]
        X1, _ = embed_tokens(texts, empty_static(), params, TOY)
        X2, _ = embed_tokens(changed, empty_static(), params, TOY)
        H1, _ = encode(params, X1, TOY)
        H2, _ = encode(params, X2, TOY)
        # editing token 0 can reach at most position 4 (four window-3 layers)
        assert np.array_equal(H1[5:], H2[5:])
        assert not np.array_equal(H1[0], H2[0])

    def test_dimension_mismatch_rejected(self):
        params = toy_params()
        with pytest.raises(ValueError):
            encode(params, np.zeros((3, 7), dtype=np.float32), TOY)


class TestOps:
    def test_maxout_equals_piecewise_max(self):
        rng = np.random.default_rng(0)
        params = Params()
        add_maxout(params, "m", 6, 4, 3, rng)
        x = rng.normal(size=(5, 6)).astype(np.float32)
        y, _ = maxout(params, "m", x, 3)
        z = (x @ params.tensors["m.W"] + params.tensors["m.b"]).reshape(5, 4, 3)
        assert np.allclose(y, z.max(axis=2))

    def test_window3_round_trip_shapes(self):
        x = np.arange(12, dtype=np.float64).reshape(4, 3)
        xw = window3(x)
        assert xw.shape == (4, 9)
        assert np.array_equal(xw[0, :3], np.zeros(3))       # left pad
        assert np.array_equal(xw[-1, 6:], np.zeros(3))      # right pad
        assert np.array_equal(xw[1, :3], x[0])
        dx = window3_bwd(np.ones_like(xw))
        # interior rows receive gradient from three windows
        assert np.array_equal(dx[1:-1], np.full((2, 3), 3.0))

    def test_softmax_rows_sum_to_one(self):
        logits = np.array([[1.0, 2.0, 3.0], [0.0, 0.0, 0.0]])
        p = softmax(logits)
        assert np.allclose(p.sum(axis=1), 1.0)

    def test_xent_uniform(self):
        logits = np.zeros((4, 5))
        loss, dlogits = softmax_xent(logits, np.array([0, 1, 2, 3]))
        assert np.isclose(loss / 4, np.log(5))
        assert dlogits.shape == (4, 5)
