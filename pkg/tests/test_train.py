import numpy as np
import pytest

from hunpipe.encoder import EncoderConfig
from hunpipe.model import (
    MultitaskModel,
    TokenTagTask,
    TrainConfig,
    TrainUnit,
    TrainingDivergedError,
    evaluate_loss,
    train_step,
)
from hunpipe.vectors import StaticVectors

CFG = EncoderConfig(static_dim=4, feature_dim=8, norm_rows=128, affix_rows=64,
                    width=16, pieces=2)

# suffix decides the class: -ot => N, -ik => V; plus fixed function words
TOY_SENTS = [
    ["a", "házot", "látik"],
    ["a", "fákot", "fut"],
    ["az", "almot", "eszik"],
    ["egy", "várot", "kérik"],
    ["a", "kertot", "ülik"],
    ["az", "útot", "megyik"],
    ["egy", "padot", "áll"],
    ["a", "tóot", "úszik"],
    ["az", "égot", "néz"],
    ["egy", "hidot", "vezetik"],
]
TOY_LABELS = ["D", "N", "V"]


def toy_units():
    units = []
    for texts in TOY_SENTS:
        gold = np.array([0, 1, 2])
        units.append(TrainUnit(texts=list(texts), gold={"upos": gold}))
    return units


def make_model(seed=0):
    model = MultitaskModel(CFG, StaticVectors(CFG.static_dim), seed=seed)
    model.add_head("upos", TOY_LABELS)
    return model


class TestLoss:
    def test_zero_head_gives_log_k(self):
        model = make_model()
        model.params.tensors["head.upos.W"][...] = 0.0
        model.params.tensors["head.upos.b"][...] = 0.0
        loss = evaluate_loss(model, toy_units()[:1], [TokenTagTask("upos")])
        assert np.isclose(loss, np.log(len(TOY_LABELS)), atol=1e-6)

    def test_descent_on_full_batch(self):
        model = make_model()
        units = toy_units()
        task = [TokenTagTask("upos")]
        config = TrainConfig(learning_rate=1e-3, dropout=0.0, seed=0)
        optimizer = config.make_optimizer(model.params)
        rng = np.random.default_rng(0)
        before = evaluate_loss(model, units, task)
        train_step(model, units, task, optimizer, config, rng)
        after = evaluate_loss(model, units, task)
        assert after <= before

    def test_missing_gold_positions_skipped(self):
        model = make_model()
        unit = TrainUnit(texts=["a", "b"], gold={"upos": np.array([-1, 1])})
        loss = evaluate_loss(model, [unit], [TokenTagTask("upos")])
        assert np.isfinite(loss)

    def test_divergence_detected(self):
        model = make_model()
        model.params.tensors["proj.W"][...] = np.nan
        config = TrainConfig(dropout=0.0)
        optimizer = config.make_optimizer(model.params)
        with pytest.raises(TrainingDivergedError):
            train_step(model, toy_units()[:2], [TokenTagTask("upos")], optimizer,
                       config, np.random.default_rng(0))


class TestMemorization:
    def test_toy_corpus_memorized(self):
        model = make_model(seed=1)
        units = toy_units()
        tasks = [TokenTagTask("upos")]
        config = TrainConfig(learning_rate=5e-3, dropout=0.0, batch_size=10, seed=1)
        optimizer = config.make_optimizer(model.params)
        rng = np.random.default_rng(config.seed)
        for _ in range(200):
            train_step(model, units, tasks, optimizer, config, rng)
        correct = total = 0
        task = tasks[0]
        for unit in units:
            H, _ = model.forward(unit.texts)
            pred = task.predict(model, H)
            correct += int((pred == unit.gold["upos"]).sum())
            total += len(pred)
        assert correct / total >= 0.99

    def test_same_seed_bit_identical(self):
        results = []
        for _ in range(2):
            model = make_model(seed=7)
            units = toy_units()
            tasks = [TokenTagTask("upos")]
            config = TrainConfig(learning_rate=2e-3, dropout=0.2, seed=7)
            optimizer = config.make_optimizer(model.params)
            rng = np.random.default_rng(config.seed)
            for _ in range(20):
                train_step(model, units, tasks, optimizer, config, rng)
            results.append({k: v.copy() for k, v in model.params.tensors.items()})
        first, second = results
        assert first.keys() == second.keys()
        for name in first:
            assert np.array_equal(first[name], second[name]), name
