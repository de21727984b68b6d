"""Character seq2seq: vocabulary, gradients, training, decoding, checkpoints, sweeps"""

import json
import math
import time

import numpy as np
import pytest

from app.config import settings
from app.converters.seq2seq_converter import Seq2SeqConverter
from app.exceptions import CheckpointError, DivergenceError, EmptyCorpus
from app.models.corpus import ParallelCorpus, Split
from app.models.training import SweepRow, SweepStatus, TrainConfig
from app.seq2seq.checkpoint import from_checkpoint, load_model, save_model, to_checkpoint
from app.seq2seq.decoding import predict, predict_batch
from app.seq2seq.gradcheck import gradient_check
from app.seq2seq.network import PARAM_NAMES, Batch, Seq2SeqModel, make_batch
from app.seq2seq.sweep import PUBLISHED_SHAPES, flag_best, load_grid, preset_grid, run_sweep
from app.seq2seq.trainer import clip_by_global_norm, train
from app.seq2seq.vocab import EOS, UNK, build_vocab
from app.services.corpus_io import generate_synthetic, split
from app.services.metrics import copy_baseline, evaluate
from app.services.normalizer import joint_table, normalize

TINY = TrainConfig(epochs=2, max_len=8, embed_dim=3, hidden_dim=4, batch_size=2, seed=0, init_scale=0.5)
PAIRS = [("ab", "ba"), ("a", "bab"), ("bba", "ab")]


@pytest.fixture
def tiny_corpus():
    return ParallelCorpus.from_pairs(PAIRS)


@pytest.fixture
def tiny_model(tiny_corpus):
    vocab = build_vocab(tiny_corpus)
    return Seq2SeqModel.initialize(vocab, TINY, np.random.default_rng(0))


# vocabulary

def test_vocab_size():
    vocab = build_vocab(ParallelCorpus.from_pairs([("ab", "ba")]))
    assert len(vocab) == 6
    assert vocab.chars == ("a", "b")


def test_vocab_encode_decode():
    vocab = build_vocab(ParallelCorpus.from_pairs([("ab", "ba")]))
    ids = vocab.encode("abz")
    assert ids[2] == UNK
    assert vocab.decode(ids + [EOS]) == "ab"


def test_vocab_needs_data():
    with pytest.raises(EmptyCorpus):
        build_vocab(ParallelCorpus())


# gradients

def test_gradient_check_passes(tiny_model):
    batch = make_batch(tiny_model.vocab, PAIRS, TINY.max_len)
    report = gradient_check(tiny_model, batch, samples=20)
    assert set(report.per_tensor) == set(PARAM_NAMES)
    assert report.max_error < 1e-4
    assert report.passed


def test_gradient_check_restores_parameters(tiny_model):
    before = {k: v.copy() for k, v in tiny_model.params.items()}
    gradient_check(tiny_model, make_batch(tiny_model.vocab, PAIRS, TINY.max_len), samples=5)
    for name in PARAM_NAMES:
        assert np.array_equal(before[name], tiny_model.params[name])


def test_zero_objective_has_zero_gradients(tiny_model):
    batch = make_batch(tiny_model.vocab, PAIRS, TINY.max_len)
    empty = Batch(
        src=batch.src,
        src_mask=batch.src_mask,
        tgt=np.zeros((batch.size, 3), dtype=np.int64),
        tgt_mask=np.zeros((batch.size, 3)),
    )
    loss, grads = tiny_model.loss_and_grads(empty)
    assert loss == 0.0
    assert all(not g.any() for g in grads.values())


def test_corrupted_gradient_is_caught(tiny_model):
    def corrupt(grads):
        grads["att_v"] += 0.05

    batch = make_batch(tiny_model.vocab, PAIRS, TINY.max_len)
    report = gradient_check(tiny_model, batch, samples=20, corrupt=corrupt)
    assert report.per_tensor["att_v"] > 1e-2
    assert not report.passed


def test_clip_by_global_norm():
    grads = {"a": np.array([3.0]), "b": np.array([4.0])}
    assert clip_by_global_norm(grads, 1.0) == pytest.approx(5.0)
    assert np.sqrt(grads["a"][0] ** 2 + grads["b"][0] ** 2) == pytest.approx(1.0)


# training

def test_loss_log_has_one_entry_per_epoch(tiny_corpus):
    model, result = train(tiny_corpus, TINY)
    assert len(result.loss_log) == TINY.epochs
    assert all(np.isfinite(result.loss_log))
    assert result.examples == len(PAIRS)
    assert model.all_finite()


@pytest.mark.parametrize("overrides", [{}, {"teacher_forcing": 0.5}, {"optimizer": "adam", "learning_rate": 0.01}])
def test_training_is_deterministic(tiny_corpus, overrides):
    config = TINY.model_copy(update=overrides)
    first, _ = train(tiny_corpus, config)
    second, _ = train(tiny_corpus, config)
    assert to_checkpoint(first) == to_checkpoint(second)


def test_truncation_is_counted():
    corpus = ParallelCorpus.from_pairs([("abababab", "ab"), ("ab", "ba")])
    _, result = train(corpus, TINY.model_copy(update={"max_len": 4, "epochs": 1}))
    assert result.truncated == 1


def test_divergence_is_raised(tiny_corpus):
    with pytest.raises(DivergenceError):
        train(tiny_corpus, TINY.model_copy(update={"learning_rate": float("inf")}))


def test_identity_loss_beats_uniform_after_one_epoch():
    rng = np.random.default_rng(4)
    words = ["".join(rng.choice(list("abcdef"), size=rng.integers(1, 4))) for _ in range(50)]
    pairs = [(w, w) for w in words]
    config = TrainConfig(epochs=1, batch_size=5, seed=0)
    model, _ = train(ParallelCorpus.from_pairs(pairs), config)
    loss = model.loss(make_batch(model.vocab, pairs, config.max_len))
    assert loss < math.log(len(model.vocab))


# decoding

def test_predict_empty_input(tiny_model):
    output = predict(tiny_model, "")
    assert len(output) <= TINY.max_len
    assert set(output) <= set(tiny_model.vocab.chars)


def test_predict_batch_matches_single(tiny_model):
    inputs = ["ab", "", "bbab", "zz"]
    batched = predict_batch(tiny_model, inputs, batch_size=3)
    assert batched == [predict(tiny_model, text) for text in inputs]


# checkpoints

def test_checkpoint_round_trip(tmp_path, tiny_corpus):
    model, _ = train(tiny_corpus, TINY)
    path = save_model(model, tmp_path / "model.json")
    loaded = load_model(path)
    for name in PARAM_NAMES:
        assert np.array_equal(model.params[name], loaded.params[name])
    assert loaded.vocab == model.vocab
    assert loaded.config == model.config
    assert predict_batch(loaded, ["ab", "ba"]) == predict_batch(model, ["ab", "ba"])


def test_checkpoint_keeps_normalization(official, tiny_corpus):
    model, _ = train(tiny_corpus, TINY)
    model.table = joint_table(official)
    restored = from_checkpoint(json.loads(json.dumps(to_checkpoint(model))))
    assert normalize("mba", restored.table) == normalize("mba", model.table)


def test_checkpoint_rejects_unknown_version(tiny_model):
    data = to_checkpoint(tiny_model)
    data["format_version"] = 99
    with pytest.raises(CheckpointError, match="format_version"):
        from_checkpoint(data)


def test_checkpoint_rejects_bad_shape(tiny_model):
    data = to_checkpoint(tiny_model)
    data["tensors"]["out_b"]["shape"] = [1]
    with pytest.raises(CheckpointError, match="out_b"):
        from_checkpoint(data)


def test_checkpoint_rejects_missing_tensor(tiny_model):
    data = to_checkpoint(tiny_model)
    del data["tensors"]["att_U"]
    with pytest.raises(CheckpointError, match="att_U"):
        from_checkpoint(data)


# sweeps

def test_preset_grid_shapes():
    grid = preset_grid(TINY)
    assert [(c.epochs, c.max_len) for c in grid] == list(PUBLISHED_SHAPES)
    assert all(c.hidden_dim == TINY.hidden_dim for c in grid)


def test_load_shipped_grids():
    quick = load_grid(settings.sweeps_dir / "quick.json")
    assert sorted({(c.epochs, c.max_len) for c in quick}) == [(1, 25), (1, 40), (4, 25), (4, 40), (7, 25), (7, 40)]
    assert len(load_grid(settings.sweeps_dir / "grid.json")) == len(PUBLISHED_SHAPES)


def test_flag_best_prefers_wer_then_cer():
    rows = [
        SweepRow(parameters="a", config=TINY, cer=10.0, wer=40.0),
        SweepRow(parameters="b", config=TINY, cer=12.0, wer=30.0),
        SweepRow(parameters="c", config=TINY, cer=11.0, wer=30.0),
        SweepRow(parameters="d", config=TINY, status=SweepStatus.FAILED),
    ]
    flag_best(rows)
    assert [row.parameters for row in rows if row.best] == ["c"]


def test_sweep_survives_a_failing_row(tiny_corpus):
    def flaky_train(corpus, config):
        if config.epochs == 2:
            raise DivergenceError("injected")
        return train(corpus, config)

    grid = [TINY.model_copy(update={"epochs": 1}), TINY]
    report = run_sweep(tiny_corpus, tiny_corpus, grid, train_fn=flaky_train)
    assert [row.status for row in report.rows] == [SweepStatus.OK, SweepStatus.FAILED]
    assert report.best_row is report.rows[0]
    assert "injected" in report.rows[1].error
    assert "failed" in report.to_table()


def test_sweep_with_normalization(official):
    corpus = ParallelCorpus.from_pairs([("mba", "nda"), ("nda", "mba")])
    report = run_sweep(corpus, corpus, [TINY], table=joint_table(official))
    assert report.rows[0].status == SweepStatus.OK
    assert report.rows[0].best


# desk-scale runs

@pytest.mark.slow
def test_learns_identity():
    rng = np.random.default_rng(3)
    words = ["".join(rng.choice(list("abcd"), size=rng.integers(2, 6))) for _ in range(300)]
    corpus = ParallelCorpus.from_pairs([(w, w) for w in words])
    config = TrainConfig(epochs=30, max_len=8, embed_dim=16, hidden_dim=32, batch_size=16,
                         optimizer="adam", learning_rate=0.01, seed=1)
    model, result = train(corpus, config)
    assert result.loss_log[-1] < result.loss_log[0]
    assert evaluate(predict_batch(model, words[:50]), words[:50]).cer < 5


def _synthetic_run(catholic, official, rules, noise):
    """Train with default hyperparameters on a 2500/250/250 synthetic split; score the test split"""
    corpus = generate_synthetic((catholic, official), rules, n=3000, seed=1, noise=noise)
    labeled = split(corpus, (2500, 250, 250), seed=1)
    table = joint_table(catholic, official)
    train_set = ParallelCorpus.from_pairs(
        [(normalize(ex.source, table), normalize(ex.target, table)) for ex in labeled.select(Split.TRAIN)]
    )
    test_set = labeled.select(Split.TEST)
    model, _ = train(train_set, TrainConfig(epochs=30))
    model.table = table
    outputs = Seq2SeqConverter(model).convert_lines(test_set.sources)
    return evaluate(outputs, test_set.targets), copy_baseline(test_set.sources, test_set.targets)


@pytest.fixture(scope="module")
def clean_run(catholic, official, catholic_rules):
    return _synthetic_run(catholic, official, catholic_rules, noise=0.0)


@pytest.mark.slow
def test_synthetic_corpus_is_learnable(clean_run):
    report, copy_report = clean_run
    assert report.cer < 5
    assert report.cer < copy_report.cer


@pytest.mark.slow
def test_noisy_targets_do_not_help(clean_run, catholic, official, catholic_rules):
    noisy_report, _ = _synthetic_run(catholic, official, catholic_rules, noise=0.3)
    assert noisy_report.cer >= clean_run[0].cer


@pytest.mark.slow
def test_quick_grid_on_synthetic_data(catholic, official, catholic_rules):
    corpus = generate_synthetic((catholic, official), catholic_rules, n=3000, seed=1)
    labeled = split(corpus, (2500, 250, 250), seed=1)
    grid = load_grid(settings.sweeps_dir / "quick.json")

    started = time.monotonic()
    report = run_sweep(
        labeled.select(Split.TRAIN), labeled.select(Split.TEST), grid, table=joint_table(catholic, official)
    )
    assert time.monotonic() - started < 30 * 60

    assert [row.parameters for row in report.rows] == [config.label for config in grid]
    assert all(row.status == SweepStatus.OK for row in report.rows)
    assert sum(row.best for row in report.rows) == 1
    lines = report.to_table().splitlines()
    assert lines[0].split() == ["Parameters", "CER", "WER"]
    assert len(lines) == 1 + len(grid)
