"""
Seq2seq Trainer
Seeded minibatch training with gradient-norm clipping
"""

import logging
import math
from typing import Dict, Optional, Tuple

import numpy as np

from ..exceptions import DivergenceError
from ..models.corpus import ParallelCorpus
from ..models.training import TrainConfig, TrainingResult
from .network import Seq2SeqModel, make_batch
from .vocab import Vocabulary, build_vocab

logger = logging.getLogger(__name__)


def clip_by_global_norm(grads: Dict[str, np.ndarray], max_norm: float) -> float:
    """Scale all gradients in place so their joint L2 norm is at most max_norm"""
    norm = math.sqrt(sum(float((g ** 2).sum()) for g in grads.values()))
    if norm > max_norm:
        scale = max_norm / norm
        for g in grads.values():
            g *= scale
    return norm


class SGD:
    def __init__(self, learning_rate: float):
        self.learning_rate = learning_rate

    def step(self, params: Dict[str, np.ndarray], grads: Dict[str, np.ndarray]) -> None:
        for name, grad in grads.items():
            params[name] -= self.learning_rate * grad


class Adam:
    def __init__(self, learning_rate: float, beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8):
        self.learning_rate = learning_rate
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        self.m: Dict[str, np.ndarray] = {}
        self.v: Dict[str, np.ndarray] = {}

    def step(self, params: Dict[str, np.ndarray], grads: Dict[str, np.ndarray]) -> None:
        self.t += 1
        for name, grad in grads.items():
            m = self.m.setdefault(name, np.zeros_like(grad))
            v = self.v.setdefault(name, np.zeros_like(grad))
            m *= self.beta1
            m += (1.0 - self.beta1) * grad
            v *= self.beta2
            v += (1.0 - self.beta2) * grad ** 2
            m_hat = m / (1.0 - self.beta1 ** self.t)
            v_hat = v / (1.0 - self.beta2 ** self.t)
            params[name] -= self.learning_rate * m_hat / (np.sqrt(v_hat) + self.eps)


def make_optimizer(config: TrainConfig):
    if config.optimizer == "adam":
        return Adam(config.learning_rate)
    return SGD(config.learning_rate)


def train(
    corpus: ParallelCorpus,
    config: TrainConfig,
    vocab: Optional[Vocabulary] = None,
) -> Tuple[Seq2SeqModel, TrainingResult]:
    """
    Train an encoder-decoder on the corpus

    Every random draw (initialization, shuffling, teacher forcing) comes from
    one generator seeded with config.seed, so identical inputs give identical
    parameters.

    Args:
        corpus: Training pairs
        config: Hyperparameters
        vocab: Vocabulary to use; built from the corpus when omitted

    Returns:
        (model, TrainingResult with one mean token loss per epoch)

    Raises:
        EmptyCorpus: no training pairs
        DivergenceError: loss or parameters became non-finite
    """
    vocab = vocab or build_vocab(corpus)
    rng = np.random.default_rng(config.seed)
    model = Seq2SeqModel.initialize(vocab, config, rng)
    optimizer = make_optimizer(config)

    pairs = [(ex.source, ex.target) for ex in corpus]
    truncated = sum(1 for s, t in pairs if len(s) > config.max_len or len(t) > config.max_len)
    if truncated:
        logger.warning(f"{truncated} of {len(pairs)} examples truncated to {config.max_len} characters")

    loss_log = []
    steps = 0
    for epoch in range(1, config.epochs + 1):
        order = rng.permutation(len(pairs))
        weighted_loss = 0.0
        tokens = 0.0
        for start in range(0, len(pairs), config.batch_size):
            batch = make_batch(vocab, [pairs[i] for i in order[start:start + config.batch_size]], config.max_len)
            feed = None
            if config.teacher_forcing < 1.0:
                feed = rng.random(batch.tgt.shape) < config.teacher_forcing
            loss, grads = model.loss_and_grads(batch, feed)
            if not math.isfinite(loss):
                raise DivergenceError(f"loss became non-finite at epoch {epoch}, step {steps + 1}")
            clip_by_global_norm(grads, config.clip_norm)
            optimizer.step(model.params, grads)
            if not model.all_finite():
                raise DivergenceError(f"parameters became non-finite at epoch {epoch}, step {steps + 1}")
            n_tokens = float(batch.tgt_mask.sum())
            weighted_loss += loss * n_tokens
            tokens += n_tokens
            steps += 1
        epoch_loss = weighted_loss / max(tokens, 1.0)
        loss_log.append(epoch_loss)
        logger.info(f"epoch {epoch}/{config.epochs}: loss {epoch_loss:.4f}")

    return model, TrainingResult(loss_log=loss_log, truncated=truncated, examples=len(pairs), steps=steps)
