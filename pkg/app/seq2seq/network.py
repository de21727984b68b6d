"""
Seq2seq Network
Character-level GRU encoder-decoder with additive attention, in numpy float64

The encoder reads the source characters followed by EOS; the decoder starts
from BOS with the final encoder state and attends over all encoder states at
every step. Forward keeps a cache so backward can return exact gradients for
every parameter tensor.
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..models.normalization import NormalizationTable
from ..models.training import TrainConfig
from .vocab import BOS, EOS, PAD, Vocabulary

PARAM_NAMES: Tuple[str, ...] = (
    "enc_embed", "enc_Wx", "enc_Wh", "enc_b",
    "dec_embed", "dec_Wx", "dec_Wh", "dec_b",
    "att_W", "att_U", "att_v",
    "out_W", "out_b",
)

MASKED_SCORE = -1e30


def sigmoid(x: np.ndarray) -> np.ndarray:
    return 0.5 * (1.0 + np.tanh(0.5 * x))


def softmax(x: np.ndarray, axis: int = -1) -> np.ndarray:
    shifted = np.exp(x - x.max(axis=axis, keepdims=True))
    return shifted / shifted.sum(axis=axis, keepdims=True)


@dataclass
class Batch:
    """Padded id matrices for one minibatch"""
    src: np.ndarray        # (B, S) source ids + EOS, PAD-filled
    src_mask: np.ndarray   # (B, S) 1.0 on real positions
    tgt: np.ndarray        # (B, T) target ids + EOS, PAD-filled
    tgt_mask: np.ndarray   # (B, T)

    @property
    def size(self) -> int:
        return self.src.shape[0]


def pad_ids(sequences: Sequence[List[int]]) -> Tuple[np.ndarray, np.ndarray]:
    width = max(len(seq) for seq in sequences)
    ids = np.full((len(sequences), width), PAD, dtype=np.int64)
    for row, seq in enumerate(sequences):
        ids[row, :len(seq)] = seq
    return ids, (ids != PAD).astype(np.float64)


def make_batch(vocab: Vocabulary, pairs: Sequence[Tuple[str, str]], max_len: int) -> Batch:
    """Encode (source, target) pairs, truncating both sides to max_len characters"""
    src, src_mask = pad_ids([vocab.encode(s[:max_len]) + [EOS] for s, _ in pairs])
    tgt, tgt_mask = pad_ids([vocab.encode(t[:max_len]) + [EOS] for _, t in pairs])
    return Batch(src=src, src_mask=src_mask, tgt=tgt, tgt_mask=tgt_mask)


def gru_step(x, h, Wx, Wh, b):
    H = h.shape[1]
    gx = x @ Wx + b
    gh = h @ Wh
    z = sigmoid(gx[:, :H] + gh[:, :H])
    r = sigmoid(gx[:, H:2 * H] + gh[:, H:2 * H])
    n = np.tanh(gx[:, 2 * H:] + r * gh[:, 2 * H:])
    h_new = (1.0 - z) * n + z * h
    return h_new, (x, h, z, r, n, gh[:, 2 * H:])


def gru_step_backward(dh, cache, Wx, Wh, grads, prefix):
    """Accumulate parameter gradients; return (dx, dh_prev)"""
    x, h, z, r, n, gh_n = cache
    dn = dh * (1.0 - z)
    dz = dh * (h - n)
    dh_prev = dh * z
    dan = dn * (1.0 - n ** 2)
    daz = dz * z * (1.0 - z)
    dar = dan * gh_n * r * (1.0 - r)
    dgx = np.concatenate([daz, dar, dan], axis=1)
    dgh = np.concatenate([daz, dar, dan * r], axis=1)
    grads[f"{prefix}_Wx"] += x.T @ dgx
    grads[f"{prefix}_b"] += dgx.sum(axis=0)
    grads[f"{prefix}_Wh"] += h.T @ dgh
    return dgx @ Wx.T, dh_prev + dgh @ Wh.T


class Seq2SeqModel:
    """Parameters, vocabulary and config of one encoder-decoder"""

    def __init__(
        self,
        vocab: Vocabulary,
        config: TrainConfig,
        params: Dict[str, np.ndarray],
        table: Optional[NormalizationTable] = None,
    ):
        missing = [name for name in PARAM_NAMES if name not in params]
        if missing:
            raise ValueError(f"missing parameter tensors: {missing}")
        self.vocab = vocab
        self.config = config
        self.params = params
        # digraph table the training text was normalized with, if any
        self.table = table

    @classmethod
    def initialize(cls, vocab: Vocabulary, config: TrainConfig, rng: np.random.Generator) -> "Seq2SeqModel":
        """Uniform(-init_scale, init_scale) init drawn from the given generator"""
        shapes = parameter_shapes(len(vocab), config.embed_dim, config.hidden_dim)
        scale = config.init_scale
        params = {name: rng.uniform(-scale, scale, size=shapes[name]) for name in PARAM_NAMES}
        return cls(vocab, config, params)

    def copy(self) -> "Seq2SeqModel":
        return Seq2SeqModel(self.vocab, self.config, {k: v.copy() for k, v in self.params.items()}, self.table)

    @property
    def hidden_dim(self) -> int:
        return self.params["enc_Wh"].shape[0]

    def all_finite(self) -> bool:
        return all(np.isfinite(v).all() for v in self.params.values())

    # Forward

    def encode(self, src: np.ndarray, src_mask: np.ndarray):
        p = self.params
        B, S = src.shape
        h = np.zeros((B, self.hidden_dim))
        states = np.zeros((B, S, self.hidden_dim))
        caches = []
        embedded = p["enc_embed"][src]
        for t in range(S):
            h_new, cache = gru_step(embedded[:, t], h, p["enc_Wx"], p["enc_Wh"], p["enc_b"])
            m = src_mask[:, t:t + 1]
            h = m * h_new + (1.0 - m) * h
            states[:, t] = h
            caches.append((cache, m))
        keys = states @ p["att_U"]
        return states, keys, h, caches

    def attend(self, s, states, keys, src_mask):
        p = self.params
        pre = np.tanh(keys + (s @ p["att_W"])[:, None, :])
        scores = np.where(src_mask > 0, pre @ p["att_v"], MASKED_SCORE)
        alpha = softmax(scores, axis=1)
        context = np.einsum("bs,bsh->bh", alpha, states)
        return context, alpha, pre

    def decoder_step(self, inputs, s, states, keys, src_mask):
        """One decoder step from input ids; returns (logits, new state, cache)"""
        p = self.params
        x = p["dec_embed"][inputs]
        s_new, gru_cache = gru_step(x, s, p["dec_Wx"], p["dec_Wh"], p["dec_b"])
        context, alpha, pre = self.attend(s_new, states, keys, src_mask)
        o = np.concatenate([s_new, context], axis=1)
        logits = o @ p["out_W"] + p["out_b"]
        return logits, s_new, (inputs, gru_cache, s_new, context, alpha, pre, o)

    def forward(self, batch: Batch, feed: Optional[np.ndarray] = None):
        """
        Teacher-forced (or partly free-running) loss over non-PAD targets

        Args:
            batch: Padded minibatch
            feed: Optional (B, T) bool; False at step t feeds the model's own
                argmax from step t-1 instead of the gold character

        Returns:
            (loss, cache) where loss is the mean token cross-entropy
        """
        states, keys, s, enc_caches = self.encode(batch.src, batch.src_mask)
        B, T = batch.tgt.shape
        weights = batch.tgt_mask
        n_tokens = max(weights.sum(), 1.0)
        inputs = np.full(B, BOS, dtype=np.int64)
        total = 0.0
        steps = []
        for t in range(T):
            logits, s, cache = self.decoder_step(inputs, s, states, keys, batch.src_mask)
            probs = softmax(logits, axis=1)
            gold = batch.tgt[:, t]
            picked = np.clip(probs[np.arange(B), gold], 1e-300, None)
            total -= float((np.log(picked) * weights[:, t]).sum())
            steps.append((cache, probs))
            inputs = gold
            if feed is not None and t + 1 < T:
                inputs = np.where(feed[:, t + 1], gold, probs.argmax(axis=1))
        loss = total / n_tokens
        return loss, (batch, states, keys, enc_caches, steps, n_tokens)

    # Backward

    def backward(self, cache) -> Dict[str, np.ndarray]:
        batch, states, keys, enc_caches, steps, n_tokens = cache
        p = self.params
        H = self.hidden_dim
        grads = {name: np.zeros_like(p[name]) for name in PARAM_NAMES}
        B, T = batch.tgt.shape
        d_states = np.zeros_like(states)
        d_keys = np.zeros_like(keys)
        ds_next = np.zeros((B, H))

        for t in reversed(range(T)):
            (inputs, gru_cache, s, context, alpha, pre, o), probs = steps[t]
            dlogits = probs.copy()
            dlogits[np.arange(B), batch.tgt[:, t]] -= 1.0
            dlogits *= batch.tgt_mask[:, t:t + 1] / n_tokens

            grads["out_W"] += o.T @ dlogits
            grads["out_b"] += dlogits.sum(axis=0)
            do = dlogits @ p["out_W"].T
            ds = do[:, :H] + ds_next
            dcontext = do[:, H:]

            dalpha = np.einsum("bh,bsh->bs", dcontext, states)
            d_states += alpha[:, :, None] * dcontext[:, None, :]
            dscores = alpha * (dalpha - (alpha * dalpha).sum(axis=1, keepdims=True))
            grads["att_v"] += np.einsum("bs,bsa->a", dscores, pre)
            dpre_in = dscores[:, :, None] * p["att_v"][None, None, :] * (1.0 - pre ** 2)
            d_keys += dpre_in
            dq = dpre_in.sum(axis=1)
            grads["att_W"] += s.T @ dq
            ds += dq @ p["att_W"].T

            dx, ds_next = gru_step_backward(ds, gru_cache, p["dec_Wx"], p["dec_Wh"], grads, "dec")
            np.add.at(grads["dec_embed"], inputs, dx)

        grads["att_U"] += np.einsum("bsh,bsa->ha", states, d_keys)
        d_states += d_keys @ p["att_U"].T

        # final encoder state initialised the decoder
        dh = ds_next
        for t in reversed(range(batch.src.shape[1])):
            (gru_cache, m) = enc_caches[t]
            dh = dh + d_states[:, t]
            dx, dh_prev = gru_step_backward(m * dh, gru_cache, p["enc_Wx"], p["enc_Wh"], grads, "enc")
            np.add.at(grads["enc_embed"], batch.src[:, t], dx)
            dh = dh_prev + (1.0 - m) * dh
        return grads

    def loss_and_grads(self, batch: Batch, feed: Optional[np.ndarray] = None):
        loss, cache = self.forward(batch, feed)
        return loss, self.backward(cache)

    def loss(self, batch: Batch) -> float:
        return self.forward(batch)[0]


def parameter_shapes(vocab_size: int, embed_dim: int, hidden_dim: int) -> Dict[str, Tuple[int, ...]]:
    V, D, H = vocab_size, embed_dim, hidden_dim
    return {
        "enc_embed": (V, D), "enc_Wx": (D, 3 * H), "enc_Wh": (H, 3 * H), "enc_b": (3 * H,),
        "dec_embed": (V, D), "dec_Wx": (D, 3 * H), "dec_Wh": (H, 3 * H), "dec_b": (3 * H,),
        "att_W": (H, H), "att_U": (H, H), "att_v": (H,),
        "out_W": (2 * H, V), "out_b": (V,),
    }
