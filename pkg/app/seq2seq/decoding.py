"""
Greedy Decoding
Batched argmax decoding from BOS until EOS or max_len characters
"""

from typing import List, Sequence

import numpy as np

from .network import Seq2SeqModel, pad_ids
from .vocab import BOS, EOS


def predict_batch(model: Seq2SeqModel, inputs: Sequence[str], batch_size: int = 64) -> List[str]:
    """
    Decode many inputs; inputs are cut to the model's max_len

    Returns:
        One output per input, specials removed, at most max_len characters each
    """
    max_len = model.config.max_len
    outputs: List[str] = []
    for start in range(0, len(inputs), batch_size):
        chunk = inputs[start:start + batch_size]
        src, src_mask = pad_ids([model.vocab.encode(text[:max_len]) + [EOS] for text in chunk])
        states, keys, s, _ = model.encode(src, src_mask)
        B = len(chunk)
        tokens = np.full(B, BOS, dtype=np.int64)
        done = np.zeros(B, dtype=bool)
        generated = [[] for _ in range(B)]
        for _ in range(max_len):
            logits, s, _ = model.decoder_step(tokens, s, states, keys, src_mask)
            tokens = logits.argmax(axis=1)
            for row in np.flatnonzero(~done):
                if tokens[row] == EOS:
                    done[row] = True
                else:
                    generated[row].append(int(tokens[row]))
            if done.all():
                break
        outputs.extend(model.vocab.decode(ids) for ids in generated)
    return outputs


def predict(model: Seq2SeqModel, text: str) -> str:
    """Greedy transliteration of one sentence"""
    return predict_batch(model, [text])[0]
