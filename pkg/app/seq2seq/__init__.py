"""Basaa Toolkit Seq2seq Converter"""

from .vocab import Vocabulary, build_vocab, PAD, BOS, EOS, UNK
from .network import Seq2SeqModel, Batch, make_batch, PARAM_NAMES
from .trainer import train
from .decoding import predict, predict_batch
from .gradcheck import gradient_check, GradientCheckReport
from .checkpoint import save_model, load_model
from .sweep import run_sweep, preset_grid, load_grid

__all__ = [
    "Vocabulary", "build_vocab", "PAD", "BOS", "EOS", "UNK",
    "Seq2SeqModel", "Batch", "make_batch", "PARAM_NAMES",
    "train",
    "predict", "predict_batch",
    "gradient_check", "GradientCheckReport",
    "save_model", "load_model",
    "run_sweep", "preset_grid", "load_grid",
]
