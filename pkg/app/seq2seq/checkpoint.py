"""
Model Checkpoints
Versioned JSON envelope: {format_version, vocab, config, normalization, tensors}
"""

import logging
from pathlib import Path
from typing import Union

import numpy as np
from pydantic import ValidationError

from ..config import settings
from ..exceptions import CheckpointError
from ..models.training import TrainConfig
from ..services.normalizer import build_table
from ..storage.artifacts import atomic_write_json, read_json
from .network import PARAM_NAMES, Seq2SeqModel, parameter_shapes
from .vocab import Vocabulary

logger = logging.getLogger(__name__)


def to_checkpoint(model: Seq2SeqModel) -> dict:
    return {
        "format_version": settings.checkpoint_format_version,
        "vocab": list(model.vocab.chars),
        "config": model.config.model_dump(mode="json"),
        "normalization": (
            [[e.source, e.replacement] for e in model.table.entries] if model.table is not None else None
        ),
        "tensors": {
            name: {"shape": list(model.params[name].shape), "data": model.params[name].reshape(-1).tolist()}
            for name in PARAM_NAMES
        },
    }


def from_checkpoint(data: dict, source: str = "checkpoint") -> Seq2SeqModel:
    """Rebuild a model, rejecting unknown versions and inconsistent tensors"""
    if not isinstance(data, dict):
        raise CheckpointError(f"{source}: expected a JSON object")
    version = data.get("format_version")
    if version != settings.checkpoint_format_version:
        raise CheckpointError(f"{source}: unsupported format_version {version!r}")
    try:
        vocab = Vocabulary(chars=tuple(data["vocab"]))
        config = TrainConfig.model_validate(data["config"])
        tensors = data["tensors"]
    except (KeyError, TypeError, ValidationError) as e:
        raise CheckpointError(f"{source}: malformed checkpoint ({e})") from e

    shapes = parameter_shapes(len(vocab), config.embed_dim, config.hidden_dim)
    params = {}
    for name in PARAM_NAMES:
        if name not in tensors:
            raise CheckpointError(f"{source}: missing tensor {name}")
        shape = tuple(tensors[name].get("shape", ()))
        if shape != shapes[name]:
            raise CheckpointError(f"{source}: tensor {name} has shape {shape}, expected {shapes[name]}")
        values = np.asarray(tensors[name].get("data", []), dtype=np.float64)
        if values.size != int(np.prod(shape)):
            raise CheckpointError(f"{source}: tensor {name} holds {values.size} values for shape {shape}")
        params[name] = values.reshape(shape)
    table = None
    if data.get("normalization"):
        try:
            table = build_table([tuple(pair) for pair in data["normalization"]], origin_profile="checkpoint")
        except (TypeError, ValueError) as e:
            raise CheckpointError(f"{source}: invalid normalization table ({e})") from e
    return Seq2SeqModel(vocab, config, params, table)


def save_model(model: Seq2SeqModel, path: Union[str, Path]) -> Path:
    path = atomic_write_json(path, to_checkpoint(model))
    logger.info(f"Saved model checkpoint to {path}")
    return path


def load_model(path: Union[str, Path]) -> Seq2SeqModel:
    data = read_json(path, role="model checkpoint")
    return from_checkpoint(data, source=str(path))
