"""
Gradient Check
Analytic gradients against central finite differences
"""

import logging
from typing import Callable, Dict, Optional

import numpy as np
from pydantic import BaseModel, Field

from ..config import settings
from .network import PARAM_NAMES, Batch, Seq2SeqModel

logger = logging.getLogger(__name__)

GradientHook = Callable[[Dict[str, np.ndarray]], None]


class GradientCheckReport(BaseModel):
    per_tensor: Dict[str, float] = Field(default_factory=dict, description="Max relative error per tensor")
    coordinates: Dict[str, int] = Field(default_factory=dict)
    tolerance: float

    @property
    def max_error(self) -> float:
        return max(self.per_tensor.values(), default=0.0)

    @property
    def passed(self) -> bool:
        return self.max_error < self.tolerance


def relative_error(analytic: float, numeric: float, floor: float = 1e-5) -> float:
    return abs(analytic - numeric) / max(abs(analytic) + abs(numeric), floor)


def gradient_check(
    model: Seq2SeqModel,
    batch: Batch,
    samples: int = 50,
    step: float = 1e-5,
    seed: int = 0,
    corrupt: Optional[GradientHook] = None,
    tolerance: Optional[float] = None,
) -> GradientCheckReport:
    """
    Compare backward() with central differences on sampled coordinates

    Args:
        model: Model to check; its parameters are restored afterwards
        batch: Tiny teacher-forced batch
        samples: Coordinates per tensor (all of them when the tensor is smaller)
        step: Finite-difference step
        seed: Coordinate sampling seed
        corrupt: Optional hook that mutates the analytic gradients before comparison
        tolerance: Pass threshold; defaults to the configured gradient-check tolerance

    Returns:
        GradientCheckReport with the max relative error per tensor
    """
    _, grads = model.loss_and_grads(batch)
    if corrupt is not None:
        corrupt(grads)
    rng = np.random.default_rng(seed)
    report = GradientCheckReport(tolerance=tolerance if tolerance is not None else settings.gradcheck_tolerance)

    for name in PARAM_NAMES:
        param = model.params[name]
        flat = param.reshape(-1)
        if flat.size <= samples:
            coords = np.arange(flat.size)
        else:
            coords = rng.choice(flat.size, size=samples, replace=False)
        worst = 0.0
        analytic = grads[name].reshape(-1)
        for index in coords:
            original = flat[index]
            flat[index] = original + step
            plus = model.loss(batch)
            flat[index] = original - step
            minus = model.loss(batch)
            flat[index] = original
            numeric = (plus - minus) / (2.0 * step)
            worst = max(worst, relative_error(float(analytic[index]), numeric))
        report.per_tensor[name] = worst
        report.coordinates[name] = int(len(coords))
        logger.debug(f"gradient check {name}: max relative error {worst:.3e}")

    logger.info(f"Gradient check max relative error {report.max_error:.3e} (tolerance {report.tolerance:g})")
    return report
