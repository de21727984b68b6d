"""
Hyperparameter Sweep
One training run per config, scored on a held-out split, best row flagged
"""

import logging
from pathlib import Path
from typing import Callable, List, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, Field, ValidationError

from ..exceptions import DataError
from ..models.corpus import ParallelCorpus
from ..models.normalization import NormalizationTable
from ..models.training import SweepReport, SweepRow, SweepStatus, TrainConfig, TrainingResult
from ..services.metrics import evaluate
from ..services.normalizer import denormalize, normalize
from ..services.text_model import validation_path
from ..storage.artifacts import read_json
from .decoding import predict_batch
from .network import Seq2SeqModel
from .trainer import train

logger = logging.getLogger(__name__)

TrainFn = Callable[[ParallelCorpus, TrainConfig], Tuple[Seq2SeqModel, TrainingResult]]

# Epoch/length shapes of the published sweep
PUBLISHED_SHAPES: Tuple[Tuple[int, int], ...] = (
    (1, 73), (4, 73), (5, 25), (5, 35), (5, 60), (7, 35), (10, 40), (10, 45),
)


def preset_grid(base: Optional[TrainConfig] = None) -> List[TrainConfig]:
    base = base or TrainConfig()
    return [base.model_copy(update={"epochs": e, "max_len": n}) for e, n in PUBLISHED_SHAPES]


class SweepGrid(BaseModel):
    """Grid file: shared base config plus per-row overrides"""
    base: dict = Field(default_factory=dict)
    configs: List[dict] = Field(default_factory=list)
    preset: bool = Field(default=False, description="Use the published epoch/length shapes")

    def expand(self) -> List[TrainConfig]:
        base = TrainConfig.model_validate(self.base)
        grid = preset_grid(base) if self.preset else []
        grid.extend(TrainConfig.model_validate({**self.base, **row}) for row in self.configs)
        return grid


def load_grid(path: Union[str, Path]) -> List[TrainConfig]:
    data = read_json(path, role="sweep grid")
    try:
        if isinstance(data, list):
            grid = SweepGrid(configs=data).expand()
        else:
            grid = SweepGrid.model_validate(data).expand()
    except ValidationError as e:
        where, message = validation_path(e)
        raise DataError(f"{path}: {where}: {message}") from e
    if not grid:
        raise DataError(f"{path}: sweep grid is empty")
    return grid


def flag_best(rows: List[SweepRow]) -> None:
    """Lowest WER wins, ties broken by lowest CER, then by grid order"""
    scored = [row for row in rows if row.status == SweepStatus.OK]
    if scored:
        best = min(scored, key=lambda row: (row.wer, row.cer))
        best.best = True


def run_sweep(
    train_corpus: ParallelCorpus,
    eval_corpus: ParallelCorpus,
    grid: Sequence[TrainConfig],
    train_fn: TrainFn = train,
    table: Optional[NormalizationTable] = None,
    preprocess: Optional[Callable[[str], str]] = None,
) -> SweepReport:
    """
    Train and score every config in the grid

    Args:
        train_corpus: Training pairs
        eval_corpus: Pairs the CER/WER columns are computed on
        grid: Configs, reported in the given order
        train_fn: Training entry point
        table: Optional digraph table; training and decoding run on normalized
            text and predictions are expanded before scoring
        preprocess: Optional source rewrite (e.g. removing spelling
            correspondences) applied to training and evaluation sources

    Returns:
        SweepReport with one row per config; a failing row is marked failed
        and the sweep continues
    """
    if not grid:
        raise DataError("sweep grid is empty")
    eval_sources = eval_corpus.sources
    if preprocess is not None:
        train_corpus = ParallelCorpus.from_pairs([(preprocess(ex.source), ex.target) for ex in train_corpus])
        eval_sources = [preprocess(s) for s in eval_sources]
    if table is not None:
        train_corpus = ParallelCorpus.from_pairs(
            [(normalize(ex.source, table), normalize(ex.target, table)) for ex in train_corpus]
        )
        eval_sources = [normalize(s, table) for s in eval_sources]

    rows: List[SweepRow] = []
    for index, config in enumerate(grid, start=1):
        logger.info(f"Sweep row {index}/{len(grid)}: {config.label}")
        try:
            model, result = train_fn(train_corpus, config)
            hypotheses = predict_batch(model, eval_sources)
            if table is not None:
                hypotheses = [denormalize(h, table) for h in hypotheses]
            report = evaluate(hypotheses, eval_corpus.targets)
        except Exception as e:
            logger.error(f"Sweep row {config.label} failed: {e}")
            rows.append(SweepRow(parameters=config.label, config=config, status=SweepStatus.FAILED, error=str(e)))
            continue
        rows.append(SweepRow(
            parameters=config.label,
            config=config,
            cer=report.cer,
            wer=report.wer,
            final_loss=result.loss_log[-1] if result.loss_log else None,
        ))
    flag_best(rows)
    return SweepReport(rows=rows)
