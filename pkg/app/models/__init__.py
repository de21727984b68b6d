"""Toolkit Data Models"""

from .orthography import ToneMark, OrthographyProfile, TonedText, DigraphEntry
from .normalization import NormalizationTable, NormalizationEntry
from .corpus import ParallelCorpus, SentencePair, Split
from .rules import RuleSet, Substitution
from .tagging import EditOp, EditOpKind, EditTag, EditTagKind, TaggedSentence, IterationResult, START_TOKEN
from .training import TrainConfig, TrainingResult, SweepRow, SweepReport, SweepStatus
from .report import EvalReport, PipelineReport
from .pipeline import PipelineConfig

__all__ = [
    "ToneMark",
    "OrthographyProfile",
    "TonedText",
    "DigraphEntry",
    "NormalizationTable",
    "NormalizationEntry",
    "ParallelCorpus",
    "SentencePair",
    "Split",
    "RuleSet",
    "Substitution",
    "EditOp",
    "EditOpKind",
    "EditTag",
    "EditTagKind",
    "TaggedSentence",
    "IterationResult",
    "START_TOKEN",
    "TrainConfig",
    "TrainingResult",
    "SweepRow",
    "SweepReport",
    "SweepStatus",
    "EvalReport",
    "PipelineReport",
    "PipelineConfig",
]
