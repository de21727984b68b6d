"""Basaa Toolkit Converters"""

from .base_converter import BaseConverter
from .rule_converter import RuleConverter
from .tagger_converter import TaggerConverter
from .seq2seq_converter import Seq2SeqConverter
from .orchestrator import PipelineOrchestrator, load_pipeline_config

__all__ = [
    "BaseConverter",
    "RuleConverter",
    "TaggerConverter",
    "Seq2SeqConverter",
    "PipelineOrchestrator",
    "load_pipeline_config",
]
