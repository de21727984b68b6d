"""
Rule Converter
Deterministic baseline: substitutions plus High Tone Spreading
"""

from ..models.orthography import OrthographyProfile
from ..models.rules import RuleSet
from ..services.rule_baseline import RuleConverterCore
from .base_converter import BaseConverter


class RuleConverter(BaseConverter):
    converter_name = "rule_converter"

    def __init__(self, rules: RuleSet, source: OrthographyProfile, target: OrthographyProfile):
        super().__init__()
        self.core = RuleConverterCore(rules, source, target)

    def convert_sentence(self, sentence: str) -> str:
        return self.core.convert(sentence)
