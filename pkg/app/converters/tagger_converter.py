"""
Tagger Converter
Token-level edit tagging applied iteratively until the predictor is satisfied
"""

from ..services.edit_tagger import TagPredictor, iterate, tokenize
from .base_converter import BaseConverter


class TaggerConverter(BaseConverter):
    converter_name = "tagger_converter"

    def __init__(self, predictor: TagPredictor, max_iters: int = 5):
        super().__init__()
        self.predictor = predictor
        self.max_iters = max_iters

    def convert_sentence(self, sentence: str) -> str:
        result = iterate(tokenize(sentence), self.predictor, self.max_iters)
        if not result.converged:
            self.log(f"No fixed point after {result.iterations} iterations", level="warning")
        return " ".join(result.tokens)
