"""
Seq2seq Converter
Trained encoder-decoder wrapped with digraph normalization on both ends
"""

from typing import Iterable, List, Optional

from ..models.normalization import NormalizationTable
from ..seq2seq.decoding import predict_batch
from ..seq2seq.network import Seq2SeqModel
from ..services.normalizer import denormalize, normalize
from ..services.text_model import decompose
from .base_converter import BaseConverter


class Seq2SeqConverter(BaseConverter):
    """
    Greedy seq2seq transliteration

    Inputs are normalized with the model's digraph table before decoding and
    outputs expanded with it afterwards; a model trained on raw text sees raw
    text.
    """

    converter_name = "seq2seq_converter"

    def __init__(self, model: Seq2SeqModel, table: Optional[NormalizationTable] = None):
        super().__init__()
        self.model = model
        self.table = table if table is not None else model.table

    def convert_sentence(self, sentence: str) -> str:
        return self.convert_lines([sentence])[0]

    def decode_normalized(self, lines: Iterable[str]) -> List[str]:
        """Model outputs before digraph expansion"""
        prepared = [decompose(line) for line in lines]
        if self.table is not None:
            prepared = [normalize(line, self.table) for line in prepared]
        outputs = predict_batch(self.model, prepared)
        self.log(f"Decoded {len(outputs)} sentences")
        return outputs

    def finish(self, output: str) -> str:
        return denormalize(output, self.table) if self.table is not None else output

    def convert_lines(self, lines: Iterable[str]) -> List[str]:
        return [self.finish(out) for out in self.decode_normalized(lines)]
