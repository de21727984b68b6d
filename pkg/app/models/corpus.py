"""
Parallel Corpus Models
Aligned (source, target) sentence pairs with optional split labels
"""

import unicodedata
from enum import Enum
from typing import Iterator, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator


class Split(str, Enum):
    """Corpus partition"""
    TRAIN = "train"
    VALID = "valid"
    TEST = "test"


class SentencePair(BaseModel):
    """One aligned sentence pair, stored canonically decomposed"""
    model_config = ConfigDict(frozen=True)

    source: str
    target: str = Field(..., min_length=1)
    split: Optional[Split] = None
    line_no: Optional[int] = Field(default=None, description="Line in the file it was loaded from")

    @field_validator("source", "target")
    @classmethod
    def _decompose(cls, value: str) -> str:
        if "\t" in value or "\n" in value:
            raise ValueError("sentences may not contain TAB or newline")
        return unicodedata.normalize("NFD", value)


class ParallelCorpus(BaseModel):
    """Ordered collection of sentence pairs"""
    model_config = ConfigDict(frozen=True)

    examples: Tuple[SentencePair, ...] = Field(default=())

    def __len__(self) -> int:
        return len(self.examples)

    def __iter__(self) -> Iterator[SentencePair]:
        return iter(self.examples)

    @property
    def sources(self) -> List[str]:
        return [ex.source for ex in self.examples]

    @property
    def targets(self) -> List[str]:
        return [ex.target for ex in self.examples]

    @classmethod
    def from_pairs(cls, pairs, split: Optional[Split] = None) -> "ParallelCorpus":
        return cls(examples=tuple(SentencePair(source=s, target=t, split=split) for s, t in pairs))

    def select(self, split: Split) -> "ParallelCorpus":
        """Examples carrying the given split label"""
        return ParallelCorpus(examples=tuple(ex for ex in self.examples if ex.split == split))

    def has_splits(self) -> bool:
        return any(ex.split is not None for ex in self.examples)

    def split_counts(self) -> dict:
        counts = {s.value: 0 for s in Split}
        for ex in self.examples:
            if ex.split is not None:
                counts[ex.split.value] += 1
        return counts
