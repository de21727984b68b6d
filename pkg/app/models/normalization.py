"""
Normalization Table Model
Digraph unification table derived from an orthography profile
"""

from typing import Dict, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .orthography import is_private_use


class NormalizationEntry(BaseModel):
    model_config = ConfigDict(frozen=True)

    source: str = Field(..., min_length=1, max_length=4)
    replacement: str = Field(..., min_length=1, max_length=1)


class NormalizationTable(BaseModel):
    """Ordered (source -> private-use code point) entries, longest source first"""
    model_config = ConfigDict(frozen=True)

    entries: Tuple[NormalizationEntry, ...] = Field(default=())
    origin_profile: str = ""

    @model_validator(mode="after")
    def _check_invariants(self) -> "NormalizationTable":
        replacements = [e.replacement for e in self.entries]
        sources = [e.source for e in self.entries]
        if len(set(replacements)) != len(replacements):
            raise ValueError("replacements must be pairwise distinct")
        if len(set(sources)) != len(sources):
            raise ValueError("sources must be unique")
        if any(not is_private_use(r) for r in replacements):
            raise ValueError("replacements must be private-use code points")
        lengths = [len(s) for s in sources]
        if lengths != sorted(lengths, reverse=True):
            raise ValueError("entries must be sorted by descending source length")
        if set(sources) & set(replacements):
            raise ValueError("a source may not equal a replacement")
        return self

    @property
    def forward(self) -> Dict[str, str]:
        return {e.source: e.replacement for e in self.entries}

    @property
    def inverse(self) -> Dict[str, str]:
        return {e.replacement: e.source for e in self.entries}

    def __len__(self) -> int:
        return len(self.entries)
