"""
Rule Set Model
Ordered substitutions for the rule-based baseline converter
"""

from typing import Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator


class Substitution(BaseModel):
    model_config = ConfigDict(frozen=True)

    source: str = Field(..., min_length=1)
    target: str


class RuleSet(BaseModel):
    """Correspondence rules from one orthography to another, applied in listed order"""
    model_config = ConfigDict(frozen=True)

    source_profile: str
    target_profile: str
    substitutions: Tuple[Substitution, ...] = Field(default=())
    apply_hts: bool = Field(default=True, description="Apply High Tone Spreading after substitutions")

    @field_validator("substitutions", mode="before")
    @classmethod
    def _coerce_pairs(cls, value):
        coerced = []
        for i, item in enumerate(value or ()):
            if isinstance(item, (list, tuple)):
                if len(item) != 2:
                    raise ValueError(f"substitutions[{i}]: expected [source, target]")
                coerced.append({"source": item[0], "target": item[1]})
            else:
                coerced.append(item)
        return coerced

    def __len__(self) -> int:
        return len(self.substitutions)

    @field_validator("substitutions")
    @classmethod
    def _unique_sources(cls, value):
        seen = set()
        for i, sub in enumerate(value):
            if sub.source in seen:
                raise ValueError(f"substitutions[{i}]: duplicate source {sub.source!r}")
            seen.add(sub.source)
        return value
