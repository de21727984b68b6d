"""
Edit Tagging Models
Token-level edit operations, transformation tags and tagged sentences
"""

from enum import Enum
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

START_TOKEN = "$START"


class EditOpKind(str, Enum):
    MATCH = "match"
    SUBSTITUTE = "substitute"
    DELETE = "delete"
    INSERT = "insert"


class EditOp(BaseModel):
    """One step of a token-level edit script"""
    model_config = ConfigDict(frozen=True)

    kind: EditOpKind
    source_index: Optional[int] = Field(default=None, description="Consumed source token, None for insert")
    source: Optional[str] = None
    target: Optional[str] = None

    @property
    def cost(self) -> int:
        return 0 if self.kind == EditOpKind.MATCH else 1


class EditTagKind(str, Enum):
    KEEP = "KEEP"
    DELETE = "DELETE"
    REPLACE = "REPLACE"
    APPEND = "APPEND"
    MERGE_HYPHEN = "MERGE_HYPHEN"


class EditTag(BaseModel):
    """Transformation tag; REPLACE and APPEND carry one non-empty token"""
    model_config = ConfigDict(frozen=True)

    kind: EditTagKind
    token: Optional[str] = None

    @model_validator(mode="after")
    def _check_payload(self) -> "EditTag":
        needs_payload = self.kind in (EditTagKind.REPLACE, EditTagKind.APPEND)
        if needs_payload and not self.token:
            raise ValueError(f"{self.kind.value} requires a non-empty token")
        if not needs_payload and self.token is not None:
            raise ValueError(f"{self.kind.value} takes no token")
        return self

    @classmethod
    def keep(cls) -> "EditTag":
        return cls(kind=EditTagKind.KEEP)

    @classmethod
    def delete(cls) -> "EditTag":
        return cls(kind=EditTagKind.DELETE)

    @classmethod
    def replace(cls, token: str) -> "EditTag":
        return cls(kind=EditTagKind.REPLACE, token=token)

    @classmethod
    def append(cls, token: str) -> "EditTag":
        return cls(kind=EditTagKind.APPEND, token=token)

    @classmethod
    def merge_hyphen(cls) -> "EditTag":
        return cls(kind=EditTagKind.MERGE_HYPHEN)

    def __str__(self) -> str:
        return f"{self.kind.value}_{self.token}" if self.token is not None else self.kind.value


class TaggedSentence(BaseModel):
    """Source tokens (led by the virtual start token) with one tag list each"""
    model_config = ConfigDict(frozen=True)

    tokens: Tuple[str, ...]
    tags: Tuple[Tuple[EditTag, ...], ...]

    @model_validator(mode="after")
    def _check_shape(self) -> "TaggedSentence":
        if len(self.tokens) != len(self.tags):
            raise ValueError(f"{len(self.tokens)} tokens but {len(self.tags)} tag lists")
        if any(len(tag_list) == 0 for tag_list in self.tags):
            raise ValueError("every token needs at least one tag")
        return self

    @property
    def is_all_keep(self) -> bool:
        return all(all(t.kind == EditTagKind.KEEP for t in tag_list) for tag_list in self.tags)

    @property
    def edit_count(self) -> int:
        """Tokens carrying anything other than KEEP"""
        return sum(1 for tag_list in self.tags if any(t.kind != EditTagKind.KEEP for t in tag_list))


class IterationResult(BaseModel):
    """Outcome of iterative tag application"""
    tokens: List[str]
    iterations: int = Field(..., ge=0)
    converged: bool
