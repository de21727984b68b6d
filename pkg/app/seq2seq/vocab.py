"""
Character Vocabulary
Dense ids for every code point of a parallel corpus, specials first
"""

from typing import Dict, Iterable, List, Tuple

from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, model_validator

from ..exceptions import EmptyCorpus
from ..models.corpus import ParallelCorpus

PAD, BOS, EOS, UNK = 0, 1, 2, 3
SPECIALS: Tuple[str, ...] = ("<pad>", "<bos>", "<eos>", "<unk>")


class Vocabulary(BaseModel):
    """Bijective code point <-> id map; ids 0-3 are PAD, BOS, EOS, UNK"""
    model_config = ConfigDict(frozen=True)

    chars: Tuple[str, ...] = Field(default=(), description="Characters in id order, starting at id 4")
    _lookup: Dict[str, int] = PrivateAttr(default_factory=dict)

    @model_validator(mode="after")
    def _check_chars(self) -> "Vocabulary":
        for ch in self.chars:
            if len(ch) != 1:
                raise ValueError(f"vocabulary entries must be single code points, got {ch!r}")
        if len(set(self.chars)) != len(self.chars):
            raise ValueError("vocabulary characters must be unique")
        return self

    def model_post_init(self, __context) -> None:
        self._lookup = {ch: i + len(SPECIALS) for i, ch in enumerate(self.chars)}

    def __len__(self) -> int:
        return len(SPECIALS) + len(self.chars)

    @property
    def char_to_id(self) -> Dict[str, int]:
        return dict(self._lookup)

    def encode(self, text: str) -> List[int]:
        return [self._lookup.get(ch, UNK) for ch in text]

    def decode(self, ids: Iterable[int]) -> str:
        """Characters for the ids, special ids dropped"""
        offset = len(SPECIALS)
        return "".join(self.chars[i - offset] for i in ids if i >= offset)


def build_vocab(corpus: ParallelCorpus) -> Vocabulary:
    """
    Vocabulary over both sides of the corpus, characters ordered by code point

    Raises:
        EmptyCorpus: no examples
    """
    if len(corpus) == 0:
        raise EmptyCorpus("cannot build a vocabulary from an empty corpus")
    chars = set()
    for ex in corpus:
        chars.update(ex.source)
        chars.update(ex.target)
    return Vocabulary(chars=tuple(sorted(chars)))
