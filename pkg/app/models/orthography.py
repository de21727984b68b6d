"""
Orthography Data Models
Tone marks, orthography profiles and toned text
"""

import unicodedata
from enum import Enum
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

# The seven Basaa vowel letters
VOWELS: Tuple[str, ...] = ("i", "e", "ɛ", "u", "o", "ɔ", "a")
DEFAULT_NASALS: Tuple[str, ...] = ("m", "n", "ŋ")

UNMARKED = "unmarked"
PRIVATE_USE_START = 0xE000
PRIVATE_USE_END = 0xF8FF


def is_private_use(char: str) -> bool:
    """True for a code point in the Basic Multilingual Plane private-use area"""
    return len(char) == 1 and PRIVATE_USE_START <= ord(char) <= PRIVATE_USE_END


def parse_code_point(value: str) -> str:
    """Accept either a literal character or a "U+XXXX" spelling"""
    if isinstance(value, str) and value.upper().startswith("U+") and len(value) > 2:
        return chr(int(value[2:], 16))
    return value


class ToneMark(str, Enum):
    """Basaa tones: two register tones and two contours"""
    LOW = "low"
    HIGH = "high"
    RISING = "rising"
    FALLING = "falling"


class DigraphEntry(BaseModel):
    """Grapheme of 1-4 code points unified into one private-use code point"""
    model_config = ConfigDict(frozen=True)

    source: str = Field(..., min_length=1, max_length=4)
    replacement: Optional[str] = Field(default=None, description="Private-use code point; auto-assigned if absent")

    @field_validator("replacement", mode="before")
    @classmethod
    def _parse_replacement(cls, value):
        if value is None:
            return None
        value = parse_code_point(value)
        if not is_private_use(value):
            raise ValueError(f"replacement {value!r} is not a single private-use code point")
        return value


class OrthographyProfile(BaseModel):
    """Alphabet, digraph table and tone-diacritic conventions of one spelling system"""
    model_config = ConfigDict(frozen=True)

    id: str = Field(..., min_length=1)
    alphabet: Tuple[str, ...] = Field(..., description="Ordered base graphemes")
    digraphs: Tuple[DigraphEntry, ...] = Field(default=())
    tone_diacritics: Dict[ToneMark, str] = Field(default_factory=dict)
    allow_unmarked_low: bool = Field(default=True)
    nasals: Tuple[str, ...] = Field(default=DEFAULT_NASALS, description="Graphemes that carry tone when marked")

    @field_validator("digraphs", mode="before")
    @classmethod
    def _coerce_digraphs(cls, value):
        # JSON spells each entry as a 1- or 2-element array
        coerced = []
        for entry in value or ():
            if isinstance(entry, (list, tuple)):
                if not 1 <= len(entry) <= 2:
                    raise ValueError("each digraph must be [source] or [source, replacement]")
                coerced.append({"source": entry[0], "replacement": entry[1] if len(entry) == 2 else None})
            else:
                coerced.append(entry)
        return coerced

    @field_validator("tone_diacritics", mode="before")
    @classmethod
    def _coerce_diacritics(cls, value):
        return {tone: (mark if mark == UNMARKED else parse_code_point(mark)) for tone, mark in (value or {}).items()}

    @model_validator(mode="after")
    def _check_invariants(self) -> "OrthographyProfile":
        seen = set()
        for i, grapheme in enumerate(self.alphabet):
            if not grapheme:
                raise ValueError(f"alphabet[{i}]: empty grapheme")
            if grapheme in seen:
                raise ValueError(f"alphabet[{i}]: duplicate grapheme {grapheme!r}")
            seen.add(grapheme)
        missing = [v for v in VOWELS if v not in seen]
        if missing:
            raise ValueError(f"alphabet: missing vowel letters {missing}")

        sources: List[str] = []
        replacements = set()
        for j, entry in enumerate(self.digraphs):
            if entry.source in sources:
                raise ValueError(f"digraphs[{j}]: duplicate source {entry.source!r}")
            for earlier in sources:
                if entry.source.startswith(earlier):
                    raise ValueError(
                        f"digraphs[{j}]: {entry.source!r} must precede its prefix {earlier!r} (longest match first)"
                    )
            if entry.replacement is not None:
                if entry.replacement in replacements:
                    raise ValueError(f"digraphs[{j}]: replacement U+{ord(entry.replacement):04X} reused")
                replacements.add(entry.replacement)
            sources.append(entry.source)

        marks = []
        for tone, mark in self.tone_diacritics.items():
            if mark == UNMARKED:
                marks.append(mark)
                continue
            if len(mark) != 1 or not unicodedata.combining(mark):
                raise ValueError(f"tone_diacritics.{tone.value}: {mark!r} is not a single combining mark")
            marks.append(mark)
        if marks.count(UNMARKED) > 1:
            raise ValueError("tone_diacritics: at most one tone may be unmarked")
        marked = [m for m in marks if m != UNMARKED]
        if len(set(marked)) != len(marked):
            raise ValueError("tone_diacritics: two tones share a diacritic")
        return self

    @property
    def mark_to_tone(self) -> Dict[str, ToneMark]:
        """Reverse lookup: combining mark -> tone"""
        return {mark: tone for tone, mark in self.tone_diacritics.items() if mark != UNMARKED}

    def is_vowel(self, grapheme: str) -> bool:
        return grapheme.lower() in VOWELS

    def is_nasal(self, grapheme: str) -> bool:
        return grapheme.lower() in self.nasals

    def diacritic_for(self, tone: ToneMark) -> Optional[str]:
        """Combining mark for a tone, "" when written unmarked, None when absent"""
        mark = self.tone_diacritics.get(tone)
        if mark is None:
            return None
        return "" if mark == UNMARKED else mark

    def representable_tones(self) -> List[ToneMark]:
        """Tones this profile can write (low is always writable when unmarked low is allowed)"""
        tones = [t for t in ToneMark if self.diacritic_for(t) is not None]
        if ToneMark.LOW not in tones and self.allow_unmarked_low:
            tones.insert(0, ToneMark.LOW)
        return tones


class TonedText(BaseModel):
    """Base text stripped of diacritics plus the tone of each marked or implied nucleus"""
    model_config = ConfigDict(frozen=True)

    base: str
    tones: Tuple[Tuple[int, ToneMark], ...] = Field(default=())

    @model_validator(mode="after")
    def _check_indices(self) -> "TonedText":
        if any(unicodedata.combining(ch) for ch in self.base):
            raise ValueError("base must not contain combining marks")
        previous = -1
        for index, _ in self.tones:
            if index <= previous:
                raise ValueError("nucleus indices must be strictly increasing")
            if not 0 <= index < len(self.base):
                raise ValueError(f"nucleus index {index} outside base of length {len(self.base)}")
            previous = index
        return self
