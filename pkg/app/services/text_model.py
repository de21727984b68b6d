"""
Text Model Service
Lossless parsing and rendering of tone diacritics under an orthography profile
"""

import json
import logging
import unicodedata
from functools import lru_cache
from pathlib import Path
from typing import List, Tuple, Union

from pydantic import ValidationError

from ..config import settings
from ..exceptions import (
    ArtifactNotFound,
    MarkOnNonNucleus,
    ProfileError,
    StackedDiacritic,
    UnknownDiacritic,
    UnrepresentableTone,
)
from ..models.orthography import OrthographyProfile, TonedText, ToneMark

logger = logging.getLogger(__name__)


def decompose(text: str) -> str:
    """Canonical decomposition; every diacritic becomes its own code point"""
    return unicodedata.normalize("NFD", text)


def compose(text: str) -> str:
    """Canonical composition, used only when writing output"""
    return unicodedata.normalize("NFC", text)


def validation_path(exc: ValidationError) -> Tuple[str, str]:
    """Location and message of the first pydantic validation error"""
    first = exc.errors()[0]
    path = "$"
    for part in first.get("loc", ()):
        path += f"[{part}]" if isinstance(part, int) else f".{part}"
    message = first.get("msg", str(exc))
    if message.startswith("Value error, "):
        message = message[len("Value error, "):]
    return path, message


def profile_from_dict(data: dict, origin: str = "<dict>") -> OrthographyProfile:
    """Validate a profile document, reporting the first violation with its path"""
    try:
        return OrthographyProfile.model_validate(data)
    except ValidationError as e:
        path, message = validation_path(e)
        raise ProfileError(f"{origin}: {message}", path=path) from e


def load_profile(path_or_id: Union[str, Path]) -> OrthographyProfile:
    """
    Load an orthography profile

    Args:
        path_or_id: Path to a profile JSON file, or the id of a shipped profile

    Returns:
        Validated profile
    """
    path = Path(path_or_id)
    if not path.exists():
        candidate = settings.profiles_dir / f"{path_or_id}.json"
        if candidate.exists():
            return builtin_profile(str(path_or_id))
        raise ArtifactNotFound(str(path_or_id), role="profile")
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ProfileError(f"{path}: invalid JSON ({e.msg} at line {e.lineno})") from e
    profile = profile_from_dict(data, origin=str(path))
    logger.debug(f"Loaded profile '{profile.id}' from {path}")
    return profile


@lru_cache(maxsize=None)
def builtin_profile(profile_id: str) -> OrthographyProfile:
    """Shipped profile by id"""
    path = settings.profiles_dir / f"{profile_id}.json"
    if not path.exists():
        raise ArtifactNotFound(str(path), role="profile")
    data = json.loads(path.read_text(encoding="utf-8"))
    return profile_from_dict(data, origin=str(path))


def parse_tones(text: str, profile: OrthographyProfile) -> TonedText:
    """
    Split text into base graphemes and nucleus tones

    Args:
        text: Canonically decomposed text
        profile: Orthography whose diacritics the text uses

    Returns:
        TonedText; unmarked vowels get Low when the profile allows unmarked low
    """
    mark_to_tone = profile.mark_to_tone
    base_chars: List[str] = []
    tones = {}
    for position, ch in enumerate(text):
        if unicodedata.combining(ch):
            tone = mark_to_tone.get(ch)
            if tone is None:
                raise UnknownDiacritic(ch, position)
            if not base_chars:
                raise MarkOnNonNucleus("", position)
            index = len(base_chars) - 1
            carrier = base_chars[index]
            if not (profile.is_vowel(carrier) or profile.is_nasal(carrier)):
                raise MarkOnNonNucleus(carrier, position)
            if index in tones:
                raise StackedDiacritic(position)
            tones[index] = tone
        else:
            base_chars.append(ch)

    if profile.allow_unmarked_low:
        for index, ch in enumerate(base_chars):
            if index not in tones and profile.is_vowel(ch):
                tones[index] = ToneMark.LOW

    return TonedText(base="".join(base_chars), tones=tuple(sorted(tones.items())))


def render_tones(toned: TonedText, profile: OrthographyProfile) -> str:
    """
    Write toned text with the profile's diacritics (inverse of parse_tones)

    Returns:
        Decomposed string
    """
    marks = {}
    for index, tone in toned.tones:
        mark = profile.diacritic_for(tone)
        if mark is None:
            if tone != ToneMark.LOW:
                raise UnrepresentableTone(tone.value, profile.id)
            mark = ""
        marks[index] = mark
    return "".join(ch + marks.get(i, "") for i, ch in enumerate(toned.base))


def strip_tones(text: str, profile: OrthographyProfile) -> str:
    """Drop every tone diacritic (toneless spelling)"""
    return parse_tones(decompose(text), profile).base
