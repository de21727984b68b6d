"""
Rule Baseline Service
Deterministic orthography converter: correspondence rules, then High Tone Spreading
"""

import json
import logging
import unicodedata
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from pydantic import ValidationError

from ..exceptions import ArtifactNotFound, ConversionError, DataError, DuplicateSource, RuleSetError
from ..models.normalization import NormalizationTable
from ..models.orthography import OrthographyProfile, TonedText, ToneMark
from ..models.rules import RuleSet
from .normalizer import compile_table, denormalize, normalize
from .text_model import decompose, parse_tones, render_tones, validation_path

logger = logging.getLogger(__name__)

# (grapheme, tone or None) per base code point
Unit = Tuple[str, Optional[ToneMark]]


def apply_hts(tones: Sequence[ToneMark]) -> List[ToneMark]:
    """
    High Tone Spreading: every H-L pair surfaces as H-HL

    Single left-to-right pass over the input; a rewritten Falling tone is not
    Low, so the rule never feeds itself.
    """
    result = list(tones)
    for i in range(1, len(tones)):
        if tones[i - 1] == ToneMark.HIGH and tones[i] == ToneMark.LOW:
            result[i] = ToneMark.FALLING
    return result


def load_rules(path: Union[str, Path]) -> RuleSet:
    """
    Load and validate a rule set

    Args:
        path: JSON file {source_profile, target_profile, substitutions: [[src, dst], ...]}

    Returns:
        RuleSet in file order
    """
    path = Path(path)
    if not path.exists():
        raise ArtifactNotFound(str(path), role="rule set")
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise RuleSetError(f"{path}:{e.lineno}: invalid JSON ({e.msg})") from e

    seen = set()
    for i, item in enumerate(data.get("substitutions", []) if isinstance(data, dict) else []):
        source = item[0] if isinstance(item, (list, tuple)) and item else None
        if source in seen:
            raise DuplicateSource(source, path=f"{path}: $.substitutions[{i}]")
        seen.add(source)

    try:
        rules = RuleSet.model_validate(data)
    except ValidationError as e:
        where, message = validation_path(e)
        raise RuleSetError(f"{path}: {where}: {message}") from e
    logger.info(f"Loaded {len(rules)} substitution rules from {path}")
    return rules


def _substitute(units: List[Unit], source: str, target: str) -> List[Unit]:
    """Rewrite every leftmost non-overlapping occurrence, carrying tones positionally"""
    if not source:
        return units
    base = "".join(ch for ch, _ in units)
    out: List[Unit] = []
    i = 0
    while i < len(units):
        if base.startswith(source, i):
            span = units[i:i + len(source)]
            carried = [tone for _, tone in span]
            new_units = [(ch, carried[k] if k < len(carried) else None) for k, ch in enumerate(target)]
            # Tones on dropped graphemes move to the last written one
            dropped = [t for t in carried[len(target):] if t is not None]
            if dropped and new_units and new_units[-1][1] is None:
                new_units[-1] = (new_units[-1][0], dropped[0])
            out.extend(new_units)
            i += len(source)
        else:
            out.append(units[i])
            i += 1
    return out


def _spread_high_tones(units: List[Unit]) -> List[Unit]:
    """Apply HTS inside each whitespace-delimited word"""
    out = list(units)
    word: List[int] = []

    def flush():
        positions = [i for i in word if out[i][1] is not None]
        spread = apply_hts([out[i][1] for i in positions])
        for i, tone in zip(positions, spread):
            out[i] = (out[i][0], tone)
        word.clear()

    for i, (ch, _) in enumerate(out):
        if ch.isspace():
            flush()
        else:
            word.append(i)
    flush()
    return out


class RuleConverterCore:
    """Rule set bound to its source and target profiles (tables compiled once)"""

    def __init__(self, rules: RuleSet, source: OrthographyProfile, target: OrthographyProfile):
        self.rules = rules
        self.source = source
        self.target = target
        self.table: NormalizationTable = compile_table(source)
        self.substitutions = [
            (normalize(decompose(s.source), self.table), normalize(decompose(s.target), self.table))
            for s in rules.substitutions
        ]
        for i, (source_text, target_text) in enumerate(self.substitutions):
            if any(unicodedata.combining(ch) for ch in source_text + target_text):
                raise RuleSetError(f"substitutions[{i}]: rules rewrite base graphemes and may not contain diacritics")

    def _substituted_units(self, text: str) -> List[Unit]:
        normalized = normalize(decompose(text), self.table)
        toned = parse_tones(normalized, self.source)
        tone_map = dict(toned.tones)
        units: List[Unit] = [(ch, tone_map.get(i)) for i, ch in enumerate(toned.base)]
        for source, target in self.substitutions:
            units = _substitute(units, source, target)
        return units

    def _render(self, units: List[Unit], profile: OrthographyProfile) -> str:
        rewritten = TonedText(
            base="".join(ch for ch, _ in units),
            tones=tuple((i, tone) for i, (_, tone) in enumerate(units) if tone is not None),
        )
        return denormalize(render_tones(rewritten, profile), self.table)

    def convert(self, text: str) -> str:
        units = self._substituted_units(text)
        if self.rules.apply_hts:
            units = _spread_high_tones(units)
        return self._render(units, self.target)

    def apply_correspondences(self, text: str) -> str:
        """Grapheme substitutions only, written back with the source profile's diacritics"""
        return self._render(self._substituted_units(text), self.source)


def convert(
    text: str,
    rules: RuleSet,
    source_profile: OrthographyProfile,
    target_profile: OrthographyProfile,
) -> str:
    """
    Convert one sentence from the source to the target orthography

    Pipeline: decompose -> unify digraphs -> parse tones -> substitutions ->
    word-internal HTS -> render with target diacritics -> expand digraphs.

    Returns:
        Decomposed converted text
    """
    return RuleConverterCore(rules, source_profile, target_profile).convert(text)


def convert_lines(
    lines: Iterable[str],
    rules: RuleSet,
    source_profile: OrthographyProfile,
    target_profile: OrthographyProfile,
) -> List[str]:
    """Convert many sentences; a failure names its 1-based sentence position"""
    core = RuleConverterCore(rules, source_profile, target_profile)
    out = []
    for position, line in enumerate(lines, start=1):
        try:
            out.append(core.convert(line))
        except DataError as e:
            raise ConversionError(position, e) from e
    return out


def apply_correspondences(
    lines: Iterable[str],
    rules: RuleSet,
    source_profile: OrthographyProfile,
    target_profile: OrthographyProfile,
) -> List[str]:
    """
    Remove one-to-one spelling correspondences from source sentences

    Every substitution of the rule set is applied; tone marks and High Tone
    Spreading are left to the converter that runs afterwards.
    """
    core = RuleConverterCore(rules, source_profile, target_profile)
    out = []
    for position, line in enumerate(lines, start=1):
        try:
            out.append(core.apply_correspondences(line))
        except DataError as e:
            raise ConversionError(position, e) from e
    return out
