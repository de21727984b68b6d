"""
Normalizer Service
Reversible digraph unification: multi-character graphemes <-> private-use code points
"""

import logging
from typing import Iterable, Iterator, List, Sequence, Tuple

from pydantic import ValidationError

from ..exceptions import TableConflict, UnknownPrivateChar
from ..models.normalization import NormalizationEntry, NormalizationTable
from ..models.orthography import PRIVATE_USE_START, OrthographyProfile, is_private_use

logger = logging.getLogger(__name__)


def build_table(pairs: Sequence[Tuple[str, object]], origin_profile: str = "") -> NormalizationTable:
    """
    Build a table from (source, replacement-or-None) pairs in profile order

    Missing replacements take the lowest free private-use code points, ascending.
    Entries are stably sorted longest source first.
    """
    sources = [source for source, _ in pairs]
    duplicates = sorted({s for s in sources if sources.count(s) > 1})
    if duplicates:
        raise TableConflict(f"duplicate digraph source(s) {duplicates} in profile '{origin_profile}'")

    taken = {r for _, r in pairs if r is not None}
    if len(taken) != len([r for _, r in pairs if r is not None]):
        raise TableConflict(f"replacement collision in profile '{origin_profile}'")

    next_code = PRIVATE_USE_START
    assigned = []
    for source, replacement in pairs:
        if replacement is None:
            while chr(next_code) in taken:
                next_code += 1
            replacement = chr(next_code)
            taken.add(replacement)
        elif not is_private_use(replacement):
            raise TableConflict(f"replacement for {source!r} is not a private-use code point")
        assigned.append((source, replacement))

    if set(sources) & taken:
        raise TableConflict("a digraph source equals a replacement code point")

    ordered = sorted(assigned, key=lambda pair: -len(pair[0]))
    try:
        return NormalizationTable(
            entries=tuple(NormalizationEntry(source=s, replacement=r) for s, r in ordered),
            origin_profile=origin_profile,
        )
    except ValidationError as e:
        raise TableConflict(str(e.errors()[0]["msg"])) from e


def compile_table(profile: OrthographyProfile) -> NormalizationTable:
    """
    Derive the normalization table of a profile

    Args:
        profile: Validated orthography profile

    Returns:
        One entry per profile digraph, longest source first
    """
    table = build_table([(d.source, d.replacement) for d in profile.digraphs], origin_profile=profile.id)
    logger.debug(f"Compiled {len(table)} digraph entries for profile '{profile.id}'")
    return table


def normalize(text: str, table: NormalizationTable) -> str:
    """
    Left-to-right longest-match replacement of digraph sources

    denormalize(normalize(text)) == text holds for text without private-use
    code points; corpus and CLI readers reject such input.
    """
    if not table.entries:
        return text
    entries = [(e.source, e.replacement) for e in table.entries]
    out: List[str] = []
    i = 0
    n = len(text)
    while i < n:
        for source, replacement in entries:
            if text.startswith(source, i):
                out.append(replacement)
                i += len(source)
                break
        else:
            out.append(text[i])
            i += 1
    return "".join(out)


def denormalize(text: str, table: NormalizationTable) -> str:
    """Expand every table code point back to its source"""
    inverse = table.inverse
    out: List[str] = []
    for position, ch in enumerate(text):
        if ch in inverse:
            out.append(inverse[ch])
        elif is_private_use(ch):
            raise UnknownPrivateChar(ch, position)
        else:
            out.append(ch)
    return "".join(out)


def digraph_count(text: str, table: NormalizationTable) -> int:
    """Number of unified graphemes normalize() produces for this text"""
    replacements = set(table.inverse)
    return sum(1 for ch in normalize(text, table) if ch in replacements)


def normalize_lines(lines: Iterable[str], table: NormalizationTable) -> Iterator[str]:
    for line in lines:
        yield normalize(line, table)


def denormalize_lines(lines: Iterable[str], table: NormalizationTable) -> Iterator[str]:
    for line in lines:
        yield denormalize(line, table)


def joint_table(*profiles: OrthographyProfile) -> NormalizationTable:
    """One table over the digraphs of several profiles, first profile's entries first"""
    pairs = []
    seen = set()
    for profile in profiles:
        for d in profile.digraphs:
            if d.source not in seen:
                seen.add(d.source)
                pairs.append((d.source, d.replacement))
    return build_table(pairs, origin_profile="+".join(p.id for p in profiles))
