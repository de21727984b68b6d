"""
Edit Tagger Service
Tag-not-rewrite conversion: derive per-token edit tags from parallel examples,
apply them, and iterate a tag predictor until the sentence stops changing
"""

import logging
from collections import Counter, defaultdict
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from ..exceptions import ArtifactNotFound, DanglingMerge, LeadingInsertUnsupported, TagFormatError
from ..models.tagging import (
    START_TOKEN,
    EditOp,
    EditOpKind,
    EditTag,
    EditTagKind,
    IterationResult,
    TaggedSentence,
)

logger = logging.getLogger(__name__)

# tokens (led by START_TOKEN) -> one tag list per token
TagPredictor = Callable[[Sequence[str]], Sequence[Sequence[EditTag]]]

# Realization order inside one token's tag list
_TAG_RANK = {
    EditTagKind.REPLACE: 0,
    EditTagKind.DELETE: 0,
    EditTagKind.KEEP: 0,
    EditTagKind.MERGE_HYPHEN: 1,
    EditTagKind.APPEND: 2,
}


def tokenize(sentence: str) -> List[str]:
    return sentence.split()


def align(source: Sequence[str], target: Sequence[str]) -> List[EditOp]:
    """
    Minimal token-level edit script with unit costs

    Suffix distances are tabulated, then the script is read off front to back
    preferring match > substitute > delete > insert at every step.
    """
    n, m = len(source), len(target)
    dist = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n, -1, -1):
        for j in range(m, -1, -1):
            if i == n:
                dist[i][j] = m - j
            elif j == m:
                dist[i][j] = n - i
            else:
                diagonal = dist[i + 1][j + 1] + (0 if source[i] == target[j] else 1)
                dist[i][j] = min(diagonal, dist[i + 1][j] + 1, dist[i][j + 1] + 1)

    ops: List[EditOp] = []
    i = j = 0
    while i < n or j < m:
        here = dist[i][j]
        if i < n and j < m and source[i] == target[j] and here == dist[i + 1][j + 1]:
            ops.append(EditOp(kind=EditOpKind.MATCH, source_index=i, source=source[i], target=target[j]))
            i, j = i + 1, j + 1
        elif i < n and j < m and source[i] != target[j] and here == dist[i + 1][j + 1] + 1:
            ops.append(EditOp(kind=EditOpKind.SUBSTITUTE, source_index=i, source=source[i], target=target[j]))
            i, j = i + 1, j + 1
        elif i < n and here == dist[i + 1][j] + 1:
            ops.append(EditOp(kind=EditOpKind.DELETE, source_index=i, source=source[i]))
            i += 1
        else:
            ops.append(EditOp(kind=EditOpKind.INSERT, target=target[j]))
            j += 1
    return ops


def alignment_cost(ops: Sequence[EditOp]) -> int:
    return sum(op.cost for op in ops)


def resolve_conflicts(tags: Iterable[EditTag]) -> Tuple[EditTag, ...]:
    """
    Drop KEEP when a transforming tag is present; keep one REPLACE/DELETE and
    one MERGE_HYPHEN; order tags as they are realized
    """
    tags = list(tags)
    if not tags:
        return (EditTag.keep(),)
    if all(t.kind == EditTagKind.KEEP for t in tags):
        return (EditTag.keep(),)
    resolved: List[EditTag] = []
    has_content = has_merge = False
    for tag in tags:
        if tag.kind == EditTagKind.KEEP:
            continue
        if tag.kind in (EditTagKind.REPLACE, EditTagKind.DELETE):
            if has_content:
                continue
            has_content = True
        if tag.kind == EditTagKind.MERGE_HYPHEN:
            if has_merge:
                continue
            has_merge = True
        resolved.append(tag)
    return tuple(sorted(resolved, key=lambda t: _TAG_RANK[t.kind]))


def _expand_hyphens(target: Sequence[str]) -> List[Tuple[str, bool]]:
    """Split hyphenated target tokens into pieces; the flag marks a piece joined to the next"""
    pieces: List[Tuple[str, bool]] = []
    for token in target:
        parts = token.split("-")
        if len(parts) > 1 and all(parts):
            pieces.extend((part, k < len(parts) - 1) for k, part in enumerate(parts))
        else:
            pieces.append((token, False))
    return pieces


def _tags_from_alignment(
    source: Sequence[str],
    pieces: Sequence[Tuple[str, bool]],
    with_start: bool,
) -> Optional[TaggedSentence]:
    keys = [text + "-" if joins else text for text, joins in pieces]
    ops = align(source, keys)
    offset = 1 if with_start else 0
    tokens = ([START_TOKEN] if with_start else []) + list(source)
    tags: List[List[EditTag]] = [[] for _ in tokens]
    if with_start:
        tags[0].append(EditTag.keep())
    last: Optional[int] = 0 if with_start else None
    j = 0
    for op in ops:
        if op.kind in (EditOpKind.MATCH, EditOpKind.SUBSTITUTE):
            text, joins = pieces[j]
            idx = op.source_index + offset
            tags[idx].append(EditTag.keep() if text == op.source else EditTag.replace(text))
            if joins:
                tags[idx].append(EditTag.merge_hyphen())
            last = idx
            j += 1
        elif op.kind == EditOpKind.DELETE:
            idx = op.source_index + offset
            tags[idx].append(EditTag.delete())
            last = idx
        else:
            text, joins = pieces[j]
            if joins:
                return None
            if last is None:
                raise LeadingInsertUnsupported(f"insertion of {text!r} before the first source token")
            tags[last].append(EditTag.append(text))
            j += 1
    return TaggedSentence(tokens=tuple(tokens), tags=tuple(resolve_conflicts(t) for t in tags))


def derive_tags(source: Sequence[str], target: Sequence[str], with_start: bool = True) -> TaggedSentence:
    """
    Tag each source token so that applying the tags yields the target

    Args:
        source: Source tokens
        target: Target tokens
        with_start: Lead with the virtual start token so leading insertions
            become APPEND tags on it; without it they raise LeadingInsertUnsupported

    Returns:
        Conflict-resolved TaggedSentence
    """
    plain = _tags_from_alignment(source, [(t, False) for t in target], with_start)
    candidates = []
    if any("-" in token for token in target):
        try:
            merged = _tags_from_alignment(source, _expand_hyphens(target), with_start)
            if merged is not None and apply_tags(merged) == list(target):
                candidates.append(merged)
        except (LeadingInsertUnsupported, DanglingMerge):
            pass
    candidates.append(plain)
    return min(candidates, key=lambda sentence: sentence.edit_count)


def apply_tags(sentence: TaggedSentence) -> List[str]:
    """
    Realize all tags left to right

    Each token yields its content word (unless deleted), then MERGE_HYPHEN
    joins that word to the next word produced, then APPENDed words follow.
    The start token contributes only its appends.
    """
    out: List[str] = []
    pending_merge = False

    def emit(word: str) -> None:
        nonlocal pending_merge
        if pending_merge and out:
            out[-1] = f"{out[-1]}-{word}"
        else:
            out.append(word)
        pending_merge = False

    for position, (token, raw_tags) in enumerate(zip(sentence.tokens, sentence.tags)):
        tags = resolve_conflicts(raw_tags)
        is_start = position == 0 and token == START_TOKEN
        kinds = {t.kind for t in tags}
        if not is_start and EditTagKind.DELETE not in kinds:
            replacement = next((t.token for t in tags if t.kind == EditTagKind.REPLACE), None)
            emit(replacement if replacement is not None else token)
        if EditTagKind.MERGE_HYPHEN in kinds:
            pending_merge = True
        for tag in tags:
            if tag.kind == EditTagKind.APPEND:
                emit(tag.token)

    if pending_merge:
        raise DanglingMerge("MERGE_HYPHEN on the last produced token has nothing to join")
    return out


def _with_start(tokens: Sequence[str]) -> List[str]:
    tokens = list(tokens)
    return tokens if tokens and tokens[0] == START_TOKEN else [START_TOKEN] + tokens


def iterate(source: Sequence[str], predictor: TagPredictor, max_iters: int = 5) -> IterationResult:
    """
    Predict and apply tags until a fixed point or the iteration budget

    Args:
        source: Source tokens
        predictor: Maps tokens (led by the start token) to one tag list per token
        max_iters: Maximum number of rewriting passes (>= 1)

    Returns:
        Final tokens, number of rewriting passes (at least 1) and whether a
        fixed point was reached; non-convergence is reported, not raised
    """
    if max_iters < 1:
        raise ValueError("max_iters must be >= 1")
    tokens = list(source)
    passes = 0
    for _ in range(max_iters):
        sentence = TaggedSentence(
            tokens=tuple(_with_start(tokens)),
            tags=tuple(tuple(t) for t in predictor(_with_start(tokens))),
        )
        if sentence.is_all_keep:
            return IterationResult(tokens=tokens, iterations=max(passes, 1), converged=True)
        rewritten = apply_tags(sentence)
        passes += 1
        if rewritten == tokens:
            return IterationResult(tokens=tokens, iterations=passes, converged=True)
        tokens = rewritten

    final = TaggedSentence(
        tokens=tuple(_with_start(tokens)),
        tags=tuple(tuple(t) for t in predictor(_with_start(tokens))),
    )
    converged = final.is_all_keep or apply_tags(final) == tokens
    if not converged:
        logger.warning(f"No fixed point after {max_iters} iterations")
    return IterationResult(tokens=tokens, iterations=passes, converged=converged)


class GoldTagPredictor:
    """Oracle predictor: derives tags against a stored target"""

    def __init__(self, target: Sequence[str]):
        self.target = list(target)

    def __call__(self, tokens: Sequence[str]) -> List[Tuple[EditTag, ...]]:
        source = list(tokens[1:]) if tokens and tokens[0] == START_TOKEN else list(tokens)
        return list(derive_tags(source, self.target).tags)


class UnigramTagPredictor:
    """Most frequent tag list per source token, learned from derived tags"""

    def __init__(self):
        self.table: Dict[str, Tuple[EditTag, ...]] = {}

    def fit(self, pairs: Iterable[Tuple[Sequence[str], Sequence[str]]]) -> "UnigramTagPredictor":
        counts: Dict[str, Counter] = defaultdict(Counter)
        n = 0
        for source, target in pairs:
            sentence = derive_tags(source, target)
            for token, tags in zip(sentence.tokens, sentence.tags):
                counts[token][tags] += 1
            n += 1
        self.table = {
            token: min(counter.items(), key=lambda item: (-item[1], format_tags(item[0])))[0]
            for token, counter in counts.items()
        }
        logger.info(f"Unigram tag predictor fitted on {n} pairs, {len(self.table)} token types")
        return self

    def __call__(self, tokens: Sequence[str]) -> List[Tuple[EditTag, ...]]:
        return [self.table.get(token, (EditTag.keep(),)) for token in tokens]


# TSV format: token<TAB>tag;tag per line, blank line between sentences

def _escape(payload: str) -> str:
    return payload.replace("\\", "\\\\").replace(";", "\\;")


def format_tags(tags: Sequence[EditTag]) -> str:
    parts = []
    for tag in tags:
        parts.append(f"{tag.kind.value}_{_escape(tag.token)}" if tag.token is not None else tag.kind.value)
    return ";".join(parts)


def _split_unescaped(field: str) -> List[str]:
    parts, current, escaped = [], [], False
    for ch in field:
        if escaped:
            current.append(ch)
            escaped = False
        elif ch == "\\":
            escaped = True
        elif ch == ";":
            parts.append("".join(current))
            current = []
        else:
            current.append(ch)
    if escaped:
        raise TagFormatError(f"dangling escape in {field!r}")
    parts.append("".join(current))
    return parts


def parse_tags(field: str) -> Tuple[EditTag, ...]:
    tags = []
    for part in _split_unescaped(field):
        if part in (EditTagKind.KEEP.value, EditTagKind.DELETE.value, EditTagKind.MERGE_HYPHEN.value):
            tags.append(EditTag(kind=EditTagKind(part)))
        elif part.startswith("REPLACE_") and len(part) > len("REPLACE_"):
            tags.append(EditTag.replace(part[len("REPLACE_"):]))
        elif part.startswith("APPEND_") and len(part) > len("APPEND_"):
            tags.append(EditTag.append(part[len("APPEND_"):]))
        else:
            raise TagFormatError(f"unknown tag {part!r}")
    return tuple(tags)


def write_tagged(sentences: Iterable[TaggedSentence]) -> str:
    blocks = []
    for sentence in sentences:
        blocks.append("\n".join(f"{tok}\t{format_tags(tags)}" for tok, tags in zip(sentence.tokens, sentence.tags)))
    return "\n\n".join(blocks) + ("\n" if blocks else "")


def read_tagged(path: Union[str, Path]) -> List[TaggedSentence]:
    """Parse a tag TSV file back into tagged sentences"""
    path = Path(path)
    if not path.exists():
        raise ArtifactNotFound(str(path), role="tag file")
    sentences: List[TaggedSentence] = []
    tokens: List[str] = []
    tags: List[Tuple[EditTag, ...]] = []
    for line_no, line in enumerate(path.read_text(encoding="utf-8").split("\n"), start=1):
        if not line.strip():
            if tokens:
                sentences.append(TaggedSentence(tokens=tuple(tokens), tags=tuple(tags)))
                tokens, tags = [], []
            continue
        if line.count("\t") != 1:
            raise TagFormatError(f"{path}:{line_no}: expected token<TAB>tags")
        token, field = line.split("\t")
        try:
            tags.append(parse_tags(field))
        except TagFormatError as e:
            raise TagFormatError(f"{path}:{line_no}: {e}") from e
        tokens.append(token)
    if tokens:
        sentences.append(TaggedSentence(tokens=tuple(tokens), tags=tuple(tags)))
    return sentences
