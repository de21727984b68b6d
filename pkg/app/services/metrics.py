"""
Metrics Service
Character and word error rates via Levenshtein distance
"""

import logging
import unicodedata
from typing import Hashable, Optional, Sequence

from ..config import settings
from ..exceptions import EmptyReference, LengthMismatch
from ..models.normalization import NormalizationTable
from ..models.report import EvalReport
from .normalizer import normalize

logger = logging.getLogger(__name__)


def edit_distance(a: Sequence[Hashable], b: Sequence[Hashable]) -> int:
    """
    Minimal number of insertions, deletions and substitutions turning a into b

    Two-row dynamic program over the shorter sequence.
    """
    if len(a) < len(b):
        a, b = b, a
    previous = list(range(len(b) + 1))
    for i, x in enumerate(a, start=1):
        current = [i]
        for j, y in enumerate(b, start=1):
            if x == y:
                current.append(previous[j - 1])
            else:
                current.append(1 + min(previous[j - 1], previous[j], current[j - 1]))
        previous = current
    return previous[-1]


def _chars(text: str) -> str:
    # Decomposed so a wrong diacritic costs exactly one edit
    return unicodedata.normalize("NFD", text)


def evaluate(
    hypotheses: Sequence[str],
    references: Sequence[str],
    table: Optional[NormalizationTable] = None,
) -> EvalReport:
    """
    Corpus-level (micro-averaged) CER and WER

    Args:
        hypotheses: System outputs, one per sentence
        references: Gold sentences
        table: When given, both sides are digraph-normalized before scoring

    Returns:
        EvalReport with percentages rounded to the reporting precision
    """
    if len(hypotheses) != len(references):
        raise LengthMismatch(len(hypotheses), len(references))

    char_edits = word_edits = ref_chars = ref_words = 0
    for hyp, ref in zip(hypotheses, references):
        hyp, ref = _chars(hyp), _chars(ref)
        if table is not None:
            hyp, ref = normalize(hyp, table), normalize(ref, table)
        char_edits += edit_distance(hyp, ref)
        ref_chars += len(ref)
        hyp_words, ref_words_list = hyp.split(), ref.split()
        word_edits += edit_distance(hyp_words, ref_words_list)
        ref_words += len(ref_words_list)

    if ref_chars == 0 or ref_words == 0:
        raise EmptyReference("references contain no characters or no words")

    decimals = settings.report_decimals
    report = EvalReport(
        cer=round(100.0 * char_edits / ref_chars, decimals),
        wer=round(100.0 * word_edits / ref_words, decimals),
        total_ref_chars=ref_chars,
        total_ref_words=ref_words,
        total_char_edits=char_edits,
        total_word_edits=word_edits,
        sentences=len(references),
    )
    logger.debug(f"Evaluated {len(references)} sentences: {report.summary()}")
    return report


def copy_baseline(sources: Sequence[str], references: Sequence[str]) -> EvalReport:
    """Score the no-op hypothesis that copies each source sentence"""
    return evaluate(list(sources), list(references))
