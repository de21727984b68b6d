"""
Corpus I/O Service
Parallel-corpus TSV ingestion, seeded splitting and synthetic corpus generation
"""

import logging
import random
import unicodedata
from pathlib import Path
from typing import List, Optional, Tuple, Union

from pydantic import ValidationError

from ..exceptions import ArtifactNotFound, CorpusEncodingError, InsufficientData, MalformedLine
from ..models.corpus import ParallelCorpus, SentencePair, Split
from ..models.orthography import OrthographyProfile, ToneMark, is_private_use
from ..models.rules import RuleSet
from ..storage.artifacts import atomic_write_text
from .rule_baseline import RuleConverterCore

logger = logging.getLogger(__name__)


def reject_private_use(text: str, line_no: int, source: Optional[str] = None) -> str:
    """Private-use code points are reserved for unified digraphs and may not appear in input text"""
    for column, ch in enumerate(text, start=1):
        if is_private_use(ch):
            raise MalformedLine(
                line_no, f"private-use character U+{ord(ch):04X} at column {column} is reserved", source=source
            )
    return text


def load_parallel(path: Union[str, Path]) -> ParallelCorpus:
    """
    Load a TSV corpus: source<TAB>target[<TAB>split] per line

    Args:
        path: UTF-8 file

    Returns:
        ParallelCorpus, decomposed, with line numbers kept for diagnostics
    """
    path = Path(path)
    if not path.exists():
        raise ArtifactNotFound(str(path), role="corpus")
    raw_lines = path.read_bytes().split(b"\n")
    if raw_lines and raw_lines[-1] == b"":
        raw_lines.pop()

    examples = []
    for line_no, raw in enumerate(raw_lines, start=1):
        try:
            line = raw.decode("utf-8")
        except UnicodeDecodeError as e:
            raise CorpusEncodingError(line_no, source=str(path)) from e
        if line.endswith("\r"):
            line = line[:-1]
        reject_private_use(line, line_no, source=str(path))
        fields = line.split("\t")
        if len(fields) not in (2, 3):
            raise MalformedLine(line_no, f"expected 2 or 3 TAB-separated fields, found {len(fields)}", source=str(path))
        split_label = None
        if len(fields) == 3:
            try:
                split_label = Split(fields[2])
            except ValueError:
                raise MalformedLine(line_no, f"unknown split label {fields[2]!r}", source=str(path))
        if not fields[1]:
            raise MalformedLine(line_no, "empty target", source=str(path))
        try:
            examples.append(SentencePair(source=fields[0], target=fields[1], split=split_label, line_no=line_no))
        except ValidationError as e:
            raise MalformedLine(line_no, e.errors()[0]["msg"], source=str(path)) from e

    logger.info(f"Loaded {len(examples)} sentence pairs from {path}")
    return ParallelCorpus(examples=tuple(examples))


def dump_parallel(corpus: ParallelCorpus) -> str:
    lines = []
    for ex in corpus:
        fields = [ex.source, ex.target]
        if ex.split is not None:
            fields.append(ex.split.value)
        lines.append("\t".join(fields))
    return "".join(line + "\n" for line in lines)


def save_parallel(corpus: ParallelCorpus, path: Union[str, Path]) -> Path:
    """Write the corpus as TSV (atomically)"""
    return atomic_write_text(path, dump_parallel(corpus))


def split(corpus: ParallelCorpus, sizes: Tuple[int, int, int], seed: int) -> ParallelCorpus:
    """
    Label examples train/valid/test after a seeded shuffle

    Args:
        corpus: Corpus to partition
        sizes: (n_train, n_valid, n_test); their sum may be below the corpus size
        seed: Shuffle seed

    Returns:
        Corpus of exactly sum(sizes) labeled examples, in original order
    """
    n_train, n_valid, n_test = sizes
    if min(sizes) < 0:
        raise InsufficientData(f"split sizes must be non-negative, got {sizes}")
    total = n_train + n_valid + n_test
    if total > len(corpus):
        raise InsufficientData(f"requested {total} examples ({n_train}/{n_valid}/{n_test}) but corpus has {len(corpus)}")

    order = list(range(len(corpus)))
    random.Random(seed).shuffle(order)
    labels = {}
    for rank, index in enumerate(order[:total]):
        if rank < n_train:
            labels[index] = Split.TRAIN
        elif rank < n_train + n_valid:
            labels[index] = Split.VALID
        else:
            labels[index] = Split.TEST

    examples = tuple(
        ex.model_copy(update={"split": labels[i]}) for i, ex in enumerate(corpus.examples) if i in labels
    )
    if total < len(corpus):
        logger.info(f"Split kept {total} of {len(corpus)} examples")
    return ParallelCorpus(examples=examples)


class SyntheticCorpusGenerator:
    """
    Seeded syllable-structured sentence generator

    Words are an optional syllabic nasal followed by 1-3 syllables of shape
    (C)V(N): onsets include the prenasalized digraphs, nuclei are the seven
    vowels, and every nucleus gets a random tone the source profile can write.
    """

    def __init__(
        self,
        source: OrthographyProfile,
        target: OrthographyProfile,
        rules: RuleSet,
        seed: int,
    ):
        self.source = source
        self.target = target
        self.rng = random.Random(seed)
        self.converter = RuleConverterCore(rules, source, target)

        vowels = [g for g in source.alphabet if source.is_vowel(g)]
        consonants = [g for g in source.alphabet if not source.is_vowel(g) and any(ch.isalpha() for ch in g)]
        self.vowels = vowels
        self.onsets = consonants + [d.source for d in source.digraphs]
        self.codas = [g for g in source.alphabet if source.is_nasal(g)]
        self.tones = source.representable_tones()
        self.noise_letters = sorted(
            g for g in target.alphabet
            if len(g) == 1 and g.isalpha() and unicodedata.normalize("NFD", g) == g
        )

    def _mark(self, tone: ToneMark) -> str:
        mark = self.source.diacritic_for(tone)
        return mark or ""

    def _syllable(self) -> str:
        onset = self.rng.choice(self.onsets) if self.rng.random() < 0.85 else ""
        nucleus = self.rng.choice(self.vowels) + self._mark(self.rng.choice(self.tones))
        coda = self.rng.choice(self.codas) if self.codas and self.rng.random() < 0.25 else ""
        return onset + nucleus + coda

    def _word(self) -> str:
        prefix = ""
        if self.codas and self.rng.random() < 0.1:
            prefix = self.rng.choice(self.codas) + self._mark(self.rng.choice(self.tones))
        return prefix + "".join(self._syllable() for _ in range(self.rng.randint(1, 3)))

    def sentence(self) -> str:
        return " ".join(self._word() for _ in range(self.rng.randint(2, 5)))

    def perturb(self, text: str) -> str:
        """Apply exactly one character edit that leaves whitespace alone"""
        positions = [i for i, ch in enumerate(text) if not ch.isspace()]
        op = self.rng.choice(("insert", "delete", "substitute"))
        if op == "insert":
            at = self.rng.randint(0, len(text))
            if (at == 0 or text[at - 1].isspace()) and (at == len(text) or text[at].isspace()):
                op = "substitute"
            else:
                return text[:at] + self.rng.choice(self.noise_letters) + text[at:]
        if op == "delete":
            at = self.rng.choice(positions)
            result = text[:at] + text[at + 1:]
            if result and result.strip() == result and "  " not in result:
                return result
        at = self.rng.choice(positions)
        choices = [ch for ch in self.noise_letters if ch != text[at]]
        return text[:at] + self.rng.choice(choices) + text[at + 1:]

    def generate(self, n: int, noise: float = 0.0) -> ParallelCorpus:
        if not 0.0 <= noise <= 1.0:
            raise ValueError(f"noise must be in [0, 1], got {noise}")
        sources = [self.sentence() for _ in range(n)]
        targets = [self.converter.convert(s) for s in sources]
        noisy = set(self.rng.sample(range(n), round(noise * n))) if n else set()
        for i in sorted(noisy):
            targets[i] = self.perturb(targets[i])
        logger.info(f"Generated {n} synthetic pairs ({len(noisy)} perturbed)")
        return ParallelCorpus.from_pairs(zip(sources, targets))


def generate_synthetic(
    profiles: Tuple[OrthographyProfile, OrthographyProfile],
    rules: RuleSet,
    n: int,
    seed: int,
    noise: float = 0.0,
) -> ParallelCorpus:
    """
    Synthetic parallel corpus: random source sentences and their rule conversions

    Args:
        profiles: (source, target) orthography profiles
        rules: Rule set producing the targets
        n: Number of pairs
        seed: Generator seed
        noise: Fraction of targets given one random character edit

    Returns:
        ParallelCorpus of n pairs
    """
    source, target = profiles
    return SyntheticCorpusGenerator(source, target, rules, seed).generate(n, noise)


def read_lines(path: Union[str, Path]) -> List[str]:
    """Lines of a UTF-8 text file without their newline"""
    path = Path(path)
    if not path.exists():
        raise ArtifactNotFound(str(path))
    data = path.read_bytes()
    lines = data.split(b"\n")
    if lines and lines[-1] == b"":
        lines.pop()
    out = []
    for line_no, raw in enumerate(lines, start=1):
        try:
            out.append(raw.decode("utf-8").rstrip("\r"))
        except UnicodeDecodeError as e:
            raise CorpusEncodingError(line_no, source=str(path)) from e
    return out


def select_split(corpus: ParallelCorpus, split_name: Optional[str]) -> ParallelCorpus:
    """Examples of one split; an unlabeled corpus, or no requested split, gives the whole corpus"""
    if not split_name or not corpus.has_splits():
        return corpus
    return corpus.select(Split(split_name))
