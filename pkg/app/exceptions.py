"""
Toolkit Exceptions
Error hierarchy shared by every module; each error knows its CLI exit code
"""

from typing import Optional


class ToolkitError(Exception):
    """Base class for all toolkit errors"""

    exit_code: int = 3

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class DataError(ToolkitError, ValueError):
    """Bad input data: malformed files, invalid profiles, unparseable text"""

    exit_code = 2


class RuntimeFailure(ToolkitError):
    """Work started but could not finish (e.g. training diverged)"""

    exit_code = 3


class UsageError(ToolkitError):
    """Invalid command-line usage"""

    exit_code = 1


# text_model

class UnknownDiacritic(DataError):
    def __init__(self, mark: str, position: int):
        super().__init__(f"Unknown diacritic U+{ord(mark):04X} at position {position}")
        self.mark = mark
        self.position = position


class MarkOnNonNucleus(DataError):
    def __init__(self, grapheme: str, position: int):
        super().__init__(
            f"Tone mark attached to non-nucleus grapheme {grapheme!r} at position {position}"
        )
        self.grapheme = grapheme
        self.position = position


class StackedDiacritic(DataError):
    def __init__(self, position: int):
        super().__init__(f"More than one tone mark on the nucleus at position {position}")
        self.position = position


class UnrepresentableTone(DataError):
    def __init__(self, tone: str, profile_id: str):
        super().__init__(f"Profile '{profile_id}' has no diacritic for tone {tone}")
        self.tone = tone
        self.profile_id = profile_id


class ProfileError(DataError):
    def __init__(self, message: str, path: str = "$"):
        super().__init__(f"{path}: {message}")
        self.path = path


# normalizer

class TableConflict(DataError):
    pass


class UnknownPrivateChar(DataError):
    def __init__(self, char: str, position: int):
        super().__init__(f"Private-use character U+{ord(char):04X} at position {position} is not in the table")
        self.char = char
        self.position = position


# rule_baseline

class RuleSetError(DataError):
    pass


class DuplicateSource(RuleSetError):
    def __init__(self, source: str, path: str = "$"):
        super().__init__(f"{path}: duplicate substitution source {source!r}")
        self.source = source


class ConversionError(DataError):
    def __init__(self, position: int, cause: Exception):
        super().__init__(f"sentence {position}: {cause}")
        self.position = position
        self.cause = cause


# edit_tagger

class LeadingInsertUnsupported(DataError):
    pass


class DanglingMerge(DataError):
    pass


class TagFormatError(DataError):
    pass


# corpus_io

class MalformedLine(DataError):
    def __init__(self, line_no: int, reason: str, source: Optional[str] = None):
        where = f"{source}:{line_no}" if source else f"line {line_no}"
        super().__init__(f"{where}: {reason}")
        self.line_no = line_no


class CorpusEncodingError(DataError):
    def __init__(self, line_no: int, source: Optional[str] = None):
        where = f"{source}:{line_no}" if source else f"line {line_no}"
        super().__init__(f"{where}: not valid UTF-8")
        self.line_no = line_no


class InsufficientData(DataError):
    pass


class EmptyCorpus(DataError):
    pass


# metrics

class LengthMismatch(DataError):
    def __init__(self, n_hyp: int, n_ref: int, hyp_source: Optional[str] = None, ref_source: Optional[str] = None):
        if hyp_source and ref_source:
            message = f"{hyp_source} has {n_hyp} lines but {ref_source} has {n_ref}"
        else:
            message = f"{n_hyp} hypotheses but {n_ref} references"
        super().__init__(message)
        self.n_hyp = n_hyp
        self.n_ref = n_ref


class EmptyReference(DataError):
    pass


# seq2seq

class DivergenceError(RuntimeFailure):
    pass


class CheckpointError(DataError):
    pass


# pipeline / storage

class ArtifactNotFound(DataError):
    def __init__(self, path: str, role: str = "file"):
        super().__init__(f"{role} not found: {path}")
        self.path = path


class PipelineConfigError(DataError):
    pass


class PipelineStageError(ToolkitError):
    """Wraps the failure of one pipeline stage, keeping its exit code"""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage '{stage}' failed: {cause}")
        self.stage = stage
        self.cause = cause
        self.exit_code = getattr(cause, "exit_code", RuntimeFailure.exit_code)
