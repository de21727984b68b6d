"""
Evaluation Report Models
Corpus-level CER/WER as reported for each converter
"""

from typing import Optional

from pydantic import BaseModel, Field


class EvalReport(BaseModel):
    """Micro-averaged character and word error rates (percent, may exceed 100)"""
    cer: float = Field(..., ge=0)
    wer: float = Field(..., ge=0)
    total_ref_chars: int = Field(..., ge=1)
    total_ref_words: int = Field(..., ge=1)
    total_char_edits: int = Field(..., ge=0)
    total_word_edits: int = Field(..., ge=0)
    sentences: int = Field(default=0, ge=0)

    def summary(self) -> str:
        return f"CER {self.cer:.4f}  WER {self.wer:.4f}  ({self.sentences} sentences)"


class PipelineReport(BaseModel):
    """
    Report written by the end-to-end pipeline

    The *_preprocessed entries are present when the run also trained on
    sources with the rule set's spelling correspondences already applied.
    """
    seq2seq: EvalReport
    rule_baseline: Optional[EvalReport] = None
    copy_source: Optional[EvalReport] = None
    seq2seq_preprocessed: Optional[EvalReport] = None
    copy_preprocessed: Optional[EvalReport] = None
    loss_log: list = Field(default_factory=list)
    loss_log_preprocessed: list = Field(default_factory=list)
    truncated: int = 0
    test_sentences: int = 0
