"""
Training Data Models
Seq2seq training configuration, training outcome and sweep results
"""

from enum import Enum
from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field


class TrainConfig(BaseModel):
    """Hyperparameters of one seq2seq training run"""
    model_config = ConfigDict(frozen=True, extra="forbid")

    epochs: int = Field(default=10, ge=1)
    max_len: int = Field(default=64, ge=2, description="Characters, after normalization")
    embed_dim: int = Field(default=64, ge=1)
    hidden_dim: int = Field(default=128, ge=1)
    learning_rate: float = Field(default=1.0, gt=0)
    batch_size: int = Field(default=32, ge=1)
    seed: int = Field(default=13)
    teacher_forcing: float = Field(default=1.0, ge=0.0, le=1.0)
    clip_norm: float = Field(default=5.0, gt=0)
    optimizer: Literal["sgd", "adam"] = Field(default="sgd")
    init_scale: float = Field(default=0.08, gt=0)

    @property
    def label(self) -> str:
        return f"{self.epochs} ep., length {self.max_len}"


class TrainingResult(BaseModel):
    """Per-epoch loss log and data statistics of a finished run"""
    loss_log: List[float]
    truncated: int = Field(default=0, description="Examples cut to max_len")
    examples: int = 0
    steps: int = 0


class SweepStatus(str, Enum):
    OK = "ok"
    FAILED = "failed"


class SweepRow(BaseModel):
    """One row of a sweep report: parameters, CER, WER"""
    parameters: str
    config: TrainConfig
    status: SweepStatus = SweepStatus.OK
    cer: Optional[float] = None
    wer: Optional[float] = None
    final_loss: Optional[float] = None
    error: Optional[str] = None
    best: bool = False


class SweepReport(BaseModel):
    rows: List[SweepRow] = Field(default_factory=list)

    @property
    def best_row(self) -> Optional[SweepRow]:
        return next((row for row in self.rows if row.best), None)

    def to_table(self, decimals: int = 4) -> str:
        """Plain-text table: Parameters, CER, WER"""
        lines = [f"{'Parameters':<24}{'CER':>12}{'WER':>12}"]
        for row in self.rows:
            marker = " *" if row.best else ""
            if row.status == SweepStatus.FAILED:
                lines.append(f"{row.parameters:<24}{'failed':>12}{'failed':>12}")
            else:
                lines.append(f"{row.parameters:<24}{row.cer:>12.{decimals}f}{row.wer:>12.{decimals}f}{marker}")
        return "\n".join(lines)
