"""
Pipeline Configuration Model
Everything the end-to-end run needs, validated before any work starts
"""

from pathlib import Path
from typing import Dict, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .training import TrainConfig


class PipelineConfig(BaseModel):
    """Profiles, rules, training config and artifact paths for one pipeline run"""
    model_config = ConfigDict(extra="forbid")

    profiles: Dict[str, str] = Field(default_factory=dict, description="profile id -> JSON file path")
    source_profile: str = Field(..., description="Profile id or path of the source orthography")
    target_profile: str = Field(..., description="Profile id or path of the target orthography")
    rules: Optional[str] = Field(default=None, description="Rule set for the baseline comparison")
    corpus: str
    split_sizes: Optional[Tuple[int, int, int]] = None
    train: TrainConfig = Field(default_factory=TrainConfig)
    seed: Optional[int] = Field(default=None, description="Overrides train.seed and the split seed")
    model_path: str
    report_path: str
    predictions_path: Optional[str] = None
    evaluate_normalized: bool = False
    preprocess_correspondences: bool = Field(
        default=False,
        description="Also train on sources with the rule set's correspondences applied, reported side by side",
    )

    @model_validator(mode="after")
    def _check_consistency(self) -> "PipelineConfig":
        if self.seed is not None and self.train.seed != self.seed:
            self.train = self.train.model_copy(update={"seed": self.seed})
        if self.preprocess_correspondences and not self.rules:
            raise ValueError("preprocess_correspondences needs a rule set (rules)")
        return self

    @property
    def effective_seed(self) -> int:
        return self.seed if self.seed is not None else self.train.seed

    @property
    def preprocessed_model_path(self) -> str:
        """Checkpoint of the model trained on preprocessed sources, next to model_path"""
        path = Path(self.model_path)
        return str(path.with_name(f"{path.stem}.preprocessed{path.suffix}"))

    def input_files(self) -> Dict[str, Path]:
        """Files that must exist before the run starts"""
        files = {"corpus": Path(self.corpus)}
        for profile_id, path in self.profiles.items():
            files[f"profiles.{profile_id}"] = Path(path)
        if self.rules:
            files["rules"] = Path(self.rules)
        return files
