"""
Pipeline Orchestrator
Runs normalize -> train -> predict -> denormalize -> evaluate end-to-end
"""

from datetime import datetime
from pathlib import Path
from typing import Callable, List, Optional, TypeVar, Union
import logging
import time

from pydantic import ValidationError

from ..exceptions import InsufficientData, PipelineConfigError, PipelineStageError, ToolkitError
from ..models.corpus import ParallelCorpus, Split
from ..models.orthography import OrthographyProfile
from ..models.pipeline import PipelineConfig
from ..models.report import EvalReport, PipelineReport
from ..seq2seq.checkpoint import save_model
from ..seq2seq.trainer import train
from ..services.corpus_io import load_parallel, split
from ..services.metrics import copy_baseline, evaluate
from ..services.normalizer import joint_table, normalize
from ..services.rule_baseline import apply_correspondences, load_rules
from ..services.text_model import compose, load_profile, validation_path
from ..storage.artifacts import atomic_write_json, atomic_write_text, read_json
from .rule_converter import RuleConverter
from .seq2seq_converter import Seq2SeqConverter

logger = logging.getLogger(__name__)

T = TypeVar("T")

RAW = "raw"
PREPROCESSED = "preprocessed"

STAGES = ("validate", "load", "split", "normalize", "train", "predict", "denormalize", "evaluate")


def load_pipeline_config(path: Union[str, Path]) -> PipelineConfig:
    """
    Load a pipeline config; relative paths are taken from the config's directory

    Raises:
        PipelineConfigError: invalid document, with the offending field path
    """
    path = Path(path)
    data = read_json(path, role="pipeline config")
    try:
        config = PipelineConfig.model_validate(data)
    except ValidationError as e:
        where, message = validation_path(e)
        raise PipelineConfigError(f"{path}: {where}: {message}") from e
    return resolve_paths(config, path.parent)


def resolve_paths(config: PipelineConfig, base: Path) -> PipelineConfig:
    def anchor(value: Optional[str]) -> Optional[str]:
        if value is None or Path(value).is_absolute():
            return value
        return str(base / value)

    def anchor_profile(value: str) -> str:
        # bare ids name shipped or mapped profiles
        if value in config.profiles or not (base / value).exists():
            return value
        return str(base / value)

    return config.model_copy(update={
        "profiles": {k: anchor(v) for k, v in config.profiles.items()},
        "source_profile": anchor_profile(config.source_profile),
        "target_profile": anchor_profile(config.target_profile),
        "rules": anchor(config.rules),
        "corpus": anchor(config.corpus),
        "model_path": anchor(config.model_path),
        "report_path": anchor(config.report_path),
        "predictions_path": anchor(config.predictions_path),
    })


class PipelineOrchestrator:
    """
    Orchestrates the end-to-end seq2seq experiment

    Pipeline:
    1. Validate: every referenced input file exists
    2. Load: profiles, optional rule set, corpus
    3. Split: seeded train/valid/test partition (or the corpus' own labels)
    4. Normalize: optionally apply the rule set's correspondences to the
       sources, then unify digraphs of both orthographies
    5. Train: fit the encoder-decoder, save the checkpoint
    6. Predict: greedy decoding of the test sources
    7. Denormalize: expand unified digraphs
    8. Evaluate: CER/WER, plus rule and copy-source baselines
    """

    def __init__(self, train_fn: Callable = train):
        self.train_fn = train_fn
        self.logs: List[str] = []
        self.report: Optional[PipelineReport] = None

    def log(self, message: str, level: str = "info"):
        timestamp = datetime.now().isoformat()
        entry = f"[{timestamp}] [ORCHESTRATOR] [{level.upper()}] {message}"
        self.logs.append(entry)
        if level == "error":
            logger.error(entry)
        elif level == "warning":
            logger.warning(entry)
        else:
            logger.info(entry)

    def get_logs(self) -> List[str]:
        return self.logs.copy()

    def _stage(self, name: str, fn: Callable[[], T]) -> T:
        self.log(f"Stage '{name}' started")
        try:
            result = fn()
        except (ToolkitError, ValueError, ArithmeticError, OSError) as e:
            self.log(f"Stage '{name}' failed: {e}", level="error")
            raise PipelineStageError(name, e) from e
        return result

    @staticmethod
    def _profile(ref: str, config: PipelineConfig) -> OrthographyProfile:
        return load_profile(config.profiles.get(ref, ref))

    def _validate(self, config: PipelineConfig) -> None:
        missing = [f"{role} ({path})" for role, path in config.input_files().items() if not path.exists()]
        if missing:
            raise PipelineConfigError(f"missing input files: {', '.join(missing)}")

    def _split(self, corpus: ParallelCorpus, config: PipelineConfig) -> ParallelCorpus:
        if config.split_sizes is not None:
            return split(corpus, config.split_sizes, config.effective_seed)
        if not corpus.has_splits():
            raise PipelineConfigError("corpus carries no split labels and split_sizes is not set")
        return corpus

    def run(self, config: PipelineConfig) -> EvalReport:
        """
        Execute every stage; the first failure aborts the run

        With preprocess_correspondences set, every stage from normalize on
        runs twice: once on the raw sources and once on sources with the rule
        set's correspondences applied.

        Args:
            config: Validated pipeline config

        Returns:
            EvalReport of the seq2seq converter on the test split; the full
            PipelineReport is kept on self.report and written to report_path

        Raises:
            PipelineStageError: names the failed stage and keeps its exit code
        """
        start_time = time.time()
        self.logs = []
        self.log(f"Starting pipeline run: {' -> '.join(STAGES)}")

        self._stage("validate", lambda: self._validate(config))

        def load():
            source = self._profile(config.source_profile, config)
            target = self._profile(config.target_profile, config)
            rules = load_rules(config.rules) if config.rules else None
            return source, target, rules, load_parallel(config.corpus)

        source, target, rules, corpus = self._stage("load", load)
        self.log(f"Loaded {len(corpus)} pairs, profiles '{source.id}' -> '{target.id}'")

        labeled = self._stage("split", lambda: self._split(corpus, config))
        train_corpus = labeled.select(Split.TRAIN)
        test_corpus = labeled.select(Split.TEST)
        if len(train_corpus) == 0 or len(test_corpus) == 0:
            raise PipelineStageError("split", InsufficientData(
                f"need non-empty train and test splits, got {labeled.split_counts()}"
            ))
        self.log(f"Split sizes {labeled.split_counts()}")

        def normalize_stage():
            table = joint_table(source, target)
            test_sources = {RAW: test_corpus.sources}
            train_sources = {RAW: train_corpus.sources}
            if config.preprocess_correspondences:
                train_sources[PREPROCESSED] = apply_correspondences(train_corpus.sources, rules, source, target)
                test_sources[PREPROCESSED] = apply_correspondences(test_corpus.sources, rules, source, target)
            normalized = {
                name: ParallelCorpus.from_pairs(
                    [(normalize(s, table), normalize(t, table)) for s, t in zip(sources, train_corpus.targets)],
                    split=Split.TRAIN,
                )
                for name, sources in train_sources.items()
            }
            return table, test_sources, normalized

        table, test_sources, normalized_train = self._stage("normalize", normalize_stage)

        def train_stage():
            runs = {}
            for name, train_pairs in normalized_train.items():
                model, result = self.train_fn(train_pairs, config.train)
                model.table = table
                save_model(model, config.model_path if name == RAW else config.preprocessed_model_path)
                self.log(f"Trained {config.train.label} on {name} sources: final loss {result.loss_log[-1]:.4f}")
                runs[name] = (model, result)
            return runs

        runs = self._stage("train", train_stage)

        converters = {name: Seq2SeqConverter(model, table=table) for name, (model, _) in runs.items()}
        normalized_outputs = self._stage("predict", lambda: {
            name: converter.decode_normalized(test_sources[name]) for name, converter in converters.items()
        })
        predictions = self._stage("denormalize", lambda: {
            name: [converters[name].finish(out) for out in outputs] for name, outputs in normalized_outputs.items()
        })

        def evaluate_stage():
            score_table = table if config.evaluate_normalized else None
            reports = {
                name: evaluate(hypotheses, test_corpus.targets, table=score_table)
                for name, hypotheses in predictions.items()
            }
            rule_report = None
            if rules is not None:
                rule_outputs = RuleConverter(rules, source, target).convert_lines(test_corpus.sources)
                rule_report = evaluate(rule_outputs, test_corpus.targets, table=score_table)
            copies = {name: copy_baseline(sources, test_corpus.targets) for name, sources in test_sources.items()}
            return reports, rule_report, copies

        reports, rule_report, copies = self._stage("evaluate", evaluate_stage)

        preprocessed = PREPROCESSED in reports
        self.report = PipelineReport(
            seq2seq=reports[RAW],
            rule_baseline=rule_report,
            copy_source=copies[RAW],
            seq2seq_preprocessed=reports.get(PREPROCESSED),
            copy_preprocessed=copies.get(PREPROCESSED),
            loss_log=runs[RAW][1].loss_log,
            loss_log_preprocessed=runs[PREPROCESSED][1].loss_log if preprocessed else [],
            truncated=runs[RAW][1].truncated,
            test_sentences=len(test_corpus),
        )
        atomic_write_json(config.report_path, self.report.model_dump(mode="json"))
        if config.predictions_path:
            atomic_write_text(config.predictions_path, "".join(compose(p) + "\n" for p in predictions[RAW]))

        processing_time = (time.time() - start_time) * 1000
        self.log(f"Pipeline complete in {processing_time:.0f}ms: {reports[RAW].summary()}")
        if preprocessed:
            self.log(f"Preprocessed sources: {reports[PREPROCESSED].summary()}")
        return reports[RAW]
