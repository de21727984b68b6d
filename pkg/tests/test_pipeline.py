"""End-to-end pipeline orchestration and the converter classes"""

import json

import pytest

from app.config import settings
from app.converters import PipelineOrchestrator, RuleConverter, TaggerConverter, load_pipeline_config
from app.converters.orchestrator import STAGES
from app.exceptions import ConversionError, DivergenceError, PipelineConfigError, PipelineStageError
from app.main import run
from app.models.tagging import EditTag
from app.services.corpus_io import generate_synthetic, save_parallel
from app.services.edit_tagger import GoldTagPredictor

TINY_TRAIN = {"epochs": 1, "max_len": 24, "embed_dim": 4, "hidden_dim": 6, "batch_size": 8}


@pytest.fixture
def pipeline_dir(tmp_path, catholic, official, catholic_rules):
    corpus = generate_synthetic((catholic, official), catholic_rules, n=40, seed=2)
    save_parallel(corpus, tmp_path / "corpus.tsv")
    return tmp_path


def _config(directory, **overrides):
    doc = {
        "source_profile": "basaa-catholic",
        "target_profile": "basaa-official",
        "rules": str(settings.rules_dir / "catholic-to-official.json"),
        "corpus": "corpus.tsv",
        "split_sizes": [30, 5, 5],
        "seed": 5,
        "train": TINY_TRAIN,
        "model_path": "out/model.json",
        "report_path": "out/report.json",
        "predictions_path": "out/predictions.txt",
    }
    doc.update(overrides)
    path = directory / "pipeline.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    return path


def test_pipeline_writes_finite_report(pipeline_dir):
    orchestrator = PipelineOrchestrator()
    report = orchestrator.run(load_pipeline_config(_config(pipeline_dir)))
    assert report.cer >= 0
    assert report.sentences == 5

    written = json.loads((pipeline_dir / "out" / "report.json").read_text(encoding="utf-8"))
    assert written["seq2seq"]["cer"] == report.cer
    assert written["rule_baseline"]["cer"] == 0
    assert written["copy_source"] is not None
    assert written["seq2seq_preprocessed"] is None
    assert len(written["loss_log"]) == TINY_TRAIN["epochs"]
    assert len((pipeline_dir / "out" / "predictions.txt").read_text(encoding="utf-8").splitlines()) == 5
    logs = "\n".join(orchestrator.get_logs())
    for stage in STAGES:
        assert f"Stage '{stage}' started" in logs


def test_pipeline_is_reproducible(pipeline_dir):
    config = load_pipeline_config(_config(pipeline_dir))
    artifacts = ("model.json", "report.json", "predictions.txt")
    PipelineOrchestrator().run(config)
    first = {name: (pipeline_dir / "out" / name).read_bytes() for name in artifacts}
    PipelineOrchestrator().run(config)
    second = {name: (pipeline_dir / "out" / name).read_bytes() for name in artifacts}
    assert first == second


def test_relative_paths_follow_the_config(pipeline_dir):
    config = load_pipeline_config(_config(pipeline_dir))
    assert config.corpus == str(pipeline_dir / "corpus.tsv")
    assert config.source_profile == "basaa-catholic"
    assert config.train.seed == 5


def test_missing_corpus_fails_validation(pipeline_dir):
    config = load_pipeline_config(_config(pipeline_dir, corpus="absent.tsv"))
    with pytest.raises(PipelineStageError) as info:
        PipelineOrchestrator().run(config)
    assert info.value.stage == "validate"
    assert info.value.exit_code == 2
    assert not (pipeline_dir / "out").exists()


def test_unknown_config_field(pipeline_dir):
    with pytest.raises(PipelineConfigError, match="epochz"):
        load_pipeline_config(_config(pipeline_dir, epochz=3))


def test_empty_test_split(pipeline_dir):
    config = load_pipeline_config(_config(pipeline_dir, split_sizes=[40, 0, 0]))
    with pytest.raises(PipelineStageError) as info:
        PipelineOrchestrator().run(config)
    assert info.value.stage == "split"


def test_training_failure_names_the_stage(pipeline_dir):
    def diverge(corpus, config):
        raise DivergenceError("loss became non-finite")

    with pytest.raises(PipelineStageError) as info:
        PipelineOrchestrator(train_fn=diverge).run(load_pipeline_config(_config(pipeline_dir)))
    assert info.value.stage == "train"
    assert info.value.exit_code == 3


def test_preprocessed_sources_reported_alongside(pipeline_dir):
    config = load_pipeline_config(_config(pipeline_dir, preprocess_correspondences=True))
    PipelineOrchestrator().run(config)
    written = json.loads((pipeline_dir / "out" / "report.json").read_text(encoding="utf-8"))
    assert written["seq2seq_preprocessed"]["sentences"] == 5
    assert written["copy_preprocessed"]["cer"] <= written["copy_source"]["cer"]
    assert len(written["loss_log_preprocessed"]) == TINY_TRAIN["epochs"]
    assert (pipeline_dir / "out" / "model.json").exists()
    assert (pipeline_dir / "out" / "model.preprocessed.json").exists()


def test_preprocessing_needs_a_rule_set(pipeline_dir):
    with pytest.raises(PipelineConfigError, match="preprocess_correspondences"):
        load_pipeline_config(_config(pipeline_dir, rules=None, preprocess_correspondences=True))


def test_pipeline_command(pipeline_dir, capsys):
    assert run(["pipeline", "--config", str(_config(pipeline_dir)), "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert set(report) >= {"seq2seq", "rule_baseline", "copy_source", "loss_log"}


def test_pipeline_command_missing_input(pipeline_dir, capsys):
    assert run(["pipeline", "--config", str(_config(pipeline_dir, corpus="absent.tsv"))]) == 2
    assert "validate" in capsys.readouterr().err


# converters

def test_rule_converter_safe_convert(catholic_rules, catholic, official):
    converter = RuleConverter(catholic_rules, catholic, official)
    ok = converter.safe_convert(["ja"])
    assert ok["success"] and ok["data"] == ["ya"]
    failed = converter.safe_convert(["ba", "b\u0301a"])
    assert not failed["success"]
    assert "sentence 2" in failed["error"]
    assert any("[ERROR]" in entry for entry in converter.get_logs())
    converter.clear_logs()
    assert converter.get_logs() == []


def test_rule_converter_error_position(catholic_rules, catholic, official):
    with pytest.raises(ConversionError) as info:
        RuleConverter(catholic_rules, catholic, official).convert_lines(["ba", "ba", "b\u0301a"])
    assert info.value.position == 3


def test_tagger_converter_with_oracle():
    converter = TaggerConverter(GoldTagPredictor(["goes", "to", "work"]))
    assert converter.convert_sentence("go work") == "goes to work"


def test_tagger_converter_logs_non_convergence():
    def flip(tokens):
        return [[EditTag.replace("b" if tok == "a" else "a")] if tok in ("a", "b") else [EditTag.keep()]
                for tok in tokens]

    converter = TaggerConverter(flip, max_iters=2)
    converter.convert_sentence("a")
    assert any("No fixed point" in entry for entry in converter.get_logs())
