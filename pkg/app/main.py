"""
Basaa Orthography Toolkit CLI
Command-line entry point: normalize, convert, tag, generate, train, predict, sweep, evaluate, pipeline
"""

import argparse
import json
import logging
import sys
from typing import List, Optional, Sequence, Tuple

from pydantic import ValidationError

from .config import settings
from .converters.orchestrator import PipelineOrchestrator, load_pipeline_config
from .converters.rule_converter import RuleConverter
from .converters.seq2seq_converter import Seq2SeqConverter
from .converters.tagger_converter import TaggerConverter
from .exceptions import DataError, LengthMismatch, ToolkitError, UsageError
from .models.corpus import ParallelCorpus, Split
from .models.training import TrainConfig
from .seq2seq.checkpoint import load_model, save_model
from .seq2seq.sweep import load_grid, preset_grid, run_sweep
from .seq2seq.trainer import train
from .services.corpus_io import (
    generate_synthetic,
    load_parallel,
    read_lines,
    reject_private_use,
    save_parallel,
    select_split,
    split,
)
from .services.edit_tagger import UnigramTagPredictor, apply_tags, derive_tags, read_tagged, tokenize, write_tagged
from .services.metrics import evaluate
from .services.normalizer import (
    compile_table,
    denormalize_lines,
    digraph_count,
    joint_table,
    normalize,
    normalize_lines,
)
from .services.rule_baseline import RuleConverterCore, apply_correspondences, load_rules
from .services.text_model import compose, decompose, load_profile, strip_tones, validation_path
from .storage.artifacts import atomic_write_text, read_json

logger = logging.getLogger(__name__)

TRAIN_FLAGS = ("epochs", "max_len", "embed_dim", "hidden_dim", "learning_rate", "batch_size",
               "teacher_forcing", "optimizer")


class ToolkitArgumentParser(argparse.ArgumentParser):
    """ArgumentParser that reports usage errors as exceptions"""

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# I/O helpers

def _read_input(path: Optional[str], allow_private: bool = False) -> List[str]:
    """Decomposed input lines; only already-normalized text may carry private-use characters"""
    if path is None or path == "-":
        lines, origin = sys.stdin.read().splitlines(), "<stdin>"
    else:
        lines, origin = read_lines(path), path
    if not allow_private:
        for line_no, line in enumerate(lines, start=1):
            reject_private_use(line, line_no, source=origin)
    return [decompose(line) for line in lines]


def _write_output(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        atomic_write_text(path, text)


def _write_lines(path: Optional[str], lines: Sequence[str]) -> None:
    _write_output(path, "".join(compose(line) + "\n" for line in lines))


def _write_json(path: Optional[str], data) -> None:
    _write_output(path, json.dumps(data, ensure_ascii=False, indent=2) + "\n")


def _parse_sizes(value: str) -> Tuple[int, int, int]:
    try:
        sizes = tuple(int(part) for part in value.split(","))
    except ValueError:
        raise UsageError(f"--sizes: expected three integers like 2500,250,250, got {value!r}")
    if len(sizes) != 3:
        raise UsageError(f"--sizes: expected three integers, got {len(sizes)}")
    return sizes


def _train_config(args) -> TrainConfig:
    """Config file values, overridden by explicit flags"""
    data = {}
    if getattr(args, "config", None):
        data = read_json(args.config, role="train config")
        if not isinstance(data, dict):
            raise DataError(f"{args.config}: train config must be a JSON object")
    for name in TRAIN_FLAGS:
        value = getattr(args, name, None)
        if value is not None:
            data[name] = value
    if args.seed is not None:
        data["seed"] = args.seed
    try:
        return TrainConfig.model_validate(data)
    except ValidationError as e:
        where, message = validation_path(e)
        origin = args.config or "flags"
        raise DataError(f"{origin}: {where}: {message}") from e


def _model_table(args):
    if args.source_profile and args.target_profile:
        return joint_table(load_profile(args.source_profile), load_profile(args.target_profile))
    if args.source_profile or args.target_profile:
        raise UsageError("--source-profile and --target-profile must be given together")
    return None


# Commands

def cmd_normalize(args) -> int:
    table = compile_table(load_profile(args.profile))
    lines = _read_input(args.input)
    logger.info(f"Unifying {sum(digraph_count(line, table) for line in lines)} digraphs in {len(lines)} lines")
    _write_lines(args.output, list(normalize_lines(lines, table)))
    return 0


def cmd_denormalize(args) -> int:
    table = compile_table(load_profile(args.profile))
    _write_lines(args.output, list(denormalize_lines(_read_input(args.input, allow_private=True), table)))
    return 0


def cmd_strip_tones(args) -> int:
    profile = load_profile(args.profile)
    _write_lines(args.output, [strip_tones(line, profile) for line in _read_input(args.input)])
    return 0


def cmd_convert_rules(args) -> int:
    rules = load_rules(args.rules)
    source = load_profile(args.source_profile or rules.source_profile)
    target = load_profile(args.target_profile or rules.target_profile)
    lines = _read_input(args.input)
    if args.correspondences_only:
        _write_lines(args.output, apply_correspondences(lines, rules, source, target))
        return 0
    converter = RuleConverter(rules, source, target)
    _write_lines(args.output, converter.convert_lines(lines))
    return 0


def _tag_pairs(args) -> List[Tuple[str, str]]:
    if args.corpus and not (args.src or args.tgt):
        return [(ex.source, ex.target) for ex in load_parallel(args.corpus)]
    if args.src and args.tgt and not args.corpus:
        sources, targets = _read_input(args.src), _read_input(args.tgt)
        if len(sources) != len(targets):
            raise LengthMismatch(len(sources), len(targets), hyp_source=args.src, ref_source=args.tgt)
        return list(zip(sources, targets))
    raise UsageError("derive-tags needs either --corpus or both --src and --tgt")


def cmd_derive_tags(args) -> int:
    pairs = _tag_pairs(args)
    tagged = [derive_tags(tokenize(s), tokenize(t), with_start=not args.no_start) for s, t in pairs]
    _write_output(args.output, write_tagged(tagged))
    return 0


def cmd_apply_tags(args) -> int:
    sentences = read_tagged(args.input)
    _write_lines(args.output, [" ".join(apply_tags(s)) for s in sentences])
    return 0


def cmd_convert_tags(args) -> int:
    if args.max_iters < 1:
        raise UsageError("--max-iters must be at least 1")
    corpus = load_parallel(args.train_corpus)
    predictor = UnigramTagPredictor().fit((tokenize(ex.source), tokenize(ex.target)) for ex in corpus)
    converter = TaggerConverter(predictor, max_iters=args.max_iters)
    _write_lines(args.output, converter.convert_lines(_read_input(args.input)))
    return 0


def cmd_generate(args) -> int:
    rules = load_rules(args.rules)
    source = load_profile(args.source_profile or rules.source_profile)
    target = load_profile(args.target_profile or rules.target_profile)
    seed = args.seed if args.seed is not None else settings.default_seed
    corpus = generate_synthetic((source, target), rules, args.n, seed, args.noise)
    if args.output:
        save_parallel(corpus, args.output)
    else:
        _write_lines(None, [f"{ex.source}\t{ex.target}" for ex in corpus])
    return 0


def cmd_split(args) -> int:
    sizes = _parse_sizes(args.sizes)
    corpus = load_parallel(args.corpus)
    seed = args.seed if args.seed is not None else settings.default_seed
    labeled = split(corpus, sizes, seed)
    if args.output:
        save_parallel(labeled, args.output)
    else:
        _write_lines(None, [f"{ex.source}\t{ex.target}\t{ex.split.value}" for ex in labeled])
    return 0


def cmd_train(args) -> int:
    config = _train_config(args)
    table = _model_table(args)
    corpus = select_split(load_parallel(args.corpus), args.split)
    if table is not None:
        corpus = ParallelCorpus.from_pairs(
            [(normalize(ex.source, table), normalize(ex.target, table)) for ex in corpus]
        )
    model, result = train(corpus, config)
    model.table = table
    save_model(model, args.output)
    logger.info(f"Trained on {result.examples} pairs ({result.truncated} truncated), losses {result.loss_log}")
    return 0


def cmd_predict(args) -> int:
    model = load_model(args.model)
    converter = Seq2SeqConverter(model)
    _write_lines(args.output, converter.convert_lines(_read_input(args.input)))
    return 0


def cmd_sweep(args) -> int:
    if args.preset:
        grid = preset_grid()
    elif args.grid:
        grid = load_grid(args.grid)
    else:
        raise UsageError("sweep needs --grid or --preset")
    if args.seed is not None:
        grid = [config.model_copy(update={"seed": args.seed}) for config in grid]

    table = _model_table(args)
    preprocess = None
    if args.preprocess_rules:
        rules = load_rules(args.preprocess_rules)
        preprocess = RuleConverterCore(
            rules,
            load_profile(args.source_profile or rules.source_profile),
            load_profile(args.target_profile or rules.target_profile),
        ).apply_correspondences

    corpus = load_parallel(args.corpus)
    if not corpus.has_splits():
        raise DataError(f"{args.corpus}: sweep needs a corpus with split labels (run `split` first)")
    train_corpus = corpus.select(Split.TRAIN)
    eval_corpus = corpus.select(Split(args.eval_split))
    reports = {"raw": run_sweep(train_corpus, eval_corpus, grid, table=table)}
    if preprocess is not None:
        reports["preprocessed"] = run_sweep(train_corpus, eval_corpus, grid, table=table, preprocess=preprocess)

    if args.json:
        if len(reports) == 1:
            _write_json(args.output, reports["raw"].model_dump(mode="json"))
        else:
            _write_json(args.output, {name: r.model_dump(mode="json") for name, r in reports.items()})
    elif len(reports) == 1:
        _write_output(args.output, reports["raw"].to_table(settings.report_decimals) + "\n")
    else:
        _write_output(args.output, "\n".join(
            f"# {name} sources\n{r.to_table(settings.report_decimals)}\n" for name, r in reports.items()
        ))
    return 0


def cmd_evaluate(args) -> int:
    hypotheses = read_lines(args.hyp)
    references = read_lines(args.ref)
    table = compile_table(load_profile(args.normalized_profile)) if args.normalized_profile else None
    try:
        report = evaluate(hypotheses, references, table=table)
    except LengthMismatch as e:
        raise LengthMismatch(e.n_hyp, e.n_ref, hyp_source=args.hyp, ref_source=args.ref) from e
    if args.json:
        _write_json(None, report.model_dump())
    else:
        _write_output(None, f"CER\t{report.cer:.{settings.report_decimals}f}\n"
                            f"WER\t{report.wer:.{settings.report_decimals}f}\n")
    return 0


def cmd_pipeline(args) -> int:
    config = load_pipeline_config(args.config)
    if args.seed is not None:
        config = config.model_copy(update={"seed": args.seed, "train": config.train.model_copy(update={"seed": args.seed})})
    orchestrator = PipelineOrchestrator()
    report = orchestrator.run(config)
    if args.json:
        _write_json(None, orchestrator.report.model_dump(mode="json"))
    else:
        _write_output(None, report.summary() + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = ToolkitArgumentParser(
        prog="basaa",
        description=f"{settings.app_name}: orthography conversion and evaluation",
    )
    parser.add_argument("--log-level", default=settings.log_level.upper(), type=str.upper,
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"], help="(default: %(default)s)")
    parser.add_argument("--version", action="version", version=f"{settings.app_name} {settings.app_version}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=ToolkitArgumentParser)
    sub.required = True

    io = argparse.ArgumentParser(add_help=False)
    io.add_argument("--in", dest="input", metavar="FILE", help="input text, one sentence per line (default: STDIN)")
    io.add_argument("--out", dest="output", metavar="FILE", help="(default: STDOUT)")

    seeded = argparse.ArgumentParser(add_help=False)
    seeded.add_argument("--seed", type=int, default=None, help=f"(default: {settings.default_seed})")

    profiles = argparse.ArgumentParser(add_help=False)
    profiles.add_argument("--source-profile", "--from-profile", "--profile-src", dest="source_profile",
                          metavar="PROFILE", help="profile JSON path or shipped id")
    profiles.add_argument("--target-profile", "--to-profile", "--profile-tgt", dest="target_profile",
                          metavar="PROFILE", help="profile JSON path or shipped id")

    p = sub.add_parser("normalize", parents=[io], help="unify digraphs into private-use code points")
    p.add_argument("--profile", required=True)
    p.set_defaults(handler=cmd_normalize)

    p = sub.add_parser("denormalize", parents=[io], help="expand unified digraphs")
    p.add_argument("--profile", required=True)
    p.set_defaults(handler=cmd_denormalize)

    p = sub.add_parser("strip-tones", parents=[io], help="drop tone diacritics (toneless spelling)")
    p.add_argument("--profile", required=True)
    p.set_defaults(handler=cmd_strip_tones)

    p = sub.add_parser("convert-rules", parents=[io, profiles], help="rule-based orthography conversion")
    p.add_argument("--rules", required=True)
    p.add_argument("--correspondences-only", action="store_true",
                   help="apply the substitutions only, keeping source tone marks (training preprocessing)")
    p.set_defaults(handler=cmd_convert_rules)

    p = sub.add_parser("derive-tags", help="token edit tags for each corpus pair")
    p.add_argument("--corpus", help="parallel TSV corpus")
    p.add_argument("--src", help="source sentences, one per line (with --tgt)")
    p.add_argument("--tgt", help="target sentences, line-aligned with --src")
    p.add_argument("--out", dest="output", metavar="FILE")
    p.add_argument("--no-start", action="store_true", help="do not prepend the virtual $START token")
    p.set_defaults(handler=cmd_derive_tags)

    p = sub.add_parser("apply-tags", help="realize tagged sentences")
    p.add_argument("--in", dest="input", required=True, metavar="FILE")
    p.add_argument("--out", dest="output", metavar="FILE")
    p.set_defaults(handler=cmd_apply_tags)

    p = sub.add_parser("convert-tags", parents=[io], help="iterative edit-tag conversion with a unigram tag predictor")
    p.add_argument("--train-corpus", required=True, help="parallel TSV corpus the predictor is fitted on")
    p.add_argument("--max-iters", type=int, default=5)
    p.set_defaults(handler=cmd_convert_tags)

    p = sub.add_parser("generate", parents=[seeded, profiles], help="synthetic parallel corpus")
    p.add_argument("--rules", required=True)
    p.add_argument("-n", "--n", dest="n", type=int, required=True)
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--out", dest="output", metavar="FILE")
    p.set_defaults(handler=cmd_generate)

    p = sub.add_parser("split", parents=[seeded], help="seeded train/valid/test labels")
    p.add_argument("--corpus", required=True)
    p.add_argument("--sizes", required=True, help="n_train,n_valid,n_test")
    p.add_argument("--out", dest="output", metavar="FILE")
    p.set_defaults(handler=cmd_split)

    p = sub.add_parser("train", parents=[seeded, profiles], help="train a seq2seq model")
    p.add_argument("--corpus", required=True)
    p.add_argument("--config", help="TrainConfig JSON; flags override it")
    p.add_argument("--split", default=Split.TRAIN.value, choices=[s.value for s in Split])
    p.add_argument("--out", dest="output", required=True, metavar="MODEL")
    p.add_argument("--epochs", type=int)
    p.add_argument("--max-len", dest="max_len", type=int)
    p.add_argument("--embed-dim", dest="embed_dim", type=int)
    p.add_argument("--hidden-dim", dest="hidden_dim", type=int)
    p.add_argument("--learning-rate", dest="learning_rate", type=float)
    p.add_argument("--batch-size", dest="batch_size", type=int)
    p.add_argument("--teacher-forcing", dest="teacher_forcing", type=float)
    p.add_argument("--optimizer", choices=["sgd", "adam"])
    p.set_defaults(handler=cmd_train)

    p = sub.add_parser("predict", parents=[io], help="greedy seq2seq conversion")
    p.add_argument("--model", required=True)
    p.set_defaults(handler=cmd_predict)

    p = sub.add_parser("sweep", parents=[seeded, profiles], help="epochs x length sweep")
    p.add_argument("--corpus", required=True, help="corpus with split labels")
    p.add_argument("--grid", help="sweep grid JSON")
    p.add_argument("--preset", action="store_true", help="use the eight published epoch/length shapes")
    p.add_argument("--eval-split", default=Split.TEST.value, choices=[Split.VALID.value, Split.TEST.value])
    p.add_argument("--preprocess-rules", metavar="RULES",
                   help="also sweep on sources with these correspondences applied, reported next to raw sources")
    p.add_argument("--json", action="store_true")
    p.add_argument("--out", dest="output", metavar="FILE")
    p.set_defaults(handler=cmd_sweep)

    p = sub.add_parser("evaluate", help="corpus CER and WER")
    p.add_argument("--hyp", required=True)
    p.add_argument("--ref", required=True)
    p.add_argument("--normalized-profile", metavar="PROFILE", help="score digraph-normalized text")
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=cmd_evaluate)

    p = sub.add_parser("pipeline", parents=[seeded], help="normalize, train, predict, evaluate")
    p.add_argument("--config", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=cmd_pipeline)

    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run one command

    Returns:
        0 success, 1 usage error, 2 data error, 3 runtime error
    """
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv) if argv is not None else None)
    except UsageError as e:
        print(f"error: {e.message}", file=sys.stderr)
        return UsageError.exit_code
    except SystemExit as e:
        # --help and --version
        return int(e.code or 0)

    logging.basicConfig(level=args.log_level.upper(), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.handler(args)
    except ToolkitError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        print(f"error: {e.filename or ''}: {e.strerror or e}", file=sys.stderr)
        return DataError.exit_code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
