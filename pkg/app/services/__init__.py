"""Basaa Toolkit Services"""

from .text_model import load_profile, builtin_profile, parse_tones, render_tones, strip_tones, decompose, compose
from .normalizer import build_table, compile_table, normalize, denormalize, digraph_count
from .rule_baseline import apply_hts, load_rules, convert, convert_lines, apply_correspondences, RuleConverterCore
from .edit_tagger import derive_tags, apply_tags, iterate, align, GoldTagPredictor, UnigramTagPredictor
from .metrics import edit_distance, evaluate, copy_baseline
from .corpus_io import load_parallel, save_parallel, split, generate_synthetic, select_split

__all__ = [
    "load_profile", "builtin_profile", "parse_tones", "render_tones", "strip_tones", "decompose", "compose",
    "build_table", "compile_table", "normalize", "denormalize", "digraph_count",
    "apply_hts", "load_rules", "convert", "convert_lines", "apply_correspondences", "RuleConverterCore",
    "derive_tags", "apply_tags", "iterate", "align", "GoldTagPredictor", "UnigramTagPredictor",
    "edit_distance", "evaluate", "copy_baseline",
    "load_parallel", "save_parallel", "split", "generate_synthetic", "select_split",
]
