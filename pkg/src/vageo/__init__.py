"""Geodesics, geodesic growth and counter machines for virtually abelian groups."""

from .group import (
    Element, GroupSpec, SpecError, corpus_spec, evaluate_word, load_spec, make_spec, multiply, parse_spec,
    validate_spec, word_weight,
)
from .shuffle import AlphabetYP, Pattern, PatternedWord, delta, enumerate_patterns, expand, pattern_maps, shuffle
from .geodesic import build_ball, is_geodesic_oracle, is_geodesic_pattern, is_geodesic_word
from .paths import build_gamma, path_to_word, word_to_path
from .counter import build_geodesic_machine, machine_accepts, run_bounded, windowed_decomposition
from .growth import GrowthTable, classify_growth, fit_rational_series, geodesic_counts, growth_rate_estimate

__version__ = "0.1.0"
