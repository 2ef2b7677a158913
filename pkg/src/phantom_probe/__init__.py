"""Probe for phantom edits: outputs that keep a word's text but change its token ids."""

from .alignment import Outcome, Trial, align, classify_trial, compare_document, extract_token_span
from .analytics import (
    OutcomeDistribution,
    TransitionMatrix,
    outcome_distribution,
    split_merge_summary,
    transition_matrix,
)
from .masking import Blocklist, DecodeFilter, EmptySupportError, apply_filter, build_blocklist, export_logit_bias
from .probe import AnnotatedDoc, Target, annotate, bracket, build_prompt, filter_corpus, select_targets
from .segmentation import count_segmentations, enumerate_segmentations, equivalent, plausible_filter
from .simulator import BehaviorMixture, LabeledOutput, generate, generate_corpus, inventory_coverage, preset
from .taxonomy import ErrorType, classify_error, fired_predicates
from .vocab import Encoding, Vocabulary, decode, encode, load_vocab_merges, load_vocabulary, toy_vocabulary

__all__ = [
    "AnnotatedDoc", "BehaviorMixture", "Blocklist", "DecodeFilter", "EmptySupportError", "Encoding",
    "ErrorType", "LabeledOutput", "Outcome", "OutcomeDistribution", "Target", "TransitionMatrix", "Trial",
    "Vocabulary", "align", "annotate", "apply_filter", "bracket", "build_blocklist", "build_prompt",
    "classify_error", "classify_trial", "compare_document", "count_segmentations", "decode", "encode",
    "enumerate_segmentations", "equivalent", "export_logit_bias", "extract_token_span", "filter_corpus",
    "fired_predicates", "generate", "generate_corpus", "inventory_coverage", "load_vocab_merges",
    "load_vocabulary", "outcome_distribution", "plausible_filter", "preset", "select_targets",
    "split_merge_summary", "toy_vocabulary", "transition_matrix",
]
