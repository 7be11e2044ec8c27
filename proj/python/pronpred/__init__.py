"""Cross-lingual pronoun prediction toolkit.

Dataset construction from aligned tagged bitext, an n-gram LM gap-filling
baseline and the macro-recall scoring protocol, all backed by the C++ core.
"""

from ._core import (
    AnnotatedSegment,
    Candidate,
    CandidateSet,
    NGramModel,
    Placeholder,
    Prediction,
    SubtaskSpec,
    TaggedToken,
    TaskInstance,
    __version__,
    accuracy,
    build_candidate_set,
    builtin_spec,
    candidate_set_from_json,
    candidate_set_to_json,
    class_frequency_table,
    default_penalty_grid,
    evaluate_alignment,
    expected_random_macro_recall,
    extract_examples,
    fill_placeholders,
    find_source_pronouns,
    insert_placeholder_unaligned,
    macro_recall,
    map_target_class,
    parse_instance_line,
    read_instance_file,
    restore_target,
    score_labels,
    serialize_instance,
    symmetrize,
    tune_none_penalty,
    validate_instance,
    write_instance_file,
)

__all__ = [
    "AnnotatedSegment",
    "Candidate",
    "CandidateSet",
    "NGramModel",
    "Placeholder",
    "Prediction",
    "SubtaskSpec",
    "TaggedToken",
    "TaskInstance",
    "__version__",
    "accuracy",
    "build_candidate_set",
    "builtin_spec",
    "candidate_set_from_json",
    "candidate_set_to_json",
    "class_frequency_table",
    "default_penalty_grid",
    "evaluate_alignment",
    "expected_random_macro_recall",
    "extract_examples",
    "fill_placeholders",
    "find_source_pronouns",
    "insert_placeholder_unaligned",
    "macro_recall",
    "map_target_class",
    "parse_instance_line",
    "read_instance_file",
    "restore_target",
    "score_labels",
    "serialize_instance",
    "symmetrize",
    "tune_none_penalty",
    "validate_instance",
    "write_instance_file",
]
