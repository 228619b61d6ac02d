"""Reverse character-level text obfuscation.

The package normalizes adversarially perturbed text back toward its
plain form (zero-width stripping, lookalike mapping, insertion collapse,
censorship decoding), generates seeded attacks for evaluation, and ships
a small scoring harness, CLI, and HTTP service on top.
"""

from __future__ import annotations

from ._backend import available_backends, backend_name
from .attacks import (
    ATTACK_KINDS,
    AttackParams,
    AttackSpec,
    apply_attack,
    attack_corpus,
    derive_seed,
    sample_params,
)
from .chardata import (
    CharClassSet,
    ConfusableTable,
    TableConflictError,
    TableError,
    TableParseError,
    TableValidationError,
    builtin_char_classes,
    builtin_tables,
    load_char_classes,
    load_table,
    merge_tables,
)
from .classifiers import (
    BuiltinClassifier,
    ExternalClassifier,
    ExternalClassifierError,
    Prediction,
    RetriableClassifierError,
    TerminalClassifierError,
    score_builtin,
)
from .edits import Edit, NormalizationResult, apply_edits
from .normalizer import PASS_ORDER, Normalizer, NormalizerConfig, is_url_like, normalize

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "normalize",
    "Normalizer",
    "NormalizerConfig",
    "PASS_ORDER",
    "is_url_like",
    "Edit",
    "NormalizationResult",
    "apply_edits",
    "ATTACK_KINDS",
    "AttackParams",
    "AttackSpec",
    "apply_attack",
    "attack_corpus",
    "derive_seed",
    "sample_params",
    "ConfusableTable",
    "CharClassSet",
    "TableError",
    "TableParseError",
    "TableConflictError",
    "TableValidationError",
    "load_table",
    "load_char_classes",
    "merge_tables",
    "builtin_tables",
    "builtin_char_classes",
    "Prediction",
    "BuiltinClassifier",
    "ExternalClassifier",
    "ExternalClassifierError",
    "RetriableClassifierError",
    "TerminalClassifierError",
    "score_builtin",
    "backend_name",
    "available_backends",
]
