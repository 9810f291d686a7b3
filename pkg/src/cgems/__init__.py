"""Quality metrics for generated code and a small classifier over them."""

from __future__ import annotations

__version__ = "0.1.0"

from cgems.similarity import compare
from cgems.source_model import PYTHON_PROFILE, LanguageProfile, block_structure, tokenize
from cgems.static_metrics import analyze_source

__all__ = [
    "PYTHON_PROFILE",
    "LanguageProfile",
    "__version__",
    "analyze_source",
    "block_structure",
    "compare",
    "tokenize",
]
