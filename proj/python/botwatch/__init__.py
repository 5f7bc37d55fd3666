"""Posting-bot detection for blockchain social platforms.

Feature extraction (text regularity, behavior, temporal entropy, transfer
graph) and cross-validated tree-ensemble evaluation, implemented in C++ and
exposed through :mod:`botwatch._core`.
"""

try:
    from . import _core
except ImportError:  # build-tree layout: _core.so sits directly on sys.path
    import _core  # type: ignore[no-redef]

__all__ = [
    "cce",
    "classifier_kinds",
    "cohens_kappa",
    "dowdall_rank",
    "dpgmm_cluster",
    "evaluate",
    "extract_features",
    "ff_ratio",
    "ingest",
    "interval_symbols",
    "levenshtein",
    "mac_cdfa",
    "metrics",
    "stratified_folds",
    "synthesize",
    "tokenize",
]

for _name in __all__:
    globals()[_name] = getattr(_core, _name)

__version__ = "0.1.0"
