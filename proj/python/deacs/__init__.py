"""DEA-CS feature selection: Python front end over the C++ core."""

import json

from ._core import (
    ConfigError,
    Dataset,
    InternalError,
    IoError,
    ParseError,
    algorithm_names,
    conditional_mi,
    dea_scores,
    entropy,
    load_dataset,
    mdl_discretize,
    mutual_information,
    r_scores,
)
from . import _core

__all__ = [
    "ConfigError",
    "Dataset",
    "InternalError",
    "IoError",
    "ParseError",
    "algorithm_names",
    "conditional_mi",
    "dea_scores",
    "entropy",
    "evaluate",
    "load_dataset",
    "mdl_discretize",
    "mutual_information",
    "r_scores",
    "select",
]


def select(dataset, algorithm="dea-cs", delta=None, **options):
    """Run a selector and return its trace as a dict.

    `delta` defaults to min(n_features, 30). Extra keyword options are
    passed through (alpha, beta, gamma, beta_inverse, gamma_inverse,
    normalize, relieff_neighbors, relieff_instances, seed, threads).
    """
    if delta is None:
        delta = max(1, min(dataset.n_features, 30))
    return json.loads(_core.select_json(dataset, algorithm, delta, **options))


def evaluate(dataset, trace, folds=10, seed=0, classifiers=("nbc", "knn"), knn_k=1, threads=1):
    """Cross-validated accuracy curve for the ranking in `trace`."""
    ranking = [s["index"] for s in trace["selected"]]
    text = _core.evaluate_json(dataset, trace["algorithm"], ranking, folds, seed, list(classifiers), knn_k, threads)
    return json.loads(text)["curves"][0]
