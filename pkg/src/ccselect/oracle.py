"""Exhaustive subset search: ground truth for the continuous relaxation.

Feasible only for small d; guarded at one million candidate subsets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .dataio import LabeledDataset
from .errors import InvalidParameterError, SubsetGuardError
from .kernels import KernelSpec, median_bandwidth
from .objective import ObjectiveConfig, exact_objective
from .optimizer import dataset_response

SUBSET_GUARD = 10**6


@dataclass(frozen=True)
class SubsetScore:
    """A feature subset together with its quadratic-form score."""

    subset: tuple[int, ...]
    score: float


def subset_score(dataset: LabeledDataset, subset, epsilon: float, *,
                 sigma: float | None = None,
                 input_kernel: str = "gaussian") -> float:
    """Score one subset via a binary mask over the full feature matrix."""
    X = np.asarray(dataset.X, dtype=np.float64)
    d = X.shape[1]
    if input_kernel == "gaussian" and sigma is None:
        sigma = median_bandwidth(X)
    mask = np.zeros(d)
    mask[list(subset)] = 1.0
    response = dataset_response(dataset)
    cfg = ObjectiveConfig(epsilon=epsilon, m=max(1, len(subset)))
    kernel = KernelSpec(input_kernel=input_kernel, bandwidth=sigma)
    return exact_objective(X, response, mask, cfg, kernel,
                           compute_gradient=False).value


def exhaustive_argmin(dataset: LabeledDataset, m: int, epsilon: float, *,
                      sigma: float | None = None,
                      input_kernel: str = "gaussian",
                      guard: int = SUBSET_GUARD) -> tuple[SubsetScore, list[SubsetScore]]:
    """Evaluate every size-m subset and return the minimizer plus the table.

    Subsets are enumerated in lexicographic order; score ties keep the
    lexicographically smallest subset. Refuses to run when C(d, m) exceeds
    the guard.
    """
    X = np.asarray(dataset.X, dtype=np.float64)
    n, d = X.shape
    if not (1 <= m <= d):
        raise InvalidParameterError(f"m must lie in [1, {d}], got {m}")
    count = math.comb(d, m)
    if count > guard:
        raise SubsetGuardError(
            f"C({d}, {m}) = {count} subsets exceeds the guard of {guard}"
        )
    if input_kernel == "gaussian" and sigma is None:
        sigma = median_bandwidth(X)
    response = dataset_response(dataset)
    cfg = ObjectiveConfig(epsilon=epsilon, m=m)
    kernel = KernelSpec(input_kernel=input_kernel, bandwidth=sigma)
    mask = np.zeros(d)
    table: list[SubsetScore] = []
    best: SubsetScore | None = None
    for subset in combinations(range(d), m):
        mask[:] = 0.0
        mask[list(subset)] = 1.0
        score = exact_objective(X, response, mask, cfg, kernel,
                                compute_gradient=False).value
        entry = SubsetScore(subset=subset, score=score)
        table.append(entry)
        if best is None or score < best.score:
            best = entry
    return best, table
