"""Projected gradient descent over the relaxed feature-weight set.

The feasible region is the capped box-simplex {w : 0 <= w_i <= 1,
sum(w) <= m}. Optimization starts from the uniform vector (m/d) * 1, takes
monotone Armijo-backtracked gradient steps, and finally rounds the weights to
the m largest coordinates.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from .dataio import LabeledDataset, canonical_class_labels
from .errors import InvalidDataError, InvalidParameterError
from .kernels import KernelSpec, ResponseData, median_bandwidth, response_gram
from .objective import (
    ObjectiveConfig,
    alpha_objective,
    exact_objective,
    low_rank_equivalent_value,
    low_rank_objective,
    soft_penalty_objective,
    solve_alpha,
)
from .random_features import LinearFeatureMap, draw_map

MAX_INIT_PERTURBATION = 1e-3
_BISECTION_TOL = 1e-12
_MIN_STEP = 1e-18


@dataclass(frozen=True)
class FeatureWeights:
    """A feasible point of the relaxed selection problem."""

    w: np.ndarray
    m: int

    def __post_init__(self):
        w = np.asarray(self.w, dtype=np.float64)
        object.__setattr__(self, "w", w)
        if w.ndim != 1:
            raise InvalidDataError("weights must be a vector")
        if np.any(w < -1e-9) or np.any(w > 1.0 + 1e-9):
            raise InvalidDataError("weights must lie in [0, 1]")
        if w.sum() > self.m + 1e-9:
            raise InvalidDataError(f"weights sum to {w.sum()}, above the cap m={self.m}")


@dataclass(frozen=True)
class OptimizerConfig:
    """Projected gradient descent settings."""

    max_iters: int = 1000
    rel_tol: float = 1e-6
    armijo_beta: float = 0.5
    armijo_c: float = 1e-4
    init_step: float = 1.0

    def __post_init__(self):
        if self.max_iters < 1:
            raise InvalidParameterError("max_iters must be >= 1")
        if not (self.rel_tol > 0):
            raise InvalidParameterError("rel_tol must be positive")
        if not (0.0 < self.armijo_beta < 1.0):
            raise InvalidParameterError("armijo_beta must lie in (0, 1)")
        if not (0.0 < self.armijo_c < 1.0):
            raise InvalidParameterError("armijo_c must lie in (0, 1)")
        if not (self.init_step > 0):
            raise InvalidParameterError("init_step must be positive")


@dataclass
class SelectionResult:
    """Final weights, ranking and per-iteration objective values of one run."""

    final_weights: np.ndarray
    ranking: tuple[int, ...]
    selected: tuple[int, ...]
    objective_trace: list[float]
    trace_estimate: float
    sigma: float
    converged: bool
    iterations: int
    seed: int
    config: dict

    def __post_init__(self):
        if set(self.selected) != set(self.ranking[: len(self.selected)]):
            raise InvalidDataError("selected must equal the top of the ranking")

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "seed": self.seed,
            "sigma": self.sigma,
            "converged": self.converged,
            "iterations": self.iterations,
            "final_weights": [float(v) for v in self.final_weights],
            "ranking": [int(j) for j in self.ranking],
            "selected": [int(j) for j in self.selected],
            "objective_trace": [float(v) for v in self.objective_trace],
            "trace_estimate": float(self.trace_estimate),
        }


def project(v: np.ndarray, m: int) -> np.ndarray:
    """Euclidean projection onto {w : 0 <= w_i <= 1, sum(w) <= m}.

    Clip to the box first; if the sum cap is still violated, bisect on the
    shift tau >= 0 with sum_i clip(v_i - tau, 0, 1) = m (the sum is
    continuous and non-increasing in tau) to absolute tolerance 1e-12.
    """
    v = np.asarray(v, dtype=np.float64)
    clipped = np.clip(v, 0.0, 1.0)
    if clipped.sum() <= m:
        return clipped
    lo, hi = 0.0, float(v.max())
    while hi - lo > _BISECTION_TOL:
        mid = 0.5 * (lo + hi)
        if np.clip(v - mid, 0.0, 1.0).sum() > m:
            lo = mid
        else:
            hi = mid
    return np.clip(v - hi, 0.0, 1.0)


def round_to_subset(w: np.ndarray, m: int) -> tuple[int, ...]:
    """Indices of the m largest weights, ties going to the lower index.

    Returned in ascending index order (the set of selected features).
    """
    w = np.asarray(w, dtype=np.float64)
    if m > w.shape[0]:
        raise InvalidParameterError(f"m={m} exceeds the number of features {w.shape[0]}")
    order = ranking_from_weights(w)
    return tuple(sorted(order[:m]))


def ranking_from_weights(w: np.ndarray) -> tuple[int, ...]:
    """All feature indices ordered by descending weight, ties by index."""
    w = np.asarray(w, dtype=np.float64)
    return tuple(int(j) for j in np.argsort(-w, kind="stable"))


def dataset_response(dataset: LabeledDataset) -> ResponseData:
    """Centered response matrix for a dataset (one-hot for classification)."""
    if dataset.task == "classification":
        labels, classes = canonical_class_labels(dataset.y)
        spec = KernelSpec(input_kernel="linear", response_kernel="one_hot_delta",
                          num_classes=len(classes))
        return response_gram(labels, spec)
    spec = KernelSpec(input_kernel="linear", response_kernel="linear")
    return response_gram(np.asarray(dataset.y, dtype=np.float64), spec)


def _initial_weights(d: int, cfg: ObjectiveConfig, projector, w0, perturbation: float):
    if w0 is not None:
        w = np.asarray(w0.w if isinstance(w0, FeatureWeights) else w0, dtype=np.float64)
        if w.shape != (d,):
            raise InvalidDataError(f"warm start has shape {w.shape}, expected ({d},)")
        return projector(w)
    w = np.full(d, cfg.m / d)
    if perturbation > 0.0:
        rng = np.random.default_rng([cfg.seed, 0x1D17])
        w = w + rng.uniform(-perturbation, perturbation, size=d)
    return projector(w)


def _descend(w, evaluate, projector, opt: OptimizerConfig):
    """Monotone PGD: returns (w, trace, converged, iterations, last_eval)."""
    current = evaluate(w)
    trace = [current.value]
    step = opt.init_step
    converged = False
    iterations = 0
    for _ in range(opt.max_iters):
        accepted = None
        s = step
        while s >= _MIN_STEP:
            w_new = projector(w - s * current.gradient_w)
            candidate = evaluate(w_new)
            delta = w_new - w
            if candidate.value <= current.value - (opt.armijo_c / s) * float(delta @ delta):
                accepted = (w_new, candidate, s)
                break
            s *= opt.armijo_beta
        if accepted is None:
            converged = True
            break
        iterations += 1
        w_new, candidate, s = accepted
        decrease = current.value - candidate.value
        rel = decrease / max(abs(current.value), 1e-300)
        w, current = w_new, candidate
        trace.append(current.value)
        step = min(opt.init_step, s / opt.armijo_beta)
        if rel < opt.rel_tol:
            converged = True
            break
    return w, trace, converged, iterations, current


def optimize(dataset: LabeledDataset, cfg: ObjectiveConfig,
             opt: OptimizerConfig | None = None, *,
             sigma: float | None = None,
             input_kernel: str = "gaussian",
             w0: FeatureWeights | Sequence[float] | None = None,
             init_perturbation: float = 0.0,
             alpha_soft_cardinality: bool = False) -> SelectionResult:
    """Run the relaxed selection problem to a ranked feature list.

    sigma defaults to the median-distance bandwidth heuristic on the data.
    The exact, alpha and low-rank variants project onto the capped
    box-simplex each step; the soft-penalty variant only clips to the box.
    The alpha variant alternates an exact alpha solve with a projected
    w-step; with ``alpha_soft_cardinality`` its sum cap is also moved into
    the objective as the lambda1 penalty and only the box remains. Identical
    inputs and seeds reproduce the result bit for bit.
    """
    opt = opt or OptimizerConfig()
    X = np.asarray(dataset.X, dtype=np.float64)
    n, d = X.shape
    if not np.all(np.isfinite(X)):
        raise InvalidDataError("feature matrix contains non-finite entries")
    if cfg.m > d:
        raise InvalidParameterError(f"m={cfg.m} exceeds the feature count {d}")
    if not (0.0 <= init_perturbation <= MAX_INIT_PERTURBATION):
        raise InvalidParameterError(
            f"init perturbation must lie in [0, {MAX_INIT_PERTURBATION}]")
    if input_kernel == "gaussian" and sigma is None:
        sigma = median_bandwidth(X)
    response = dataset_response(dataset)
    kernel = KernelSpec(
        input_kernel=input_kernel,
        bandwidth=sigma,
        response_kernel="one_hot_delta" if dataset.task == "classification" else "linear",
        num_classes=response.y_mat.shape[1] if dataset.task == "classification" else None,
    )

    box_only = cfg.variant == "soft_penalty" or (
        cfg.variant == "alpha" and alpha_soft_cardinality)
    if box_only:
        projector = lambda v: np.clip(v, 0.0, 1.0)  # noqa: E731
    else:
        projector = lambda v: project(v, cfg.m)  # noqa: E731

    feature_map = None
    if cfg.variant == "low_rank":
        if input_kernel == "gaussian":
            feature_map = draw_map(d, cfg.num_random_features, sigma, cfg.seed)
        else:
            feature_map = LinearFeatureMap(d)

    w = _initial_weights(d, cfg, projector, w0, init_perturbation)

    if cfg.variant == "alpha":
        w, trace, converged, iterations, _ = _descend_alpha(
            X, response, w, cfg, kernel, projector, opt,
            soft_cardinality=alpha_soft_cardinality)
    else:
        if cfg.variant == "exact":
            evaluate = lambda wv: exact_objective(X, response, wv, cfg, kernel)  # noqa: E731
        elif cfg.variant == "soft_penalty":
            evaluate = lambda wv: soft_penalty_objective(X, response, wv, cfg, kernel)  # noqa: E731
        else:
            evaluate = lambda wv: low_rank_objective(X, response, wv, cfg, feature_map)  # noqa: E731
        w, trace, converged, iterations, _ = _descend(w, evaluate, projector, opt)

    if cfg.variant == "low_rank":
        core = low_rank_objective(X, response, w, cfg, feature_map,
                                  compute_gradient=False).value
        trace_estimate = cfg.epsilon * low_rank_equivalent_value(
            core, response, cfg.epsilon, n)
    else:
        q_final = exact_objective(X, response, w, cfg, kernel,
                                  compute_gradient=False).value
        trace_estimate = cfg.epsilon * q_final

    ranking = ranking_from_weights(w)
    result = SelectionResult(
        final_weights=w,
        ranking=ranking,
        selected=round_to_subset(w, cfg.m),
        objective_trace=trace,
        trace_estimate=float(trace_estimate),
        sigma=float(sigma) if sigma is not None else float("nan"),
        converged=converged,
        iterations=iterations,
        seed=cfg.seed,
        config={
            "objective": asdict(cfg),
            "optimizer": asdict(opt),
            "input_kernel": input_kernel,
            "response_kernel": kernel.response_kernel,
            "num_classes": kernel.num_classes,
            "init_perturbation": init_perturbation,
            "alpha_soft_cardinality": alpha_soft_cardinality,
        },
    )
    return result


def _descend_alpha(X, response, w, cfg, kernel, projector, opt: OptimizerConfig,
                   soft_cardinality: bool = False):
    """Block descent: exact alpha solve, then a projected Armijo w-step."""
    if cfg.lambda2 <= 0:
        raise InvalidParameterError("alpha variant requires lambda2 > 0")

    def evaluate(wv, al, need_grad=True):
        return alpha_objective(X, response, wv, al, cfg, kernel,
                               compute_gradient=need_grad,
                               with_cardinality_penalty=soft_cardinality)

    alpha = solve_alpha(X, response, w, cfg, kernel)
    current = evaluate(w, alpha)
    trace = [current.value]
    step = opt.init_step
    converged = False
    iterations = 0
    for _ in range(opt.max_iters):
        accepted = None
        s = step
        while s >= _MIN_STEP:
            w_new = projector(w - s * current.gradient_w)
            candidate = evaluate(w_new, alpha, need_grad=False)
            delta = w_new - w
            if candidate.value <= current.value - (opt.armijo_c / s) * float(delta @ delta):
                accepted = (w_new, s)
                break
            s *= opt.armijo_beta
        if accepted is None:
            converged = True
            break
        iterations += 1
        w_new, s = accepted
        alpha = solve_alpha(X, response, w_new, cfg, kernel)
        new_eval = evaluate(w_new, alpha)
        decrease = current.value - new_eval.value
        rel = decrease / max(abs(current.value), 1e-300)
        w, current = w_new, new_eval
        trace.append(current.value)
        step = min(opt.init_step, s / opt.armijo_beta)
        if rel < opt.rel_tol:
            converged = True
            break
    return w, trace, converged, iterations, current
