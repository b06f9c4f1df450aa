"""Objective variants for conditional-covariance feature selection.

All variants score a weight vector w in [0, 1]^d through the regularized
quadratic form

    Q(w) = Tr[Y^T (G_w + n * eps * I)^(-1) Y],

where G_w is the centered Gram matrix of the weighted inputs and Y the
centered response matrix. ``exact`` evaluates Q directly; ``soft_penalty``
adds lambda1 * (1^T w - m); ``alpha`` trades the matrix inverse for an
auxiliary variable with a soft residual constraint; ``low_rank`` replaces the
Gram matrix by a rank-D feature factorization and works on the rescaled,
constant-shifted form of Q.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from .errors import InvalidDataError, InvalidParameterError, NumericalError
from .kernels import (
    GramMatrix,
    KernelSpec,
    ResponseData,
    center,
    center_rows,
    weighted_gaussian_gram,
    weighted_linear_gram,
)

VARIANTS = ("exact", "soft_penalty", "alpha", "low_rank")


@dataclass(frozen=True)
class ObjectiveConfig:
    """Hyperparameters shared by the objective variants.

    epsilon: ridge level eps > 0 (the matrix regularizer is n * eps * I).
    m: target number of selected features.
    lambda1: weight of the soft cardinality penalty (soft_penalty variant).
    lambda2: weight of the residual penalty (alpha variant).
    num_random_features: rank D of the feature factorization (low_rank).
    seed: controls the random feature draw and any init perturbation.
    """

    epsilon: float
    m: int
    variant: str = "exact"
    lambda1: float = 1.0
    lambda2: float = 1000.0
    num_random_features: int = 2048
    seed: int = 0

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise InvalidParameterError(f"unknown objective variant {self.variant!r}")
        if not np.isfinite(self.epsilon) or self.epsilon <= 0:
            raise InvalidParameterError(f"epsilon must be positive, got {self.epsilon}")
        if self.m < 1:
            raise InvalidParameterError(f"m must be >= 1, got {self.m}")
        if self.lambda1 < 0 or self.lambda2 < 0:
            raise InvalidParameterError("lambda1 and lambda2 must be nonnegative")
        if self.num_random_features < 1:
            raise InvalidParameterError("num_random_features must be >= 1")
        if not (0 <= int(self.seed) < 2**64):
            raise InvalidParameterError("seed must fit in an unsigned 64-bit integer")


@dataclass(frozen=True)
class ObjectiveValue:
    """Objective value with gradients (None when not requested)."""

    value: float
    gradient_w: np.ndarray | None = None
    gradient_alpha: np.ndarray | None = None

    def __post_init__(self):
        if not np.isfinite(self.value):
            raise NumericalError(f"objective value is not finite: {self.value}")
        for g in (self.gradient_w, self.gradient_alpha):
            if g is not None and not np.all(np.isfinite(g)):
                raise NumericalError("objective gradient has non-finite entries")


def _as_weights(w: np.ndarray, d: int) -> np.ndarray:
    w = np.asarray(w, dtype=np.float64).ravel()
    if w.shape[0] != d:
        raise InvalidDataError(f"weight vector has length {w.shape[0]}, expected {d}")
    if not np.all(np.isfinite(w)):
        raise InvalidDataError("weight vector contains non-finite entries")
    return w


def _input_grams(X: np.ndarray, w: np.ndarray, kernel: KernelSpec):
    """Uncentered and centered Gram matrices of the weighted inputs."""
    if kernel.input_kernel == "gaussian":
        K = weighted_gaussian_gram(X, w, kernel.bandwidth)
    else:
        K = weighted_linear_gram(X, w)
    return K, center(K)


def _factor_ridge(G: np.ndarray, n: int, epsilon: float):
    A = G + (n * epsilon) * np.eye(n)
    try:
        return cho_factor(A, lower=True, check_finite=False), A
    except LinAlgError as exc:  # not reachable for finite inputs and eps > 0
        raise NumericalError(f"ridge matrix factorization failed: {exc}") from exc


def _dk_contraction(K: GramMatrix, M: np.ndarray, X: np.ndarray, w: np.ndarray,
                    kernel: KernelSpec) -> np.ndarray:
    """d-vector with entries sum_ij dK_ij/dw_l * M_ij for symmetric M.

    Gaussian: dK_ij/dw_l = -K_ij * w_l * (x_il - x_jl)^2 / sigma^2; expanding
    the square reduces the sum to two O(n^2 d) contractions.
    Linear: dK_ij/dw_l = 2 w_l x_il x_jl.
    """
    if kernel.input_kernel == "gaussian":
        P = K.entries * M
        s = P.sum(axis=1)
        t1 = (X * X).T @ s
        t2 = np.sum(X * (P @ X), axis=0)
        sigma = kernel.bandwidth
        return -(2.0 * w / (sigma * sigma)) * (t1 - t2)
    MX = M @ X
    return 2.0 * w * np.sum(X * MX, axis=0)


def exact_objective(X: np.ndarray, response: ResponseData, w: np.ndarray,
                    cfg: ObjectiveConfig, kernel: KernelSpec, *,
                    compute_gradient: bool = True) -> ObjectiveValue:
    """Q(w) = Tr[Y^T (G_w + n eps I)^(-1) Y] via a Cholesky solve.

    The gradient reuses the factorization: with B = A^(-1) Y and C the
    column-centered B,

        dQ/dw_l = -sum_ij dK_ij/dw_l * (C C^T)_ij,

    which costs O(n^2 d) for all coordinates together.
    """
    X = np.asarray(X, dtype=np.float64)
    w = _as_weights(w, X.shape[1])
    n = X.shape[0]
    Y = response.y_mat
    K, G = _input_grams(X, w, kernel)
    factor, _ = _factor_ridge(G.entries, n, cfg.epsilon)
    B = cho_solve(factor, Y, check_finite=False)
    value = float(np.sum(Y * B))
    if not compute_gradient:
        return ObjectiveValue(value)
    C = center_rows(B)
    M = C @ C.T
    grad = -_dk_contraction(K, M, X, w, kernel)
    return ObjectiveValue(value, gradient_w=grad)


def soft_penalty_objective(X: np.ndarray, response: ResponseData, w: np.ndarray,
                           cfg: ObjectiveConfig, kernel: KernelSpec, *,
                           compute_gradient: bool = True) -> ObjectiveValue:
    """Exact objective plus the soft cardinality penalty lambda1 (1^T w - m)."""
    base = exact_objective(X, response, w, cfg, kernel,
                           compute_gradient=compute_gradient)
    w = _as_weights(w, np.asarray(X).shape[1])
    value = base.value + cfg.lambda1 * (float(w.sum()) - cfg.m)
    grad = None
    if compute_gradient:
        grad = base.gradient_w + cfg.lambda1
    return ObjectiveValue(value, gradient_w=grad)


def _promote_alpha(alpha: np.ndarray, n: int, k: int):
    alpha = np.asarray(alpha, dtype=np.float64)
    squeeze = alpha.ndim == 1
    if squeeze:
        alpha = alpha[:, None]
    if alpha.shape != (n, k):
        raise InvalidDataError(
            f"alpha has shape {alpha.shape}, expected ({n}, {k})"
        )
    if not np.all(np.isfinite(alpha)):
        raise InvalidDataError("alpha contains non-finite entries")
    return alpha, squeeze


def alpha_objective(X: np.ndarray, response: ResponseData, w: np.ndarray,
                    alpha: np.ndarray, cfg: ObjectiveConfig, kernel: KernelSpec, *,
                    compute_gradient: bool = True,
                    with_cardinality_penalty: bool = False) -> ObjectiveValue:
    """Tr[Y^T alpha] + lambda2 ||(G_w + n eps I) alpha - Y||_F^2.

    No linear solve is needed to evaluate it; alpha plays the role of
    A^(-1) Y and the residual penalty enforces the defining relation softly.
    For a single response column alpha may be passed (and its gradient is
    returned) as a flat n-vector. ``with_cardinality_penalty`` additionally
    adds lambda1 * (1^T w - m), letting the two soft constraints combine so
    the sum cap can be dropped from the feasible set.
    """
    X = np.asarray(X, dtype=np.float64)
    w = _as_weights(w, X.shape[1])
    n = X.shape[0]
    Y = response.y_mat
    alpha2, squeeze = _promote_alpha(alpha, n, Y.shape[1])
    K, G = _input_grams(X, w, kernel)
    ne = n * cfg.epsilon
    A_alpha = G.entries @ alpha2 + ne * alpha2
    R = A_alpha - Y
    value = float(np.sum(Y * alpha2)) + cfg.lambda2 * float(np.sum(R * R))
    if with_cardinality_penalty:
        value += cfg.lambda1 * (float(w.sum()) - cfg.m)
    if not compute_gradient:
        return ObjectiveValue(value)
    grad_alpha = Y + 2.0 * cfg.lambda2 * (G.entries @ R + ne * R)
    HR = center_rows(R)
    HA = center_rows(alpha2)
    N = 0.5 * (HR @ HA.T + HA @ HR.T)
    grad_w = 2.0 * cfg.lambda2 * _dk_contraction(K, N, X, w, kernel)
    if with_cardinality_penalty:
        grad_w = grad_w + cfg.lambda1
    if squeeze:
        grad_alpha = grad_alpha[:, 0]
    return ObjectiveValue(value, gradient_w=grad_w, gradient_alpha=grad_alpha)


def solve_alpha(X: np.ndarray, response: ResponseData, w: np.ndarray,
                cfg: ObjectiveConfig, kernel: KernelSpec) -> np.ndarray:
    """Minimizer of the alpha objective over alpha at fixed w.

    Setting the alpha gradient to zero gives
    alpha* = A^(-1) Y - (1 / (2 lambda2)) A^(-2) Y; one Cholesky
    factorization serves both solves. Requires lambda2 > 0.
    """
    if cfg.lambda2 <= 0:
        raise InvalidParameterError("alpha solve requires lambda2 > 0")
    X = np.asarray(X, dtype=np.float64)
    w = _as_weights(w, X.shape[1])
    n = X.shape[0]
    Y = response.y_mat
    _, G = _input_grams(X, w, kernel)
    factor, _ = _factor_ridge(G.entries, n, cfg.epsilon)
    z1 = cho_solve(factor, Y, check_finite=False)
    z2 = cho_solve(factor, z1, check_finite=False)
    alpha = z1 - z2 / (2.0 * cfg.lambda2)
    if Y.shape[1] == 1:
        return alpha[:, 0]
    return alpha


def low_rank_objective(X: np.ndarray, response: ResponseData, w: np.ndarray,
                       cfg: ObjectiveConfig, features, *,
                       compute_gradient: bool = True) -> ObjectiveValue:
    """Rescaled objective through a rank-D feature factorization.

    With V_w the column-centered feature matrix of the weighted inputs,
    the Woodbury identity turns Q into

        (||Y||_F^2 - Tr[Y^T V_w (V_w^T V_w + n eps I_D)^(-1) V_w^T Y]) / (n eps),

    and after multiplying by n*eps and dropping the constant the value
    minimized here is core(w) = -Tr[Y^T V_w (V_w^T V_w + n eps I_D)^(-1) V_w^T Y].
    The map is frozen for the lifetime of an optimization run, so the value
    is a deterministic function of w.
    """
    X = np.asarray(X, dtype=np.float64)
    w = _as_weights(w, X.shape[1])
    n = X.shape[0]
    Y = response.y_mat
    V = features.centered_embed(X, w)
    D = V.shape[1]
    ne = n * cfg.epsilon
    T = V.T @ Y
    try:
        if D <= n:
            E = V.T @ V + ne * np.eye(D)
            factor = cho_factor(E, lower=True, check_finite=False)
            S = cho_solve(factor, T, check_finite=False)
        else:
            # Push-through identity: (V^T V + c I)^(-1) V^T = V^T (V V^T + c I)^(-1);
            # solving on the smaller side gives the same S exactly.
            F = V @ V.T + ne * np.eye(n)
            factor = cho_factor(F, lower=True, check_finite=False)
            S = V.T @ cho_solve(factor, Y, check_finite=False)
    except LinAlgError as exc:
        raise NumericalError(f"low-rank system factorization failed: {exc}") from exc
    value = -float(np.sum(T * S))
    if not compute_gradient:
        return ObjectiveValue(value)
    Gamma = 2.0 * ((V @ S - Y) @ S.T)
    grad = features.grad_contract(X, w, center_rows(Gamma))
    return ObjectiveValue(value, gradient_w=grad)


def low_rank_equivalent_value(core_value: float, response: ResponseData,
                              epsilon: float, n: int) -> float:
    """Undo the low-rank rescaling: (||Y||_F^2 + core) / (n eps) estimates Q."""
    Y = response.y_mat
    return (float(np.sum(Y * Y)) + core_value) / (n * epsilon)
