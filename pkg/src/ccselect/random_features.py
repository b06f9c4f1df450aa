"""Random Fourier feature maps for the Gaussian kernel.

A map z with E[z(x)^T z(x')] = exp(-||x - x'||^2 / (2 sigma^2)) built from
cosines with random frequencies and phases; used to approximate the centered
Gram matrix by a rank-D factor.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError
from .kernels import center_rows


@dataclass(frozen=True)
class RandomFeatureMap:
    """Frozen cosine feature map: row i of embed() is

        sqrt(2/D) * cos(frequencies @ (w ⊙ x_i) + phases)

    frequencies: (D, d), rows i.i.d. N(0, sigma^-2 I); phases: (D,) uniform
    on [0, 2pi). Identical seeds produce identical maps.
    """

    frequencies: np.ndarray
    phases: np.ndarray
    scale: float
    sigma: float
    seed: int

    @property
    def num_features(self) -> int:
        return self.frequencies.shape[0]

    @property
    def num_inputs(self) -> int:
        return self.frequencies.shape[1]

    def embed(self, X: np.ndarray, w: np.ndarray) -> np.ndarray:
        return embed(self, X, w)

    def centered_embed(self, X: np.ndarray, w: np.ndarray) -> np.ndarray:
        return centered_embed(self, X, w)

    def grad_contract(self, X: np.ndarray, w: np.ndarray, C: np.ndarray) -> np.ndarray:
        """Return the d-vector sum_{i,r} C[i,r] * d(embed)[i,r] / d w_l.

        d(embed)_ir / d w_l = -scale * sin(theta_ir) * frequencies[r, l] * X[i, l].
        """
        theta = (X * w) @ self.frequencies.T + self.phases
        Z = C * (-self.scale * np.sin(theta))
        return np.sum(X * (Z @ self.frequencies), axis=0)


@dataclass(frozen=True)
class LinearFeatureMap:
    """Exact feature map for the linear kernel: embed(X, w) = X * w.

    With D = d the factorization K_w = U_w U_w^T is exact, which makes the
    low-rank objective agree with the exact one up to rounding.
    """

    num_inputs: int

    @property
    def num_features(self) -> int:
        return self.num_inputs

    def embed(self, X: np.ndarray, w: np.ndarray) -> np.ndarray:
        return X * w

    def centered_embed(self, X: np.ndarray, w: np.ndarray) -> np.ndarray:
        return center_rows(self.embed(X, w))

    def grad_contract(self, X: np.ndarray, w: np.ndarray, C: np.ndarray) -> np.ndarray:
        # dU_ir/dw_l = X_il when r == l, else 0.
        return np.sum(C * X, axis=0)


def draw_map(d: int, D: int, sigma: float, seed: int) -> RandomFeatureMap:
    """Draw a D-feature cosine map for inputs of dimension d.

    Frequency rows are i.i.d. N(0, sigma^-2 I_d); phases are i.i.d. uniform
    on [0, 2pi). Deterministic for a fixed seed.
    """
    if D < 1:
        raise InvalidParameterError(f"number of random features must be >= 1, got {D}")
    if d < 1:
        raise InvalidParameterError(f"input dimension must be >= 1, got {d}")
    if not np.isfinite(sigma) or sigma <= 0:
        raise InvalidParameterError(f"sigma must be positive, got {sigma}")
    rng = np.random.default_rng(seed)
    freqs = rng.standard_normal((D, d)) / sigma
    phases = rng.uniform(0.0, 2.0 * np.pi, size=D)
    return RandomFeatureMap(
        frequencies=freqs,
        phases=phases,
        scale=float(np.sqrt(2.0 / D)),
        sigma=float(sigma),
        seed=int(seed),
    )


def embed(feature_map: RandomFeatureMap, X: np.ndarray, w: np.ndarray) -> np.ndarray:
    """n x D matrix U_w with rows scale * cos(frequencies @ (w ⊙ x_i) + phases)."""
    X = np.asarray(X, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64).ravel()
    theta = (X * w) @ feature_map.frequencies.T + feature_map.phases
    return feature_map.scale * np.cos(theta)


def centered_embed(feature_map: RandomFeatureMap, X: np.ndarray, w: np.ndarray) -> np.ndarray:
    """V_w = (I - 11^T/n) U_w; columns have exactly zero mean."""
    return center_rows(embed(feature_map, X, w))
