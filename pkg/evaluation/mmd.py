"""
RBF 커널 MMD (biased estimator) 와 sigma sweep
"""

from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np

SIGMAS: np.ndarray = np.logspace(-5, 5, 50)
_CHUNK_ROWS = 64

Kernel = Callable[[np.ndarray, np.ndarray], float]


def squared_distances(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Pairwise ||x - y||**2 computed from explicit differences, row-chunked to bound memory."""
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    Y = np.atleast_2d(np.asarray(Y, dtype=np.float64))
    if X.shape[1] != Y.shape[1]:
        raise ValueError(f"histogram lengths differ: {X.shape[1]} != {Y.shape[1]}")
    out = np.empty((X.shape[0], Y.shape[0]))
    for start in range(0, X.shape[0], _CHUNK_ROWS):
        diff = X[start : start + _CHUNK_ROWS, None, :] - Y[None, :, :]
        out[start : start + _CHUNK_ROWS] = np.einsum("ijk,ijk->ij", diff, diff)
    return out


@dataclass(frozen=True)
class RbfKernel:
    sigma: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")

    def __call__(self, x: np.ndarray, y: np.ndarray) -> float:
        x, y = np.asarray(x, dtype=np.float64), np.asarray(y, dtype=np.float64)
        if x.shape != y.shape:
            raise ValueError(f"histogram lengths differ: {x.shape} != {y.shape}")
        return float(np.exp(-np.sum((x - y) ** 2) / (2.0 * self.sigma**2)))

    def gram(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        return self.from_distances(squared_distances(X, Y))

    def from_distances(self, sq_dist: np.ndarray) -> np.ndarray:
        return np.exp(-sq_dist / (2.0 * self.sigma**2))


def rbf_kernel(x: np.ndarray, y: np.ndarray, sigma: float) -> float:
    return RbfKernel(sigma)(x, y)


def _check_sets(set_g: Sequence, set_t: Sequence) -> None:
    if len(set_g) == 0 or len(set_t) == 0:
        raise ValueError("MMD needs two non-empty sets")


def _biased(k_gg: np.ndarray, k_tt: np.ndarray, k_gt: np.ndarray) -> float:
    return float(k_tt.mean() + k_gg.mean() - 2.0 * k_gt.mean())


def mmd_biased(set_g: Sequence[np.ndarray], set_t: Sequence[np.ndarray], kernel: Kernel) -> float:
    """Squared MMD, biased estimator with the diagonal terms kept.

    An ``RbfKernel`` takes the vectorized Gram path; any other callable is
    evaluated pair by pair.
    """
    _check_sets(set_g, set_t)
    if isinstance(kernel, RbfKernel):
        X, Y = np.asarray(set_g, dtype=np.float64), np.asarray(set_t, dtype=np.float64)
        return _biased(kernel.gram(X, X), kernel.gram(Y, Y), kernel.gram(X, Y))

    def gram(A: Sequence[np.ndarray], B: Sequence[np.ndarray]) -> np.ndarray:
        return np.array([[kernel(a, b) for b in B] for a in A], dtype=np.float64)

    return _biased(gram(set_g, set_g), gram(set_t, set_t), gram(set_g, set_t))


def mmd_max_over_sigma(
    set_g: Sequence[np.ndarray],
    set_t: Sequence[np.ndarray],
    sigmas: Sequence[float] | np.ndarray = SIGMAS,
) -> tuple[float, float]:
    """Highest MMD over the bandwidth grid and the sigma attaining it (first on ties)."""
    _check_sets(set_g, set_t)
    X, Y = np.asarray(set_g, dtype=np.float64), np.asarray(set_t, dtype=np.float64)
    d_gg, d_tt, d_gt = squared_distances(X, X), squared_distances(Y, Y), squared_distances(X, Y)

    best_mmd, best_sigma = -np.inf, float(sigmas[0])
    for sigma in sigmas:
        kernel = RbfKernel(float(sigma))
        value = _biased(kernel.from_distances(d_gg), kernel.from_distances(d_tt), kernel.from_distances(d_gt))
        if value > best_mmd:
            best_mmd, best_sigma = value, float(sigma)
    return best_mmd, best_sigma
