"""Random pure-state decompositions of rank-two mixtures.

Every decomposition of rho = w1 |psi1><psi1| + w2 |psi2><psi2| into m pure
states is an m x 2 isometry applied to [sqrt(w1) psi1; sqrt(w2) psi2]; the
rows are the unnormalized members and their squared norms the weights.
Sampling isometries at random gives a stochastic upper oracle for the
convex roof: no sampled decomposition average may fall below a valid
reported bound.
"""
from __future__ import annotations

from typing import Sequence, Tuple

import numpy as np

from . import _kernels
from .invariants import c3
from .states import PureState, RankTwoMixture

__all__ = ["min_average_c3", "random_decomposition", "average_c3"]


def _base_rows(mix: RankTwoMixture) -> np.ndarray:
    return np.vstack(
        [
            np.sqrt(mix.p) * mix.psi1.amplitudes,
            np.sqrt(1.0 - mix.p) * mix.psi2.amplitudes,
        ]
    )


def min_average_c3(
    mix: RankTwoMixture,
    n_samples: int,
    sizes: Sequence[int] = (2, 3, 4),
    seed: int = 0,
    chunk: int = 20000,
) -> float:
    """Smallest average c3 over ``n_samples`` random decompositions.

    Decomposition sizes cycle through ``sizes``; the weighted average of
    each decomposition reduces to a sum of sqrt|tau3| over unnormalized
    members by degree-4 homogeneity. Deterministic for a fixed seed.
    """
    if mix.n_qubits != 3:
        raise ValueError("decomposition sampling needs a 3-qubit mixture")
    sizes = tuple(int(m) for m in sizes)
    if not sizes or min(sizes) < 2:
        raise ValueError("decomposition sizes must be at least 2")
    if n_samples < 1:
        raise ValueError("need at least one sample")
    base = _base_rows(mix)
    m_max = max(sizes)
    all_sizes = np.asarray(sizes, dtype=np.int64)[np.arange(n_samples) % len(sizes)]
    rng = np.random.default_rng(seed)
    best = np.inf
    for start in range(0, n_samples, chunk):
        stop = min(start + chunk, n_samples)
        gauss = rng.standard_normal((stop - start, m_max, 2, 2))
        val = _kernels.min_average_batch(base, gauss, all_sizes[start:stop])
        best = min(best, val)
    return float(best)


def random_decomposition(
    mix: RankTwoMixture, size: int, seed: int = 0
) -> Tuple[np.ndarray, tuple]:
    """One random size-``size`` decomposition: (weights, normalized states).

    The weighted projector sum of the returned states reconstructs the
    mixture's density matrix exactly (up to roundoff).
    """
    if size < 2:
        raise ValueError("decomposition size must be at least 2")
    rng = np.random.default_rng(seed)
    base = _base_rows(mix)
    while True:
        g = rng.standard_normal((size, 2, 2))
        u1 = g[:, 0, 0] + 1j * g[:, 0, 1]
        u2 = g[:, 1, 0] + 1j * g[:, 1, 1]
        n1 = np.linalg.norm(u1)
        if n1 <= 1e-12:
            continue
        u1 = u1 / n1
        u2 = u2 - (u1.conj() @ u2) * u1
        n2 = np.linalg.norm(u2)
        if n2 > 1e-12:
            u2 = u2 / n2
            break
    rows = u1[:, None] * base[0] + u2[:, None] * base[1]
    weights = np.sum(np.abs(rows) ** 2, axis=1)
    states = tuple(
        PureState(3, rows[i] / np.sqrt(weights[i])) for i in range(size)
    )
    return weights, states


def average_c3(weights: np.ndarray, states: tuple) -> float:
    """Weighted c3 average of a decomposition."""
    return float(sum(w * c3(s) for w, s in zip(weights, states)))
