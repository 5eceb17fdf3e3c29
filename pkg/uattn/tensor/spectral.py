#
# Copyright (c) 2026 The uattn Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at:
#     http://www.apache.org/licenses/LICENSE-2.0
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
#
# -*- coding: utf-8 -*-
""" Spectral normalization of weight tensors by power iteration """
from dataclasses import dataclass
import numpy as np

from uattn.errors import NonFiniteError
from .autodiff import Tensor
from .rng import SplitMix64

NORM_TOLERANCE = 1e-6


@dataclass
class SpectralState:
    """Persistent left singular vector estimate for one weight. Its length equals the
    weight's leading dimension; it is kept at unit norm."""

    u: np.ndarray

    @classmethod
    def initial(cls, rows, seed, label="u"):
        """Return a unit vector of the given length drawn from a seeded stream."""
        u = SplitMix64(seed).fork(label).normal((rows,))
        return cls(u / np.linalg.norm(u))


def _unit(vec, what):
    norm = np.linalg.norm(vec)
    if norm == 0.0 or not np.isfinite(norm):
        raise NonFiniteError(f"spectral_normalize: {what} vanished (zero weight matrix?)")
    return vec / norm


def estimate_sigma(matrix, state, iters=1):
    """Run `iters` power iterations on `matrix` starting from state.u, update state.u
    in place and return the top singular value estimate."""
    if iters < 1:
        raise ValueError("spectral_normalize: iters must be >= 1")
    u = state.u
    v = None
    for _ in range(iters):
        v = _unit(matrix.T @ u, "v")
        u = _unit(matrix @ v, "u")
    state.u[...] = u
    sigma = float(u @ (matrix @ v))
    if sigma <= 0.0:
        raise NonFiniteError("spectral_normalize: singular value estimate is zero")
    return sigma


def spectral_normalize(weight, state, iters=1):
    """Return weight / sigma, sigma being the power-iteration estimate of the top
    singular value of the weight flattened to (leading dim) x (rest). The estimate is
    treated as a constant: gradients flow through the division only."""
    rows = weight.shape[0]
    matrix = weight.data.reshape(rows, -1).astype(np.float64)
    sigma = estimate_sigma(matrix, state, iters)
    scale = Tensor(np.asarray(1.0 / sigma, dtype=weight.dtype))
    return weight * scale


def frozen_normalize(weight, state):
    """Normalize with the current state.u without advancing the power iteration."""
    rows = weight.shape[0]
    matrix = weight.data.reshape(rows, -1).astype(np.float64)
    u = state.u
    v = _unit(matrix.T @ u, "v")
    sigma = float(u @ (matrix @ v))
    if sigma <= 0.0:
        raise NonFiniteError("spectral_normalize: singular value estimate is zero")
    return weight * Tensor(np.asarray(1.0 / sigma, dtype=weight.dtype))
