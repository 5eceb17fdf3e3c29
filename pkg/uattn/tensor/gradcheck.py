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
"""
Central finite-difference gradient verification in 64-bit precision.

A check builds a scalar function of a few leaf tensors, differentiates it with
backward() and compares against (f(x + eps) - f(x - eps)) / (2 * eps) for every
element of every leaf. The reported error is the largest absolute difference divided
by the largest gradient magnitude of that check.
"""
import logging
from dataclasses import dataclass
import numpy as np

from .autodiff import Tensor, concat
from .rng import SplitMix64
from . import ops

DEFAULT_TOLERANCE = 1e-4
DEFAULT_EPS = 1e-6

## Registry of op families: name -> callable(seed) returning (function, leaves).
CHECKS = {}


@dataclass
class GradCheckResult:
    """Outcome of a gradient check for one op family."""

    name: str
    worst: float
    tolerance: float

    @property
    def passed(self):
        """Returns True if the worst relative error is under the tolerance."""
        return self.worst < self.tolerance


def register(name):
    """Decorator that adds a check builder to the registry under `name`."""

    def decorator(func):
        if name in CHECKS:
            raise ValueError(f"gradcheck {name} registered twice")
        CHECKS[name] = func
        return func

    return decorator


def random_leaf(shape, seed, label, away_from_zero=0.0):
    """Return a float64 leaf with standard normal values. With away_from_zero > 0 the
    magnitudes are pushed out of (-away_from_zero, away_from_zero) to avoid kinks."""
    values = SplitMix64(seed).fork(label).normal(shape)
    if away_from_zero > 0:
        values = np.sign(values) * (away_from_zero + np.abs(values))
        values[values == 0] = away_from_zero
    return Tensor(np.ascontiguousarray(values), requires_grad=True, name=label, dtype=np.float64)


def weighted_sum(out, seed):
    """Reduce an op output to a scalar with a fixed random weighting, so that every
    output element contributes a distinct sensitivity."""
    weights = SplitMix64(seed).fork("weighted-sum").uniform(out.shape, 0.5, 1.5)
    return (out * Tensor(weights.astype(out.dtype))).sum()


def analytic_gradients(func, leaves):
    """Return d func() / d leaf for every leaf, computed by backward()."""
    for leaf in leaves:
        leaf.zero_grad()
    func().backward()
    grads = []
    for leaf in leaves:
        grads.append(np.zeros_like(leaf.data) if leaf.grad is None else leaf.grad.copy())
    return grads


def numeric_gradients(func, leaves, eps=DEFAULT_EPS):
    """Return central finite-difference gradients of func() for every leaf."""
    grads = []
    for leaf in leaves:
        leaf.data = np.ascontiguousarray(leaf.data)
        flat = leaf.data.reshape(-1)
        grad = np.zeros(flat.size, dtype=np.float64)
        for i in range(flat.size):
            old = flat[i]
            flat[i] = old + eps
            plus = func().item()
            flat[i] = old - eps
            minus = func().item()
            flat[i] = old
            grad[i] = (plus - minus) / (2.0 * eps)
        grads.append(grad.reshape(leaf.shape))
    return grads


def worst_error(analytic, numeric):
    """Largest absolute difference divided by the largest gradient magnitude."""
    diff = max(float(np.max(np.abs(a - n))) for a, n in zip(analytic, numeric))
    scale = max(
        max(float(np.max(np.abs(a))), float(np.max(np.abs(n))))
        for a, n in zip(analytic, numeric)
    )
    return diff / max(scale, 1e-12)


def gradcheck(func, leaves, eps=DEFAULT_EPS):
    """Return the worst relative error between backward() and finite differences."""
    analytic = analytic_gradients(func, leaves)
    numeric = numeric_gradients(func, leaves, eps)
    return worst_error(analytic, numeric)


def run_checks(names=None, tolerance=DEFAULT_TOLERANCE, seed=0):
    """Run the registered checks (all, or those in `names`) and return a list of
    GradCheckResult in registry order."""
    logger = logging.getLogger("uattn.tensor")
    logger.addHandler(logging.NullHandler())

    selected = list(CHECKS) if not names else list(names)
    results = []
    for name in selected:
        if name not in CHECKS:
            raise KeyError(f"no gradcheck registered for {name}")
        func, leaves = CHECKS[name](seed)
        worst = gradcheck(func, leaves)
        logger.debug(f"gradcheck {name}: worst relative error {worst:.3e}")
        results.append(GradCheckResult(name, worst, tolerance))
    return results


@register("conv2d")
def _check_conv2d(seed):
    x = random_leaf((1, 2, 6, 6), seed, "x")
    w = random_leaf((3, 2, 3, 3), seed, "w")
    b = random_leaf((3,), seed, "b")
    w2 = random_leaf((2, 3, 4, 4), seed, "w2")

    def func():
        hidden = ops.conv2d(x, w, b, stride=1, pad=1)
        return weighted_sum(ops.conv2d(hidden, w2, None, stride=2, pad=1), seed)

    return func, [x, w, b, w2]


@register("conv3d")
def _check_conv3d(seed):
    x = random_leaf((1, 1, 3, 4, 4), seed, "x")
    w = random_leaf((2, 1, 3, 3, 3), seed, "w")
    b = random_leaf((2,), seed, "b")
    return (lambda: weighted_sum(ops.conv3d(x, w, b), seed)), [x, w, b]


@register("bilinear_upsample_2x")
def _check_upsample(seed):
    x = random_leaf((1, 2, 3, 4), seed, "x")
    return (lambda: weighted_sum(ops.bilinear_upsample_2x(x), seed)), [x]


@register("matmul")
def _check_matmul(seed):
    a = random_leaf((3, 4), seed, "a")
    b = random_leaf((4, 2), seed, "b")
    return (lambda: weighted_sum(ops.matmul(a, b), seed)), [a, b]


@register("softmax_rows")
def _check_softmax(seed):
    x = random_leaf((3, 5), seed, "x")
    return (lambda: weighted_sum(ops.softmax_rows(x), seed)), [x]


@register("leaky_relu")
def _check_leaky_relu(seed):
    x = random_leaf((4, 5), seed, "x", away_from_zero=0.1)
    return (lambda: weighted_sum(ops.leaky_relu(x), seed)), [x]


@register("tanh")
def _check_tanh(seed):
    x = random_leaf((4, 5), seed, "x")
    return (lambda: weighted_sum(ops.tanh(x), seed)), [x]


@register("layer_norm_channels")
def _check_layer_norm(seed):
    x = random_leaf((2, 3, 2, 2), seed, "x")
    gain = random_leaf((3,), seed, "gain")
    bias = random_leaf((3,), seed, "bias")
    return (lambda: weighted_sum(ops.layer_norm_channels(x, gain, bias, 1e-5), seed)), [
        x,
        gain,
        bias,
    ]


@register("slice_concat")
def _check_slice_concat(seed):
    x = random_leaf((2, 3, 4), seed, "x")
    y = random_leaf((2, 2, 4), seed, "y")

    def func():
        joined = concat([x, y], axis=1)
        return weighted_sum(joined[:, 1:4, ::2].abs(), seed)

    return func, [x, y]
