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
""" The Adam optimizer with bias correction """
from dataclasses import dataclass, field
import numpy as np

from uattn.errors import NonFiniteError

DEFAULT_LR = 0.001
DEFAULT_BETA1 = 0.9
DEFAULT_BETA2 = 0.999
DEFAULT_EPS = 1e-8


@dataclass
class AdamState:
    """Step counter and zero-initialized first/second moment buffers, keyed by
    parameter name."""

    step_count: int = 0
    m: dict = field(default_factory=dict)
    v: dict = field(default_factory=dict)


def adam_step(
    params,
    grads,
    state,
    lr=DEFAULT_LR,
    beta1=DEFAULT_BETA1,
    beta2=DEFAULT_BETA2,
    eps=DEFAULT_EPS,
):
    """Apply one Adam update to `params` (name -> leaf Tensor) given `grads`
    (name -> array, or None to read each parameter's .grad). Parameters without a
    gradient are left untouched. A non-finite gradient aborts the whole step before
    anything is modified."""
    if grads is None:
        grads = {name: p.grad for name, p in params.items()}
    for name, grad in grads.items():
        if grad is None:
            continue
        if grad.shape != params[name].shape:
            raise ValueError(
                f"adam_step: gradient of {name} has shape {grad.shape}, "
                f"parameter has {params[name].shape}"
            )
        if not np.all(np.isfinite(grad)):
            raise NonFiniteError(f"adam_step: gradient of {name} is not finite")

    state.step_count += 1
    t = state.step_count
    for name, param in params.items():
        grad = grads.get(name)
        if grad is None:
            continue
        if name not in state.m:
            state.m[name] = np.zeros_like(param.data)
            state.v[name] = np.zeros_like(param.data)
        m = beta1 * state.m[name] + (1.0 - beta1) * grad
        v = beta2 * state.v[name] + (1.0 - beta2) * (grad * grad)
        state.m[name] = m.astype(param.dtype)
        state.v[name] = v.astype(param.dtype)
        m_hat = m / (1.0 - beta1**t)
        v_hat = v / (1.0 - beta2**t)
        param.data = (param.data - lr * m_hat / (np.sqrt(v_hat) + eps)).astype(param.dtype)
    return params, state


class Adam:
    """Adam with fixed hyperparameters over a named parameter store."""

    def __init__(
        self,
        lr=DEFAULT_LR,
        beta1=DEFAULT_BETA1,
        beta2=DEFAULT_BETA2,
        eps=DEFAULT_EPS,
        state=None,
    ):
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.state = state if state is not None else AdamState()

    def step(self, params, grads=None):
        """Update params (name -> Tensor) from grads, or from their .grad buffers."""
        adam_step(params, grads, self.state, self.lr, self.beta1, self.beta2, self.eps)

    @staticmethod
    def zero_grad(params):
        """Reset the .grad buffer of every parameter."""
        for param in params.values():
            param.zero_grad()
