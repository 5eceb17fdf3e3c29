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
The temporal-patch discriminator. A batch of images is read as one clip whose frames
are the batch elements, and scored by six spectrally normalized 3x3x3 convolutions.
"""
import logging
import math
from collections import OrderedDict
import numpy as np

from uattn.errors import ShapeError
from uattn.tensor import Tensor, SplitMix64, SpectralState, conv3d, leaky_relu, spectral_normalize
from uattn.tensor.spectral import estimate_sigma, frozen_normalize

logger = logging.getLogger("uattn.losses")
logger.addHandler(logging.NullHandler())

CHANNELS = (32, 64, 128, 128, 128, 128)
PREFIX = "disc"
WARMUP_ITERS = 30


def layer_names():
    """Return the parameter names of the discriminator in layer order."""
    names = []
    for index in range(1, len(CHANNELS) + 1):
        names.extend([f"{PREFIX}.conv{index}.weight", f"{PREFIX}.conv{index}.bias"])
    return names


def state_name(index):
    return f"{PREFIX}.conv{index}.u"


class Discriminator:
    """Conv3d weights with their persistent power-iteration vectors. Parameter names
    all start with 'disc.' and never collide with generator names."""

    def __init__(self, params, states):
        self.params = OrderedDict(params)
        self.states = OrderedDict(states)
        if list(self.params) != layer_names():
            raise ShapeError(f"discriminator parameters do not match {layer_names()[:2]}...")

    @classmethod
    def build(cls, seed, dtype=np.float32):
        """He-uniform weights, zero biases, and power-iteration vectors warmed up so the
        first normalization is already close to the true top singular value."""
        rng = SplitMix64(seed)
        params, states = OrderedDict(), OrderedDict()
        c_in = 3
        for index, c_out in enumerate(CHANNELS, start=1):
            name = f"{PREFIX}.conv{index}.weight"
            bound = math.sqrt(6.0 / (c_in * 27))
            weight = rng.fork(name).uniform((c_out, c_in, 3, 3, 3), -bound, bound)
            params[name] = Tensor(weight.astype(dtype), requires_grad=True, name=name)
            bias_name = f"{PREFIX}.conv{index}.bias"
            params[bias_name] = Tensor(np.zeros(c_out, dtype), requires_grad=True, name=bias_name)
            state = SpectralState.initial(c_out, seed, label=state_name(index))
            estimate_sigma(weight.reshape(c_out, -1), state, WARMUP_ITERS)
            states[state_name(index)] = state
            c_in = c_out
        logger.debug(f"Built discriminator from seed {seed}")
        return cls(params, states)

    def parameters(self):
        return list(self.params.values())

    def zero_grad(self):
        for param in self.params.values():
            param.zero_grad()

    def layers(self):
        """Yield (weight, bias, state) per conv layer."""
        for index in range(1, len(CHANNELS) + 1):
            yield (
                self.params[f"{PREFIX}.conv{index}.weight"],
                self.params[f"{PREFIX}.conv{index}.bias"],
                self.states[state_name(index)],
            )

    def discriminate(self, batch, update=True):
        """Score a [B,3,H,W] batch; returns the [1,128,B,H,W] patch score volume. With
        update=False the power-iteration vectors are read but not advanced."""
        if batch.ndim != 4 or batch.shape[1] != 3:
            raise ShapeError(f"discriminate: expected [B,3,H,W], got {batch.shape}")
        if batch.shape[0] < 2:
            raise ShapeError(f"discriminate: batch of {batch.shape[0]} is too short, need >= 2")
        x = batch.transpose(1, 0, 2, 3)
        x = x.reshape((1,) + x.shape)
        layers = list(self.layers())
        for index, (weight, bias, state) in enumerate(layers, start=1):
            if update:
                normalized = spectral_normalize(weight, state)
            else:
                normalized = frozen_normalize(weight, state)
            x = conv3d(x, normalized, bias, pad=1)
            if index < len(layers):
                x = leaky_relu(x)
        return x

    __call__ = discriminate

    def copy(self):
        params = OrderedDict(
            (name, Tensor(p.data.copy(), requires_grad=True, name=name))
            for name, p in self.params.items()
        )
        states = OrderedDict((name, SpectralState(s.u.copy())) for name, s in self.states.items())
        return Discriminator(params, states)


def discriminate(batch, disc, update=True):
    """Score a batch with the given discriminator."""
    return disc.discriminate(batch, update)
