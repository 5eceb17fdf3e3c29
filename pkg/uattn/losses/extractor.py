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
A fixed, randomly initialized convolutional feature pyramid. It takes the place of a
pretrained classification network for the perceptual and style losses and for the
crop feature distance metric.
"""
import logging
import math
import numpy as np

from uattn.errors import ShapeError
from uattn.tensor import Tensor, SplitMix64, conv2d, leaky_relu

logger = logging.getLogger("uattn.losses")
logger.addHandler(logging.NullHandler())

DEFAULT_SEED = 1234
CHANNELS = (16, 32, 64)
MIN_SIZE = 8


class FrozenExtractor:
    """Three 3x3 stride-2 conv stages (3 -> 16 -> 32 -> 64 channels, LeakyReLU 0.2)
    with weights drawn once from `seed`. The weights never receive gradients."""

    def __init__(self, seed=DEFAULT_SEED):
        self.seed = int(seed)
        self._weights = []
        c_in = 3
        rng = SplitMix64(self.seed)
        for index, c_out in enumerate(CHANNELS, start=1):
            bound = math.sqrt(6.0 / (c_in * 9))
            weight = rng.fork(f"extractor.conv{index}.weight").uniform((c_out, c_in, 3, 3), -bound, bound)
            bias = rng.fork(f"extractor.conv{index}.bias").uniform((c_out,), -0.1, 0.1)
            self._weights.append((weight, bias))
            c_in = c_out
        self._cache = {}
        logger.debug(f"Frozen extractor drawn from seed {self.seed}")

    def _params(self, dtype):
        key = np.dtype(dtype).str
        if key not in self._cache:
            self._cache[key] = [
                (Tensor(w.astype(dtype)), Tensor(b.astype(dtype))) for w, b in self._weights
            ]
        return self._cache[key]

    def extract(self, image):
        """Return the feature maps at 1/2, 1/4 and 1/8 of the input extent for a
        [3,H,W] image or an [N,3,H,W] batch."""
        if not isinstance(image, Tensor):
            image = Tensor(np.asarray(image))
        batched = image.ndim == 4
        x = image if batched else image.reshape((1,) + image.shape)
        if x.ndim != 4 or x.shape[1] != 3:
            raise ShapeError(f"extract: expected [3,H,W] or [N,3,H,W], got {image.shape}")
        if min(x.shape[2:]) < MIN_SIZE:
            raise ShapeError(f"extract: input {x.shape[2]}x{x.shape[3]} is smaller than {MIN_SIZE}")
        features = []
        for weight, bias in self._params(x.dtype):
            x = leaky_relu(conv2d(x, weight, bias, stride=2, pad=1))
            features.append(x if batched else x.reshape(x.shape[1:]))
        return features

    __call__ = extract
