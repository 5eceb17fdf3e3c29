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
""" Named generator weights: layer inventory per architecture, initialization and bookkeeping """
import enum
import logging
import math
from collections import OrderedDict
import numpy as np

from uattn.errors import ShapeError
from uattn.tensor import Tensor, SplitMix64
from .geometry import HOURGLASS_CHANNEL_FACTORS, HOURGLASS_KERNELS, check_size

logger = logging.getLogger("uattn.model")
logger.addHandler(logging.NullHandler())

BASE_CHANNELS = 16
IMAGE_CHANNELS = 3
LAYERS_PER_BLOCK = 2


class ArchVariant(enum.Enum):
    """The generator architectures: the full hourglass and its three ablations."""

    UATTENTION = "uattn"
    BASELINE_CASCADE3 = "baseline"
    PYRAMID3 = "pyramid"
    SIMPLIFIED_HOURGLASS5 = "hourglass-simple"

    @classmethod
    def names(cls):
        """Return the command-line spelling of every variant."""
        return [v.value for v in cls]

    @property
    def block_count(self):
        """Number of transformer blocks in this architecture."""
        if self in (ArchVariant.BASELINE_CASCADE3, ArchVariant.PYRAMID3):
            return 3
        return 5


def _conv(shapes, prefix, c_out, c_in, kernel):
    shapes[f"{prefix}.weight"] = (c_out, c_in, kernel, kernel)
    shapes[f"{prefix}.bias"] = (c_out,)


def _block(shapes, index, channels, kernel):
    for layer in range(1, LAYERS_PER_BLOCK + 1):
        prefix = f"tblock{index}.layer{layer}"
        for proj in ("wq", "wk", "wv", "wo"):
            _conv(shapes, f"{prefix}.attn.{proj}", channels, channels, 1)
        _conv(shapes, f"{prefix}.ffn", channels, channels, kernel)
        for norm in ("norm1", "norm2"):
            shapes[f"{prefix}.{norm}.gain"] = (channels,)
            shapes[f"{prefix}.{norm}.bias"] = (channels,)


def _pair(shapes, prefix, c_out, c_in, kernel):
    _conv(shapes, f"{prefix}.conv1", c_out, c_in, kernel)
    _conv(shapes, f"{prefix}.conv2", c_out, c_out, 1)


def layer_shapes(variant, base_channels=BASE_CHANNELS):
    """Return an ordered map of parameter name to shape for the given variant. Weight
    shapes do not depend on the input size."""
    variant = ArchVariant(variant)
    c = base_channels
    shapes = OrderedDict()
    _pair(shapes, "encoder", c, IMAGE_CHANNELS, 3)
    if variant == ArchVariant.UATTENTION:
        ladder = [c * f for f in HOURGLASS_CHANNEL_FACTORS]
        for i in range(5):
            _block(shapes, i + 1, ladder[i], HOURGLASS_KERNELS[i])
        _pair(shapes, "down1", 4 * c, c, 4)
        _pair(shapes, "down2", 16 * c, 4 * c, 4)
        _pair(shapes, "up1", 4 * c, 16 * c, 1)
        _pair(shapes, "up2", c, 4 * c, 1)
        _pair(shapes, "fuse1", 4 * c, 8 * c, 1)
        _pair(shapes, "fuse2", c, 2 * c, 1)
    else:
        for i in range(variant.block_count):
            _block(shapes, i + 1, c, 3)
        if variant == ArchVariant.SIMPLIFIED_HOURGLASS5:
            _pair(shapes, "fuse1", c, 2 * c, 1)
            _pair(shapes, "fuse2", c, 2 * c, 1)
    _conv(shapes, "decoder.conv1", IMAGE_CHANNELS, c, 3)
    _conv(shapes, "decoder.conv2", IMAGE_CHANNELS, IMAGE_CHANNELS, 1)
    return shapes


def init_tensor(name, shape, seed, dtype=np.float32):
    """Draw one parameter. Conv weights are He-uniform in [-b, b] with b = sqrt(6 / fan_in)
    from a stream forked by the parameter name; biases and norm shifts start at 0 and
    norm gains at 1."""
    if name.endswith(".gain"):
        values = np.ones(shape)
    elif name.endswith(".bias"):
        values = np.zeros(shape)
    else:
        fan_in = int(np.prod(shape[1:]))
        bound = math.sqrt(6.0 / fan_in)
        values = SplitMix64(seed).fork(name).uniform(shape, -bound, bound)
    return Tensor(values.astype(dtype), requires_grad=True, name=name)


class ModelWeights:
    """A named store of generator parameters. Iteration order is the layer inventory
    order, which is also the serialization order."""

    def __init__(self, variant, input_hw, tensors):
        self.variant = ArchVariant(variant)
        self.input_hw = int(input_hw)
        self.tensors = OrderedDict(tensors)

    def __getitem__(self, name):
        try:
            return self.tensors[name]
        except KeyError as err:
            raise ShapeError(f"weights for {self.variant.value} have no parameter {name}") from err

    def __contains__(self, name):
        return name in self.tensors

    def __iter__(self):
        return iter(self.tensors)

    def __len__(self):
        return len(self.tensors)

    def items(self):
        return self.tensors.items()

    def parameters(self):
        """Return the parameter tensors in inventory order."""
        return list(self.tensors.values())

    def shapes(self):
        return OrderedDict((name, t.shape) for name, t in self.tensors.items())

    def parameter_count(self):
        """Total number of scalar parameters."""
        return sum(t.size for t in self.tensors.values())

    @property
    def dtype(self):
        first = next(iter(self.tensors.values()))
        return first.dtype

    def conv(self, prefix):
        """Return the (weight, bias) pair of the named convolution."""
        return self[f"{prefix}.weight"], self[f"{prefix}.bias"]

    def astype(self, dtype):
        """Return a copy of the weights in the given precision."""
        tensors = OrderedDict(
            (name, Tensor(t.data.astype(dtype), requires_grad=True, name=name))
            for name, t in self.tensors.items()
        )
        return ModelWeights(self.variant, self.input_hw, tensors)

    def copy(self):
        return self.astype(self.dtype)

    def zero_grad(self):
        for t in self.tensors.values():
            t.zero_grad()

    def with_input_size(self, input_hw):
        """Return the same parameters bound to another input size."""
        check_size(input_hw)
        return ModelWeights(self.variant, input_hw, self.tensors)

    def check(self):
        """Raise ShapeError unless names and shapes match the variant's inventory."""
        expected = layer_shapes(self.variant)
        if list(expected) != list(self.tensors):
            missing = sorted(set(expected) - set(self.tensors))
            extra = sorted(set(self.tensors) - set(expected))
            raise ShapeError(
                f"weights do not match {self.variant.value}: missing {missing[:3]}, extra {extra[:3]}"
            )
        for name, shape in expected.items():
            if self.tensors[name].shape != shape:
                raise ShapeError(
                    f"{name}: shape {self.tensors[name].shape} does not match {shape}"
                )


def build_model(variant, input_hw, seed, dtype=np.float32):
    """Deterministically initialize the generator weights of a variant."""
    variant = ArchVariant(variant)
    check_size(input_hw)
    tensors = OrderedDict(
        (name, init_tensor(name, shape, seed, dtype))
        for name, shape in layer_shapes(variant).items()
    )
    weights = ModelWeights(variant, input_hw, tensors)
    logger.debug(
        f"Built {variant.value} at {input_hw}px: {len(weights)} tensors, "
        f"{weights.parameter_count()} parameters"
    )
    return weights
