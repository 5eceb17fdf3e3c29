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
""" The generator forward pass for every architecture variant """
import logging
from dataclasses import dataclass
from typing import Optional
import numpy as np

from uattn.errors import ShapeError
from uattn.tensor import Tensor
from .geometry import StageSpec, check_size, flat_schedule, hourglass_schedule
from .layers import (
    block_params,
    conv_down,
    conv_fuse,
    conv_up,
    decode,
    encode,
    t_block,
)
from .weights import ArchVariant, BASE_CHANNELS

logger = logging.getLogger("uattn.model")
logger.addHandler(logging.NullHandler())


@dataclass
class AttentionRecord:
    """One captured attention matrix: [P^2, P^2] row-stochastic weights of transformer
    layer `layer` in block `stage`, for batch element `sample`. `features` is the
    channel-mean of the block input, usable as an overlay background. `target` is the
    (row, col) of the output patch picked for visualization, if any."""

    stage: int
    layer: int
    sample: int
    matrix: np.ndarray
    spec: StageSpec
    features: Optional[np.ndarray] = None
    target: Optional[tuple] = None

    def row(self, index):
        """Attention weights used to compute output patch `index`."""
        return self.matrix[index]

    @property
    def weights(self):
        """Attention row of the target patch."""
        if self.target is None:
            raise ShapeError(f"stage {self.stage}: attention record has no target patch")
        row, col = self.target
        return self.row(row * self.spec.P + col)


def schedule_for(variant, input_hw, base_channels=BASE_CHANNELS):
    """Return the StageSpecs of every transformer block of a variant."""
    variant = ArchVariant(variant)
    if variant == ArchVariant.UATTENTION:
        return hourglass_schedule(input_hw, base_channels)
    if variant == ArchVariant.BASELINE_CASCADE3:
        return flat_schedule(input_hw, (2, 2, 2), base_channels)
    if variant == ArchVariant.PYRAMID3:
        return flat_schedule(input_hw, (2, 4, 8), base_channels)
    return flat_schedule(input_hw, (2, 4, 8, 4, 2), base_channels)


def _trace(trace, label, value):
    if trace is not None:
        trace.append((label, tuple(value.shape[1:])))


def forward(image, weights, variant=None, capture_attention=False, trace=None):
    """Run the generator on a [3,H,W] image or an [N,3,H,W] batch.

    Returns (output, records): the output has the input's shape with values in (-1, 1);
    records is a list of AttentionRecord when capture_attention is set, else None. When
    `trace` is a list, (label, per-sample shape) pairs of every intermediate are
    appended to it.
    """
    variant = weights.variant if variant is None else ArchVariant(variant)
    if variant != weights.variant:
        raise ShapeError(f"weights are for {weights.variant.value}, not {variant.value}")
    weights.check()
    if not isinstance(image, Tensor):
        image = Tensor(np.asarray(image, dtype=weights.dtype))
    batched = image.ndim == 4
    x = image if batched else image.reshape((1,) + image.shape)
    if x.ndim != 4 or x.shape[1] != 3:
        raise ShapeError(f"forward: expected [3,H,W] or [N,3,H,W], got {image.shape}")
    height, width = x.shape[2:]
    if height != width:
        raise ShapeError(f"forward: input must be square, got {height}x{width}")
    check_size(height)
    stages = schedule_for(variant, height)

    captured = [] if capture_attention else None

    def block(index, inputs):
        stage = stages[index - 1]
        if trace is not None:
            sequence = (stage.sequence_length, stage.C, stage.patch_h, stage.patch_w)
            trace.append((f"tblock{index}.sequence", sequence))
        layers = [] if captured is not None else None
        out = t_block(inputs, stage, block_params(weights, index), layers)
        if layers is not None:
            mean = inputs.data.mean(axis=1)
            captured.extend(
                (index, layer, matrix, stage, mean) for layer, matrix in enumerate(layers, start=1)
            )
        _trace(trace, f"tblock{index}", out)
        return out

    feats = encode(x, weights)
    _trace(trace, "encoder", feats)
    if variant == ArchVariant.UATTENTION:
        t1 = block(1, feats)
        d1 = conv_down(t1, weights, "down1")
        _trace(trace, "down1", d1)
        t2 = block(2, d1)
        d2 = conv_down(t2, weights, "down2")
        _trace(trace, "down2", d2)
        t3 = block(3, d2)
        u1 = conv_up(t3, weights, "up1")
        _trace(trace, "up1", u1)
        f1 = conv_fuse(t2, u1, weights, "fuse1")
        _trace(trace, "fuse1", f1)
        t4 = block(4, f1)
        u2 = conv_up(t4, weights, "up2")
        _trace(trace, "up2", u2)
        f2 = conv_fuse(t1, u2, weights, "fuse2")
        _trace(trace, "fuse2", f2)
        last = block(5, f2)
    elif variant == ArchVariant.SIMPLIFIED_HOURGLASS5:
        t1 = block(1, feats)
        t2 = block(2, t1)
        t3 = block(3, t2)
        f1 = conv_fuse(t2, t3, weights, "fuse1")
        _trace(trace, "fuse1", f1)
        t4 = block(4, f1)
        f2 = conv_fuse(t1, t4, weights, "fuse2")
        _trace(trace, "fuse2", f2)
        last = block(5, f2)
    else:
        last = feats
        for index in range(1, variant.block_count + 1):
            last = block(index, last)
    out = decode(last, weights)
    _trace(trace, "decoder", out)

    records = None
    if captured is not None:
        records = []
        for index, layer, matrix, stage, mean in captured:
            for sample in range(matrix.shape[0]):
                records.append(
                    AttentionRecord(index, layer, sample, matrix[sample].copy(), stage, mean[sample])
                )
        logger.debug(f"Captured {len(records)} attention matrices")
    if not batched:
        out = out.reshape(out.shape[1:])
    return out, records


def pad_exemplar(exemplar, size):
    """Zero-pad a [3,S/2,S/2] exemplar into the center of a [3,S,S] frame. A [3,S,S]
    input is returned unchanged."""
    exemplar = np.asarray(exemplar)
    if exemplar.ndim != 3 or exemplar.shape[0] != 3:
        raise ShapeError(f"exemplar must be [3,H,W], got {exemplar.shape}")
    side = exemplar.shape[1]
    if exemplar.shape[2] != side:
        raise ShapeError(f"exemplar must be square, got {exemplar.shape[1:]}")
    if side == size:
        return exemplar
    if 2 * side != size:
        raise ShapeError(f"exemplar side {side} fits neither {size // 2} nor {size}")
    frame = np.zeros((3, size, size), dtype=exemplar.dtype)
    lo = size // 4
    frame[:, lo : lo + side, lo : lo + side] = exemplar
    return frame


def synthesize(weights, exemplar, size=None):
    """Synthesize a 2x texture from a half-size exemplar (or a pre-padded full-size
    input) with a single forward pass. Returns a [3,S,S] numpy array."""
    size = weights.input_hw if size is None else size
    frame = pad_exemplar(exemplar, size)
    out, _records = forward(Tensor(frame.astype(weights.dtype)), weights)
    return out.numpy()
