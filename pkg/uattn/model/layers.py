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
Generator building blocks: patch self-attention, the post-norm transformer layer and
block, and the convolutional encoder, decoder, down, up and fuse stages.
"""
import math
from dataclasses import dataclass
import numpy as np

from uattn.errors import ShapeError
from uattn.tensor import (
    bilinear_upsample_2x,
    concat,
    conv2d,
    layer_norm_channels,
    leaky_relu,
    matmul,
    softmax_rows,
    tanh,
)
from .geometry import PatchSequence, arrange_back, partition

NORM_EPS = 1e-5


@dataclass
class AttentionParams:
    """1x1 query/key/value/output projections, each a [C,C,1,1] weight and [C] bias."""

    wq: object
    bq: object
    wk: object
    bk: object
    wv: object
    bv: object
    wo: object
    bo: object

    @classmethod
    def from_weights(cls, weights, prefix):
        kwargs = {}
        for proj in ("q", "k", "v", "o"):
            kwargs[f"w{proj}"], kwargs[f"b{proj}"] = weights.conv(f"{prefix}.w{proj}")
        return cls(**kwargs)

    @property
    def channels(self):
        return self.wq.shape[0]


@dataclass
class LayerParams:
    """Parameters of one transformer layer."""

    attention: AttentionParams
    ffn_weight: object
    ffn_bias: object
    norm1_gain: object
    norm1_bias: object
    norm2_gain: object
    norm2_bias: object

    @classmethod
    def from_weights(cls, weights, prefix):
        ffn_weight, ffn_bias = weights.conv(f"{prefix}.ffn")
        return cls(
            attention=AttentionParams.from_weights(weights, f"{prefix}.attn"),
            ffn_weight=ffn_weight,
            ffn_bias=ffn_bias,
            norm1_gain=weights[f"{prefix}.norm1.gain"],
            norm1_bias=weights[f"{prefix}.norm1.bias"],
            norm2_gain=weights[f"{prefix}.norm2.gain"],
            norm2_bias=weights[f"{prefix}.norm2.bias"],
        )


def block_params(weights, index):
    """Return the two LayerParams of transformer block `index`."""
    return [LayerParams.from_weights(weights, f"tblock{index}.layer{j}") for j in (1, 2)]


def _per_patch(patches, func):
    # Fold the patch axis into the batch axis, apply func, unfold.
    n, count = patches.shape[:2]
    flat = patches.reshape((n * count,) + patches.shape[2:])
    out = func(flat)
    return out.reshape((n, count) + out.shape[1:])


def self_attention(seq, params):
    """Single-head attention across the patches of `seq`. Every patch is projected by
    the 1x1 convs and flattened to a row of length d; the result is
    softmax(Q K^T / sqrt(d)) V, reshaped back into patches and projected by wo. The
    [N, P^2, P^2] attention matrix travels with the returned sequence."""
    channels = seq.patch_shape[0]
    if params.channels != channels or params.wq.shape[1] != channels:
        raise ShapeError(
            f"self_attention: projections for {params.channels} channels, patches have {channels}"
        )
    n, count = seq.patches.shape[:2]
    d = int(np.prod(seq.patch_shape))

    def project(weight, bias):
        out = _per_patch(seq.patches, lambda flat: conv2d(flat, weight, bias))
        return out.reshape(n, count, d)

    query = project(params.wq, params.bq)
    key = project(params.wk, params.bk)
    value = project(params.wv, params.bv)
    scale = 1.0 / math.sqrt(d)
    attention = softmax_rows(matmul(query, key.transpose(0, 2, 1)) * scale)
    mixed = matmul(attention, value).reshape(seq.patches.shape)
    out = _per_patch(mixed, lambda flat: conv2d(flat, params.wo, params.bo))
    return PatchSequence(out, seq.grid, seq.batched, seq.origin, attention=attention.data)


def feed_forward(seq, weight, bias):
    """k x k conv with LeakyReLU applied to every patch separately, zero padded."""
    pad = weight.shape[-1] // 2
    out = _per_patch(seq.patches, lambda flat: leaky_relu(conv2d(flat, weight, bias, pad=pad)))
    return PatchSequence(out, seq.grid, seq.batched, seq.origin)


def _check_stage(feature_map, stage):
    if stage is None:
        return
    expected = (stage.C, stage.H, stage.W)
    if tuple(feature_map.shape[-3:]) != expected:
        raise ShapeError(
            f"stage {stage.index}: expected map {expected}, got {tuple(feature_map.shape[-3:])}"
        )


def transformer_layer(feature_map, stage, params, capture=None):
    """x1 = norm(map + attention(map)); out = norm(x1 + ffn(x1)). The attention matrix
    is appended to `capture` when a list is given."""
    _check_stage(feature_map, stage)
    attended = self_attention(partition(feature_map, stage.P, stage), params.attention)
    if capture is not None:
        capture.append(attended.attention)
    x1 = layer_norm_channels(
        feature_map + arrange_back(attended), params.norm1_gain, params.norm1_bias, NORM_EPS
    )
    ffn = feed_forward(partition(x1, stage.P, stage), params.ffn_weight, params.ffn_bias)
    return layer_norm_channels(
        x1 + arrange_back(ffn), params.norm2_gain, params.norm2_bias, NORM_EPS
    )


def t_block(feature_map, stage, layers, capture=None):
    """Two transformer layers in sequence; the shape is preserved."""
    out = feature_map
    for params in layers:
        out = transformer_layer(out, stage, params, capture)
    return out


def _conv_act(x, weights, prefix, stride=1, pad=0):
    weight, bias = weights.conv(prefix)
    return leaky_relu(conv2d(x, weight, bias, stride=stride, pad=pad))


def encode(image, weights):
    """3x3 conv (3 -> C) and 1x1 conv, both LeakyReLU; spatial extent is preserved."""
    if image.ndim != 4 or image.shape[1] != 3:
        raise ShapeError(f"encode: expected [N,3,H,W] image, got {image.shape}")
    x = _conv_act(image, weights, "encoder.conv1", pad=1)
    return _conv_act(x, weights, "encoder.conv2")


def decode(features, weights):
    """3x3 conv (C -> 3) with LeakyReLU then 1x1 conv with Tanh."""
    weight, _bias = weights.conv("decoder.conv1")
    if features.ndim != 4 or features.shape[1] != weight.shape[1]:
        raise ShapeError(
            f"decode: expected [N,{weight.shape[1]},H,W] features, got {features.shape}"
        )
    x = _conv_act(features, weights, "decoder.conv1", pad=1)
    weight, bias = weights.conv("decoder.conv2")
    return tanh(conv2d(x, weight, bias))


def conv_down(feature_map, weights, prefix):
    """4x4 stride-2 conv (C -> 4C, pad 1) then 1x1 conv, both LeakyReLU."""
    x = _conv_act(feature_map, weights, f"{prefix}.conv1", stride=2, pad=1)
    return _conv_act(x, weights, f"{prefix}.conv2")


def conv_up(feature_map, weights, prefix):
    """Bilinear 2x upsampling then 1x1 conv (C -> C/4) and 1x1 conv, both LeakyReLU."""
    x = bilinear_upsample_2x(feature_map)
    x = _conv_act(x, weights, f"{prefix}.conv1")
    return _conv_act(x, weights, f"{prefix}.conv2")


def conv_fuse(skip, upsampled, weights, prefix):
    """Concatenate skip and upsampled features along channels, then two 1x1 convs
    (halving, then preserving the channel count), both LeakyReLU."""
    if skip.shape[0] != upsampled.shape[0] or skip.shape[2:] != upsampled.shape[2:]:
        raise ShapeError(f"conv_fuse: cannot join {skip.shape} and {upsampled.shape}")
    x = concat([skip, upsampled], axis=1)
    x = _conv_act(x, weights, f"{prefix}.conv1")
    return _conv_act(x, weights, f"{prefix}.conv2")
