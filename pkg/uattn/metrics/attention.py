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
Attention maps: pick the captured attention row of one output patch and draw it over
an image as a red tint per source patch, with black partition lines and the target
patch outlined in white.
"""
import dataclasses
import logging
import numpy as np

from uattn.errors import ShapeError
from uattn.model import forward

logger = logging.getLogger("uattn.metrics")
logger.addHandler(logging.NullHandler())

TINT = np.array([1.0, 0.0, 0.0])
TINT_STRENGTH = 0.6
GRID = 0.0
OUTLINE = 1.0


def extract_attention(weights, image, stage=1, row=0, col=0, layer=1, sample=0):
    """Run one capturing forward pass and return the AttentionRecord of transformer
    `layer` of block `stage`, targeted at output patch (row, col). The default target
    is the top-left patch."""
    block_count = weights.variant.block_count
    if not 1 <= stage <= block_count:
        raise ShapeError(f"stage {stage} is out of range 1..{block_count}")
    if layer not in (1, 2):
        raise ShapeError(f"layer {layer} is out of range 1..2")
    _out, records = forward(image, weights, capture_attention=True)
    for record in records:
        if (record.stage, record.layer, record.sample) == (stage, layer, sample):
            break
    else:
        raise ShapeError(f"no attention captured for stage {stage} sample {sample}")
    partitions = record.spec.P
    if not (0 <= row < partitions and 0 <= col < partitions):
        raise ShapeError(f"patch ({row},{col}) is outside the {partitions}x{partitions} grid of stage {stage}")
    logger.debug(f"Attention of stage {stage} layer {layer} patch ({row},{col}) over {partitions**2} patches")
    return dataclasses.replace(record, target=(row, col))


def feature_background(record):
    """The record's channel-mean feature map stretched to [-1,1], as a gray [3,H,W] image."""
    if record.features is None:
        raise ShapeError(f"stage {record.stage}: record carries no feature map")
    features = np.asarray(record.features, dtype=np.float64)
    low, high = features.min(), features.max()
    scaled = np.zeros_like(features) if high == low else (features - low) / (high - low) * 2.0 - 1.0
    return np.repeat(scaled[None], 3, axis=0)


def render_attention_overlay(record, base_image=None, target=None):
    """Draw the target row of `record` over `base_image` ([3,H,W] in [-1,1]; defaults to
    the record's feature map). H and W must split into the record's P x P grid. Returns
    a float32 [3,H,W] image in [-1,1]."""
    if target is not None:
        record = dataclasses.replace(record, target=tuple(target))
    if record.target is None:
        record = dataclasses.replace(record, target=(0, 0))
    base = feature_background(record) if base_image is None else np.asarray(base_image, dtype=np.float64)
    partitions = record.spec.P
    if base.ndim != 3 or base.shape[0] != 3:
        raise ShapeError(f"overlay: expected a [3,H,W] base image, got {base.shape}")
    height, width = base.shape[1:]
    if height % partitions or width % partitions:
        raise ShapeError(f"overlay: {height}x{width} image does not split into a {partitions}x{partitions} grid")
    patch_h, patch_w = height // partitions, width // partitions

    weights = np.asarray(record.weights, dtype=np.float64)
    alpha = TINT_STRENGTH * weights / weights.max()
    alpha = np.kron(alpha.reshape(partitions, partitions), np.ones((patch_h, patch_w)))
    unit = (base + 1.0) / 2.0
    unit = (1.0 - alpha) * unit + alpha * TINT[:, None, None]

    for k in range(1, partitions):
        unit[:, k * patch_h, :] = GRID
        unit[:, :, k * patch_w] = GRID

    row, col = record.target
    top, left = row * patch_h, col * patch_w
    bottom, right = top + patch_h - 1, left + patch_w - 1
    unit[:, top, left : right + 1] = OUTLINE
    unit[:, bottom, left : right + 1] = OUTLINE
    unit[:, top : bottom + 1, left] = OUTLINE
    unit[:, top : bottom + 1, right] = OUTLINE
    return (unit * 2.0 - 1.0).astype(np.float32)
