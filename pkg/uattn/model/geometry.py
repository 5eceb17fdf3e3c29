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
Patch geometry: partitioning feature maps into row-major patch sequences and back,
and the per-stage schedule (extent, channels, partition count) of each architecture.

Patch k of a P x P partition covers rows [(k // P) * H/P, ...) and columns
[(k % P) * W/P, ...). The attention sequence index equals the patch index.
"""
from dataclasses import dataclass
from typing import Optional
import numpy as np

from uattn.errors import ShapeError
from uattn.tensor import Tensor, stack

HOURGLASS_PARTITIONS = (2, 4, 8, 4, 2)
HOURGLASS_CHANNEL_FACTORS = (1, 4, 16, 4, 1)
HOURGLASS_SCALE = (1, 2, 4, 2, 1)
HOURGLASS_KERNELS = (3, 3, 1, 3, 3)
SIZE_MULTIPLE = 32


@dataclass(frozen=True)
class StageSpec:
    """Geometry of one transformer stage."""

    index: int
    H: int
    W: int
    C: int
    P: int
    kernel: int = 3

    def __post_init__(self):
        if self.H % self.P or self.W % self.P:
            raise ShapeError(f"stage {self.index}: P={self.P} does not divide {self.H}x{self.W}")

    @property
    def patch_h(self):
        """Patch height in pixels of this stage's feature map."""
        return self.H // self.P

    @property
    def patch_w(self):
        """Patch width in pixels of this stage's feature map."""
        return self.W // self.P

    @property
    def d(self):
        """Flattened patch length (H/P)*(W/P)*C."""
        return self.patch_h * self.patch_w * self.C

    @property
    def sequence_length(self):
        """Number of patches, P^2."""
        return self.P * self.P

    def footprint(self, input_hw):
        """Patch side expressed in input-image pixels."""
        return self.patch_h * input_hw // self.H

    def geometry(self):
        """Return (H, W, C, P), the geometry mirrored stages share."""
        return (self.H, self.W, self.C, self.P)


def check_size(input_hw):
    """Raise ShapeError unless input_hw is a positive multiple of 32."""
    if input_hw <= 0 or input_hw % SIZE_MULTIPLE:
        raise ShapeError(f"input size {input_hw} is not a positive multiple of {SIZE_MULTIPLE}")


def hourglass_schedule(input_hw, base_channels=16):
    """Return the five stages of the hourglass: extents S, S/2, S/4, S/2, S with
    partitions 2, 4, 8, 4, 2 and channels C, 4C, 16C, 4C, C."""
    check_size(input_hw)
    stages = []
    for i in range(5):
        extent = input_hw // HOURGLASS_SCALE[i]
        stages.append(
            StageSpec(
                index=i + 1,
                H=extent,
                W=extent,
                C=base_channels * HOURGLASS_CHANNEL_FACTORS[i],
                P=HOURGLASS_PARTITIONS[i],
                kernel=HOURGLASS_KERNELS[i],
            )
        )
    return stages


def flat_schedule(input_hw, partitions, channels=16):
    """Return stages at constant extent and channel count with the given partition
    counts, as used by the cascade, pyramid and simplified hourglass networks."""
    check_size(input_hw)
    return [
        StageSpec(index=i + 1, H=input_hw, W=input_hw, C=channels, P=p, kernel=3)
        for i, p in enumerate(partitions)
    ]


@dataclass
class PatchSequence:
    """P^2 equally shaped patches of a feature map, held as one tensor of shape
    [N, P^2, C, H/P, W/P] (row-major patch order)."""

    patches: Tensor
    grid: int
    batched: bool = True
    origin: Optional[StageSpec] = None
    attention: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.patches.ndim != 5:
            raise ShapeError(f"patch tensor must be rank 5, got {self.patches.shape}")
        if self.patches.shape[1] != self.grid * self.grid:
            raise ShapeError(
                f"{self.patches.shape[1]} patches do not form a {self.grid}x{self.grid} grid"
            )

    @classmethod
    def from_patches(cls, patches, grid, origin=None):
        """Build an unbatched sequence from a list of [C, h, w] patch tensors."""
        shapes = {p.shape for p in patches}
        if len(shapes) != 1:
            raise ShapeError(f"inconsistent patch shapes: {sorted(shapes)}")
        stacked = stack(patches, axis=0)
        stacked = stacked.reshape((1, len(patches)) + patches[0].shape)
        return cls(stacked, grid, batched=False, origin=origin)

    @property
    def count(self):
        """Number of patches in the sequence."""
        return self.patches.shape[1]

    @property
    def patch_shape(self):
        """Shape (C, h, w) shared by all patches."""
        return self.patches.shape[2:]

    def patch(self, k, sample=0):
        """Return patch k of the given batch sample as a [C, h, w] tensor."""
        return self.patches[sample, k]


def partition(feature_map, P, origin=None):
    """Tile a [C,H,W] or [N,C,H,W] map into a P x P row-major patch sequence."""
    batched = feature_map.ndim == 4
    if not batched:
        if feature_map.ndim != 3:
            raise ShapeError(f"partition expects [C,H,W] or [N,C,H,W], got {feature_map.shape}")
        feature_map = feature_map.reshape((1,) + feature_map.shape)
    n, c, h, w = feature_map.shape
    if P < 1 or h % P or w % P:
        raise ShapeError(f"partition: P={P} does not divide {h}x{w}")
    ph, pw = h // P, w // P
    tiles = feature_map.reshape(n, c, P, ph, P, pw).transpose(0, 2, 4, 1, 3, 5)
    return PatchSequence(tiles.reshape(n, P * P, c, ph, pw), P, batched, origin)


def arrange_back(seq):
    """Inverse of partition: stitch the patches back into a whole feature map."""
    n, count, c, ph, pw = seq.patches.shape
    P = seq.grid
    if count != P * P:
        raise ShapeError(f"arrange_back: {count} patches for a {P}x{P} grid")
    out = (
        seq.patches.reshape(n, P, P, c, ph, pw)
        .transpose(0, 3, 1, 4, 2, 5)
        .reshape(n, c, P * ph, P * pw)
    )
    if not seq.batched:
        out = out.reshape(c, P * ph, P * pw)
    return out
