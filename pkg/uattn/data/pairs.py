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
""" Training pairs: resizing, center-crop inputs and the seeded batch stream """
from dataclasses import dataclass
import numpy as np

from uattn.errors import DataError
from uattn.tensor import SplitMix64


def _axis_samples(src, dst):
    # Half-pixel centers: output i reads source coordinate (i + 0.5) * src / dst - 0.5.
    pos = (np.arange(dst, dtype=np.float64) + 0.5) * src / dst - 0.5
    pos = np.clip(pos, 0.0, src - 1.0)
    lo = np.floor(pos).astype(np.int64)
    hi = np.minimum(lo + 1, src - 1)
    return lo, hi, pos - lo


def resize_bilinear(image, target_size):
    """Resize a [3,H,W] image to target_size x target_size by bilinear sampling."""
    image = np.asarray(image)
    if image.ndim != 3:
        raise DataError(f"resize_bilinear: expected [C,H,W], got {image.shape}")
    height, width = image.shape[1:]
    if min(height, width) < 2 or target_size < 1:
        raise DataError(f"resize_bilinear: cannot resize {height}x{width} to {target_size}")
    y0, y1, fy = _axis_samples(height, target_size)
    x0, x1, fx = _axis_samples(width, target_size)
    src = image.astype(np.float64)
    rows = src[:, y0, :] * (1.0 - fy)[None, :, None] + src[:, y1, :] * fy[None, :, None]
    out = rows[:, :, x0] * (1.0 - fx)[None, None, :] + rows[:, :, x1] * fx[None, None, :]
    return out.astype(image.dtype)


@dataclass
class TexturePair:
    """A training example. `input` is zero except for the central S/2 x S/2 window,
    which equals the same window of `target`."""

    input: np.ndarray
    target: np.ndarray
    name: str = ""

    @property
    def size(self):
        return self.target.shape[-1]

    def crop(self):
        """The known central window, [3, S/2, S/2]."""
        lo, hi = crop_bounds(self.size)
        return self.input[:, lo:hi, lo:hi]


def crop_bounds(size):
    """Row/column range [lo, hi) of the central S/2 window."""
    return size // 4, size // 4 + size // 2


def make_pair(target, name=""):
    """Build the zero-padded center-crop input for a square target image."""
    target = np.asarray(target)
    if target.ndim != 3 or target.shape[1] != target.shape[2]:
        raise DataError(f"make_pair: expected a square [3,S,S] target, got {target.shape}")
    size = target.shape[1]
    if size % 4:
        raise DataError(f"make_pair: size {size} is not divisible by 4")
    lo, hi = crop_bounds(size)
    inputs = np.zeros_like(target)
    inputs[:, lo:hi, lo:hi] = target[:, lo:hi, lo:hi]
    return TexturePair(inputs, target, name)


@dataclass
class Batch:
    """Stacked inputs and targets [B,3,S,S] with the dataset indices they came from."""

    indices: list
    inputs: np.ndarray
    targets: np.ndarray

    def __len__(self):
        return len(self.indices)


def epoch_order(count, epoch_seed):
    """The dataset permutation of an epoch, a pure function of the seed."""
    return SplitMix64(epoch_seed).fork("epoch").permutation(count)


def batches(dataset, batch_size, epoch_seed):
    """Yield the batches of one epoch in seed-determined order. The last partial batch
    is dropped."""
    count = len(dataset)
    if count == 0:
        raise DataError("batches: dataset is empty")
    if batch_size < 1 or batch_size > count:
        raise DataError(f"batches: batch size {batch_size} for a dataset of {count}")
    order = epoch_order(count, epoch_seed)
    for start in range(0, count - batch_size + 1, batch_size):
        indices = [int(i) for i in order[start : start + batch_size]]
        pairs = [dataset[i] for i in indices]
        yield Batch(
            indices,
            np.stack([p.input for p in pairs]),
            np.stack([p.target for p in pairs]),
        )


def batches_per_epoch(count, batch_size):
    return count // batch_size
