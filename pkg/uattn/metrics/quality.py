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
Image quality measures: SSIM, the crop feature distance and the naive tiling
baseline. Images are [3,H,W] arrays in [-1,1].
"""
import logging
import numpy as np
from scipy import signal

from uattn.errors import ShapeError
from uattn.losses import FrozenExtractor, perceptual_loss
from uattn.tensor import SplitMix64, Tensor

logger = logging.getLogger("uattn.metrics")
logger.addHandler(logging.NullHandler())

SSIM_WINDOW = 11
SSIM_SIGMA = 1.5
SSIM_K1 = 0.01
SSIM_K2 = 0.03
DEFAULT_CROPS = 8
DEFAULT_CROP_FRAC = 0.5


def gaussian_window(size=SSIM_WINDOW, sigma=SSIM_SIGMA):
    """Normalized 2D Gaussian kernel."""
    axis = np.arange(size, dtype=np.float64) - (size - 1) / 2.0
    profile = np.exp(-(axis**2) / (2.0 * sigma**2))
    window = np.outer(profile, profile)
    return window / window.sum()


def _as_unit(image):
    return (np.asarray(image, dtype=np.float64) + 1.0) / 2.0


def _check_images(a, b, what):
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ShapeError(f"{what}: shapes {a.shape} and {b.shape} differ")
    if a.ndim != 3:
        raise ShapeError(f"{what}: expected [C,H,W] images, got {a.shape}")
    return a, b


def ssim_map(a, b, window=None):
    """Per-channel SSIM maps over every full window position, [C,H-10,W-10] for the
    default window. Inputs in [-1,1] are compared on the unit range."""
    a, b = _check_images(a, b, "ssim")
    window = gaussian_window() if window is None else window
    if min(a.shape[1:]) < window.shape[0]:
        raise ShapeError(f"ssim: image {a.shape[1]}x{a.shape[2]} is smaller than the {window.shape[0]}px window")
    c1 = SSIM_K1**2
    c2 = SSIM_K2**2

    def local_mean(x):
        return signal.convolve2d(x, window, mode="valid")

    maps = []
    for x, y in zip(_as_unit(a), _as_unit(b)):
        mu_x = local_mean(x)
        mu_y = local_mean(y)
        var_x = local_mean(x * x) - mu_x**2
        var_y = local_mean(y * y) - mu_y**2
        cov = local_mean(x * y) - mu_x * mu_y
        numerator = (2.0 * mu_x * mu_y + c1) * (2.0 * cov + c2)
        denominator = (mu_x**2 + mu_y**2 + c1) * (var_x + var_y + c2)
        maps.append(numerator / denominator)
    return np.stack(maps)


def ssim(a, b):
    """Mean SSIM, averaged over window positions then channels."""
    return float(ssim_map(a, b).mean(axis=(1, 2)).mean())


def crop_boxes(size, n_crops=DEFAULT_CROPS, crop_frac=DEFAULT_CROP_FRAC, seed=0):
    """Return n_crops (top, left, side) boxes, a pure function of the seed."""
    height, width = size
    side = int(round(min(height, width) * crop_frac))
    if side <= 0 or side > min(height, width):
        raise ShapeError(f"crop fraction {crop_frac} does not fit a {height}x{width} image")
    rng = SplitMix64(seed).fork("crops")
    tops = rng.integers((n_crops,), height - side + 1)
    lefts = rng.integers((n_crops,), width - side + 1)
    return [(int(t), int(l), side) for t, l in zip(tops, lefts)]


def crop_feature_distance(a, b, n_crops=DEFAULT_CROPS, crop_frac=DEFAULT_CROP_FRAC, seed=0, extractor=None):
    """Mean perceptual distance over aligned crops taken at the same positions in
    both images."""
    a, b = _check_images(a, b, "crop_feature_distance")
    extractor = extractor or FrozenExtractor()
    boxes = crop_boxes(a.shape[1:], n_crops, crop_frac, seed)
    crops_a = np.stack([a[:, t : t + s, l : l + s] for t, l, s in boxes]).astype(np.float32)
    crops_b = np.stack([b[:, t : t + s, l : l + s] for t, l, s in boxes]).astype(np.float32)
    distances = []
    for crop_a, crop_b in zip(crops_a, crops_b):
        distances.append(perceptual_loss(Tensor(crop_a), Tensor(crop_b), extractor).item())
    return float(np.mean(distances))


def naive_tile(pair):
    """Tile the known central crop across the whole frame, each copy at its offset
    relative to the crop, so the crop itself stays where it was."""
    crop = np.asarray(pair.crop())
    quarter = pair.size // 4
    return np.roll(np.tile(crop, (1, 2, 2)), (quarter, quarter), axis=(1, 2))
