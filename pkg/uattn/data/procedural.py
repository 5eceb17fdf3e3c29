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
Procedural texture generators. Every texture is a pure function of its spec and the
output size, with values in [-1, 1] and layout [3, S, S].
"""
import logging
from dataclasses import dataclass, field
import numpy as np

from uattn.config.textures import DEFAULT_PERIOD, EVEN_PERIOD_KINDS, KINDS, PERIODIC_KINDS
from uattn.errors import DataError
from uattn.tensor import SplitMix64

logger = logging.getLogger("uattn.data")
logger.addHandler(logging.NullHandler())

MIN_SIZE = 32
DEFAULT_PALETTE = ((-0.8, -0.6, -0.4), (0.8, 0.6, 0.4))


@dataclass(frozen=True)
class ProceduralSpec:
    """One procedural texture. `period` is the checker cell side, the stripe pair width,
    the brick length, the blob spacing or the noise lattice spacing, in pixels. `phase`
    shifts the pattern by that many pixels along both axes."""

    kind: str
    seed: int = 0
    period: int = DEFAULT_PERIOD
    palette: tuple = field(default=DEFAULT_PALETTE)
    phase: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DataError(f"unknown texture kind {self.kind}, expecting one of {KINDS}")
        if self.period < 2:
            raise DataError(f"{self.kind}: period {self.period} must be >= 2")
        if self.kind in EVEN_PERIOD_KINDS and self.period % 2:
            raise DataError(f"{self.kind}: period {self.period} must be even")
        if len(self.palette) < 2:
            raise DataError(f"{self.kind}: palette needs at least two colors")
        for color in self.palette:
            if len(color) != 3 or any(c < -1.0 or c > 1.0 for c in color):
                raise DataError(f"{self.kind}: palette color {color} is not an RGB triple in [-1, 1]")

    @classmethod
    def from_dict(cls, entry):
        """Build a spec from a manifest entry; unknown keys are ignored, `count` is the
        caller's business."""
        palette = entry.get("palette", DEFAULT_PALETTE)
        return cls(
            kind=entry["kind"],
            seed=int(entry.get("seed", 0)),
            period=int(entry.get("period", DEFAULT_PERIOD)),
            palette=tuple(tuple(float(c) for c in color) for color in palette),
            phase=int(entry.get("phase", 0)),
        )

    def to_dict(self):
        return {
            "kind": self.kind,
            "seed": self.seed,
            "period": self.period,
            "palette": [list(color) for color in self.palette],
            "phase": self.phase,
        }

    def name(self):
        return f"{self.kind}-s{self.seed}-p{self.period}-ph{self.phase}"


def _grid(size, phase):
    coords = np.arange(size, dtype=np.int64) + phase
    return coords[:, None], coords[None, :]


def _paint(index, palette):
    # index: [S,S] integer color index; returns [3,S,S]
    colors = np.asarray(palette, dtype=np.float64)
    return np.moveaxis(colors[index % len(colors)], -1, 0)


def _blend(weight, palette):
    # weight: [S,S] in [0,1] blending palette[0] to palette[1]
    lo, hi = (np.asarray(c, dtype=np.float64) for c in palette[:2])
    return lo[:, None, None] + weight[None] * (hi - lo)[:, None, None]


def _checker(spec, size):
    rows, cols = _grid(size, spec.phase)
    return _paint(rows // spec.period + cols // spec.period, spec.palette)


def _stripes(spec, size):
    rows, cols = _grid(size, spec.phase)
    return _paint((rows + cols) // (spec.period // 2), spec.palette)


def _bricks(spec, size):
    rows, cols = _grid(size, spec.phase)
    course = spec.period // 2
    shifted = cols + (rows // course) % 2 * course
    mortar = (rows % course == 0) | (shifted % spec.period == 0)
    return _paint(mortar.astype(np.int64), spec.palette)


def _smoothstep(t):
    return t * t * (3.0 - 2.0 * t)


def _value_noise(spec, size):
    cells = size // spec.period + 2
    lattice = SplitMix64(spec.seed).fork("value_noise").uniform((cells + 1, cells + 1))
    pos = (np.arange(size) + spec.phase % spec.period) / spec.period
    base = np.floor(pos).astype(np.int64)
    frac = _smoothstep(pos - base)
    fy, fx = frac[:, None], frac[None, :]
    y0, x0 = base[:, None], base[None, :]
    top = lattice[y0, x0] * (1 - fx) + lattice[y0, x0 + 1] * fx
    bottom = lattice[y0 + 1, x0] * (1 - fx) + lattice[y0 + 1, x0 + 1] * fx
    return _blend(top * (1 - fy) + bottom * fy, spec.palette)


def _blob_lattice(spec, size):
    rows, cols = _grid(size, spec.phase)
    radius = SplitMix64(spec.seed).fork("blob_lattice").uniform((1,), 0.2, 0.35)[0] * spec.period
    dy = (rows % spec.period) + 0.5 - spec.period / 2
    dx = (cols % spec.period) + 0.5 - spec.period / 2
    weight = np.exp(-(dy * dy + dx * dx) / (2.0 * radius * radius))
    return _blend(weight, spec.palette)


GENERATORS = {
    "checker": _checker,
    "stripes": _stripes,
    "bricks": _bricks,
    "value_noise": _value_noise,
    "blob_lattice": _blob_lattice,
}


def generate(spec, size):
    """Render `spec` as a float32 [3, size, size] image in [-1, 1]."""
    if size < MIN_SIZE:
        raise DataError(f"{spec.kind}: size {size} is smaller than {MIN_SIZE}")
    if spec.kind in PERIODIC_KINDS and size % spec.period:
        raise DataError(f"{spec.kind}: period {spec.period} does not divide size {size}")
    image = GENERATORS[spec.kind](spec, size)
    return np.clip(image, -1.0, 1.0).astype(np.float32)
