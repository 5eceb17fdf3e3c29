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
A counter-based SplitMix64 generator. Every draw is a pure function of the seed and the
position in the stream, so weight initialization, procedural textures and batch orders
are bit-reproducible across runs, processes and platforms.

The mixing function is the reference one:
    z = state + (i + 1) * 0x9E3779B97F4A7C15
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    z = z ^ (z >> 31)
with all arithmetic modulo 2**64.
"""
import zlib
import numpy as np

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
MIX1 = np.uint64(0xBF58476D1CE4E5B9)
MIX2 = np.uint64(0x94D049BB133111EB)
MASK64 = (1 << 64) - 1


def _mix(z):
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * MIX1
        z = (z ^ (z >> np.uint64(27))) * MIX2
    return z ^ (z >> np.uint64(31))


class SplitMix64:
    """Stream of 64-bit words. The stream keeps a position so that consecutive calls
    continue where the previous one ended."""

    def __init__(self, seed):
        self.seed = int(seed) & MASK64
        self.position = 0

    def fork(self, label):
        """Return an independent stream derived from this seed and a string label, so
        that e.g. every named weight tensor draws from its own stream."""
        salt = zlib.crc32(str(label).encode("utf-8"))
        head = _mix(np.array([self.seed ^ (salt << 32 | salt)], dtype=np.uint64))
        return SplitMix64(int(head[0]))

    def next_words(self, count):
        """Return the next `count` raw uint64 words."""
        idx = np.arange(self.position + 1, self.position + count + 1, dtype=np.uint64)
        self.position += count
        with np.errstate(over="ignore"):
            state = np.uint64(self.seed) + idx * GOLDEN
        return _mix(state)

    def uniform(self, shape, low=0.0, high=1.0):
        """Return float64 values in [low, high) with the given shape, using the top
        53 bits of each word."""
        count = int(np.prod(shape, dtype=np.int64))
        words = self.next_words(count)
        unit = (words >> np.uint64(11)).astype(np.float64) * (1.0 / (1 << 53))
        return (low + (high - low) * unit).reshape(shape)

    def integers(self, shape, high):
        """Return int64 values in [0, high)."""
        return np.floor(self.uniform(shape) * high).astype(np.int64)

    def permutation(self, count):
        """Return a permutation of range(count), a pure function of the stream state."""
        keys = self.next_words(count)
        return np.argsort(keys, kind="stable")

    def normal(self, shape):
        """Return standard normal values (Box-Muller on two uniform draws)."""
        count = int(np.prod(shape, dtype=np.int64))
        u1 = self.uniform((count,))
        u2 = self.uniform((count,))
        radius = np.sqrt(-2.0 * np.log1p(-u1))
        return (radius * np.cos(2.0 * np.pi * u2)).reshape(shape)
