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
""" Unit tests for the SplitMix64 generator """
import unittest
import numpy as np

from .rng import SplitMix64


class TestSplitMix64(unittest.TestCase):
    def test_reference_value(self):
        ## First output of the reference SplitMix64 seeded with 0
        self.assertEqual(int(SplitMix64(0).next_words(1)[0]), 0xE220A8397B1DCDAF)

    def test_deterministic(self):
        a = SplitMix64(7).fork("encoder.conv1.weight").uniform((4, 4))
        b = SplitMix64(7).fork("encoder.conv1.weight").uniform((4, 4))
        np.testing.assert_array_equal(a, b)

    def test_stream_continues(self):
        whole = SplitMix64(3).next_words(6)
        stream = SplitMix64(3)
        parts = np.concatenate([stream.next_words(2), stream.next_words(4)])
        np.testing.assert_array_equal(whole, parts)

    def test_forks_differ(self):
        base = SplitMix64(7)
        self.assertFalse(np.array_equal(base.fork("a").uniform(8), base.fork("b").uniform(8)))

    def test_ranges(self):
        values = SplitMix64(1).uniform((1000,), -2.0, 3.0)
        self.assertTrue(np.all(values >= -2.0) and np.all(values < 3.0))
        ints = SplitMix64(1).integers((1000,), 5)
        self.assertEqual(set(ints.tolist()), {0, 1, 2, 3, 4})

    def test_permutation(self):
        perm = SplitMix64(9).permutation(20)
        self.assertEqual(sorted(perm.tolist()), list(range(20)))


if __name__ == "__main__":
    unittest.main()
