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
""" Unit tests for pairs, resizing, batching and datasets """
import os
import tempfile
import unittest
import numpy as np

from uattn.errors import DataError
from uattn.tensor import Tensor, SplitMix64, bilinear_upsample_2x
from . import pairs
from .dataset import TextureDataset
from .imageio import save_image
from .procedural import ProceduralSpec, generate


def random_image(size, seed=0):
    return SplitMix64(seed).fork("image").uniform((3, size, size), -1.0, 1.0).astype(np.float32)


class TestResizeMethods(unittest.TestCase):
    def test_identity(self):
        image = random_image(16)
        np.testing.assert_allclose(pairs.resize_bilinear(image, 16), image, atol=1e-6)

    def test_constant(self):
        image = np.full((3, 8, 8), 0.25, dtype=np.float32)
        np.testing.assert_allclose(pairs.resize_bilinear(image, 16), 0.25, atol=1e-7)

    def test_matches_upsample(self):
        image = random_image(12, 3).astype(np.float64)
        ours = pairs.resize_bilinear(image, 24)
        theirs = bilinear_upsample_2x(Tensor(image[None])).data[0]
        np.testing.assert_allclose(ours, theirs, atol=1e-6)

    def test_degenerate(self):
        with self.assertRaises(DataError):
            pairs.resize_bilinear(np.zeros((3, 1, 8)), 16)


class TestPairMethods(unittest.TestCase):
    def test_crop_window(self):
        target = random_image(128, 1)
        pair = pairs.make_pair(target)
        mask = np.zeros((128, 128), dtype=bool)
        mask[32:96, 32:96] = True
        self.assertTrue(np.all(pair.input[:, ~mask] == 0.0))
        np.testing.assert_array_equal(pair.input[:, mask], target[:, mask])
        self.assertEqual(pair.input[0, 0, 0], 0.0)
        self.assertEqual(pair.input[1, 64, 64], target[1, 64, 64])
        self.assertEqual(pair.crop().shape, (3, 64, 64))

    def test_bad_size(self):
        with self.assertRaises(DataError):
            pairs.make_pair(np.zeros((3, 30, 30)))
        with self.assertRaises(DataError):
            pairs.make_pair(np.zeros((3, 32, 16)))


class TestBatchMethods(unittest.TestCase):
    def setUp(self):
        self.dataset = TextureDataset.from_targets([random_image(32, i) for i in range(20)], 32)

    def test_count(self):
        stream = list(pairs.batches(self.dataset, 8, epoch_seed=1))
        self.assertEqual(len(stream), 2)
        self.assertEqual(stream[0].inputs.shape, (8, 3, 32, 32))
        self.assertEqual(len(set(stream[0].indices + stream[1].indices)), 16)

    def test_seeded_order(self):
        a = [b.indices for b in pairs.batches(self.dataset, 8, epoch_seed=4)]
        b = [b.indices for b in pairs.batches(self.dataset, 8, epoch_seed=4)]
        self.assertEqual(a, b)
        c = [b.indices for b in pairs.batches(self.dataset, 8, epoch_seed=5)]
        self.assertNotEqual(a, c)

    def test_coverage(self):
        seen = set()
        for seed in (1, 2, 3):
            for batch in pairs.batches(self.dataset, 10, epoch_seed=seed):
                seen.update(batch.indices)
        self.assertEqual(seen, set(range(20)))
        seen = set()
        for seed in (1, 2):
            for batch in pairs.batches(self.dataset, 20, epoch_seed=seed):
                seen.update(batch.indices)
        self.assertEqual(seen, set(range(20)))

    def test_errors(self):
        with self.assertRaises(DataError):
            list(pairs.batches(self.dataset, 21, epoch_seed=0))
        with self.assertRaises(DataError):
            list(pairs.batches(TextureDataset([], 32), 1, epoch_seed=0))


class TestDatasetMethods(unittest.TestCase):
    def setUp(self):
        self.tmpdir = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.tmpdir.cleanup()

    def test_directory(self):
        for i, name in enumerate(("b", "a", "c")):
            save_image(random_image(16 * (i + 1), i), os.path.join(self.tmpdir.name, f"{name}.ppm"))
        dataset = TextureDataset.from_directory(self.tmpdir.name, 32, workers=3)
        self.assertEqual(dataset.names(), ["a", "b", "c"])
        self.assertTrue(all(p.target.shape == (3, 32, 32) for p in dataset))
        single = TextureDataset.from_directory(self.tmpdir.name, 32, workers=1)
        for p, q in zip(dataset, single):
            self.assertEqual(p.target.tobytes(), q.target.tobytes())

    def test_empty_directory(self):
        with self.assertRaises(DataError):
            TextureDataset.from_directory(self.tmpdir.name, 32)

    def test_manifest(self):
        path = os.path.join(self.tmpdir.name, "manifest.yaml")
        with open(path, "w", encoding="utf-8") as file:
            file.write("textures:\n  - kind: checker\n    period: 8\n    count: 3\n"
                       "  - kind: value_noise\n    seed: 9\n")
        dataset = TextureDataset.from_manifest(path, 32)
        self.assertEqual(len(dataset), 4)
        self.assertEqual(dataset.names()[2], "checker-s2-p8-ph0")
        expected = generate(ProceduralSpec("value_noise", seed=9), 32)
        np.testing.assert_array_equal(dataset[3].target, expected)

    def test_bad_manifest(self):
        path = os.path.join(self.tmpdir.name, "manifest.yaml")
        with open(path, "w", encoding="utf-8") as file:
            file.write("textures:\n  - kind: checker\n    period: 12\n")
        with self.assertRaises(DataError):
            TextureDataset.from_manifest(path, 32)
