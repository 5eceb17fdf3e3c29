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
""" Unit tests for the gradient checks of composite operations """
import unittest

from uattn.tensor.gradcheck import CHECKS, run_checks
from . import verify  # pylint: disable=unused-import

PRIMITIVES = [
    "conv2d",
    "conv3d",
    "bilinear_upsample_2x",
    "matmul",
    "softmax_rows",
    "leaky_relu",
    "tanh",
    "layer_norm_channels",
    "slice_concat",
]
COMPOSITES = [
    "self_attention",
    "transformer_layer",
    "l1_loss",
    "gram",
    "perceptual_loss",
    "style_loss",
    "gan_losses",
]


class TestVerifyMethods(unittest.TestCase):
    def test_registry(self):
        self.assertEqual(sorted(CHECKS), sorted(PRIMITIVES + COMPOSITES))

    def test_composites(self):
        for result in run_checks(COMPOSITES):
            self.assertTrue(result.passed, f"{result.name}: {result.worst:.3e}")

    def test_seed_independent(self):
        for result in run_checks(["self_attention", "l1_loss"], seed=5):
            self.assertTrue(result.passed, f"{result.name}: {result.worst:.3e}")


if __name__ == "__main__":
    unittest.main()
