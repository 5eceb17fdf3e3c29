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
""" Unit tests for dataset evaluation and metric reports """
import unittest
from unittest import mock
import numpy as np
import yaml

from uattn.data import ProceduralSpec, TextureDataset
from uattn.errors import DataError
from uattn.losses import FrozenExtractor
from uattn.model import build_model
from . import evaluation


class TestEvaluateMethods(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        specs = [ProceduralSpec("checker", period=8), ProceduralSpec("value_noise", seed=2, period=8)]
        cls.dataset = TextureDataset.from_specs(specs, 32, workers=1)
        cls.extractor = FrozenExtractor()

    def test_self_score(self):
        target = self.dataset[1].target
        values = evaluation.score(target, target, extractor=self.extractor)
        self.assertAlmostEqual(values["ssim"], 1.0, delta=1e-9)
        self.assertEqual(values["cfd"], 0.0)

    def test_unknown_metric(self):
        target = self.dataset[0].target
        with self.assertRaises(ValueError):
            evaluation.score(target, target, metrics=("psnr",))

    def test_baseline_only(self):
        with mock.patch.object(evaluation, "synthesize") as synthesize:
            report = evaluation.evaluate(self.dataset, baseline=True, extractor=self.extractor)
            synthesize.assert_not_called()
        self.assertEqual([e["name"] for e in report["images"]], self.dataset.names())
        self.assertEqual(list(report["mean"]), ["naive-tile"])
        self.assertAlmostEqual(report["images"][0]["naive-tile"]["ssim"], 1.0, delta=1e-9)
        mean = np.mean([e["naive-tile"]["ssim"] for e in report["images"]])
        self.assertAlmostEqual(report["mean"]["naive-tile"]["ssim"], mean, delta=1e-12)

    def test_model_and_baseline(self):
        weights = build_model("uattn", 32, seed=0)
        report = evaluation.evaluate(self.dataset, weights, metrics=("ssim",), baseline=True, extractor=self.extractor)
        self.assertEqual(list(report["mean"]), ["model", "naive-tile"])
        for entry in report["images"]:
            self.assertEqual(list(entry["model"]), ["ssim"])
            self.assertLessEqual(abs(entry["model"]["ssim"]), 1.0)

    def test_report_yaml(self):
        report = evaluation.evaluate(self.dataset, baseline=True, extractor=self.extractor)
        self.assertEqual(yaml.safe_load(evaluation.report_yaml(report)), report)

    def test_empty(self):
        with self.assertRaises(DataError):
            evaluation.evaluate([], baseline=True)

    def test_nothing_to_score(self):
        with self.assertRaises(ValueError):
            evaluation.evaluate(self.dataset)


if __name__ == "__main__":
    unittest.main()
