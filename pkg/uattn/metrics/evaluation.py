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
Evaluation over a dataset: per-image metrics for the model output and, optionally,
the naive tiling baseline, plus their means, written as a YAML report.
"""
import logging
import numpy as np
import yaml as yaml_parser

from uattn.errors import DataError
from uattn.losses import FrozenExtractor
from uattn.model import synthesize
from .quality import crop_feature_distance, naive_tile, ssim

logger = logging.getLogger("uattn.metrics")
logger.addHandler(logging.NullHandler())

METRICS = ("ssim", "cfd")
MODEL = "model"
BASELINE = "naive-tile"


def score(output, target, metrics=METRICS, extractor=None, seed=0):
    """Return {metric: value} comparing output to target."""
    values = {}
    for metric in metrics:
        if metric == "ssim":
            values[metric] = ssim(output, target)
        elif metric == "cfd":
            values[metric] = crop_feature_distance(output, target, seed=seed, extractor=extractor)
        else:
            raise ValueError(f"unknown metric {metric}, expecting one of {METRICS}")
    return values


def evaluate(dataset, weights=None, metrics=METRICS, baseline=False, extractor=None, seed=0):
    """Score every pair of `dataset`. With `weights`, the model output is scored in the
    'model' column; with `baseline`, naive tiling in the 'naive-tile' column (no model
    forward involved). Returns {'images': [...], 'mean': {column: {metric: value}}}."""
    if len(dataset) == 0:
        raise DataError("evaluate: dataset is empty")
    if weights is None and not baseline:
        raise ValueError("evaluate: nothing to score, give weights or ask for the baseline")
    extractor = extractor or FrozenExtractor()
    images = []
    for pair in dataset:
        entry = {"name": pair.name}
        if weights is not None:
            output = synthesize(weights, pair.input, size=pair.size)
            entry[MODEL] = score(output, pair.target, metrics, extractor, seed)
        if baseline:
            entry[BASELINE] = score(naive_tile(pair), pair.target, metrics, extractor, seed)
        logger.debug(f"Scored {pair.name}")
        images.append(entry)

    mean = {}
    for column in (MODEL, BASELINE):
        if column in images[0]:
            mean[column] = {metric: float(np.mean([e[column][metric] for e in images])) for metric in metrics}
    return {"images": images, "mean": mean}


def report_yaml(report):
    """Render an evaluate() report as YAML."""
    return yaml_parser.safe_dump(report, sort_keys=False, default_flow_style=False)
