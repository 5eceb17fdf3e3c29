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
""" Evaluation metrics, the naive tiling baseline and attention map rendering """
from .quality import ssim, ssim_map, gaussian_window, crop_boxes, crop_feature_distance, naive_tile
from .attention import extract_attention, render_attention_overlay, feature_background
from .evaluation import evaluate, score, report_yaml, METRICS
