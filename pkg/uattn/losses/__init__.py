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
""" Training objectives and the patch discriminator """
from .extractor import FrozenExtractor
from .objectives import (
    LossWeights,
    LossReport,
    l1_loss,
    perceptual_loss,
    gram,
    style_loss,
    gan_losses,
    weighted_sum,
    total_loss,
)
from .discriminator import Discriminator, discriminate
