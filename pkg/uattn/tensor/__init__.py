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
""" A minimal dense-tensor library with reverse-mode automatic differentiation """
from .autodiff import Tensor, tensor, concat, stack
from .ops import (
    conv2d,
    conv3d,
    bilinear_upsample_2x,
    matmul,
    softmax_rows,
    pointwise,
    leaky_relu,
    relu,
    tanh,
    layer_norm_channels,
)
from .spectral import SpectralState, spectral_normalize
from .adam import Adam, AdamState, adam_step
from .rng import SplitMix64
