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
""" The U-Attention generator and its ablation variants """
from .geometry import (
    StageSpec,
    PatchSequence,
    partition,
    arrange_back,
    hourglass_schedule,
    flat_schedule,
    check_size,
)
from .weights import ArchVariant, ModelWeights, build_model, layer_shapes
from .layers import (
    AttentionParams,
    LayerParams,
    self_attention,
    transformer_layer,
    t_block,
    encode,
    decode,
    conv_down,
    conv_up,
    conv_fuse,
)
from .network import AttentionRecord, forward, schedule_for, synthesize, pad_exemplar
