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
""" Training: configuration, checkpoints and the training loop """
from .trainconfig import TrainConfig
from .checkpoint import (
    TrainState,
    encode_checkpoint,
    decode_checkpoint,
    save_checkpoint,
    load_checkpoint,
    checkpoint_name,
)
from .engine import Trainer, train, fine_tune, epoch_seed, read_metrics, LOG_NAME
