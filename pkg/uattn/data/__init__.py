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
""" Texture data: procedural generators, image files, training pairs and datasets """
from .procedural import ProceduralSpec, generate, KINDS
from .imageio import load_image, save_image, parse_ppm, encode_ppm
from .pairs import TexturePair, Batch, make_pair, resize_bilinear, batches, crop_bounds
from .dataset import TextureDataset
