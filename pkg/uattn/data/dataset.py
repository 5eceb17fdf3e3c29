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
Texture datasets: a flat directory of images or a procedural manifest, turned into
center-crop training pairs at a fixed size.
"""
import logging
import os
from concurrent.futures import ThreadPoolExecutor
import yaml as yaml_parser

from uattn.config import Validator, load_yaml
from uattn.config.textures import expand_textures
from uattn.errors import DataError
from uattn.threads import worker_count
from .imageio import list_images, load_image
from .pairs import make_pair, resize_bilinear
from .procedural import ProceduralSpec, generate

logger = logging.getLogger("uattn.data")
logger.addHandler(logging.NullHandler())


class TextureDataset:
    """An ordered list of TexturePairs of one size."""

    def __init__(self, pairs, size):
        self.pairs = list(pairs)
        self.size = int(size)
        for pair in self.pairs:
            if pair.target.shape != (3, self.size, self.size):
                raise DataError(f"{pair.name}: target shape {pair.target.shape} is not 3x{size}x{size}")

    def __len__(self):
        return len(self.pairs)

    def __getitem__(self, index):
        return self.pairs[index]

    def __iter__(self):
        return iter(self.pairs)

    def names(self):
        return [pair.name for pair in self.pairs]

    @classmethod
    def from_targets(cls, targets, size, names=None):
        """Build pairs from already sized [3,S,S] target images."""
        names = names or [f"texture{i}" for i in range(len(targets))]
        return cls([make_pair(t, n) for t, n in zip(targets, names)], size)

    @classmethod
    def from_directory(cls, directory, size, workers=None):
        """Load every .ppm/.png of a flat directory (sorted by name), resized to
        size x size. Files are read concurrently; the order stays the sorted order."""
        paths = list_images(directory)
        if not paths:
            raise DataError(f"{directory}: no .ppm or .png images")
        workers = worker_count() if workers is None else max(int(workers), 1)

        def load(path):
            image = load_image(path)
            if image.shape[1:] != (size, size):
                image = resize_bilinear(image, size)
            return image

        with ThreadPoolExecutor(max_workers=workers) as pool:
            targets = list(pool.map(load, paths))
        names = [os.path.splitext(os.path.basename(p))[0] for p in paths]
        logger.info(f"Loaded {len(targets)} images from {directory} at {size}px")
        return cls.from_targets(targets, size, names)

    @classmethod
    def from_specs(cls, specs, size, workers=None):
        """Render a list of ProceduralSpec."""
        if not specs:
            raise DataError("procedural dataset has no textures")
        workers = worker_count() if workers is None else max(int(workers), 1)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            targets = list(pool.map(lambda spec: generate(spec, size), specs))
        return cls.from_targets(targets, size, [spec.name() for spec in specs])

    @classmethod
    def from_config(cls, yaml, size, workers=None):
        """Render the 'textures' section of a validated configuration."""
        specs = [ProceduralSpec.from_dict(entry) for entry in expand_textures(yaml)]
        return cls.from_specs(specs, size, workers)

    @classmethod
    def from_manifest(cls, path, size, schema=None, workers=None):
        """Load a YAML manifest with a 'textures' list, check it with the config
        validators and render it."""
        try:
            yaml = load_yaml(path)
        except OSError as err:
            raise DataError(f"{path}: {err}") from err
        except yaml_parser.YAMLError as err:
            raise DataError(f"{path}: cannot parse manifest: {err}") from err
        if not isinstance(yaml, dict):
            raise DataError(f"{path}: manifest must be a YAML mapping")
        yaml.setdefault("train", {})
        yaml["train"] = dict(yaml["train"] or {}, size=size)
        retval, msgs = Validator(schema=schema).validate(yaml)
        if not retval:
            raise DataError(f"{path}: " + "; ".join(msgs))
        dataset = cls.from_config(yaml, size, workers)
        logger.info(f"Rendered {len(dataset)} procedural textures from {path} at {size}px")
        return dataset
