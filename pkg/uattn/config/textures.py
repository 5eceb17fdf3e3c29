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
""" A uattn configuration module that handles procedural 'textures' entries """
import logging

from .train import get_train

KINDS = ("checker", "stripes", "bricks", "value_noise", "blob_lattice")
PERIODIC_KINDS = ("checker", "stripes", "bricks", "blob_lattice")
EVEN_PERIOD_KINDS = ("checker", "stripes", "bricks")
DEFAULT_PERIOD = 16


def get_textures(yaml):
    """Return the list of 'textures' entries as given."""
    if not yaml or not "textures" in yaml or not yaml["textures"]:
        return []
    return list(yaml["textures"])


def expand_textures(yaml):
    """Return one entry per texture, expanding 'count' into consecutive seeds."""
    ret = []
    for entry in get_textures(yaml):
        count = int(entry.get("count", 1))
        seed = int(entry.get("seed", 0))
        for i in range(count):
            item = {k: v for k, v in entry.items() if k != "count"}
            item["seed"] = seed + i
            ret.append(item)
    return ret


def get_period(entry):
    return int(entry.get("period", DEFAULT_PERIOD))


def validate_textures(yaml):
    """Validate the semantics of all 'textures' entries"""
    result = True
    msgs = []
    logger = logging.getLogger("uattn.config")
    logger.addHandler(logging.NullHandler())

    size = int(get_train(yaml)["size"])
    for idx, entry in enumerate(get_textures(yaml)):
        logger.debug(f"texture {idx}: {entry}")
        kind = entry["kind"]
        period = get_period(entry)
        if kind in EVEN_PERIOD_KINDS and period % 2:
            msgs.append(f"texture {idx} kind {kind} period {period} must be even")
            result = False
        elif kind in PERIODIC_KINDS and size % period:
            msgs.append(f"texture {idx} kind {kind} period {period} does not divide size {size}")
            result = False
    return result, msgs
