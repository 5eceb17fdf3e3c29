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
""" A uattn configuration module that handles the 'train', 'loss' and 'seeds' sections """
import logging

ARCHS = ["uattn", "baseline", "pyramid", "hourglass-simple"]

TRAIN_DEFAULTS = {
    "arch": "uattn",
    "size": 128,
    "batch": 8,
    "epochs": 100,
    "lr": 0.001,
    "use-gan": True,
    "checkpoint-every": 1000,
}
LOSS_DEFAULTS = {"l1": 1.0, "perceptual": 0.01, "style": 200.0, "gan": 0.1}
SEED_DEFAULTS = {"model": 0, "data": 0, "extractor": 1234}
SIZE_MULTIPLE = 32


def _section(yaml, name, defaults):
    ret = dict(defaults)
    if yaml and name in yaml and yaml[name]:
        ret.update(yaml[name])
    return ret


def get_train(yaml):
    """Return the 'train' section with defaults filled in."""
    return _section(yaml, "train", TRAIN_DEFAULTS)


def get_loss(yaml):
    """Return the 'loss' section with defaults filled in."""
    return _section(yaml, "loss", LOSS_DEFAULTS)


def get_seeds(yaml):
    """Return the 'seeds' section with defaults filled in."""
    return _section(yaml, "seeds", SEED_DEFAULTS)


def get_size(yaml):
    """Return the training input size, or None if the config does not set one."""
    try:
        return int(yaml["train"]["size"])
    except (KeyError, TypeError):
        return None


def validate_train(yaml):
    """Validate the semantics of the 'train' section"""
    result = True
    msgs = []
    logger = logging.getLogger("uattn.config")
    logger.addHandler(logging.NullHandler())

    if not "train" in yaml or not yaml["train"]:
        return result, msgs

    train = get_train(yaml)
    logger.debug(f"train: {train}")
    if train["size"] % SIZE_MULTIPLE:
        msgs.append(f"train size {train['size']} is not a multiple of {SIZE_MULTIPLE}")
        result = False
    if train["use-gan"] and train["batch"] < 2:
        msgs.append(
            f"train batch {train['batch']} is too small for the discriminator, need 2 or more"
        )
        result = False
    if train["lr"] <= 0:
        msgs.append(f"train lr {train['lr']} must be positive")
        result = False
    return result, msgs


def validate_loss(yaml):
    """Validate the semantics of the 'loss' section"""
    result = True
    msgs = []

    if not "loss" in yaml or not yaml["loss"]:
        return result, msgs

    loss = get_loss(yaml)
    if all(value == 0 for value in loss.values()):
        msgs.append("loss weights are all zero")
        result = False
    if loss["gan"] > 0 and not get_train(yaml)["use-gan"]:
        logger = logging.getLogger("uattn.config")
        logger.warning(f"loss gan weight {loss['gan']} has no effect with use-gan off")
    return result, msgs
