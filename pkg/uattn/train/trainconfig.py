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
""" Training configuration, read from and written to the YAML config layout """
import dataclasses
from dataclasses import dataclass, field
import yaml as yaml_parser

from uattn.config import train as train_section
from uattn.errors import ConfigError
from uattn.losses import LossWeights
from uattn.model import ArchVariant


@dataclass
class TrainConfig:
    """Everything a training run depends on besides the dataset. use_gan=False trains
    the generator without the discriminator."""

    variant: ArchVariant = ArchVariant.UATTENTION
    input_hw: int = train_section.TRAIN_DEFAULTS["size"]
    batch_size: int = train_section.TRAIN_DEFAULTS["batch"]
    epochs: int = train_section.TRAIN_DEFAULTS["epochs"]
    lr: float = train_section.TRAIN_DEFAULTS["lr"]
    loss: LossWeights = field(default_factory=LossWeights)
    model_seed: int = train_section.SEED_DEFAULTS["model"]
    data_seed: int = train_section.SEED_DEFAULTS["data"]
    extractor_seed: int = train_section.SEED_DEFAULTS["extractor"]
    use_gan: bool = train_section.TRAIN_DEFAULTS["use-gan"]
    checkpoint_every: int = train_section.TRAIN_DEFAULTS["checkpoint-every"]

    def __post_init__(self):
        self.variant = ArchVariant(self.variant)

    @classmethod
    def from_yaml(cls, yaml):
        """Build from a (validated) configuration map; absent keys take defaults."""
        train = train_section.get_train(yaml)
        loss = train_section.get_loss(yaml)
        seeds = train_section.get_seeds(yaml)
        try:
            return cls(
                variant=ArchVariant(train["arch"]),
                input_hw=int(train["size"]),
                batch_size=int(train["batch"]),
                epochs=int(train["epochs"]),
                lr=float(train["lr"]),
                loss=LossWeights(
                    l1=float(loss["l1"]),
                    perceptual=float(loss["perceptual"]),
                    style=float(loss["style"]),
                    gan=float(loss["gan"]),
                ),
                model_seed=int(seeds["model"]),
                data_seed=int(seeds["data"]),
                extractor_seed=int(seeds["extractor"]),
                use_gan=bool(train["use-gan"]),
                checkpoint_every=int(train["checkpoint-every"]),
            )
        except (TypeError, ValueError) as err:
            raise ConfigError(f"invalid configuration: {err}") from err

    def to_yaml(self):
        """Return the configuration map this config was (or could have been) read from."""
        return {
            "train": {
                "arch": self.variant.value,
                "size": self.input_hw,
                "batch": self.batch_size,
                "epochs": self.epochs,
                "lr": self.lr,
                "use-gan": self.use_gan,
                "checkpoint-every": self.checkpoint_every,
            },
            "loss": self.loss.to_dict(),
            "seeds": {
                "model": self.model_seed,
                "data": self.data_seed,
                "extractor": self.extractor_seed,
            },
        }

    def dumps(self):
        return yaml_parser.safe_dump(self.to_yaml(), sort_keys=False)

    @classmethod
    def loads(cls, text):
        try:
            return cls.from_yaml(yaml_parser.safe_load(text) or {})
        except yaml_parser.YAMLError as err:
            raise ConfigError(f"cannot parse configuration: {err}") from err

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)
