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
""" Reconstruction, perceptual, style and adversarial objectives and their weighted sum """
from dataclasses import dataclass, asdict, field
from typing import Optional
import numpy as np

from uattn.errors import ShapeError
from uattn.tensor import Tensor, matmul, relu

DEFAULT_L1 = 1.0
DEFAULT_PERCEPTUAL = 0.01
DEFAULT_STYLE = 200.0
DEFAULT_GAN = 0.1


@dataclass
class LossWeights:
    """Multipliers of the four generator loss terms."""

    l1: float = DEFAULT_L1
    perceptual: float = DEFAULT_PERCEPTUAL
    style: float = DEFAULT_STYLE
    gan: float = DEFAULT_GAN

    def __post_init__(self):
        for key, value in asdict(self).items():
            if value < 0:
                raise ValueError(f"loss weight {key} must be nonnegative, got {value}")

    def to_dict(self):
        return asdict(self)


@dataclass
class LossReport:
    """Scalar values of every loss term. `objective` is the differentiable total."""

    l1: float
    perceptual: float
    style: float
    gan_g: float
    total: float
    d_loss: Optional[float] = None
    objective: Optional[Tensor] = field(default=None, repr=False, compare=False)

    def values(self):
        """Return the scalar fields as a dict, in log column order."""
        return {
            "l1": self.l1,
            "perceptual": self.perceptual,
            "style": self.style,
            "gan_g": self.gan_g,
            "total": self.total,
            "d_loss": self.d_loss,
        }


def _check_pair(a, b, what):
    if a.shape != b.shape:
        raise ShapeError(f"{what}: shape mismatch {a.shape} vs {b.shape}")


def l1_loss(a, b):
    """Mean absolute difference."""
    _check_pair(a, b, "l1_loss")
    return (a - b).abs().mean()


def perceptual_loss(a, b, extractor):
    """Mean over the extractor stages of the mean absolute feature difference."""
    _check_pair(a, b, "perceptual_loss")
    stages = list(zip(extractor.extract(a), extractor.extract(b)))
    total = None
    for fa, fb in stages:
        term = (fa - fb).abs().mean()
        total = term if total is None else total + term
    return total * (1.0 / len(stages))


def gram(features):
    """G = F F^T / (C*H*W) for features [C,H,W] (or per sample of [N,C,H,W]), F being
    the features flattened to C x HW."""
    channels, height, width = features.shape[-3:]
    lead = features.shape[:-3]
    flat = features.reshape(lead + (channels, height * width))
    axes = tuple(range(len(lead))) + (len(lead) + 1, len(lead))
    return matmul(flat, flat.transpose(axes)) * (1.0 / (channels * height * width))


def style_loss(a, b, extractor):
    """Mean over the extractor stages of the mean absolute Gram matrix difference."""
    _check_pair(a, b, "style_loss")
    stages = list(zip(extractor.extract(a), extractor.extract(b)))
    total = None
    for fa, fb in stages:
        term = (gram(fa) - gram(fb)).abs().mean()
        total = term if total is None else total + term
    return total * (1.0 / len(stages))


def gan_losses(real_scores, fake_scores):
    """Hinge objectives: d_loss = mean(relu(1 - real)) + mean(relu(1 + fake)) and
    g_loss = -mean(fake)."""
    d_loss = relu(1.0 - real_scores).mean() + relu(1.0 + fake_scores).mean()
    g_loss = -fake_scores.mean()
    return d_loss, g_loss


def weighted_sum(l1, perceptual, style, gan_g, weights):
    """l1*w.l1 + perceptual*w.perceptual + style*w.style + gan_g*w.gan, evaluated left
    to right in the precision of the terms."""
    total = l1 * weights.l1 + perceptual * weights.perceptual
    return total + style * weights.style + gan_g * weights.gan


def total_loss(output, target, gan_g, weights, extractor):
    """Compute every generator loss term and their weighted total. `gan_g` is the
    adversarial generator term, or None when training without the discriminator."""
    _check_pair(output, target, "total_loss")
    l1 = l1_loss(output, target)
    perceptual = perceptual_loss(output, target, extractor)
    style = style_loss(output, target, extractor)
    if gan_g is None:
        gan_g = Tensor(np.zeros((), dtype=output.dtype))
    objective = weighted_sum(l1, perceptual, style, gan_g, weights)
    return LossReport(
        l1=l1.item(),
        perceptual=perceptual.item(),
        style=style.item(),
        gan_g=gan_g.item(),
        total=objective.item(),
        objective=objective,
    )
