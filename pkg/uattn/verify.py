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
Gradient checks for the composite operations built on the tensor library: attention,
the transformer layer and every loss term. Importing this module adds them to the
registry of uattn.tensor.gradcheck next to the primitive ops.
"""
import numpy as np

from uattn.losses import FrozenExtractor, gan_losses, gram, l1_loss, perceptual_loss, style_loss
from uattn.model import AttentionParams, LayerParams, StageSpec, partition, self_attention, transformer_layer
from uattn.tensor.gradcheck import weighted_sum, random_leaf, register


def _attention_params(channels, seed):
    names = ("wq", "bq", "wk", "bk", "wv", "bv", "wo", "bo")
    values = {}
    for name in names:
        shape = (channels, channels, 1, 1) if name.startswith("w") else (channels,)
        leaf = random_leaf(shape, seed, name)
        leaf.data = leaf.data * 0.5
        values[name] = leaf
    return AttentionParams(**values)


@register("self_attention")
def _check_self_attention(seed):
    x = random_leaf((1, 3, 4, 4), seed, "map")
    params = _attention_params(3, seed)
    leaves = [x, params.wq, params.bk, params.wv, params.bo]

    def func():
        return weighted_sum(self_attention(partition(x, 2), params).patches, seed)

    return func, leaves


@register("transformer_layer")
def _check_transformer_layer(seed):
    stage = StageSpec(1, 4, 4, 3, 2)
    x = random_leaf((1, 3, 4, 4), seed, "map")
    params = LayerParams(
        attention=_attention_params(3, seed),
        ffn_weight=random_leaf((3, 3, 3, 3), seed, "ffn"),
        ffn_bias=random_leaf((3,), seed, "ffn_bias"),
        norm1_gain=random_leaf((3,), seed, "norm1_gain"),
        norm1_bias=random_leaf((3,), seed, "norm1_bias"),
        norm2_gain=random_leaf((3,), seed, "norm2_gain"),
        norm2_bias=random_leaf((3,), seed, "norm2_bias"),
    )
    leaves = [x, params.attention.wk, params.ffn_bias, params.norm1_gain, params.norm2_bias]
    return (lambda: weighted_sum(transformer_layer(x, stage, params), seed)), leaves


@register("l1_loss")
def _check_l1(seed):
    a = random_leaf((3, 4, 4), seed, "a")
    b = random_leaf((3, 4, 4), seed, "b")
    # l1 has a kink wherever a == b
    a.data = np.where(np.abs(a.data - b.data) < 0.05, a.data + 0.2, a.data)
    return (lambda: l1_loss(a, b)), [a]


@register("gram")
def _check_gram(seed):
    x = random_leaf((3, 4, 4), seed, "features")
    return (lambda: weighted_sum(gram(x), seed)), [x]


def _image_pair(seed):
    a = random_leaf((3, 8, 8), seed, "a")
    b = random_leaf((3, 8, 8), seed, "b")
    return a, b


@register("perceptual_loss")
def _check_perceptual(seed):
    a, b = _image_pair(seed)
    extractor = FrozenExtractor()
    return (lambda: perceptual_loss(a, b, extractor)), [a]


@register("style_loss")
def _check_style(seed):
    a, b = _image_pair(seed)
    extractor = FrozenExtractor()
    return (lambda: style_loss(a, b, extractor)), [a]


@register("gan_losses")
def _check_gan(seed):
    real = random_leaf((1, 2, 2, 2, 2), seed, "real", away_from_zero=0.1)
    fake = random_leaf((1, 2, 2, 2, 2), seed, "fake", away_from_zero=0.1)
    real.data = real.data + np.where(np.abs(real.data - 1.0) < 0.1, 0.3, 0.0)
    fake.data = fake.data + np.where(np.abs(fake.data + 1.0) < 0.1, 0.3, 0.0)

    def func():
        d_loss, g_loss = gan_losses(real, fake)
        return d_loss + g_loss

    return func, [real, fake]
