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
""" Unit tests for the transformer layers and convolution stages """
import unittest
import numpy as np

from uattn.errors import ShapeError
from uattn.tensor import Tensor, SplitMix64
from uattn.tensor.gradcheck import gradcheck, weighted_sum, random_leaf
from . import layers
from .geometry import PatchSequence, StageSpec, partition
from .weights import build_model


def rand(shape, seed=0, label="x", dtype=np.float64):
    return Tensor(SplitMix64(seed).fork(label).normal(shape).astype(dtype))


def attention_params(channels, seed, dtype=np.float64, zero=()):
    fields = {}
    for proj in "qkvo":
        weight = rand((channels, channels, 1, 1), seed, f"w{proj}", dtype)
        bias = rand((channels,), seed, f"b{proj}", dtype)
        if proj in zero:
            weight = Tensor(np.zeros_like(weight.data))
            bias = Tensor(np.zeros_like(bias.data))
        fields[f"w{proj}"], fields[f"b{proj}"] = weight, bias
    return layers.AttentionParams(**fields)


def layer_params(channels, kernel, seed, zero=False):
    attn = attention_params(channels, seed, zero="o" if zero else ())
    ffn_weight = rand((channels, channels, kernel, kernel), seed, "ffn")
    ffn_bias = rand((channels,), seed, "ffn_bias")
    if zero:
        ffn_weight = Tensor(np.zeros_like(ffn_weight.data))
        ffn_bias = Tensor(np.zeros_like(ffn_bias.data))
    return layers.LayerParams(
        attention=attn,
        ffn_weight=ffn_weight,
        ffn_bias=ffn_bias,
        norm1_gain=Tensor(np.ones(channels)),
        norm1_bias=Tensor(np.zeros(channels)),
        norm2_gain=Tensor(np.ones(channels)),
        norm2_bias=Tensor(np.zeros(channels)),
    )


def channel_norm(x):
    centered = x - x.mean(axis=1, keepdims=True)
    return centered / np.sqrt((centered**2).mean(axis=1, keepdims=True) + layers.NORM_EPS)


class TestSelfAttentionMethods(unittest.TestCase):
    def test_single_patch(self):
        m = rand((1, 4, 3, 3))
        params = attention_params(4, 1)
        out = layers.self_attention(partition(m, 1), params)
        np.testing.assert_array_equal(out.attention, [[[1.0]]])
        wv = params.wv.data.reshape(4, 4)
        wo = params.wo.data.reshape(4, 4)
        v = np.einsum("oc,nchw->nohw", wv, m.data) + params.bv.data[None, :, None, None]
        expected = np.einsum("oc,nchw->nohw", wo, v) + params.bo.data[None, :, None, None]
        np.testing.assert_allclose(out.patch(0).data, expected[0], atol=1e-12)

    def test_sequence_dims(self):
        m = rand((1, 16, 16, 16), dtype=np.float32)
        params = attention_params(16, 2, np.float32)
        out = layers.self_attention(partition(m, 2), params)
        self.assertEqual(out.attention.shape, (1, 4, 4))
        self.assertEqual(out.patches.shape, (1, 4, 16, 8, 8))

    def test_identical_patches(self):
        patch = rand((3, 4, 4), 5)
        seq = PatchSequence.from_patches([patch] * 4, 2)
        out = layers.self_attention(seq, attention_params(3, 3))
        np.testing.assert_allclose(out.attention, np.full((1, 4, 4), 0.25), atol=1e-15)

    def test_zero_query_key(self):
        seq = partition(rand((2, 3, 8, 8)), 4)
        out = layers.self_attention(seq, attention_params(3, 4, zero="qk"))
        np.testing.assert_allclose(out.attention, np.full((2, 16, 16), 1 / 16), atol=1e-15)

    def test_row_stochastic(self):
        for seed in range(10):
            seq = partition(rand((2, 4, 8, 8), seed), 4)
            out = layers.self_attention(seq, attention_params(4, seed))
            np.testing.assert_allclose(out.attention.sum(axis=-1), 1.0, atol=1e-6)
            self.assertTrue(np.all(out.attention >= 0))

    def test_permutation_covariance(self):
        seq = partition(rand((1, 3, 8, 8), 6), 2)
        params = attention_params(3, 6)
        order = [2, 0, 3, 1]
        permuted = PatchSequence(seq.patches[:, order], 2)
        out = layers.self_attention(seq, params)
        out_permuted = layers.self_attention(permuted, params)
        np.testing.assert_allclose(
            out_permuted.patches.data, out.patches.data[:, order], atol=1e-12
        )

    def test_channel_mismatch(self):
        seq = partition(rand((1, 3, 4, 4)), 2)
        with self.assertRaises(ShapeError):
            layers.self_attention(seq, attention_params(4, 0))


class TestTransformerLayerMethods(unittest.TestCase):
    def setUp(self):
        self.stage = StageSpec(index=1, H=8, W=8, C=16, P=2)

    def test_shape_preserved(self):
        m = rand((2, 16, 8, 8))
        out = layers.transformer_layer(m, self.stage, layer_params(16, 3, 0))
        self.assertEqual(out.shape, m.shape)

    def test_residual_only(self):
        m = rand((1, 16, 8, 8), 3)
        out = layers.transformer_layer(m, self.stage, layer_params(16, 3, 0, zero=True))
        np.testing.assert_allclose(out.data, channel_norm(channel_norm(m.data)), atol=1e-10)

    def test_block_is_composition(self):
        m = rand((1, 16, 8, 8), 4)
        params = [layer_params(16, 3, 1), layer_params(16, 3, 2)]
        block = layers.t_block(m, self.stage, params)
        composed = layers.transformer_layer(
            layers.transformer_layer(m, self.stage, params[0]), self.stage, params[1]
        )
        np.testing.assert_array_equal(block.data, composed.data)

    def test_capture(self):
        captured = []
        m = rand((1, 16, 8, 8), 4)
        layers.t_block(m, self.stage, [layer_params(16, 3, 1)] * 2, captured)
        self.assertEqual(len(captured), 2)
        self.assertEqual(captured[0].shape, (1, 4, 4))

    def test_stage_mismatch(self):
        with self.assertRaises(ShapeError):
            layers.transformer_layer(rand((1, 8, 8, 8)), self.stage, layer_params(8, 3, 0))

    def test_gradient(self):
        m = random_leaf((1, 16, 8, 8), 11, "map")
        params = layer_params(16, 3, 12)
        params.ffn_bias.requires_grad = True
        params.attention.wq.requires_grad = True
        params.norm2_gain.requires_grad = True
        leaves = [m, params.ffn_bias, params.attention.wq, params.norm2_gain]

        def func():
            return weighted_sum(layers.transformer_layer(m, self.stage, params), 13)

        self.assertLess(gradcheck(func, leaves), 1e-4)


class TestConvStageMethods(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.weights = build_model("uattn", 128, seed=1)

    def test_encode(self):
        out = layers.encode(Tensor(np.zeros((1, 3, 128, 128), np.float32)), self.weights)
        self.assertEqual(out.shape, (1, 16, 128, 128))
        self.assertTrue(np.all(np.isfinite(out.data)))
        with self.assertRaises(ShapeError):
            layers.encode(Tensor(np.zeros((1, 4, 32, 32), np.float32)), self.weights)

    def test_decode_range(self):
        features = rand((1, 16, 32, 32), 2, dtype=np.float32) * 100.0
        out = layers.decode(features, self.weights)
        self.assertEqual(out.shape, (1, 3, 32, 32))
        self.assertTrue(np.all(np.abs(out.data) <= 1.0))
        with self.assertRaises(ShapeError):
            layers.decode(rand((1, 8, 32, 32), dtype=np.float32), self.weights)

    def test_conv_down(self):
        out = layers.conv_down(rand((1, 16, 128, 128), dtype=np.float32), self.weights, "down1")
        self.assertEqual(out.shape, (1, 64, 64, 64))

    def test_conv_up(self):
        out = layers.conv_up(rand((1, 256, 32, 32), dtype=np.float32), self.weights, "up1")
        self.assertEqual(out.shape, (1, 64, 64, 64))

    def test_conv_fuse(self):
        skip = rand((1, 64, 64, 64), 1, dtype=np.float32)
        up = rand((1, 64, 64, 64), 2, dtype=np.float32)
        self.assertEqual(layers.conv_fuse(skip, up, self.weights, "fuse1").shape, (1, 64, 64, 64))
        with self.assertRaises(ShapeError):
            layers.conv_fuse(skip, rand((1, 64, 32, 32), dtype=np.float32), self.weights, "fuse1")
