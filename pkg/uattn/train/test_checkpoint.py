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
""" Unit tests for the training configuration and checkpoints """
import os
import tempfile
import unittest
import numpy as np

from uattn.data import Batch
from uattn.errors import CheckpointError, ConfigError
from uattn.losses import LossWeights
from uattn.model import ArchVariant, forward
from uattn.tensor import SplitMix64, Tensor
from .checkpoint import (
    MAGIC,
    TrainState,
    checkpoint_name,
    decode_checkpoint,
    encode_checkpoint,
    load_checkpoint,
    named_tensors,
    save_checkpoint,
)
from .engine import Trainer
from .trainconfig import TrainConfig


def small_config(**changes):
    config = TrainConfig(input_hw=32, batch_size=2, epochs=1, use_gan=False, checkpoint_every=10)
    return config.replace(**changes)


def random_batch(size=32, count=2, seed=0):
    rng = SplitMix64(seed)
    inputs = rng.fork("inputs").uniform((count, 3, size, size), -1.0, 1.0)
    targets = rng.fork("targets").uniform((count, 3, size, size), -1.0, 1.0)
    return Batch(list(range(count)), inputs.astype(np.float32), targets.astype(np.float32))


class TestTrainConfigMethods(unittest.TestCase):
    def test_defaults(self):
        config = TrainConfig()
        self.assertEqual(config.variant, ArchVariant.UATTENTION)
        self.assertEqual(config.input_hw, 128)
        self.assertEqual(config.loss, LossWeights())
        self.assertTrue(config.use_gan)

    def test_from_yaml(self):
        config = TrainConfig.from_yaml(
            {"train": {"arch": "pyramid", "size": 64, "use-gan": False}, "loss": {"style": 5}, "seeds": {"model": 7}}
        )
        self.assertEqual(config.variant, ArchVariant.PYRAMID3)
        self.assertEqual(config.input_hw, 64)
        self.assertFalse(config.use_gan)
        self.assertEqual(config.loss.style, 5.0)
        self.assertEqual(config.loss.l1, 1.0)
        self.assertEqual(config.model_seed, 7)

    def test_dumps_loads(self):
        config = small_config(lr=0.0005, model_seed=11, loss=LossWeights(gan=0.0))
        self.assertEqual(TrainConfig.loads(config.dumps()), config)
        self.assertEqual(TrainConfig.loads(config.dumps()).dumps(), config.dumps())

    def test_bad_yaml(self):
        with self.assertRaises(ConfigError):
            TrainConfig.loads("train: [")
        with self.assertRaises(ConfigError):
            TrainConfig.from_yaml({"train": {"size": "big"}})


class TestCheckpointMethods(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.state = TrainState.initial(small_config())
        Trainer(cls.state).train_step(random_batch())

    def test_initial_disjoint(self):
        state = TrainState.initial(small_config())
        self.assertFalse(set(state.generator) & set(state.discriminator.params))
        self.assertEqual(state.step, 0)

    def test_roundtrip_bytes(self):
        payload = encode_checkpoint(self.state)
        self.assertTrue(payload.startswith(MAGIC))
        restored = decode_checkpoint(payload)
        self.assertEqual(encode_checkpoint(restored), payload)
        self.assertEqual(restored.step, 1)
        self.assertEqual(restored.config, self.state.config)
        self.assertEqual(restored.gen_adam.step_count, 1)

    def test_roundtrip_tensors(self):
        restored = decode_checkpoint(encode_checkpoint(self.state))
        original = named_tensors(self.state)
        loaded = named_tensors(restored)
        self.assertEqual(list(original), list(loaded))
        for name, value in original.items():
            self.assertEqual(loaded[name].dtype, np.asarray(value).dtype, name)
            np.testing.assert_array_equal(loaded[name], value, err_msg=name)

    def test_forward_after_reload(self):
        restored = decode_checkpoint(encode_checkpoint(self.state))
        exemplar = Tensor(random_batch(seed=5).inputs)
        before, _ = forward(exemplar, self.state.generator)
        after, _ = forward(exemplar, restored.generator)
        np.testing.assert_array_equal(before.data, after.data)

    def test_save_load(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, checkpoint_name(self.state.step))
            save_checkpoint(self.state, path)
            self.assertEqual(os.listdir(tmp), ["step-00000001.ckpt"])
            restored = load_checkpoint(path)
        self.assertEqual(encode_checkpoint(restored), encode_checkpoint(self.state))

    def test_load_missing(self):
        with self.assertRaises(CheckpointError):
            load_checkpoint("/nonexistent/step-00000000.ckpt")

    def test_corrupted_payload(self):
        payload = bytearray(encode_checkpoint(self.state))
        payload[-5] ^= 0x01
        with self.assertRaisesRegex(CheckpointError, "checksum"):
            decode_checkpoint(bytes(payload))

    def test_bad_magic(self):
        payload = encode_checkpoint(self.state)
        with self.assertRaises(CheckpointError):
            decode_checkpoint(b"NOTACKPT" + payload[len(MAGIC) :])

    def test_bad_version(self):
        payload = bytearray(encode_checkpoint(self.state))
        payload[len(MAGIC)] = 99
        with self.assertRaisesRegex(CheckpointError, "version"):
            decode_checkpoint(bytes(payload))

    def test_truncated(self):
        payload = encode_checkpoint(self.state)
        with self.assertRaisesRegex(CheckpointError, "truncated"):
            decode_checkpoint(payload[: len(payload) // 2])

    def test_trailing_bytes(self):
        with self.assertRaisesRegex(CheckpointError, "trailing"):
            decode_checkpoint(encode_checkpoint(self.state) + b"\x00")

    def test_wrong_architecture(self):
        state = TrainState.initial(small_config())
        state.config = state.config.replace(variant=ArchVariant.PYRAMID3)
        with self.assertRaises(CheckpointError):
            decode_checkpoint(encode_checkpoint(state))

    def test_checkpoint_name(self):
        self.assertEqual(checkpoint_name(0), "step-00000000.ckpt")
        self.assertEqual(checkpoint_name(1234), "step-00001234.ckpt")


if __name__ == "__main__":
    unittest.main()
