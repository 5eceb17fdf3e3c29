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
Training state and its binary checkpoint format. All integers and floats are
little-endian:

    magic "UATTNCKP" | u32 version | u32 config length | config YAML (utf-8)
    | u64 global step | u32 tensor count | tensor records

and every tensor record is

    u16 name length | name (utf-8) | u8 dtype tag | u8 rank | u32 extent * rank
    | raw values | u32 crc32 of the raw values

with dtype tags 1 = float32, 2 = float64, 3 = int64.
"""
import logging
import os
import struct
import zlib
from collections import OrderedDict
from dataclasses import dataclass
import numpy as np

from uattn.errors import CheckpointError, ConfigError
from uattn.losses import Discriminator
from uattn.losses.discriminator import CHANNELS as DISC_CHANNELS
from uattn.model import ModelWeights, build_model, layer_shapes
from uattn.tensor import AdamState, SpectralState, SplitMix64, Tensor
from .trainconfig import TrainConfig

logger = logging.getLogger("uattn.train")
logger.addHandler(logging.NullHandler())

MAGIC = b"UATTNCKP"
VERSION = 1
DTYPE_TAGS = {1: np.float32, 2: np.float64, 3: np.int64}
TAG_OF = {np.dtype(v): k for k, v in DTYPE_TAGS.items()}


@dataclass
class TrainState:
    """Generator, discriminator, both optimizer states and the global step."""

    config: TrainConfig
    generator: ModelWeights
    discriminator: Discriminator
    gen_adam: AdamState
    disc_adam: AdamState
    step: int = 0

    @classmethod
    def initial(cls, config):
        """Freshly initialized networks for a configuration."""
        generator = build_model(config.variant, config.input_hw, config.model_seed)
        disc_seed = SplitMix64(config.model_seed).fork("discriminator").seed
        discriminator = Discriminator.build(disc_seed)
        overlap = set(generator) & set(discriminator.params)
        if overlap:
            raise CheckpointError(f"generator and discriminator share parameters: {sorted(overlap)}")
        return cls(config, generator, discriminator, AdamState(), AdamState(), 0)


def _adam_tensors(prefix, state):
    yield f"adam.{prefix}.step", np.asarray(state.step_count, dtype=np.int64)
    for name, value in state.m.items():
        yield f"adam.{prefix}.m.{name}", value
    for name, value in state.v.items():
        yield f"adam.{prefix}.v.{name}", value


def named_tensors(state):
    """Every array stored in a checkpoint, in file order."""
    out = OrderedDict()
    for name, param in state.generator.items():
        out[name] = param.data
    for name, param in state.discriminator.params.items():
        out[name] = param.data
    for name, spectral in state.discriminator.states.items():
        out[name] = spectral.u
    out.update(_adam_tensors("gen", state.gen_adam))
    out.update(_adam_tensors("disc", state.disc_adam))
    return out


def _encode_tensor(name, array):
    array = np.asarray(array)
    tag = TAG_OF.get(array.dtype)
    if tag is None:
        raise CheckpointError(f"{name}: cannot store dtype {array.dtype}")
    payload = np.ascontiguousarray(array, dtype=array.dtype.newbyteorder("<")).tobytes()
    encoded = name.encode("utf-8")
    return b"".join(
        [
            struct.pack("<H", len(encoded)),
            encoded,
            struct.pack("<BB", tag, array.ndim),
            struct.pack(f"<{array.ndim}I", *array.shape),
            payload,
            struct.pack("<I", zlib.crc32(payload)),
        ]
    )


def encode_checkpoint(state):
    """Serialize a TrainState to bytes."""
    config = state.config.dumps().encode("utf-8")
    tensors = named_tensors(state)
    parts = [
        MAGIC,
        struct.pack("<II", VERSION, len(config)),
        config,
        struct.pack("<QI", state.step, len(tensors)),
    ]
    parts.extend(_encode_tensor(name, array) for name, array in tensors.items())
    return b"".join(parts)


class _Reader:
    def __init__(self, payload, source):
        self.payload = payload
        self.offset = 0
        self.source = source

    def take(self, count):
        end = self.offset + count
        if end > len(self.payload):
            raise CheckpointError(f"{self.source}: truncated at byte {self.offset}")
        chunk = self.payload[self.offset : end]
        self.offset = end
        return chunk

    def unpack(self, fmt):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))


def _decode_tensor(reader):
    (length,) = reader.unpack("<H")
    name = reader.take(length).decode("utf-8")
    tag, rank = reader.unpack("<BB")
    if tag not in DTYPE_TAGS:
        raise CheckpointError(f"{reader.source}: {name} has unknown dtype tag {tag}")
    shape = reader.unpack(f"<{rank}I")
    dtype = np.dtype(DTYPE_TAGS[tag]).newbyteorder("<")
    payload = reader.take(int(np.prod(shape, dtype=np.int64)) * dtype.itemsize)
    (crc,) = reader.unpack("<I")
    if zlib.crc32(payload) != crc:
        raise CheckpointError(f"{reader.source}: checksum mismatch in {name}")
    array = np.frombuffer(payload, dtype=dtype).reshape(shape)
    return name, array.astype(DTYPE_TAGS[tag])


def _expect(tensors, name, shape, source):
    if name not in tensors:
        raise CheckpointError(f"{source}: missing tensor {name}")
    array = tensors.pop(name)
    if tuple(array.shape) != tuple(shape):
        raise CheckpointError(f"{source}: {name} has shape {array.shape}, expecting {tuple(shape)}")
    return array


def _restore_adam(tensors, prefix, shapes, source):
    state = AdamState(step_count=int(_expect(tensors, f"adam.{prefix}.step", (), source)))
    for kind in ("m", "v"):
        buffers = getattr(state, kind)
        head = f"adam.{prefix}.{kind}."
        for key in [k for k in tensors if k.startswith(head)]:
            name = key[len(head) :]
            if name not in shapes:
                raise CheckpointError(f"{source}: optimizer state for unknown parameter {name}")
            buffers[name] = _expect(tensors, key, shapes[name], source)
    return state


def decode_checkpoint(payload, source="<bytes>"):
    """Parse checkpoint bytes into a TrainState, checking every tensor against the
    shapes the stored configuration implies."""
    reader = _Reader(payload, source)
    if reader.take(len(MAGIC)) != MAGIC:
        raise CheckpointError(f"{source}: not a uattn checkpoint")
    version, length = reader.unpack("<II")
    if version != VERSION:
        raise CheckpointError(f"{source}: format version {version}, expecting {VERSION}")
    try:
        config = TrainConfig.loads(reader.take(length).decode("utf-8"))
    except (ConfigError, UnicodeDecodeError) as err:
        raise CheckpointError(f"{source}: bad configuration block: {err}") from err
    step, count = reader.unpack("<QI")
    tensors = OrderedDict(_decode_tensor(reader) for _ in range(count))
    if reader.offset != len(payload):
        raise CheckpointError(f"{source}: {len(payload) - reader.offset} trailing bytes")

    gen_shapes = layer_shapes(config.variant)
    generator = ModelWeights(
        config.variant,
        config.input_hw,
        OrderedDict(
            (name, Tensor(_expect(tensors, name, shape, source), requires_grad=True, name=name))
            for name, shape in gen_shapes.items()
        ),
    )
    disc_shapes = OrderedDict()
    c_in = 3
    for index, c_out in enumerate(DISC_CHANNELS, start=1):
        disc_shapes[f"disc.conv{index}.weight"] = (c_out, c_in, 3, 3, 3)
        disc_shapes[f"disc.conv{index}.bias"] = (c_out,)
        c_in = c_out
    params = OrderedDict(
        (name, Tensor(_expect(tensors, name, shape, source), requires_grad=True, name=name))
        for name, shape in disc_shapes.items()
    )
    states = OrderedDict(
        (f"disc.conv{i}.u", SpectralState(_expect(tensors, f"disc.conv{i}.u", (c,), source).copy()))
        for i, c in enumerate(DISC_CHANNELS, start=1)
    )
    discriminator = Discriminator(params, states)
    gen_adam = _restore_adam(tensors, "gen", gen_shapes, source)
    disc_adam = _restore_adam(tensors, "disc", disc_shapes, source)
    if tensors:
        raise CheckpointError(f"{source}: unexpected tensors {list(tensors)[:3]}")
    return TrainState(config, generator, discriminator, gen_adam, disc_adam, int(step))


def save_checkpoint(state, path):
    """Write a checkpoint; the file appears atomically."""
    payload = encode_checkpoint(state)
    tmp = f"{path}.tmp"
    with open(tmp, "wb") as file:
        file.write(payload)
    os.replace(tmp, path)
    logger.info(f"Saved checkpoint {path} at step {state.step}")


def load_checkpoint(path):
    try:
        with open(path, "rb") as file:
            payload = file.read()
    except OSError as err:
        raise CheckpointError(f"{path}: {err}") from err
    state = decode_checkpoint(payload, path)
    logger.info(f"Loaded checkpoint {path} at step {state.step}")
    return state


def checkpoint_name(step):
    return f"step-{step:08d}.ckpt"
