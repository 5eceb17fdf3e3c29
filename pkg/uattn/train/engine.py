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
The training loop: one discriminator step then one generator step per batch, a
plain-text metrics log, periodic checkpoints, resume and fine-tuning at a new size.
"""
import logging
import os
import time
import numpy as np

from uattn.data.pairs import batches, batches_per_epoch
from uattn.errors import CheckpointError, ConfigError, NonFiniteError, ShapeError
from uattn.losses import FrozenExtractor, gan_losses, total_loss
from uattn.model import check_size, forward
from uattn.tensor import Adam, SplitMix64, Tensor
from .checkpoint import TrainState, checkpoint_name, save_checkpoint

logger = logging.getLogger("uattn.train")
logger.addHandler(logging.NullHandler())

LOG_NAME = "metrics.log"
LOG_COLUMNS = ("step", "l1", "perceptual", "style", "gan_g", "total", "d_loss", "wall_s")
RESUME_FIXED = ("input_hw", "batch_size", "model_seed", "data_seed", "extractor_seed", "use_gan")


class Trainer:
    """Applies train steps to a TrainState in place."""

    def __init__(self, state, extractor=None):
        self.state = state
        config = state.config
        self.extractor = extractor or FrozenExtractor(config.extractor_seed)
        self.gen_opt = Adam(lr=config.lr, state=state.gen_adam)
        self.disc_opt = Adam(lr=config.lr, state=state.disc_adam)

    def train_step(self, batch):
        """Run one step on a Batch and return its LossReport (d_loss is None when
        training without the discriminator)."""
        state = self.state
        config = state.config
        gen, disc = state.generator, state.discriminator
        dtype = gen.dtype
        inputs = Tensor(np.asarray(batch.inputs, dtype=dtype))
        targets = Tensor(np.asarray(batch.targets, dtype=dtype))
        if config.use_gan and len(batch) < 2:
            raise ShapeError(f"train_step: batch of {len(batch)} is too small for the discriminator")

        output, _records = forward(inputs, gen)
        d_loss = None
        if config.use_gan:
            disc.zero_grad()
            real_scores = disc(targets, update=True)
            fake_scores = disc(output.detach(), update=False)
            d_objective, _ = gan_losses(real_scores, fake_scores)
            d_objective.backward()
            self.disc_opt.step(disc.params)
            d_loss = d_objective.item()

        gen.zero_grad()
        gan_g = None
        if config.use_gan:
            gan_g = -disc(output, update=False).mean()
        report = total_loss(output, targets, gan_g, config.loss, self.extractor)
        report.objective.backward()
        self.gen_opt.step(gen.tensors)
        if config.use_gan:
            disc.zero_grad()
        report.d_loss = d_loss
        state.step += 1
        return report


def epoch_seed(data_seed, epoch):
    """Seed of the batch order of one epoch."""
    return SplitMix64(data_seed).fork(f"epoch{epoch}").seed


class MetricsLog:
    """Whitespace-separated records, one per step, below a '#' header line."""

    def __init__(self, path, append=False):
        self.path = path
        exists = append and os.path.exists(path)
        self.file = open(path, "a" if exists else "w", encoding="utf-8")
        if not exists:
            self.file.write("# " + " ".join(LOG_COLUMNS) + "\n")

    def write(self, step, report, wall):
        values = report.values()
        fields = [str(step)]
        for key in LOG_COLUMNS[1:-1]:
            value = values[key]
            fields.append("-" if value is None else f"{value:.9g}")
        fields.append(f"{wall:.3f}")
        self.file.write(" ".join(fields) + "\n")
        self.file.flush()

    def close(self):
        self.file.close()

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.close()


def read_metrics(path):
    """Parse a metrics log into a list of dicts."""
    records = []
    with open(path, "r", encoding="utf-8") as file:
        for line in file:
            if line.startswith("#") or not line.strip():
                continue
            fields = line.split()
            record = {"step": int(fields[0])}
            for key, value in zip(LOG_COLUMNS[1:], fields[1:]):
                record[key] = None if value == "-" else float(value)
            records.append(record)
    return records


def check_resumable(stored, config):
    """Raise ConfigError if `config` changes a field that fixes the batch order or the
    network a checkpoint was trained with. Epochs, lr, loss weights and the checkpoint
    interval may change."""
    changed = [
        f"{name} {getattr(stored, name)} -> {getattr(config, name)}"
        for name in RESUME_FIXED
        if getattr(stored, name) != getattr(config, name)
    ]
    if changed:
        raise ConfigError(f"cannot resume with a different {', '.join(changed)}")


def train(config, dataset, out_dir, resume=None, max_steps=None):
    """Train for config.epochs epochs (or until max_steps global steps) and return
    (state, checkpoint paths). A checkpoint is written every config.checkpoint_every
    steps and after the last step. With `resume`, training continues from the stored
    step with the same batch order an uninterrupted run would have used."""
    if resume is not None:
        if resume.config.variant != config.variant:
            raise CheckpointError(
                f"checkpoint is a {resume.config.variant.value} model, config asks for {config.variant.value}"
            )
        check_resumable(resume.config, config)
        state = resume
        state.config = config
    else:
        state = TrainState.initial(config)
    trainer = Trainer(state)
    per_epoch = batches_per_epoch(len(dataset), config.batch_size)
    os.makedirs(out_dir, exist_ok=True)
    saved = []
    started = time.monotonic()
    logger.info(
        f"Training {config.variant.value} at {config.input_hw}px: {len(dataset)} pairs, "
        f"{per_epoch} steps per epoch, {config.epochs} epochs, from step {state.step}"
    )

    def checkpoint():
        path = os.path.join(out_dir, checkpoint_name(state.step))
        save_checkpoint(state, path)
        saved.append(path)

    def done():
        return max_steps is not None and state.step >= max_steps

    with MetricsLog(os.path.join(out_dir, LOG_NAME), append=resume is not None) as log:
        first_epoch = state.step // per_epoch if per_epoch else 0
        for epoch in range(first_epoch, config.epochs):
            if done():
                break
            for index, batch in enumerate(batches(dataset, config.batch_size, epoch_seed(config.data_seed, epoch))):
                if epoch * per_epoch + index < state.step:
                    continue
                if done():
                    break
                try:
                    report = trainer.train_step(batch)
                except NonFiniteError as err:
                    logger.error(f"Aborting at step {state.step + 1}: {err}")
                    raise
                log.write(state.step, report, time.monotonic() - started)
                logger.debug(f"step {state.step}: total {report.total:.6g}")
                if state.step % config.checkpoint_every == 0:
                    checkpoint()
    if not saved or not saved[-1].endswith(checkpoint_name(state.step)):
        checkpoint()
    return state, saved


def fine_tune(state, new_input_hw, epochs, dataset, out_dir, max_steps=None):
    """Continue training pre-trained weights at another input size. Weight shapes do
    not depend on the size, so they load unchanged; with epochs=0 the state is
    returned as is."""
    check_size(new_input_hw)
    if epochs == 0:
        state.generator = state.generator.with_input_size(new_input_hw)
        return state
    if dataset.size != new_input_hw:
        raise ShapeError(f"fine_tune: dataset is {dataset.size}px, expecting {new_input_hw}px")
    config = state.config.replace(input_hw=new_input_hw, epochs=epochs)
    logger.info(f"Fine-tuning from {state.generator.input_hw}px to {new_input_hw}px")
    state.step = 0
    state.config = config
    state.generator = state.generator.with_input_size(new_input_hw)
    state, _saved = train(config, dataset, out_dir, resume=state, max_steps=max_steps)
    return state
