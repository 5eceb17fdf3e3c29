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
"""uattn synthesizes a 2x larger version of a texture exemplar with a hierarchical
hourglass vision transformer. This is the command line: train, infer, eval, viz-attn
and gradcheck. See README.md for details. """
import os
import sys
import logging

# Ensure the paths are correct when we execute from the source tree
try:
    from uattn.config import Validator, load_yaml
except ModuleNotFoundError:
    sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))
    from uattn.config import Validator, load_yaml
from uattn.config.train import TRAIN_DEFAULTS, get_size
from uattn.data import TextureDataset, load_image, save_image
from uattn.errors import CheckpointError, ConfigError, DataError, NonFiniteError, ShapeError
from uattn.metrics import METRICS, evaluate, extract_attention, render_attention_overlay, report_yaml
from uattn.model import ArchVariant, pad_exemplar, synthesize
from uattn.tensor.gradcheck import DEFAULT_TOLERANCE, run_checks
from uattn.train import TrainConfig, fine_tune, load_checkpoint, train
import uattn.verify  # pylint: disable=unused-import

try:
    import argparse
except ImportError:
    print("ERROR: install argparse manually: sudo pip install argparse")
    sys.exit(-2)

EXIT_OK = 0
EXIT_GRADCHECK = 1
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NONFINITE = 4


def build_parser():
    """Return the argument parser of the uattn program"""
    parser = argparse.ArgumentParser(formatter_class=argparse.RawTextHelpFormatter)
    parser.add_argument(
        "-d",
        "--debug",
        dest="debug",
        action="store_true",
        help="""enable debug logging, default False""",
    )
    parser.add_argument(
        "-q",
        "--quiet",
        dest="quiet",
        action="store_true",
        help="""be quiet (only warnings/errors), default False""",
    )
    parser.add_argument(
        "-c",
        "--config",
        dest="config",
        type=str,
        help="""YAML configuration file, flags override its values""",
    )
    parser.add_argument(
        "-s",
        "--schema",
        dest="schema",
        type=str,
        help="""YAML schema validation file, default to use built-in""",
    )
    parser.add_argument(
        "--seed",
        dest="seed",
        type=int,
        help="""seed for model initialization, batch order and metric crops""",
    )

    subparsers = parser.add_subparsers(dest="command")
    train_p = subparsers.add_parser("train", help="train a generator on a texture dataset")
    _add_data_source(train_p)
    train_p.add_argument(
        "-o",
        "--out",
        dest="out",
        required=True,
        type=str,
        help="""output directory for checkpoints and the metrics log""",
    )
    train_p.add_argument(
        "--arch",
        dest="arch",
        choices=ArchVariant.names(),
        help="""architecture variant, default uattn""",
    )
    train_p.add_argument(
        "--no-gan",
        dest="no_gan",
        action="store_true",
        help="""train without the discriminator and the adversarial loss""",
    )
    train_p.add_argument("--epochs", dest="epochs", type=int, help="""number of epochs, default 100""")
    train_p.add_argument("--batch", dest="batch", type=int, help="""batch size, default 8""")
    train_p.add_argument("--size", dest="size", type=int, help="""target image size, default 128""")
    train_p.add_argument("--lr", dest="lr", type=float, help="""Adam learning rate, default 0.001""")
    train_p.add_argument(
        "--resume",
        dest="resume",
        type=str,
        help="""checkpoint to continue training from""",
    )
    train_p.add_argument(
        "--fine-tune",
        dest="fine_tune",
        action="store_true",
        help="""with --resume: restart the step count and train the weights at --size""",
    )

    infer_p = subparsers.add_parser("infer", help="synthesize a 2x texture from an exemplar")
    _add_checkpoint(infer_p)
    infer_p.add_argument(
        "-i",
        "--input",
        dest="input",
        required=True,
        type=str,
        help="""exemplar image (.ppm/.png), half the model size or pre-padded""",
    )
    infer_p.add_argument(
        "-o",
        "--output",
        dest="output",
        required=True,
        type=str,
        help="""output image (.ppm/.png)""",
    )

    eval_p = subparsers.add_parser("eval", help="score a model and/or naive tiling on a dataset")
    _add_data_source(eval_p)
    eval_p.add_argument(
        "--ckpt",
        dest="ckpt",
        type=str,
        help="""checkpoint to evaluate, omit to score only the baseline""",
    )
    eval_p.add_argument(
        "--metrics",
        dest="metrics",
        default=",".join(METRICS),
        type=str,
        help="""comma separated metrics, default ssim,cfd""",
    )
    eval_p.add_argument(
        "--baseline",
        dest="baseline",
        choices=["naive-tile"],
        help="""add a baseline column""",
    )
    eval_p.add_argument("--size", dest="size", type=int, help="""image size, default the model size""")
    eval_p.add_argument(
        "-o",
        "--output",
        dest="output",
        default="-",
        type=str,
        help="""output file for the YAML report, default stdout""",
    )

    viz_p = subparsers.add_parser("viz-attn", help="render the attention of one output patch")
    _add_checkpoint(viz_p)
    viz_p.add_argument(
        "-i",
        "--input",
        dest="input",
        required=True,
        type=str,
        help="""exemplar image (.ppm/.png), half the model size or pre-padded""",
    )
    viz_p.add_argument("--stage", dest="stage", required=True, type=int, help="""transformer block, 1-based""")
    viz_p.add_argument("--patch", dest="patch", default="0,0", type=str, help="""target patch row,col, default 0,0""")
    viz_p.add_argument("--layer", dest="layer", default=1, type=int, help="""transformer layer 1 or 2, default 1""")
    viz_p.add_argument(
        "--background",
        dest="background",
        choices=["input", "features"],
        default="input",
        help="""draw over the input image or the block's mean feature map""",
    )
    viz_p.add_argument(
        "-o",
        "--out",
        dest="out",
        required=True,
        type=str,
        help="""output image (.ppm/.png)""",
    )

    grad_p = subparsers.add_parser("gradcheck", help="verify analytic gradients by finite differences")
    grad_p.add_argument("--ops", dest="ops", type=str, help="""comma separated op families, default all""")
    grad_p.add_argument(
        "--tol",
        dest="tol",
        default=DEFAULT_TOLERANCE,
        type=float,
        help=f"""worst relative error allowed, default {DEFAULT_TOLERANCE}""",
    )
    return parser


def _add_data_source(parser):
    source = parser.add_mutually_exclusive_group()
    source.add_argument(
        "--data",
        dest="data",
        type=str,
        help="""directory of .ppm/.png target images""",
    )
    source.add_argument(
        "--procedural",
        dest="procedural",
        type=str,
        help="""YAML manifest of procedural textures""",
    )


def _add_checkpoint(parser):
    parser.add_argument(
        "--ckpt",
        dest="ckpt",
        required=True,
        type=str,
        help="""checkpoint file""",
    )


def load_config(args, base=None):
    """Read the configuration file (if any) and apply the command line overrides. The
    sections of `base` (a stored checkpoint configuration) sit below both."""
    yaml = {}
    if args.config:
        logging.info(f"Loading configfile {args.config}")
        try:
            yaml = load_yaml(args.config)
        except OSError as err:
            raise ConfigError(f"Couldn't read config from {args.config}: {err}") from err
        if not isinstance(yaml, dict):
            raise ConfigError(f"{args.config}: configuration must be a YAML mapping")
        logging.debug(f"Config: {yaml}")
    for section, values in (base or {}).items():
        yaml[section] = {**values, **(yaml.get(section) or {})}
    train_section = dict(yaml.get("train") or {})
    for flag, key in (("arch", "arch"), ("epochs", "epochs"), ("batch", "batch"), ("size", "size"), ("lr", "lr")):
        value = getattr(args, flag, None)
        if value is not None:
            train_section[key] = value
    if getattr(args, "no_gan", False):
        train_section["use-gan"] = False
    if train_section:
        yaml["train"] = train_section
    if args.seed is not None:
        yaml["seeds"] = dict(yaml.get("seeds") or {}, model=args.seed, data=args.seed)
    return yaml


def load_dataset(args, yaml, size):
    """Build the dataset named on the command line, or the configuration's textures."""
    if getattr(args, "data", None):
        return TextureDataset.from_directory(args.data, size)
    if getattr(args, "procedural", None):
        return TextureDataset.from_manifest(args.procedural, size, schema=args.schema)
    if yaml.get("textures"):
        return TextureDataset.from_config(yaml, size)
    raise ConfigError("no data source, give --data, --procedural or a config with textures")


def cmd_train(args):
    """Train (or resume, or fine-tune) and write checkpoints to --out."""
    if args.fine_tune and not args.resume:
        raise ConfigError("--fine-tune needs --resume")
    resume = load_checkpoint(args.resume) if args.resume else None
    yaml = load_config(args, base=resume.config.to_yaml() if resume else None)
    validator = Validator(schema=args.schema)
    if not validator.valid_config(yaml):
        raise ConfigError("Configuration is not valid, bailing")
    config = TrainConfig.from_yaml(yaml)
    dataset = load_dataset(args, yaml, config.input_hw)

    if args.fine_tune:
        state = fine_tune(resume, config.input_hw, config.epochs, dataset, args.out)
        logging.info(f"Fine-tuned to {config.input_hw}px in {state.step} steps")
        return EXIT_OK
    state, saved = train(config, dataset, args.out, resume=resume)
    logging.info(f"Training finished at step {state.step}, last checkpoint {saved[-1]}")
    return EXIT_OK


def _exemplar_frame(path, weights):
    image = load_image(path)
    return pad_exemplar(image, weights.input_hw).astype(weights.dtype)


def cmd_infer(args):
    """Synthesize the 2x texture of one exemplar."""
    state = load_checkpoint(args.ckpt)
    frame = _exemplar_frame(args.input, state.generator)
    save_image(synthesize(state.generator, frame), args.output)
    logging.info(f"Wrote {args.output}")
    return EXIT_OK


def cmd_eval(args):
    """Score the model and/or the naive tiling baseline over a dataset."""
    yaml = load_config(args)
    metrics = [m.strip() for m in args.metrics.split(",") if m.strip()]
    unknown = sorted(set(metrics) - set(METRICS))
    if unknown or not metrics:
        raise ConfigError(f"unknown metrics {unknown}, expecting some of {list(METRICS)}")
    weights = load_checkpoint(args.ckpt).generator if args.ckpt else None
    if weights is None and not args.baseline:
        raise ConfigError("nothing to evaluate, give --ckpt and/or --baseline")
    size = args.size or (weights.input_hw if weights is not None else get_size(yaml) or TRAIN_DEFAULTS["size"])
    dataset = load_dataset(args, yaml, size)
    if len(dataset) == 0:
        raise DataError("evaluation dataset is empty")
    report = evaluate(
        dataset,
        weights,
        metrics=metrics,
        baseline=args.baseline is not None,
        seed=args.seed or 0,
    )
    text = report_yaml(report)
    if args.output == "-":
        print(text, end="")
    else:
        with open(args.output, "w", encoding="utf-8") as file:
            file.write(text)
        logging.info(f"Wrote report to {args.output}")
    return EXIT_OK


def cmd_viz_attn(args):
    """Render the attention of one output patch of one transformer block."""
    state = load_checkpoint(args.ckpt)
    weights = state.generator
    try:
        row, col = (int(v) for v in args.patch.split(","))
    except ValueError as err:
        raise ConfigError(f"--patch expects row,col, got {args.patch}") from err
    frame = _exemplar_frame(args.input, weights)
    record = extract_attention(weights, frame, stage=args.stage, row=row, col=col, layer=args.layer)
    base = frame if args.background == "input" else None
    save_image(render_attention_overlay(record, base), args.out)
    logging.info(f"Wrote stage {args.stage} attention of patch ({row},{col}) to {args.out}")
    return EXIT_OK


def cmd_gradcheck(args):
    """Compare analytic gradients with finite differences for every registered op."""
    names = [n.strip() for n in args.ops.split(",") if n.strip()] if args.ops else None
    try:
        results = run_checks(names, tolerance=args.tol, seed=args.seed or 0)
    except KeyError as err:
        raise ConfigError(str(err.args[0])) from err
    for result in results:
        status = "ok" if result.passed else "FAIL"
        print(f"{result.name:24s} {result.worst:.3e} {status}")
    failed = [r.name for r in results if not r.passed]
    if failed:
        logging.error(f"Gradient check failed for {', '.join(failed)}")
        return EXIT_GRADCHECK
    return EXIT_OK


COMMANDS = {
    "train": cmd_train,
    "infer": cmd_infer,
    "eval": cmd_eval,
    "viz-attn": cmd_viz_attn,
    "gradcheck": cmd_gradcheck,
}


def run(argv=None):
    """Parse argv, run the command and return its exit code"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return EXIT_OK if err.code == 0 else EXIT_USAGE
    if not args.command:
        parser.print_help()
        print("\nPlease see uattn <command> -h   for per-command arguments")
        return EXIT_OK

    level = logging.INFO
    if args.debug:
        level = logging.DEBUG
    if args.quiet:
        level = logging.WARNING
    logging.basicConfig(format="[%(levelname)-8s] %(name)s.%(funcName)s: %(message)s", level=level)

    try:
        return COMMANDS[args.command](args)
    except NonFiniteError as err:
        logging.error(f"Numerical failure: {err}")
        return EXIT_NONFINITE
    except (DataError, CheckpointError) as err:
        logging.error(f"{err}")
        return EXIT_DATA
    except (ConfigError, ShapeError) as err:
        logging.error(f"{err}")
        return EXIT_USAGE


def main():
    """The main uattn program"""
    sys.exit(run())


if __name__ == "__main__":
    main()
