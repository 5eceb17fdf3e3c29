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
""" Unit tests for the uattn command line """
import contextlib
import io
import os
import tempfile
import unittest
import yaml

from uattn.data import ProceduralSpec, generate, load_image, save_image
from uattn.train import load_checkpoint
from . import uattn as cli

MANIFEST = {
    "textures": [
        {"kind": "checker", "period": 8, "count": 2},
        {"kind": "stripes", "period": 8, "count": 2},
    ]
}


def run_quiet(argv):
    out = io.StringIO()
    with contextlib.redirect_stdout(out):
        code = cli.run(["-q"] + argv)
    return code, out.getvalue()


class TestCliMethods(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.tmp = tempfile.TemporaryDirectory()
        root = cls.tmp.name
        cls.manifest = os.path.join(root, "manifest.yaml")
        with open(cls.manifest, "w", encoding="utf-8") as file:
            yaml.safe_dump(MANIFEST, file)
        cls.out = os.path.join(root, "run")
        code, _ = run_quiet(
            ["--seed", "3", "train", "--procedural", cls.manifest, "--out", cls.out, "--size", "32", "--epochs", "0"]
        )
        assert code == cli.EXIT_OK
        cls.ckpt = os.path.join(cls.out, "step-00000000.ckpt")
        cls.exemplar = os.path.join(root, "exemplar.ppm")
        save_image(generate(ProceduralSpec("checker", period=4), 32)[:, 8:24, 8:24], cls.exemplar)

    @classmethod
    def tearDownClass(cls):
        cls.tmp.cleanup()

    def test_no_command(self):
        code, out = run_quiet([])
        self.assertEqual(code, cli.EXIT_OK)
        self.assertIn("uattn <command> -h", out)

    def test_unknown_flag(self):
        with contextlib.redirect_stderr(io.StringIO()):
            self.assertEqual(cli.run(["train", "--bogus"]), cli.EXIT_USAGE)

    def test_arch_choices(self):
        parser = cli.build_parser()
        for arch in ("uattn", "baseline", "pyramid", "hourglass-simple"):
            args = parser.parse_args(["train", "--out", "x", "--arch", arch])
            self.assertEqual(args.arch, arch)

    def test_train_init_only(self):
        state = load_checkpoint(self.ckpt)
        self.assertEqual(state.step, 0)
        self.assertEqual(state.config.model_seed, 3)
        self.assertEqual(state.config.batch_size, 8)
        self.assertEqual(state.config.epochs, 0)
        self.assertEqual(state.config.lr, 0.001)
        self.assertEqual(sorted(os.listdir(self.out)), ["metrics.log", "step-00000000.ckpt"])

    def test_train_bad_size(self):
        code, _ = run_quiet(["train", "--procedural", self.manifest, "--out", self.out, "--size", "48", "--epochs", "0"])
        self.assertEqual(code, cli.EXIT_USAGE)

    def test_train_missing_data(self):
        code, _ = run_quiet(["train", "--data", os.path.join(self.tmp.name, "nope"), "--out", self.out, "--size", "32"])
        self.assertEqual(code, cli.EXIT_DATA)

    def test_infer(self):
        outputs = []
        for name in ("a.ppm", "b.ppm"):
            path = os.path.join(self.tmp.name, name)
            code, _ = run_quiet(["infer", "--ckpt", self.ckpt, "--input", self.exemplar, "--output", path])
            self.assertEqual(code, cli.EXIT_OK)
            with open(path, "rb") as file:
                outputs.append(file.read())
        self.assertTrue(outputs[0].startswith(b"P6\n32 32\n255\n"))
        self.assertEqual(outputs[0], outputs[1])

    def test_infer_wrong_size(self):
        path = os.path.join(self.tmp.name, "small.ppm")
        save_image(generate(ProceduralSpec("checker", period=4), 32)[:, :12, :12], path)
        code, _ = run_quiet(["infer", "--ckpt", self.ckpt, "--input", path, "--output", path + ".out.ppm"])
        self.assertEqual(code, cli.EXIT_USAGE)

    def test_eval(self):
        code, out = run_quiet(
            ["eval", "--ckpt", self.ckpt, "--procedural", self.manifest, "--metrics", "ssim", "--baseline", "naive-tile"]
        )
        self.assertEqual(code, cli.EXIT_OK)
        report = yaml.safe_load(out)
        self.assertEqual(len(report["images"]), 4)
        self.assertEqual(sorted(report["mean"]), ["model", "naive-tile"])

    def test_eval_bad_metric(self):
        code, _ = run_quiet(["eval", "--ckpt", self.ckpt, "--procedural", self.manifest, "--metrics", "psnr"])
        self.assertEqual(code, cli.EXIT_USAGE)

    def test_viz_attn(self):
        path = os.path.join(self.tmp.name, "attn.ppm")
        code, _ = run_quiet(["viz-attn", "--ckpt", self.ckpt, "--input", self.exemplar, "--stage", "3", "--out", path])
        self.assertEqual(code, cli.EXIT_OK)
        self.assertEqual(load_image(path).shape, (3, 32, 32))

    def test_viz_attn_bad_stage(self):
        path = os.path.join(self.tmp.name, "attn6.ppm")
        code, _ = run_quiet(["viz-attn", "--ckpt", self.ckpt, "--input", self.exemplar, "--stage", "6", "--out", path])
        self.assertEqual(code, cli.EXIT_USAGE)
        self.assertFalse(os.path.exists(path))

    def test_gradcheck_filter(self):
        code, out = run_quiet(["gradcheck", "--ops", "conv2d"])
        self.assertEqual(code, cli.EXIT_OK)
        lines = out.splitlines()
        self.assertEqual(len(lines), 1)
        self.assertTrue(lines[0].startswith("conv2d"))

    def test_gradcheck_fails_under_zero_tolerance(self):
        code, _ = run_quiet(["gradcheck", "--ops", "matmul", "--tol", "0"])
        self.assertEqual(code, cli.EXIT_GRADCHECK)

    def test_gradcheck_unknown_op(self):
        code, _ = run_quiet(["gradcheck", "--ops", "fft"])
        self.assertEqual(code, cli.EXIT_USAGE)


def read_bytes(path):
    with open(path, "rb") as file:
        return file.read()


class TestCliTrainMethods(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.manifest = os.path.join(self.tmp.name, "manifest.yaml")
        with open(self.manifest, "w", encoding="utf-8") as file:
            yaml.safe_dump(MANIFEST, file)

    def tearDown(self):
        self.tmp.cleanup()

    def train(self, out, *flags, seed=3):
        argv = ["--seed", str(seed), "train", "--procedural", self.manifest, "--out", os.path.join(self.tmp.name, out)]
        return run_quiet(argv + list(flags))[0]

    def ckpt(self, out, step):
        return os.path.join(self.tmp.name, out, f"step-{step:08d}.ckpt")

    def test_identical_runs_write_identical_checkpoints(self):
        flags = ["--size", "32", "--batch", "2", "--epochs", "1"]
        self.assertEqual(self.train("a", *flags), cli.EXIT_OK)
        self.assertEqual(self.train("b", *flags), cli.EXIT_OK)
        self.assertEqual(read_bytes(self.ckpt("a", 2)), read_bytes(self.ckpt("b", 2)))

    def test_resume_uses_stored_config(self):
        flags = ["--size", "32", "--batch", "2", "--no-gan"]
        self.assertEqual(self.train("whole", *flags, "--epochs", "2"), cli.EXIT_OK)
        self.assertEqual(self.train("split", *flags, "--epochs", "1"), cli.EXIT_OK)
        argv = ["train", "--procedural", self.manifest, "--out", os.path.join(self.tmp.name, "split")]
        code, _ = run_quiet(argv + ["--resume", self.ckpt("split", 2), "--epochs", "2"])
        self.assertEqual(code, cli.EXIT_OK)

        resumed = load_checkpoint(self.ckpt("split", 4))
        self.assertEqual(resumed.config.input_hw, 32)
        self.assertEqual(resumed.config.model_seed, 3)
        self.assertEqual(resumed.config.data_seed, 3)
        self.assertFalse(resumed.config.use_gan)
        self.assertEqual(read_bytes(self.ckpt("whole", 4)), read_bytes(self.ckpt("split", 4)))

    def test_resume_rejects_changed_seed(self):
        self.assertEqual(self.train("run", "--size", "32", "--batch", "2", "--no-gan", "--epochs", "1"), cli.EXIT_OK)
        code = self.train("run", "--resume", self.ckpt("run", 2), "--epochs", "2", seed=4)
        self.assertEqual(code, cli.EXIT_USAGE)
        self.assertFalse(os.path.exists(self.ckpt("run", 4)))


if __name__ == "__main__":
    unittest.main()
