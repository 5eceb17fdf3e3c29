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
""" Unit tests for procedural texture entries """
import unittest
from uattn.data import procedural
from . import textures
from .unittestyaml import load_fixture


class TestTexturesMethods(unittest.TestCase):
    def setUp(self):
        self.cfg = load_fixture("test_textures.yaml")

    def test_get_textures(self):
        self.assertEqual(3, len(textures.get_textures(self.cfg)))
        self.assertEqual([], textures.get_textures({}))

    def test_expand(self):
        entries = textures.expand_textures(self.cfg)
        self.assertEqual(5, len(entries))
        self.assertEqual([10, 11, 12], [e["seed"] for e in entries[:3]])
        self.assertNotIn("count", entries[0])
        self.assertEqual(0, entries[3]["seed"])
        self.assertEqual("value_noise", entries[4]["kind"])

    def test_get_period(self):
        self.assertEqual(16, textures.get_period({"kind": "checker"}))
        self.assertEqual(6, textures.get_period(textures.get_textures(self.cfg)[2]))

    def test_validate(self):
        self.assertEqual((True, []), textures.validate_textures(self.cfg))
        self.cfg["train"]["size"] = 40
        rv, msgs = textures.validate_textures(self.cfg)
        self.assertFalse(rv)
        self.assertEqual(["texture 0 kind checker period 16 does not divide size 40"], msgs)

    def test_validate_default_size(self):
        rv, msgs = textures.validate_textures({"textures": [{"kind": "checker", "period": 48}]})
        self.assertFalse(rv)
        self.assertEqual(["texture 0 kind checker period 48 does not divide size 128"], msgs)
        self.assertEqual((True, []), textures.validate_textures({"textures": [{"kind": "checker", "period": 32}]}))

    def test_validate_odd_period_once(self):
        cfg = {"train": {"size": 64}, "textures": [{"kind": "stripes", "period": 9}]}
        self.assertEqual((False, ["texture 0 kind stripes period 9 must be even"]), textures.validate_textures(cfg))

    def test_kinds_shared_with_generators(self):
        self.assertIs(textures.KINDS, procedural.KINDS)
        self.assertIs(textures.PERIODIC_KINDS, procedural.PERIODIC_KINDS)
        self.assertIs(textures.EVEN_PERIOD_KINDS, procedural.EVEN_PERIOD_KINDS)
