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
""" Locate and parse the YAML fixtures of the config unit tests """
import os
import yaml

FIXTURE_DIR = os.path.abspath(os.path.join(os.path.dirname(__file__), "../unittest"))


def fixture_path(filename):
    """Absolute path of a fixture under uattn/unittest/."""
    return os.path.join(FIXTURE_DIR, filename)


def load_fixture(filename):
    """Parse a single-document fixture with the same safe loader the CLI uses."""
    with open(fixture_path(filename), "r", encoding="utf-8") as file:
        return yaml.safe_load(file)
