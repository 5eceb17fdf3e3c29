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
""" A uattn configuration module that exposes its semantic/syntax validators """
import logging
import os.path

import yaml as pyyaml
import yamale
from yamale import validators

from .train import validate_train, validate_loss
from .textures import validate_textures


class RGBTriple(validators.Validator):
    """Custom color validator - takes a list of exactly three numbers, each in the
    normalized pixel range [-1, 1]: [0.5, -0.25, 1] is correct, [0, 0] and [2, 0, 0]
    are not.
    """

    tag = "rgb"

    def _is_valid(self, value):
        if not isinstance(value, list) or len(value) != 3:
            return False
        for channel in value:
            if isinstance(channel, bool) or not isinstance(channel, (int, float)):
                return False
            if channel < -1.0 or channel > 1.0:
                return False
        return True


class Validator:
    """Holds a parsed YAML configuration against the Yamale schema (the built-in
    schema.yaml unless a schema filename is given) and then against the semantic
    checks of the 'train', 'loss' and 'textures' sections. Every check returns
    (ok, messages); validate() concatenates the messages of all of them.
    """

    def __init__(self, schema=None):
        self.logger = logging.getLogger("uattn.config")
        self.logger.addHandler(logging.NullHandler())

        self.schema = schema
        self.validators = [validate_train, validate_loss, validate_textures]
        self._compiled = None

    def schema_file(self):
        """Return the schema file in use."""
        if self.schema:
            return self.schema
        return os.path.abspath(os.path.join(os.path.dirname(__file__), "..", "schema.yaml"))

    def compiled_schema(self):
        """The Yamale schema with the custom validators registered, built once."""
        if self._compiled is None:
            fname = self.schema_file()
            if not os.path.isfile(fname):
                raise FileNotFoundError(f"schema file {fname} does not exist")
            known = validators.DefaultValidators.copy()
            known[RGBTriple.tag] = RGBTriple
            self._compiled = yamale.make_schema(fname, validators=known)
            self.logger.debug(f"Compiled schema {fname}")
        return self._compiled

    def check_syntax(self, yaml):
        """Yamale pass. Messages are prefixed with 'yamale: '."""
        try:
            schema = self.compiled_schema()
        except FileNotFoundError as err:
            self.logger.error(f"Cannot load schema: {err}")
            return False, [str(err)]
        try:
            yamale.validate(schema, yamale.make_data(content=pyyaml.safe_dump(yaml)))
        except yamale.YamaleError as err:
            return False, [f"yamale: {error}" for result in err.results for error in result.errors]
        return True, []

    def check_semantics(self, yaml):
        """Run every semantic validator; all of them run even after a failure."""
        results = [func(yaml) for func in self.validators]
        msgs = [msg for _, found in results for msg in found or []]
        return all(ok for ok, _ in results), msgs

    def validate(self, yaml):
        """Validate the syntax and, if that passed, the semantics of the YAML maps.
        An empty configuration is valid."""
        if not yaml:
            return True, []
        ok, msgs = self.check_syntax(yaml)
        if not ok:
            return ok, msgs
        self.logger.debug("Syntax valid, checking semantics")
        return self.check_semantics(yaml)

    def valid_config(self, yaml):
        """Validate the given YAML configuration, logging every message at ERROR.

        Returns True if the configuration is valid, False otherwise.
        """
        ok, msgs = self.validate(yaml)
        if not ok:
            for msg in msgs:
                self.logger.error(msg)
            return False
        self.logger.info("Configuration validated successfully")
        return True

    def add_validator(self, func):
        """Append a semantic check with the prototype `ok, msgs = func(yaml)`. It only
        runs when the Yamale pass succeeded, after the built-in checks."""
        self.validators.append(func)


def load_yaml(path):
    """Read a YAML document from `path`; an empty file yields an empty dict."""
    with open(path, "r", encoding="utf-8") as file:
        return pyyaml.safe_load(file) or {}
