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
""" This is the test suite runner for uattn: YAML configuration cases, then every
test_*.py unit test module """
# pylint: disable=duplicate-code
import os
import sys
import glob
import re
import unittest
import yaml

try:
    from uattn.config import Validator
except ModuleNotFoundError:
    sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))
    from uattn.config import Validator

try:
    import argparse
except ImportError:
    print("ERROR: install argparse manually: sudo pip install argparse")
    sys.exit(-2)

HERE = os.path.dirname(os.path.abspath(__file__))


class YAMLTest(unittest.TestCase):
    """This test suite takes a two-document YAML file, test metadata followed by a
    candidate configuration, holds the configuration against the syntax (Yamale) and
    semantic validators, and compares the messages with the expected ones.
    """

    def __init__(self, testName, yaml_filename, yaml_schema):
        super().__init__(testName)
        self.yaml_filename = yaml_filename
        self.yaml_schema = yaml_schema

    def test_yaml(self):
        """The test executor"""
        with open(self.yaml_filename, "r", encoding="utf-8") as file:
            documents = list(yaml.safe_load_all(file))
        self.assertEqual(len(documents), 2, f"{self.yaml_filename}: expecting test and config documents")
        test, cfg = documents
        self.assertIsNotNone(test)
        if not cfg:
            return

        _rv, msgs = Validator(schema=self.yaml_schema).validate(cfg)

        errors = (test.get("test") or {}).get("errors") or {}
        msgs_expected = errors.get("expected", [])
        count = errors.get("count", 0)

        fail = False
        for msg in msgs:
            if not any(re.match(expected, msg) for expected in msgs_expected):
                print(f"{self.yaml_filename}: Unexpected message: {msg}", file=sys.stderr)
                fail = True

        if len(msgs) != count:
            print(
                f"{self.yaml_filename}: Unexpected error count {len(msgs)} (expecting {int(count)})",
                file=sys.stderr,
            )
        self.assertEqual(len(msgs), count)
        self.assertFalse(fail)


def main():
    """Run the YAML cases and the unit tests; the exit code is non-zero on failure"""
    parser = argparse.ArgumentParser(formatter_class=argparse.RawTextHelpFormatter)
    parser.add_argument(
        "-t",
        "--test",
        dest="test",
        type=str,
        nargs="+",
        default=[os.path.join(HERE, "unittest", "yaml", "*.yaml")],
        help="""YAML test file(s)""",
    )
    parser.add_argument(
        "-s",
        "--schema",
        dest="schema",
        type=str,
        default=os.path.join(HERE, "schema.yaml"),
        help="""YAML schema validation file""",
    )
    parser.add_argument(
        "-d",
        "--debug",
        dest="debug",
        action="store_true",
        help="""Enable debug, default False""",
    )
    parser.add_argument(
        "-q",
        "--quiet",
        dest="quiet",
        action="store_true",
        help="""Be quiet (only log warnings/errors), default False""",
    )

    args = parser.parse_args()
    if args.debug:
        verbosity = 2
    elif args.quiet:
        verbosity = 0
    else:
        verbosity = 1
    yaml_suite = unittest.TestSuite()
    for pattern in args.test:
        for fn in sorted(glob.glob(pattern)):
            yaml_suite.addTest(YAMLTest("test_yaml", yaml_filename=fn, yaml_schema=args.schema))
    yaml_ok = unittest.TextTestRunner(verbosity=verbosity, buffer=True).run(yaml_suite).wasSuccessful()

    tests = unittest.TestLoader().discover(start_dir=HERE, pattern="test_*.py", top_level_dir=os.path.dirname(HERE))
    unit_ok = unittest.TextTestRunner(verbosity=verbosity, buffer=True).run(tests).wasSuccessful()

    retval = 0
    if not yaml_ok:
        retval -= 1
    if not unit_ok:
        retval -= 2
    return retval


if __name__ == "__main__":
    sys.exit(main())
