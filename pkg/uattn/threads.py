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
""" Worker count policy, read from the U_ATTN_THREADS environment variable """
import logging
import os

ENV_VAR = "U_ATTN_THREADS"


def worker_count(default=4):
    """Return the number of worker threads I/O helpers may use. A value of 0 in
    U_ATTN_THREADS selects strict single-threaded mode, in which case 1 is returned
    and callers must not spawn workers."""
    logger = logging.getLogger("uattn.threads")
    logger.addHandler(logging.NullHandler())

    value = os.environ.get(ENV_VAR)
    if value is None or value.strip() == "":
        return default
    try:
        count = int(value)
    except ValueError:
        logger.warning(f"Ignoring non-numeric {ENV_VAR}={value}")
        return default
    if count < 0:
        logger.warning(f"Ignoring negative {ENV_VAR}={value}")
        return default
    return max(count, 1)


def is_strict():
    """Returns True if strict single-threaded deterministic mode is selected."""
    return os.environ.get(ENV_VAR, "").strip() == "0"
