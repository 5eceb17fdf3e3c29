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
""" Exceptions raised by the uattn library. The CLI maps them onto exit codes. """


class UAttnError(Exception):
    """Base class for all uattn errors."""


class ShapeError(UAttnError, ValueError):
    """A tensor, image or weight does not have the extents an operation requires."""


class NonFiniteError(UAttnError, ArithmeticError):
    """An operation produced NaN/Inf values, or a gradient contains them."""


class GraphError(UAttnError):
    """backward() was called on something that is not a valid scalar graph."""


class DataError(UAttnError):
    """An image file, manifest or dataset cannot be used."""


class CheckpointError(UAttnError):
    """A checkpoint file is malformed or disagrees with its configuration."""


class ConfigError(UAttnError):
    """A configuration did not pass validation."""
