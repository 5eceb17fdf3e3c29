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
Image files. Binary PPM (P6, maxval 255) is read and written exactly; PNG goes
through Pillow when it is installed. Pixels map between bytes b and floats as
x = 2b/255 - 1 and b = round_half_up((x + 1) * 255 / 2), clamped to [0, 255].
"""
import logging
import os
import re
import numpy as np

from uattn.errors import DataError

logger = logging.getLogger("uattn.data")
logger.addHandler(logging.NullHandler())

IMAGE_SUFFIXES = (".ppm", ".png")
PPM_MAGIC = b"P6"
PPM_HEADER = re.compile(rb"\AP6(?:\s+|#[^\n]*\n)+(\d+)\s+(\d+)\s+(\d+)\s")


def bytes_to_image(pixels):
    """[H,W,3] uint8 to a float32 [3,H,W] image in [-1,1]."""
    values = pixels.astype(np.float64) * (2.0 / 255.0) - 1.0
    return np.ascontiguousarray(np.moveaxis(values, -1, 0)).astype(np.float32)


def image_to_bytes(image):
    """float [3,H,W] image to [H,W,3] uint8, rounding half up and clamping."""
    image = np.asarray(image, dtype=np.float64)
    if image.ndim != 3 or image.shape[0] != 3:
        raise DataError(f"expected a [3,H,W] image, got shape {image.shape}")
    scaled = np.floor((image + 1.0) * 127.5 + 0.5)
    return np.moveaxis(np.clip(scaled, 0, 255), 0, -1).astype(np.uint8)


def parse_ppm(payload, source="<bytes>"):
    """Decode a binary PPM document."""
    if not payload.startswith(PPM_MAGIC):
        raise DataError(f"{source}: not a binary PPM (P6) file")
    header = PPM_HEADER.match(payload)
    if not header:
        raise DataError(f"{source}: malformed PPM header")
    width, height, maxval = (int(v) for v in header.groups())
    if maxval != 255:
        raise DataError(f"{source}: unsupported maxval {maxval}, expecting 255")
    if width < 1 or height < 1:
        raise DataError(f"{source}: degenerate extent {width}x{height}")
    start = header.end()
    expected = width * height * 3
    body = payload[start : start + expected]
    if len(body) != expected:
        raise DataError(f"{source}: truncated payload, {len(body)} of {expected} bytes")
    pixels = np.frombuffer(body, dtype=np.uint8).reshape(height, width, 3)
    return bytes_to_image(pixels)


def encode_ppm(image):
    """Encode an image as "P6\\n<w> <h>\\n255\\n" followed by RGB bytes."""
    pixels = image_to_bytes(image)
    height, width = pixels.shape[:2]
    return b"P6\n%d %d\n255\n" % (width, height) + pixels.tobytes()


def _pillow():
    try:
        from PIL import Image  # pylint: disable=import-outside-toplevel
    except ImportError as err:
        raise DataError("PNG support needs Pillow: pip install Pillow") from err
    return Image


def load_image(path):
    """Load a .ppm or .png file as a float32 [3,H,W] image in [-1,1]."""
    suffix = os.path.splitext(path)[1].lower()
    if suffix == ".png":
        image_mod = _pillow()
        try:
            with image_mod.open(path) as img:
                pixels = np.asarray(img.convert("RGB"), dtype=np.uint8)
        except OSError as err:
            raise DataError(f"{path}: cannot read PNG: {err}") from err
        return bytes_to_image(pixels)
    try:
        with open(path, "rb") as file:
            payload = file.read()
    except OSError as err:
        raise DataError(f"{path}: {err}") from err
    return parse_ppm(payload, path)


def save_image(image, path):
    """Write an image to .ppm (default) or .png."""
    suffix = os.path.splitext(path)[1].lower()
    if suffix == ".png":
        image_mod = _pillow()
        image_mod.fromarray(image_to_bytes(image)).save(path)
    else:
        with open(path, "wb") as file:
            file.write(encode_ppm(image))
    logger.debug(f"Wrote {path}")


def list_images(directory):
    """Return the image files of a flat directory, sorted by name."""
    try:
        names = sorted(os.listdir(directory))
    except OSError as err:
        raise DataError(f"{directory}: {err}") from err
    return [
        os.path.join(directory, name)
        for name in names
        if os.path.splitext(name)[1].lower() in IMAGE_SUFFIXES
    ]
