"""Image representation, dynamic-range bookkeeping, and PGM/PNG I/O.

Images are plain 2-D float64 numpy arrays (row-major, height x width).
8-bit files are promoted to float64 at load time; rounding stays far below
any accuracy target the rest of the pipeline works with.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ParameterError, RangeViolationError


@dataclass(frozen=True)
class RangeSpec:
    """Declared dynamic range: samples lie in [center - half_range, center + half_range]."""

    half_range: float
    center: float = 0.0

    def __post_init__(self):
        if not (self.half_range > 0):
            raise ParameterError(f"half_range must be positive, got {self.half_range}")


#: Default range for 8-bit input: [0, 255] maps into [-128, 127].
RANGE_8BIT = RangeSpec(half_range=128.0, center=128.0)


def as_image(arr) -> np.ndarray:
    """Validate and return a 2-D float64 image array."""
    img = np.asarray(arr, dtype=np.float64)
    if img.ndim != 2 or img.size == 0:
        raise ParameterError(f"image must be a non-empty 2-D array, got shape {img.shape}")
    if not np.all(np.isfinite(img)):
        raise ParameterError("image contains non-finite samples")
    return img


def validate_range(img: np.ndarray, spec: RangeSpec) -> None:
    """Raise RangeViolationError naming the first out-of-range pixel."""
    lo = spec.center - spec.half_range
    hi = spec.center + spec.half_range
    bad = (img < lo) | (img > hi)
    if bad.any():
        y, x = np.argwhere(bad)[0]
        raise RangeViolationError(
            f"sample {img[y, x]} at pixel (row={y}, col={x}) outside [{lo}, {hi}]"
        )


def center(img: np.ndarray, spec: RangeSpec) -> np.ndarray:
    """Subtract the range center so samples lie in [-half_range, half_range]."""
    img = as_image(img)
    validate_range(img, spec)
    return img - spec.center


def uncenter(img: np.ndarray, spec: RangeSpec) -> np.ndarray:
    """Add the range center back; exact inverse of :func:`center`."""
    return as_image(img) + spec.center


# ---------------------------------------------------------------------------
# File I/O: binary PGM (P5, maxval 255) mandatory, 8-bit grayscale PNG optional.
# ---------------------------------------------------------------------------

def load_pgm(path) -> np.ndarray:
    """Load a binary (P5) 8-bit PGM file as a float64 image."""
    data = Path(path).read_bytes()
    if not data.startswith(b"P5"):
        raise ValueError(f"{path}: not a binary PGM (missing P5 magic)")
    # Header: magic, width, height, maxval; '#' comments allowed between tokens.
    tokens = []
    pos = 2
    while len(tokens) < 3:
        m = re.compile(rb"\s*(?:#[^\n]*\n\s*)*(\d+)").match(data, pos)
        if m is None:
            raise ValueError(f"{path}: malformed PGM header")
        tokens.append(int(m.group(1)))
        pos = m.end()
    width, height, maxval = tokens
    if maxval != 255:
        raise ValueError(f"{path}: only maxval 255 supported, got {maxval}")
    pos += 1  # single whitespace after maxval
    raster = np.frombuffer(data, dtype=np.uint8, count=width * height, offset=pos)
    if raster.size != width * height:
        raise ValueError(f"{path}: truncated raster")
    return raster.reshape(height, width).astype(np.float64)


def save_pgm(path, img: np.ndarray) -> None:
    """Save as binary 8-bit PGM, clamping to [0, 255] and rounding half away from zero."""
    img = as_image(img)
    q = np.floor(np.clip(img, 0.0, 255.0) + 0.5).astype(np.uint8)
    h, w = q.shape
    with open(path, "wb") as f:
        f.write(b"P5\n%d %d\n255\n" % (w, h))
        f.write(q.tobytes())


def load_image(path) -> np.ndarray:
    """Load PGM or 8-bit grayscale PNG as a float64 image."""
    path = Path(path)
    if path.suffix.lower() == ".png":
        from PIL import Image as PILImage

        with PILImage.open(path) as im:
            if im.mode != "L":
                im = im.convert("L")
            return np.asarray(im, dtype=np.float64)
    return load_pgm(path)


def save_image(path, img: np.ndarray) -> None:
    """Save as PGM or PNG depending on extension; same quantization as save_pgm."""
    path = Path(path)
    if path.suffix.lower() == ".png":
        from PIL import Image as PILImage

        q = np.floor(np.clip(as_image(img), 0.0, 255.0) + 0.5).astype(np.uint8)
        PILImage.fromarray(q, mode="L").save(path)
    else:
        save_pgm(path, img)
