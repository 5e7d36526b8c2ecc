"""Escape-time rasters and binary PPM output."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np


@dataclass(frozen=True)
class Window:
    center: complex
    width: float

    def __post_init__(self):
        if not self.width > 0:
            raise ValueError("window width must be positive")

    @classmethod
    def parse(cls, text: str) -> "Window":
        cx, cy, w = (float(t) for t in text.split(","))
        return cls(complex(cx, cy), w)

    def grid(self, width: int, height: int, rows: slice | None = None) -> np.ndarray:
        """Pixel-centre coordinates, row 0 at the top."""
        h = self.width * height / width
        xs = self.center.real - self.width / 2 + (np.arange(width) + 0.5) * (self.width / width)
        ys = self.center.imag + h / 2 - (np.arange(height) + 0.5) * (h / height)
        if rows is not None:
            ys = ys[rows]
        return xs[np.newaxis, :] + 1j * ys[:, np.newaxis]

    def pixel_of(self, z: complex, width: int, height: int) -> tuple[int, int]:
        """(row, col) of the pixel containing ``z``."""
        h = self.width * height / width
        col = int(np.floor((z.real - (self.center.real - self.width / 2)) / self.width * width))
        row = int(np.floor(((self.center.imag + h / 2) - z.imag) / h * height))
        return row, col


@dataclass
class RasterImage:
    width: int
    height: int
    pixels: np.ndarray  # uint8, (height, width) grayscale or (height, width, 3) color
    window: Window
    counts: np.ndarray | None = None  # escape iteration, -1 for interior

    def __post_init__(self):
        if self.pixels.shape[:2] != (self.height, self.width):
            raise ValueError("pixel array does not match the image size")

    def rgb(self) -> np.ndarray:
        if self.pixels.ndim == 3:
            return self.pixels
        return np.repeat(self.pixels[:, :, np.newaxis], 3, axis=2)

    def ppm_bytes(self) -> bytes:
        header = f"P6\n{self.width} {self.height}\n255\n".encode("ascii")
        return header + np.ascontiguousarray(self.rgb(), dtype=np.uint8).tobytes()

    def write_ppm(self, path) -> None:
        with open(path, "wb") as fh:
            fh.write(self.ppm_bytes())


def read_ppm(path) -> tuple[int, int, np.ndarray]:
    with open(path, "rb") as fh:
        data = fh.read()
    parts = data.split(maxsplit=4)
    if parts[0] != b"P6" or parts[3] != b"255":
        raise ValueError("not an 8-bit binary PPM")
    w, h = int(parts[1]), int(parts[2])
    body = parts[4]
    return w, h, np.frombuffer(body, dtype=np.uint8).reshape(h, w, 3)


def gray_ramp(counts: np.ndarray, max_iter: int) -> np.ndarray:
    """Interior (count -1) is black; escapes fade from white (count 0) toward dark gray."""
    out = np.zeros(counts.shape, dtype=np.uint8)
    esc = counts >= 0
    out[esc] = (1 + (254 * (max_iter - counts[esc])) // max_iter).astype(np.uint8)
    return out


def escape_counts(z0: np.ndarray, c, step: Callable, bailout: float, max_iter: int) -> np.ndarray:
    """Iterations before ``|z| > bailout`` for each start point; -1 if it never happens.

    ``step(z, c)`` advances the orbit.  ``c`` may be an array the shape of ``z0``.
    """
    z = np.array(z0, dtype=np.complex128)
    c = np.broadcast_to(np.asarray(c, dtype=np.complex128), z.shape).copy()
    counts = np.full(z.shape, -1, dtype=np.int64)
    active = np.abs(z) <= bailout
    counts[~active] = 0
    idx = np.nonzero(active.ravel())[0]
    zf, cf = z.ravel()[idx], c.ravel()[idx]
    flat = counts.ravel()
    for n in range(1, max_iter + 1):
        if idx.size == 0:
            break
        zf = step(zf, cf)
        out = np.abs(zf) > bailout
        if out.any():
            flat[idx[out]] = n
            keep = ~out
            idx, zf, cf = idx[keep], zf[keep], cf[keep]
    return counts


def default_threads() -> int:
    return os.cpu_count() or 1


def render_rows(window: Window, width: int, height: int, kernel: Callable, threads: int | None = None) -> np.ndarray:
    """Apply ``kernel(grid_block) -> counts_block`` over row blocks, in order."""
    if width < 1 or height < 1:
        raise ValueError("resolution must be at least 1x1")
    threads = threads or default_threads()
    block = max(1, height // (4 * threads)) if threads > 1 else height
    slices = [slice(r, min(r + block, height)) for r in range(0, height, block)]

    def work(sl):
        return kernel(window.grid(width, height, sl))

    if threads == 1:
        parts = [work(sl) for sl in slices]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(work, slices))
    return np.concatenate(parts, axis=0)
