"""Synthetic scene generator.

Renders 25x25 RGB images of colored regular polygons and circles on an
achromatic gray background, with controlled jitter in color, pose, and
size. Stands in for a real image dataset so the rest of the pipeline can
stay analytic and self-contained.
"""

from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass

import numpy as np

from . import cspace
from .errors import InvalidParameterError

IMAGE_SIZE = 25

#: Number of polygon sides per concept; None means circle.
CONCEPT_SHAPES = {
    "yellow-square": 4,
    "red-triangle": 3,
    "red-octagon": 8,
    "red-circle": None,
    "blue-circle": None,
}

HUE_JITTER = 0.03
SAT_RANGE = (0.9, 1.0)
VAL_RANGE = (0.93, 1.0)
RADIUS_RANGE = (6.0, 11.0)
CENTER_JITTER = 1.0
PIXEL_NOISE_SIGMA = 0.02
BACKGROUND_VALUE = 0.5


@dataclass(frozen=True)
class SceneSpec:
    """Everything needed to render one scene deterministically."""

    concept: str
    fill_hsv: tuple[float, float, float]
    n_sides: int | None
    circumradius: float
    rotation: float
    center: tuple[float, float]
    pixel_noise_sigma: float = PIXEL_NOISE_SIGMA
    background_value: float = BACKGROUND_VALUE


def sample_spec(concept: str, rng: np.random.Generator) -> SceneSpec:
    """Draw a jittered scene for the given concept label."""
    if concept not in CONCEPT_SHAPES:
        raise InvalidParameterError(f"unknown concept {concept!r}")
    proto_hue = cspace.concept_by_label(concept).prototype.h
    hue = (proto_hue + rng.uniform(-HUE_JITTER, HUE_JITTER)) % 1.0
    sat = rng.uniform(*SAT_RANGE)
    val = rng.uniform(*VAL_RANGE)
    rotation = rng.uniform(0.0, 2.0 * math.pi)
    radius = rng.uniform(*RADIUS_RANGE)
    mid = (IMAGE_SIZE - 1) / 2.0
    center = (mid + rng.uniform(-CENTER_JITTER, CENTER_JITTER),
              mid + rng.uniform(-CENTER_JITTER, CENTER_JITTER))
    return SceneSpec(concept, (hue, sat, val), CONCEPT_SHAPES[concept],
                     radius, rotation, center)


def point_in_shape(x: float, y: float, spec: SceneSpec) -> bool:
    """Whether a pixel center lies inside the scene's shape (boundary counts)."""
    return bool(_shape_mask(np.asarray([x], float), np.asarray([y], float), spec)[0])


def _shape_mask(xs: np.ndarray, ys: np.ndarray, spec: SceneSpec) -> np.ndarray:
    cx, cy = spec.center
    dx = xs - cx
    dy = ys - cy
    if spec.n_sides is None:
        return dx * dx + dy * dy <= spec.circumradius ** 2 + 1e-9
    n = spec.n_sides
    apothem = spec.circumradius * math.cos(math.pi / n)
    inside = np.ones(xs.shape, dtype=bool)
    for k in range(n):
        # outward edge normals sit between consecutive vertex angles
        phi = spec.rotation + (2 * k + 1) * math.pi / n
        inside &= dx * math.cos(phi) + dy * math.sin(phi) <= apothem + 1e-9
    return inside


def render(spec: SceneSpec, rng: np.random.Generator | None = None) -> np.ndarray:
    """Rasterize a spec to a (25, 25, 3) float image with channels in [0, 1].

    Pixel centers inside the shape get the fill color, the rest the
    background gray; i.i.d. Gaussian noise is added per channel and
    clamped. rng may be omitted when pixel_noise_sigma is 0.
    """
    xs, ys = np.meshgrid(np.arange(IMAGE_SIZE, dtype=float),
                         np.arange(IMAGE_SIZE, dtype=float))
    mask = _shape_mask(xs, ys, spec)
    h, s, v = spec.fill_hsv
    fill = hsv_to_rgb(np.asarray([h]), np.asarray([s]), np.asarray([v]))
    img = np.full((IMAGE_SIZE, IMAGE_SIZE, 3), spec.background_value)
    img[mask] = np.stack(fill, axis=-1)[0]
    if spec.pixel_noise_sigma > 0:
        if rng is None:
            raise InvalidParameterError("noisy render requires an rng")
        img = img + rng.normal(0.0, spec.pixel_noise_sigma, img.shape)
    return np.clip(img, 0.0, 1.0)


def hsv_to_rgb(h: np.ndarray, s: np.ndarray, v: np.ndarray):
    """Standard hexcone HSV -> RGB, vectorized; inputs clamped to range."""
    h = np.asarray(h, float) % 1.0
    s = np.clip(np.asarray(s, float), 0.0, 1.0)
    v = np.clip(np.asarray(v, float), 0.0, 1.0)
    i = np.floor(h * 6.0).astype(int) % 6
    f = h * 6.0 - np.floor(h * 6.0)
    p = v * (1.0 - s)
    q = v * (1.0 - s * f)
    t = v * (1.0 - s * (1.0 - f))
    r = np.choose(i, [v, q, p, p, t, v])
    g = np.choose(i, [t, v, v, q, p, p])
    b = np.choose(i, [p, p, t, v, v, q])
    return r, g, b


def rgb_to_hsv(r: np.ndarray, g: np.ndarray, b: np.ndarray):
    """Standard hexcone RGB -> HSV; hue is 0 for achromatic pixels."""
    r = np.asarray(r, float)
    g = np.asarray(g, float)
    b = np.asarray(b, float)
    maxc = np.maximum(np.maximum(r, g), b)
    minc = np.minimum(np.minimum(r, g), b)
    v = maxc
    span = maxc - minc
    s = np.where(maxc > 0, span / np.where(maxc > 0, maxc, 1.0), 0.0)
    safe = np.where(span > 0, span, 1.0)
    rc = (maxc - r) / safe
    gc = (maxc - g) / safe
    bc = (maxc - b) / safe
    h = np.where(maxc == r, bc - gc, np.where(maxc == g, 2.0 + rc - bc, 4.0 + gc - rc))
    h = np.where(span > 0, (h / 6.0) % 1.0, 0.0)
    return h, s, v


def image_hsv(img: np.ndarray):
    """Per-pixel HSV planes of a (H, W, 3) RGB image."""
    return rgb_to_hsv(img[..., 0], img[..., 1], img[..., 2])


def write_ppm(img: np.ndarray, path: str) -> None:
    """Write a binary PPM (P6, maxval 255, row-major RGB)."""
    data = np.clip(np.rint(img * 255.0), 0, 255).astype(np.uint8)
    h, w = data.shape[:2]
    with open(path, "wb") as f:
        f.write(f"P6\n{w} {h}\n255\n".encode("ascii"))
        f.write(data.tobytes())


def read_ppm(path: str) -> np.ndarray:
    """Read a binary PPM back into a float image with channels in [0, 1]."""
    with open(path, "rb") as f:
        raw = f.read()
    fields = []
    pos = 0
    while len(fields) < 4:
        while pos < len(raw) and raw[pos:pos + 1].isspace():
            pos += 1
        if raw[pos:pos + 1] == b"#":
            pos = raw.index(b"\n", pos) + 1
            continue
        start = pos
        while pos < len(raw) and not raw[pos:pos + 1].isspace():
            pos += 1
        fields.append(raw[start:pos])
    pos += 1  # single whitespace after maxval
    if fields[0] != b"P6":
        raise InvalidParameterError(f"{path}: not a binary PPM")
    w, h, maxval = int(fields[1]), int(fields[2]), int(fields[3])
    data = np.frombuffer(raw, dtype=np.uint8, count=w * h * 3, offset=pos)
    return data.reshape(h, w, 3).astype(float) / float(maxval)


def dump_dataset(out_dir: str, per_concept: int, rng: np.random.Generator) -> str:
    """Render a labeled dataset of PPM files plus a labels CSV.

    Returns the path of the labels file.
    """
    os.makedirs(out_dir, exist_ok=True)
    labels_path = os.path.join(out_dir, "labels.csv")
    with open(labels_path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["filename", "label"])
        for label in sorted(CONCEPT_SHAPES):
            for i in range(per_concept):
                spec = sample_spec(label, rng)
                name = f"{label}_{i:04d}.ppm"
                write_ppm(render(spec, rng), os.path.join(out_dir, name))
                writer.writerow([name, label])
    return labels_path
