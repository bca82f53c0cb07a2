"""Analytic semantic encoder: image -> point in the conceptual space.

Segmentation by saturation threshold, color by circular/arithmetic means
over the foreground, shape ratio from the radial profile of the boundary.
"""

from __future__ import annotations

import functools
import math

import numpy as np
from scipy import ndimage

from .cspace import SemanticPoint, polygon_ratio
from .errors import DegenerateHueError, DegenerateSceneError, DegenerateShapeError
from .scenegen import image_hsv

SATURATION_THRESHOLD = 0.2
MIN_FOREGROUND_PIXELS = 20
N_SECTORS = 64
MIN_NONEMPTY_SECTORS = 8


def segment(img: np.ndarray) -> np.ndarray:
    """Boolean foreground mask: pixels with saturation above threshold.

    Only the largest 4-connected component is kept; channel noise flips
    roughly one stray background pixel per image above the threshold, and
    a single stray pixel would wreck the shape fit.
    """
    _, s, _ = image_hsv(img)
    mask = s > SATURATION_THRESHOLD
    labels, count = ndimage.label(mask)
    if count > 1:
        sizes = ndimage.sum_labels(mask, labels, index=np.arange(1, count + 1))
        mask = labels == (int(sizes.argmax()) + 1)
    if int(mask.sum()) < MIN_FOREGROUND_PIXELS:
        raise DegenerateSceneError(
            f"only {int(mask.sum())} foreground pixels, need {MIN_FOREGROUND_PIXELS}")
    return mask


def estimate_color(img: np.ndarray, mask: np.ndarray) -> tuple[float, float, float]:
    """(hue, saturation, brightness) of the foreground.

    Hue is the circular mean (direction of the summed unit vectors), which
    handles the wrap at 0/1 correctly; saturation and value are plain means.
    """
    h, s, v = image_hsv(img)
    hues = h[mask]
    cos_sum = float(np.cos(2.0 * math.pi * hues).sum())
    sin_sum = float(np.sin(2.0 * math.pi * hues).sum())
    if math.hypot(cos_sum, sin_sum) < 1e-9:
        raise DegenerateHueError("foreground hues cancel; circular mean undefined")
    hue = (math.atan2(sin_sum, cos_sum) / (2.0 * math.pi)) % 1.0
    return hue, float(s[mask].mean()), float(v[mask].mean())


def boundary_mask(mask: np.ndarray) -> np.ndarray:
    """Foreground pixels with a non-foreground 4-neighbor or on the frame edge."""
    padded = np.pad(mask, 1, constant_values=False)
    interior = (padded[:-2, 1:-1] & padded[2:, 1:-1]
                & padded[1:-1, :-2] & padded[1:-1, 2:])
    edge = np.zeros_like(mask)
    edge[0, :] = edge[-1, :] = edge[:, 0] = edge[:, -1] = True
    return mask & (~interior | edge)


#: Candidate shapes the radial model is fitted against (None = circle).
CANDIDATE_SHAPES = (3, 4, 8, None)

#: Tie-break factor when both circle and octagon can reproduce a mask
#: exactly; calibrated on noiseless renders of both shapes.
_OCTAGON_SLACK_FACTOR = 2.5


@functools.lru_cache(maxsize=4)
def _grid(size: int) -> tuple[np.ndarray, np.ndarray]:
    gx, gy = np.meshgrid(np.arange(size, dtype=float), np.arange(size, dtype=float))
    return gx.ravel(), gy.ravel()


def _sector_occupancy(mask: np.ndarray) -> int:
    """Number of angular sectors around the centroid holding a boundary pixel."""
    ys, xs = np.nonzero(mask)
    cy = ys.mean()
    cx = xs.mean()
    by, bx = np.nonzero(boundary_mask(mask))
    angles = np.arctan2(by - cy, bx - cx) % (2.0 * math.pi)
    sectors = np.minimum((angles / (2.0 * math.pi) * N_SECTORS).astype(int),
                         N_SECTORS - 1)
    return int(np.unique(sectors).size)


def _model_radius(angles: np.ndarray, n: int | None, radius: float,
                  rotation: np.ndarray | float) -> np.ndarray:
    """Center-to-boundary distance of a regular shape along given angles."""
    if n is None:
        return np.full_like(angles, radius)
    folded = (angles - rotation) % (2.0 * math.pi / n) - math.pi / n
    return radius * math.cos(math.pi / n) / np.cos(folded)


def _consistency_slack(mask: np.ndarray, n: int | None,
                       rot_seed: float = 0.0) -> float:
    """Largest margin by which some shape of the family reproduces the mask.

    For a candidate center (and rotation), every pixel reduces to a scalar
    u = dist * cos(folded angle) such that the pixel is inside the shape
    iff u <= apothem; the mask is exactly reproducible iff min(u over
    background) exceeds max(u over foreground). A positive return value is
    therefore a certificate that the family can generate this exact
    raster. Searched over a center grid around the centroid plus a
    rotation grid for polygons.
    """
    ys, xs = np.nonzero(mask)
    cy0 = ys.mean()
    cx0 = xs.mean()
    gx, gy = _grid(mask.shape[0])
    flat = mask.ravel()
    dist0 = np.hypot(gx - cx0, gy - cy0)
    rmax = dist0[flat].max()
    band = (dist0 >= rmax - 3.2) & (dist0 <= rmax + 3.2)
    px = gx[band]
    py = gy[band]
    fg = flat[band]
    if fg.all() or not fg.any():
        return -np.inf

    if n is None:
        rots = np.array([0.0])
    else:
        rots = rot_seed + np.arange(36) * (2.0 * math.pi / n / 36)

    def slack_at(cx: float, cy: float) -> float:
        dist = np.hypot(px - cx, py - cy)
        if n is None:
            u = dist[:, None]
        else:
            ang = np.arctan2(py - cy, px - cx)[:, None]
            folded = (ang - rots[None, :]) % (2.0 * math.pi / n) - math.pi / n
            u = dist[:, None] * np.cos(folded)
        return float((u[~fg].reshape(-1, rots.size).min(axis=0)
                      - u[fg].reshape(-1, rots.size).max(axis=0)).max())

    best = -np.inf
    best_c = (cx0, cy0)
    for dx in np.arange(-0.6, 0.61, 0.3):
        for dy in np.arange(-0.6, 0.61, 0.3):
            s = slack_at(cx0 + dx, cy0 + dy)
            if s > best:
                best = s
                best_c = (cx0 + dx, cy0 + dy)
    cx, cy = best_c
    for step in (0.15, 0.075, 0.0375):
        for dx, dy in ((step, 0), (-step, 0), (0, step), (0, -step),
                       (step, step), (step, -step), (-step, step), (-step, -step)):
            s = slack_at(cx + dx, cy + dy)
            if s > best:
                best = s
                cx, cy = cx + dx, cy + dy
    return best


def fit_shape(mask: np.ndarray) -> tuple[int | None, float, float]:
    """Best-fitting regular shape for a mask: (n_sides, circumradius, rotation).

    For each candidate shape the circumradius seed comes from the pixel
    area, the rotation from a coarse-to-fine grid, and the score is the
    pixel-wise disagreement between the mask and the rasterized shape.
    Per-pixel boundary estimates are too noisy on a 25x25 raster to
    separate near-circular shapes; fitting whole templates pools the
    evidence of every pixel. Circle-vs-octagon decisions additionally use
    the exact-consistency certificate, since their templates differ by
    only a few corner pixels at small radii.
    """
    ys, xs = np.nonzero(mask)
    cy = ys.mean()
    cx = xs.mean()
    gx, gy = _grid(mask.shape[0])
    dist = np.hypot(gx - cx, gy - cy)
    angles = np.arctan2(gy - cy, gx - cx)
    flat = mask.ravel()
    area = float(flat.sum())

    best = (None, 0.0, 0.0)
    best_score = np.inf
    for n in CANDIDATE_SHAPES:
        if n is None:
            r0 = math.sqrt(area / math.pi)
            rot_step = 0.0
            rots = np.array([0.0])
        else:
            r0 = math.sqrt(2.0 * area / (n * math.sin(2.0 * math.pi / n)))
            rot_step = 2.0 * math.pi / n / 16
            rots = np.arange(16) * rot_step
        # pixels that every candidate of this family agrees on contribute a
        # constant; score only the annulus the radius/rotation grid can touch
        apothem_frac = 1.0 if n is None else math.cos(math.pi / n)
        lo = 0.92 * r0 * apothem_frac - 1e-9
        hi = 1.08 * r0 + 1e-9
        band = (dist >= lo) & (dist <= hi)
        base = int((~flat & (dist < lo)).sum() + (flat & (dist > hi)).sum())
        bdist = dist[band]
        bang = angles[band]
        bflat = flat[band]
        for radius in (0.96 * r0, r0, 1.04 * r0):
            # vectorize over rotation candidates
            model = _model_radius(bang[:, None], n, radius, rots[None, :])
            scores = (bflat[:, None] != (bdist[:, None] <= model)).sum(axis=0)
            k = int(scores.argmin())
            score, rot = float(scores[k]) + base, float(rots[k])
            # local rotation refinement
            for step in (rot_step / 2, rot_step / 4):
                if n is None:
                    break
                for cand in (rot - step, rot + step):
                    m = _model_radius(bang, n, radius, cand)
                    sc = float((bflat != (bdist <= m)).sum()) + base
                    if sc < score:
                        score, rot = sc, cand
            if score < best_score:
                best_score = score
                best = (n, radius, rot)

    if best[0] in (None, 8):
        circle_slack = _consistency_slack(mask, None)
        octagon_slack = _consistency_slack(mask, 8)
        if circle_slack > 0 and octagon_slack <= 0:
            best = (None, best[1], 0.0)
        elif octagon_slack > 0 and circle_slack <= 0:
            best = (8, best[1], best[2])
        elif circle_slack > 0 and octagon_slack > 0:
            # both families reproduce this raster exactly; the octagon family
            # matches spuriously more often, so it must win by a clear margin
            if octagon_slack > _OCTAGON_SLACK_FACTOR * circle_slack:
                best = (8, best[1], best[2])
            else:
                best = (None, best[1], 0.0)
    return best


def estimate_shape_ratio(mask: np.ndarray) -> float:
    """Max/min center-to-boundary distance ratio of the mask's shape.

    The ratio of the best-fitting regular shape; exact values 2, sqrt(2),
    1/cos(pi/8), and 1 for the four shapes in play.
    """
    if _sector_occupancy(mask) < MIN_NONEMPTY_SECTORS:
        raise DegenerateShapeError(
            f"fewer than {MIN_NONEMPTY_SECTORS} populated boundary sectors")
    n, _, _ = fit_shape(mask)
    return polygon_ratio(n)


def encode(img: np.ndarray) -> SemanticPoint:
    """Full embedding: segment, then color and shape estimation."""
    mask = segment(img)
    hue, sat, val = estimate_color(img, mask)
    ratio = estimate_shape_ratio(mask)
    return SemanticPoint(ratio, hue, min(sat, 1.0), min(val, 1.0))
