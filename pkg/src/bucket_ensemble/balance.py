"""Class balancing through color-quantized copies of minority images.

The minority class is topped up with synthetic variants: each variant is
the source image re-rendered with its colors reduced to k dominant tones
by k-means over the RGB triples. k cycles through {2, 3, 4} so consecutive
copies of the same source never look identical.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DataError
from .rng import seeded_rng, spawn_seed

AUGMENT_MARKER = "__aug"
_K_CYCLE = (2, 3, 4)
_MAX_KMEANS_ITER = 50


@dataclass(frozen=True)
class PixelImage:
    """Row-major RGB raster with 8-bit channels."""

    width: int
    height: int
    pixels: np.ndarray  # shape (width * height, 3), uint8

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise DataError(f"image dimensions must be positive, got {self.width}x{self.height}")
        px = np.asarray(self.pixels)
        if px.shape != (self.width * self.height, 3):
            raise DataError(
                f"expected {self.width * self.height} RGB triples, got shape {px.shape}"
            )
        if px.dtype != np.uint8:
            if np.any(px < 0) or np.any(px > 255):
                raise DataError("channel values must lie in [0, 255]")
            px = px.astype(np.uint8)
        object.__setattr__(self, "pixels", px)


def read_ppm(path) -> PixelImage:
    """Read a binary (P6) PPM file with 8-bit channels."""
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise DataError(f"cannot read image {path}: {exc}") from exc

    # Header tokens may be separated by any whitespace and '#' comments.
    tokens = []
    pos = 0
    while len(tokens) < 4:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos >= len(data):
            raise DataError(f"{path}: truncated PPM header")
        if data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos] != 0x0A:
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        tokens.append(data[start:pos])
    pos += 1  # single whitespace byte after maxval

    if tokens[0] != b"P6":
        raise DataError(f"{path}: not a binary PPM (P6) file")
    try:
        width, height, maxval = (int(t) for t in tokens[1:])
    except ValueError as exc:
        raise DataError(f"{path}: malformed PPM header") from exc
    if maxval != 255:
        raise DataError(f"{path}: only 8-bit PPM supported, maxval={maxval}")
    expected = width * height * 3
    raster = data[pos : pos + expected]
    if len(raster) != expected:
        raise DataError(
            f"{path}: expected {expected} raster bytes, found {len(raster)}"
        )
    pixels = np.frombuffer(raster, dtype=np.uint8).reshape(-1, 3)
    return PixelImage(width=width, height=height, pixels=pixels.copy())


def write_ppm(image: PixelImage, path) -> None:
    with open(path, "wb") as fh:
        fh.write(f"P6\n{image.width} {image.height}\n255\n".encode("ascii"))
        fh.write(image.pixels.tobytes())


def _round_channels(values: np.ndarray) -> np.ndarray:
    # Nearest integer, halves away from zero; channels are non-negative
    # so floor(x + 0.5) is exactly that.
    return np.clip(np.floor(values + 0.5), 0.0, 255.0).astype(np.uint8)


@dataclass(frozen=True)
class ColorQuantization:
    centroids: np.ndarray  # (k, 3) real-valued
    quantized: PixelImage
    sse_history: tuple
    n_iter: int
    converged: bool


def _seed_centroids(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """k-means++ seeding; degenerate distance mass falls back to uniform."""
    n = points.shape[0]
    centroids = np.empty((k, 3), dtype=np.float64)
    centroids[0] = points[int(rng.integers(n))]
    if k == 1:
        return centroids
    best_d2 = np.sum((points - centroids[0]) ** 2, axis=1)
    for c in range(1, k):
        total = float(best_d2.sum())
        if total <= 0.0:
            idx = int(rng.integers(n))
        else:
            idx = int(rng.choice(n, p=best_d2 / total))
        centroids[c] = points[idx]
        d2 = np.sum((points - centroids[c]) ** 2, axis=1)
        best_d2 = np.minimum(best_d2, d2)
    return centroids


def kmeans_colors(image: PixelImage, k: int, seed: int = 0,
                  max_iter: int = _MAX_KMEANS_ITER) -> ColorQuantization:
    """Quantize an image to k colors with Lloyd iterations over RGB space.

    Arithmetic stays in real numbers throughout; centroid channels round
    to integers only when the quantized raster is materialized. Clusters
    that come up empty are re-seeded on the point farthest from its
    current centroid, which cannot increase the objective.
    """
    if int(k) < 1:
        raise ConfigError(f"k must be >= 1, got {k}")
    k = int(k)
    rng = seeded_rng(seed, "kmeans-colors")
    points = image.pixels.astype(np.float64)
    n = points.shape[0]
    centroids = _seed_centroids(points, k, rng)

    history: list[float] = []
    assign = None
    converged = False
    n_iter = 0
    for n_iter in range(1, int(max_iter) + 1):
        d2 = (
            np.sum(points * points, axis=1)[:, None]
            - 2.0 * points @ centroids.T
            + np.sum(centroids * centroids, axis=1)[None, :]
        )
        np.maximum(d2, 0.0, out=d2)
        new_assign = np.argmin(d2, axis=1)
        min_d2 = d2[np.arange(n), new_assign]
        history.append(float(min_d2.sum()))

        reseeded = False
        for c in range(k):
            if not np.any(new_assign == c):
                far = int(np.argmax(min_d2))
                if min_d2[far] <= 0.0:
                    continue  # every point sits on a centroid already
                centroids[c] = points[far]
                reseeded = True
        if reseeded:
            assign = new_assign
            continue

        if assign is not None and np.array_equal(new_assign, assign):
            converged = True
            break
        assign = new_assign
        for c in range(k):
            members = points[assign == c]
            if members.shape[0]:
                centroids[c] = members.mean(axis=0)

    quantized = PixelImage(
        width=image.width,
        height=image.height,
        pixels=_round_channels(centroids[assign]),
    )
    return ColorQuantization(
        centroids=centroids,
        quantized=quantized,
        sse_history=tuple(history),
        n_iter=n_iter,
        converged=converged,
    )


@dataclass(frozen=True)
class AugmentationAssignment:
    source_id: str
    k: int
    output_id: str


@dataclass(frozen=True)
class BalancePlan:
    minority_label: int
    deficit: int
    assignments: tuple = field(default_factory=tuple)


def plan_balance(labels, ids=None, seed: int = 0) -> BalancePlan:
    """Decide which minority images get augmented copies, and with which k.

    Sources rotate round-robin through the minority ids in seeded-shuffled
    order, so no image is used a second time before every minority image
    has been used once. Balanced input yields an empty plan.
    """
    labels = np.asarray(labels)
    if ids is None:
        ids = [str(i) for i in range(labels.shape[0])]
    ids = [str(i) for i in ids]
    if len(ids) != labels.shape[0]:
        raise DataError(f"{len(ids)} ids but {labels.shape[0]} labels")
    n_pos = int(np.sum(labels == 1))
    n_neg = int(np.sum(labels == -1))
    if n_pos + n_neg != labels.shape[0]:
        raise DataError("labels must be -1 or +1")
    if n_pos == 0 or n_neg == 0:
        raise DataError("balancing needs both classes present")
    if n_pos == n_neg:
        return BalancePlan(minority_label=1, deficit=0)

    minority = 1 if n_pos < n_neg else -1
    deficit = abs(n_pos - n_neg)
    pool = [i for i, lab in zip(ids, labels) if lab == minority]
    order = seeded_rng(seed, "balance-shuffle").permutation(len(pool))
    pool = [pool[int(i)] for i in order]

    assignments = []
    for t in range(deficit):
        source = pool[t % len(pool)]
        assignments.append(
            AugmentationAssignment(
                source_id=source,
                k=_K_CYCLE[t % len(_K_CYCLE)],
                output_id=f"{source}{AUGMENT_MARKER}{t}",
            )
        )
    return BalancePlan(
        minority_label=minority,
        deficit=deficit,
        assignments=tuple(assignments),
    )


def execute_plan(plan: BalancePlan, images, seed: int = 0) -> dict:
    """Materialize every assignment; returns {output_id: PixelImage}.

    ``images`` maps source id to PixelImage and must cover every source
    the plan references.
    """
    out = {}
    for t, a in enumerate(plan.assignments):
        if a.source_id not in images:
            raise DataError(f"no image provided for source id {a.source_id!r}")
        child_seed = spawn_seed(seed, f"augment/{t}/{a.output_id}")
        result = kmeans_colors(images[a.source_id], a.k, seed=child_seed)
        out[a.output_id] = result.quantized
    return out
