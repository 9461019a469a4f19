"""Color quantization and the class-balancing augmentation plan."""

from collections import Counter

import numpy as np
import pytest

from bucket_ensemble import (
    PixelImage,
    execute_plan,
    kmeans_colors,
    plan_balance,
    read_ppm,
    write_ppm,
)
from bucket_ensemble.balance import AUGMENT_MARKER
from bucket_ensemble.errors import ConfigError, DataError
from conftest import random_image


# ------------------------------------------------------------- ppm i/o


def test_ppm_round_trip(tmp_path):
    img = random_image(0, width=7, height=5)
    path = tmp_path / "img.ppm"
    write_ppm(img, path)
    back = read_ppm(path)
    assert back.width == 7 and back.height == 5
    assert np.array_equal(back.pixels, img.pixels)


def test_ppm_header_comments_tolerated(tmp_path):
    img = random_image(1, width=2, height=2)
    raw = b"P6 # binary\n# a comment line\n 2\t2\n255\n" + img.pixels.tobytes()
    path = tmp_path / "c.ppm"
    path.write_bytes(raw)
    back = read_ppm(path)
    assert np.array_equal(back.pixels, img.pixels)


def test_ppm_rejects_wrong_magic(tmp_path):
    p = tmp_path / "x.ppm"
    p.write_bytes(b"P3\n1 1\n255\n0 0 0\n")
    with pytest.raises(DataError):
        read_ppm(p)


def test_ppm_rejects_wide_maxval(tmp_path):
    p = tmp_path / "x.ppm"
    p.write_bytes(b"P6\n1 1\n65535\n" + bytes(6))
    with pytest.raises(DataError):
        read_ppm(p)


def test_ppm_rejects_truncated_raster(tmp_path):
    p = tmp_path / "x.ppm"
    p.write_bytes(b"P6\n2 2\n255\n" + bytes(5))
    with pytest.raises(DataError):
        read_ppm(p)


def test_ppm_missing_file_is_a_data_error(tmp_path):
    with pytest.raises(DataError):
        read_ppm(tmp_path / "absent.ppm")


def test_pixel_image_validation():
    with pytest.raises(DataError):
        PixelImage(width=0, height=1, pixels=np.zeros((0, 3), dtype=np.uint8))
    with pytest.raises(DataError):
        PixelImage(width=2, height=2, pixels=np.zeros((3, 3), dtype=np.uint8))
    with pytest.raises(DataError):
        PixelImage(width=1, height=1, pixels=np.array([[300, 0, 0]]))


# -------------------------------------------------------------- kmeans


def test_k1_centroid_is_the_mean_color():
    img = random_image(2, width=6, height=4)
    out = kmeans_colors(img, k=1)
    mean = img.pixels.astype(np.float64).mean(axis=0)
    assert np.allclose(out.centroids[0], mean, atol=1e-9)
    want = np.clip(np.floor(mean + 0.5), 0, 255).astype(np.uint8)
    assert np.all(out.quantized.pixels == want)


def test_two_color_image_recovered_exactly():
    pixels = np.array([[250, 10, 10]] * 9 + [[10, 10, 250]] * 15, dtype=np.uint8)
    img = PixelImage(width=6, height=4, pixels=pixels)
    out = kmeans_colors(img, k=2, seed=3)
    assert out.sse_history[-1] == pytest.approx(0.0, abs=1e-9)
    assert np.array_equal(out.quantized.pixels, pixels)
    assert out.converged


def test_sse_history_never_increases():
    for seed in range(10):
        img = random_image(seed, width=10, height=8)
        for k in (2, 3, 4):
            out = kmeans_colors(img, k=k, seed=seed)
            hist = np.array(out.sse_history)
            assert np.all(np.diff(hist) <= 1e-6), (seed, k, hist)


def test_uniform_image_is_a_fixpoint():
    pixels = np.full((20, 3), 77, dtype=np.uint8)
    img = PixelImage(width=5, height=4, pixels=pixels)
    out = kmeans_colors(img, k=3)
    assert np.array_equal(out.quantized.pixels, pixels)
    assert out.sse_history[-1] == 0.0


def test_quantized_palette_size_bounded_by_k():
    img = random_image(11, width=12, height=9)
    for k in (2, 3, 4):
        out = kmeans_colors(img, k=k, seed=1)
        palette = {tuple(px) for px in out.quantized.pixels.tolist()}
        assert len(palette) <= k


def test_kmeans_deterministic_by_seed():
    img = random_image(12, width=9, height=9)
    a = kmeans_colors(img, k=3, seed=42)
    b = kmeans_colors(img, k=3, seed=42)
    assert np.array_equal(a.quantized.pixels, b.quantized.pixels)
    assert a.sse_history == b.sse_history


def test_kmeans_rejects_bad_k():
    with pytest.raises(ConfigError):
        kmeans_colors(random_image(0), k=0)


# ---------------------------------------------------------------- plan


def test_plan_100_70():
    labels = [1] * 100 + [-1] * 70
    plan = plan_balance(labels)
    assert plan.minority_label == -1
    assert plan.deficit == 30
    assert len(plan.assignments) == 30
    # k cycles 2, 3, 4 in assignment order
    assert [a.k for a in plan.assignments[:6]] == [2, 3, 4, 2, 3, 4]
    assert Counter(a.k for a in plan.assignments) == {2: 10, 3: 10, 4: 10}
    # round robin: 30 draws from 70 minority ids never reuse a source
    sources = [a.source_id for a in plan.assignments]
    assert len(set(sources)) == 30
    assert all(a.output_id == f"{a.source_id}{AUGMENT_MARKER}{t}"
               for t, a in enumerate(plan.assignments))


def test_plan_119_87():
    labels = [1] * 119 + [-1] * 87
    plan = plan_balance(labels)
    assert plan.deficit == 32
    assert len(plan.assignments) == 32
    assert Counter(a.k for a in plan.assignments) == {2: 11, 3: 11, 4: 10}


def test_plan_reuses_sources_only_after_full_rotation():
    labels = [1] * 10 + [-1] * 3
    plan = plan_balance(labels, ids=[f"im{i}" for i in range(13)])
    assert plan.deficit == 7
    counts = Counter(a.source_id for a in plan.assignments)
    assert set(counts.values()) <= {2, 3}
    assert sum(counts.values()) == 7


def test_balanced_input_yields_empty_plan():
    plan = plan_balance([1, -1, 1, -1])
    assert plan.deficit == 0
    assert plan.assignments == ()


def test_plan_deterministic_and_seed_sensitive():
    labels = [1] * 40 + [-1] * 25
    a = plan_balance(labels, seed=1)
    b = plan_balance(labels, seed=1)
    c = plan_balance(labels, seed=2)
    assert a == b
    assert [x.source_id for x in a.assignments] != [x.source_id for x in c.assignments]


def test_plan_validation():
    with pytest.raises(DataError):
        plan_balance([1, 1, 1])
    with pytest.raises(DataError):
        plan_balance([1, 0, -1])
    with pytest.raises(DataError):
        plan_balance([1, -1], ids=["a"])


def test_execute_plan_balances_counts():
    labels = [1] * 12 + [-1] * 7
    ids = [f"img{i:02d}" for i in range(19)]
    plan = plan_balance(labels, ids=ids, seed=0)
    images = {i: random_image(int(i[3:]), width=6, height=6)
              for i, lab in zip(ids, labels) if lab == -1}
    outputs = execute_plan(plan, images, seed=0)
    assert len(outputs) == 5
    for assignment in plan.assignments:
        img = outputs[assignment.output_id]
        assert img.width == 6 and img.height == 6
        palette = {tuple(px) for px in img.pixels.tolist()}
        assert len(palette) <= assignment.k
    merged = Counter(labels) + Counter({-1: len(outputs)})
    assert merged[1] == merged[-1]


def test_execute_plan_deterministic():
    labels = [1] * 8 + [-1] * 5
    ids = [f"i{n}" for n in range(13)]
    plan = plan_balance(labels, ids=ids, seed=3)
    images = {i: random_image(int(i[1:]), width=5, height=5)
              for i, lab in zip(ids, labels) if lab == -1}
    a = execute_plan(plan, images, seed=9)
    b = execute_plan(plan, images, seed=9)
    assert a.keys() == b.keys()
    for key in a:
        assert np.array_equal(a[key].pixels, b[key].pixels)


def test_execute_plan_missing_source_rejected():
    plan = plan_balance([1, 1, -1], ids=["a", "b", "c"])
    with pytest.raises(DataError):
        execute_plan(plan, images={})
