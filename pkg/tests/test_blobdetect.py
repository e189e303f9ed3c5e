"""Thresholding, connected components, and the per-frame detect pipeline."""

import numpy as np
import pytest

from thermotrack.blobdetect import (
    BinaryFrame,
    DetectConfig,
    ThresholdMethod,
    connected_components,
    detect,
    opening,
    threshold,
)
from thermotrack.framegrid import GrayFrame, reshape, to_gray
from oracles import flood_fill_components


def gray_of(array):
    return GrayFrame(np.asarray(array, dtype=float))


def frame_with(background=20.0, cells=()):
    """cells: iterable of ((col, row), temperature)"""
    v = np.full(192, background)
    for (c, r), t in cells:
        v[c * 12 + r] = t
    return reshape(v)


class TestThreshold:
    def test_otsu_degenerate_constant(self):
        mask = threshold(to_gray(frame_with()), ThresholdMethod.otsu())
        assert not mask.grid.any()

    def test_otsu_two_level_picks_bright_cells(self):
        g = np.zeros((12, 16))
        for c, r in ((3, 5), (4, 5), (3, 6), (4, 6)):
            g[r, c] = 255.0
        mask = threshold(gray_of(g), ThresholdMethod.otsu())
        assert mask.grid.sum() == 4
        assert mask.grid[5, 3] and mask.grid[6, 4]

    def test_fixed_strict_greater(self):
        g = np.zeros((12, 16))
        g[0, 0] = 128.0
        g[0, 1] = 255.0
        g[0, 2] = 127.0
        mask = threshold(gray_of(g), ThresholdMethod.fixed(127))
        assert mask.grid[0, 0] and mask.grid[0, 1]
        assert not mask.grid[0, 2]

    def test_parse_spec(self):
        assert ThresholdMethod.parse("otsu").kind == "otsu"
        assert ThresholdMethod.parse("fixed:140") == ThresholdMethod.fixed(140)
        with pytest.raises(ValueError):
            ThresholdMethod.parse("median")


class TestConnectedComponents:
    def test_empty_mask(self):
        assert connected_components(BinaryFrame(np.zeros((12, 16), bool))) == []

    def test_square_block(self):
        m = np.zeros((12, 16), bool)
        m[5:7, 3:5] = True
        blobs = connected_components(BinaryFrame(m))
        assert len(blobs) == 1
        b = blobs[0]
        assert b.area == 4
        assert b.centroid == (3.5, 5.5)
        assert b.bbox == (3, 5, 4, 6)

    def test_diagonal_cells_single_blob(self):
        m = np.zeros((12, 16), bool)
        m[2, 2] = m[3, 3] = True
        blobs = connected_components(BinaryFrame(m))
        assert len(blobs) == 1 and blobs[0].area == 2

    def test_min_area_filters(self):
        m = np.zeros((12, 16), bool)
        m[0, 0] = True
        m[5:7, 3:5] = True
        blobs = connected_components(BinaryFrame(m), min_area=2)
        assert len(blobs) == 1 and blobs[0].area == 4

    def test_ordering_by_bbox(self):
        m = np.zeros((12, 16), bool)
        m[8, 1] = m[8, 2] = True  # lower-left blob
        m[1, 10] = m[1, 11] = True  # upper-right blob
        blobs = connected_components(BinaryFrame(m))
        assert blobs[0].bbox[1] == 1  # upper first
        assert blobs[1].bbox[1] == 8

    def test_matches_flood_fill_on_random_masks(self):
        rng = np.random.default_rng(6)
        for _ in range(200):
            m = rng.random((12, 16)) < rng.uniform(0.1, 0.6)
            blobs = connected_components(BinaryFrame(m), min_area=1)
            got = {frozenset((r, c) for c, r in b.pixels) for b in blobs}
            assert got == set(flood_fill_components(m))

    def test_blobs_disjoint_and_cover_mask(self):
        rng = np.random.default_rng(8)
        m = rng.random((12, 16)) < 0.4
        blobs = connected_components(BinaryFrame(m), min_area=1)
        seen = set()
        for b in blobs:
            assert not (b.pixels & seen)
            seen |= b.pixels
        assert seen == {(c, r) for r, c in zip(*np.nonzero(m))}

    def test_centroid_within_bbox(self):
        rng = np.random.default_rng(9)
        m = rng.random((12, 16)) < 0.3
        for b in connected_components(BinaryFrame(m), min_area=1):
            x0, y0, x1, y1 = b.bbox
            assert x0 <= b.centroid[0] <= x1
            assert y0 <= b.centroid[1] <= y1


class TestOpening:
    def test_removes_isolated_pixel(self):
        m = np.zeros((12, 16), bool)
        m[4, 4] = True
        assert not opening(BinaryFrame(m)).grid.any()

    def test_preserves_cross(self):
        m = np.zeros((12, 16), bool)
        m[4, 3:6] = True
        m[3:6, 4] = True
        out = opening(BinaryFrame(m)).grid
        assert out[4, 4]


class TestDetect:
    def test_uniform_frame_no_blobs(self):
        assert detect(frame_with()) == []

    def test_single_hot_cell(self):
        frame = frame_with(cells=[((5, 7), 36.0)])
        cfg = DetectConfig(ThresholdMethod.fixed(200), min_area=1)
        blobs = detect(frame, cfg)
        assert len(blobs) == 1
        assert blobs[0].centroid == (5.0, 7.0)

    def test_two_blocks_two_blobs(self):
        cells = [((c, r), 36.0) for c in (2, 3) for r in (2, 3)]
        cells += [((c, r), 36.0) for c in (10, 11) for r in (8, 9)]
        blobs = detect(frame_with(cells=cells), DetectConfig(ThresholdMethod.fixed(200)))
        assert len(blobs) == 2
        assert blobs[0].centroid == (2.5, 2.5)
        assert blobs[1].centroid == (10.5, 8.5)

    def test_deterministic(self):
        rng = np.random.default_rng(10)
        v = rng.uniform(18, 36, 192)
        frame = reshape(v)
        assert detect(frame) == detect(frame)

    def test_translation_equivariance(self):
        base = [((3, 2), 36.0), ((4, 2), 35.0), ((3, 3), 34.0)]
        cfg = DetectConfig(ThresholdMethod.fixed(100), min_area=1)
        for dx, dy in ((1, 0), (0, 1), (5, 4)):
            moved = [((c + dx, r + dy), t) for (c, r), t in base]
            a = detect(frame_with(cells=base), cfg)
            b = detect(frame_with(cells=moved), cfg)
            assert len(a) == len(b) == 1
            assert b[0].centroid == pytest.approx(
                (a[0].centroid[0] + dx, a[0].centroid[1] + dy), abs=1e-12
            )

    def test_morphology_toggle(self):
        frame = frame_with(cells=[((5, 7), 36.0)])
        cfg = DetectConfig(ThresholdMethod.fixed(200), min_area=1, morphology=True)
        assert detect(frame, cfg) == []  # opening erases the lone pixel
