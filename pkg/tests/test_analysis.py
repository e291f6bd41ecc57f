import json
import math

import numpy as np
import pytest

from imagecipher.analysis import (
    adjacent_correlation,
    analyze,
    analyze_channels,
    chi_square_uniformity,
    cross_correlation,
    histogram,
    pearson,
    position_entropy,
    report_structured,
    report_text,
    shannon_entropy,
)
from imagecipher.exceptions import DimensionError, SizeMismatchError, ZeroVarianceError
from imagecipher.models import Axis, Image, StageKind
from imagecipher.permutations import Permutation, as_permutation, grid_for
from imagecipher.schemas import BlockGrid, Stage


def all_levels_once():
    return Image(np.arange(256, dtype=np.uint8).reshape(16, 16))


class TestHistogram:
    def test_constant_image(self):
        counts = histogram(Image(np.full((4, 4), 7, dtype=np.uint8)))
        assert counts[7] == 16
        assert counts.sum() == 16

    def test_each_level_once(self):
        assert (histogram(all_levels_once()) == 1).all()

    def test_counts_sum_to_pixels(self, random_image):
        for width, height in [(3, 5), (16, 16), (31, 7)]:
            assert histogram(random_image(width, height)).sum() == width * height


class TestEntropy:
    def test_constant_is_zero(self):
        assert shannon_entropy(Image(np.full((8, 8), 200, dtype=np.uint8))) == 0.0

    def test_uniform_is_eight(self):
        assert shannon_entropy(all_levels_once()) == 8.0

    @pytest.mark.parametrize(
        "samples,bits",
        [
            pytest.param([0, 0, 1, 1], 1.0, id="1 bit"),
            pytest.param([0, 1, 2, 3], 2.0, id="2 bits"),
            pytest.param([5, 5, 5, 9], 0.8112781244591328, id="skewed"),
        ],
    )
    def test_small_distributions(self, samples, bits):
        assert shannon_entropy(Image([samples])) == pytest.approx(bits)

    def test_matches_brute_force(self, rng):
        for _ in range(20):
            image = Image(rng.integers(0, rng.integers(2, 257), size=(20, 20)))
            counts = histogram(image)
            brute = -sum((c / 400) * math.log2(c / 400) for c in counts if c)
            assert shannon_entropy(image) == pytest.approx(brute, abs=1e-12)


class TestCorrelation:
    def test_identical_rows_vertical_is_one(self, rng):
        row = rng.integers(0, 256, size=32)
        image = Image(np.tile(row, (8, 1)))
        assert adjacent_correlation(image, Axis.VERTICAL) == pytest.approx(1.0)

    def test_constant_image_is_undefined(self):
        image = Image(np.full((4, 4), 3, dtype=np.uint8))
        for axis in Axis:
            with pytest.raises(ZeroVarianceError):
                adjacent_correlation(image, axis)

    def test_needs_two_pixels_along_axis(self):
        with pytest.raises(DimensionError):
            adjacent_correlation(Image([[1], [2]]), Axis.HORIZONTAL)
        with pytest.raises(DimensionError):
            adjacent_correlation(Image([[1, 2]]), Axis.VERTICAL)

    def test_known_value(self):
        # every right neighbour is twice its left one
        image = Image([[1, 2, 4, 8], [3, 6, 12, 24]])
        assert adjacent_correlation(image, Axis.HORIZONTAL) == pytest.approx(1.0)

    def test_pair_order_symmetry(self, rng):
        p, q = rng.integers(0, 256, size=(2, 500))
        assert pearson(p, q) == pearson(q, p)

    def test_affine_invariance(self, rng):
        image = Image(rng.integers(0, 60, size=(12, 12)))
        rescaled = Image(image.pixels.astype(int) * 3 + 10)
        for axis in Axis:
            assert adjacent_correlation(rescaled, axis) == pytest.approx(adjacent_correlation(image, axis))

    def test_cross_correlation_size_mismatch(self, random_image):
        with pytest.raises(SizeMismatchError):
            cross_correlation(random_image(4, 4), random_image(4, 5))


class TestChiSquare:
    def test_uniform_is_zero(self):
        assert chi_square_uniformity([3] * 256) == 0.0

    def test_single_bin_closed_form(self):
        counts = [0] * 256
        counts[17] = 1000
        assert chi_square_uniformity(counts) == pytest.approx(1000 * 255)

    def test_non_uniform_is_positive(self):
        counts = [4] * 256
        counts[0] = 5
        assert chi_square_uniformity(counts) > 0

    def test_empty_histogram(self):
        with pytest.raises(ValueError):
            chi_square_uniformity([0] * 256)


class TestPositionEntropy:
    def test_identity_is_zero(self):
        grid = BlockGrid.for_shape(64, 64, 16)
        assert position_entropy(Permutation.identity(grid.size), grid) == 0.0

    def test_uniform_distribution_is_maximal(self):
        image = Image(np.zeros((256, 256), dtype=np.uint8))
        grid = grid_for(image, 16)
        perm = as_permutation(Stage(kind=StageKind.DISTRIBUTE), image)
        assert position_entropy(perm, grid) == 2048.0
        assert position_entropy(perm, grid) == grid.n_blocks * math.log2(grid.n_blocks)

    def test_intra_block_swap_is_ignored(self):
        grid = BlockGrid.for_shape(32, 32, 16)
        forward = np.arange(grid.size)
        forward[[0, 17]] = forward[[17, 0]]
        assert position_entropy(Permutation(forward), grid) == 0.0

    def test_invariant_under_intra_block_reordering(self, random_image):
        image = random_image(64, 32)
        grid = grid_for(image, 16)
        scramble = as_permutation(Stage(kind=StageKind.ROW_SHIFT), image)
        within = as_permutation(Stage(kind=StageKind.ARNOLD, iterations=3), image)
        assert position_entropy(scramble.compose(within), grid) == pytest.approx(position_entropy(scramble, grid))

    def test_bounds_for_random_bijections(self, rng):
        grid = BlockGrid.for_shape(32, 16, 4)
        n, per_block = grid.n_blocks, grid.pixels_per_block
        for _ in range(20):
            bits = position_entropy(Permutation(rng.permutation(grid.size)), grid)
            assert 0.0 <= bits <= n * math.log2(min(n, per_block)) + 1e-9

    def test_size_mismatch(self):
        with pytest.raises(SizeMismatchError):
            position_entropy(Permutation.identity(10), BlockGrid.for_shape(4, 4, 2))


class TestReport:
    def test_constant_image(self):
        report = analyze(Image(np.full((16, 16), 9, dtype=np.uint8)))
        assert report.entropy_bits == 0.0
        assert report.corr_horizontal is None and report.corr_vertical is None
        assert report.chi_square == pytest.approx(256 * 255)
        assert report.position_entropy_bits is None

    def test_identity_permutation(self):
        image = Image(np.full((16, 16), 9, dtype=np.uint8))
        grid = grid_for(image, 16)
        report = analyze(image, Permutation.identity(256), grid)
        assert report.position_entropy_bits == 0.0

    def test_perm_and_grid_together(self):
        with pytest.raises(ValueError):
            analyze(all_levels_once(), perm=Permutation.identity(256))

    def test_per_channel(self, random_image):
        reports = analyze_channels(random_image(8, 8, channels=3))
        assert [report.channel for report in reports] == ["red", "green", "blue"]
        assert all(sum(report.histogram) == 64 for report in reports)

    def test_text_layout(self):
        text = report_text([analyze(Image(np.full((4, 4), 1, dtype=np.uint8)))])
        lines = text.splitlines()
        assert lines[:4] == [
            "channel: gray",
            "entropy: 0.000000",
            "horizontal_correlation: undefined",
            "vertical_correlation: undefined",
        ]

    def test_structured_is_flat_json(self, random_image):
        reports = analyze_channels(random_image(8, 8, channels=3))
        objects = [json.loads(line) for line in report_structured(reports).splitlines()]
        assert len(objects) == 3
        assert set(objects[0]) == {
            "channel", "entropy_bits", "corr_horizontal", "corr_vertical",
            "histogram", "chi_square", "position_entropy_bits",
        }
        assert len(objects[0]["histogram"]) == 256
