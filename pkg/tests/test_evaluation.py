import numpy as np
import pytest

from sssinv.database import Database
from sssinv.evaluation import (BiasMap, GlobalStats, bias_map, blend_outputs,
                               global_stats, ols_slope, read_bias_map,
                               read_report, render_bias_map, retrieve_field,
                               slope_by_sst, write_bias_map, write_report)
from sssinv.network import fit_normalization, init_network
from sssinv.viewing_geometry import get_class


def scattered(rng, n=4000):
    lat = rng.uniform(-64.9, 64.9, n)
    lon = rng.uniform(-180.0, 179.9, n)
    ref = rng.uniform(32.0, 38.0, n)
    sst = rng.uniform(-2.0, 32.0, n)
    return lat, lon, ref, sst


class TestBiasMap:
    def test_perfect_retrieval_zero_map(self, rng):
        lat, lon, ref, _ = scattered(rng)
        bmap = bias_map(ref, ref, lat, lon)
        assert np.nanmax(np.abs(bmap.mean_error)) == 0.0
        assert bmap.count.sum() == len(ref)

    def test_single_record_box(self):
        bmap = bias_map(np.array([35.4]), np.array([35.0]),
                        np.array([10.2]), np.array([20.7]))
        populated = bmap.count > 0
        assert populated.sum() == 1
        assert bmap.mean_error[populated][0] == pytest.approx(0.4)

    def test_checker_pattern_averages_out(self):
        lat = np.full(10, 0.25)
        lon = np.where(np.arange(10) % 2 == 0, 0.2, 0.7)
        ref = np.full(10, 35.0)
        retr = ref + np.where(np.arange(10) % 2 == 0, 0.5, -0.5)
        bmap = bias_map(retr, ref, lat, lon)
        assert abs(bmap.mean_error[bmap.count > 0][0]) < 1e-12

    def test_alignment_required(self):
        with pytest.raises(ValueError):
            bias_map(np.zeros(3), np.zeros(3), np.zeros(2), np.zeros(3))

    def test_io_round_trip(self, rng, tmp_path):
        lat, lon, ref, _ = scattered(rng, 500)
        retr = ref + rng.normal(0, 0.3, ref.size)
        bmap = bias_map(retr, ref, lat, lon)
        path = tmp_path / "map.csv"
        write_bias_map(path, bmap)
        loaded = read_bias_map(path)
        assert np.array_equal(loaded.count, bmap.count)
        pop = bmap.count > 0
        assert np.allclose(loaded.mean_error[pop], bmap.mean_error[pop])


class TestGlobalStats:
    def test_perfect_retrieval(self, rng):
        lat, lon, ref, sst = scattered(rng)
        bmap = bias_map(ref, ref, lat, lon)
        stats = global_stats(ref, ref, sst, bmap)
        assert stats.bias == 0.0
        assert stats.std == 0.0
        assert stats.slope == pytest.approx(1.0, abs=1e-12)
        assert stats.pct_above == 0.0 and stats.pct_below == 0.0
        assert np.allclose(stats.slopes_by_sst, 1.0)

    def test_exact_affine_slope(self, rng):
        lat, lon, ref, sst = scattered(rng)
        retr = 0.5 * ref + 3.0
        bmap = bias_map(retr, ref, lat, lon)
        stats = global_stats(retr, ref, sst, bmap)
        assert stats.slope == pytest.approx(0.5, abs=1e-12)

    def test_percentage_consistency(self, rng):
        lat, lon, ref, sst = scattered(rng)
        retr = ref + rng.normal(0.0, 0.4, ref.size)
        bmap = bias_map(retr, ref, lat, lon)
        stats = global_stats(retr, ref, sst, bmap)
        pop = bmap.count > 0
        inside = 100.0 * float(
            (np.abs(bmap.mean_error[pop]) <= 0.2).sum()) / pop.sum()
        assert stats.pct_below + stats.pct_above + inside == \
            pytest.approx(100.0, abs=1e-9)

    def test_banded_excludes_deep_south(self, rng):
        n = 2000
        lat = np.concatenate([np.full(n, -55.25), np.full(n, 10.25)])
        lon = np.tile(np.linspace(-179.9, 179.9, n), 2)
        ref = 35.0 + rng.normal(0.0, 0.5, 2 * n)
        retr = np.concatenate([ref[:n] + 0.5, ref[n:]])  # biased only south
        sst = np.full(2 * n, 20.0)
        bmap = bias_map(retr, ref, lat, lon)
        stats = global_stats(retr, ref, sst, bmap)
        assert stats.pct_above > 0.0
        assert stats.pct_above_band == 0.0
        assert stats.n_boxes_band < stats.n_boxes

    def test_needs_two_records(self):
        bmap = bias_map(np.array([35.0]), np.array([35.0]),
                        np.array([0.5]), np.array([0.5]))
        with pytest.raises(ValueError):
            global_stats(np.array([35.0]), np.array([35.0]),
                         np.array([20.0]), bmap)


class TestSlopeBySst:
    def test_bins_partition_axis(self, rng):
        lat, lon, ref, sst = scattered(rng)
        slopes = slope_by_sst(ref, ref, sst)
        assert slopes.shape == (6,)
        assert np.allclose(slopes, 1.0)

    def test_undefined_bins_are_nan(self, rng):
        ref = rng.uniform(33, 37, 100)
        sst = np.full(100, 22.0)  # only the 20-25 bin is populated
        slopes = slope_by_sst(ref, ref, sst)
        assert np.isnan(slopes[0]) and np.isnan(slopes[-1])
        assert slopes[4] == pytest.approx(1.0)

    def test_ols_slope_guards(self):
        with pytest.raises(ValueError):
            ols_slope(np.array([1.0]), np.array([1.0]))
        with pytest.raises(ValueError):
            ols_slope(np.ones(5), np.arange(5.0))


class TestBlend:
    def test_pure_regions(self):
        assert blend_outputs(35.0, 33.0, -40.0) == 35.0
        assert blend_outputs(35.0, 33.0, -45.0) == 35.0
        assert blend_outputs(35.0, 33.0, -60.0) == 33.0
        assert blend_outputs(35.0, 33.0, -50.0) == 33.0

    def test_midpoint(self):
        assert blend_outputs(35.0, 33.0, -47.5) == pytest.approx(34.0)

    def test_continuity(self):
        lats = np.linspace(-55.0, -40.0, 4001)
        out = blend_outputs(np.full(lats.size, 35.0),
                            np.full(lats.size, 33.0), lats)
        assert np.abs(np.diff(out)).max() < 2.0 * 2.0 / (5.0 / (15.0 / 4000))
        assert out[0] == 33.0 and out[-1] == 35.0

    def test_vectorized_matches_scalar(self, rng):
        lats = rng.uniform(-60, 0, 50)
        a = rng.uniform(30, 40, 50)
        b = rng.uniform(30, 40, 50)
        vec = blend_outputs(a, b, lats)
        for i in range(50):
            assert vec[i] == pytest.approx(
                blend_outputs(a[i], b[i], lats[i]), rel=1e-12)

    def test_needs_ordered_bounds(self):
        with pytest.raises(ValueError):
            blend_outputs(1.0, 2.0, -47.0, lo=-45.0, hi=-50.0)


class TestRetrieveField:
    def test_class_mismatch_rejected(self, rng):
        params = init_network(get_class(1), seed=0)
        db = Database(class_id=8, provenance="B0", build_seed=0,
                      box_widths=(0.2, 0.5, 1.0),
                      inputs=rng.normal(size=(10, 5)), target=np.full(10, 35.0),
                      lat=np.zeros(10), lon=np.zeros(10),
                      box_id=np.zeros(10, dtype=np.int64), weight=np.ones(10))
        with pytest.raises(ValueError):
            retrieve_field(params, db)

    def test_perfectly_fitted_toy(self, rng):
        db = Database(class_id=8, provenance="B0", build_seed=0,
                      box_widths=(0.2, 0.5, 1.0),
                      inputs=rng.normal(size=(64, 5)),
                      target=np.full(64, 34.5),
                      lat=np.zeros(64), lon=np.zeros(64),
                      box_id=np.zeros(64, dtype=np.int64), weight=np.ones(64))
        params = init_network(get_class(8), n_hidden=4, seed=1)
        params = fit_normalization(params, db)
        params.w2[:] = 0.0
        params.b2 = 0.0  # predicts the normalized mean -> exact constant
        retrieved = retrieve_field(params, db)
        assert np.allclose(retrieved, 34.5, atol=1e-9)


class TestReportIo:
    def make_stats(self, rng):
        lat, lon, ref, sst = scattered(rng)
        retr = ref + rng.normal(0, 0.3, ref.size)
        bmap = bias_map(retr, ref, lat, lon)
        return global_stats(retr, ref, sst, bmap), bmap

    def test_report_round_trip(self, rng, tmp_path):
        stats, _ = self.make_stats(rng)
        path = tmp_path / "report.csv"
        write_report(path, stats)
        loaded = read_report(path)
        assert loaded["slope"] == stats.slope
        assert loaded["pct_above_band"] == stats.pct_above_band
        assert loaded["n_records"] == stats.n_records
        assert list(loaded) == [f.name for f in
                                GlobalStats.__dataclass_fields__.values()]

    def test_report_rejects_other_files(self, tmp_path):
        path = tmp_path / "x.csv"
        path.write_text("a,b\n1,2\n")
        with pytest.raises(ValueError):
            read_report(path)

    def test_render_png(self, rng, tmp_path):
        pytest.importorskip("matplotlib")
        _, bmap = self.make_stats(rng)
        path = tmp_path / "map.png"
        render_bias_map(bmap, path)
        assert path.stat().st_size > 1000
