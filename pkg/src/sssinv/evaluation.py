"""Retrieval evaluation: 1-degree bias maps, global statistics, slopes per
SST interval, and the two-network latitude blend.

The regression slope is always ordinary least squares of retrieved salinity
on the *reference* salinity (the regressor), so noise-driven attenuation
shows up as a slope below 1.
"""

import csv
from dataclasses import dataclass, fields as dc_fields

import numpy as np

from .network import forward

LAT_LIMIT = 65.0
BIAS_THRESHOLD_PSU = 0.2
BAND_LAT_MIN = -45.0
SST_BIN_EDGES = (5.0, 10.0, 15.0, 20.0, 25.0)
SST_BIN_LABELS = ("lt5", "5_10", "10_15", "15_20", "20_25", "gt25")

BLEND_SOUTH_LAT = -50.0   # pure southern-band network below this latitude
BLEND_NORTH_LAT = -45.0   # pure global network above this latitude


def retrieve_field(params, db):
    """Network retrieval over a materialized test database (one value per
    pixel)."""
    if params.class_id != db.class_id:
        raise ValueError(f"network class {params.class_id} does not match "
                         f"database class {db.class_id}")
    return forward(params, db.inputs)


@dataclass(frozen=True)
class BiasMap:
    """Mean retrieval error (psu) and record count per geographic box."""

    lat_edges: np.ndarray
    lon_edges: np.ndarray
    mean_error: np.ndarray   # NaN where count == 0
    count: np.ndarray

    @property
    def lat_centers(self):
        return 0.5 * (self.lat_edges[:-1] + self.lat_edges[1:])


def bias_map(retrieved, reference, lat, lon, box_deg=1.0):
    """Mean of (retrieved - reference) on a box_deg x box_deg grid."""
    retrieved = np.asarray(retrieved, dtype=np.float64)
    reference = np.asarray(reference, dtype=np.float64)
    lat = np.asarray(lat, dtype=np.float64)
    lon = np.asarray(lon, dtype=np.float64)
    if not retrieved.shape == reference.shape == lat.shape == lon.shape:
        raise ValueError("inputs must be aligned 1-d arrays")
    lat_edges = np.arange(-LAT_LIMIT, LAT_LIMIT + box_deg / 2, box_deg)
    lon_edges = np.arange(-180.0, 180.0 + box_deg / 2, box_deg)
    nlat, nlon = lat_edges.size - 1, lon_edges.size - 1
    i = np.clip(((lat - lat_edges[0]) / box_deg).astype(np.int64), 0, nlat - 1)
    j = np.clip(((lon - lon_edges[0]) / box_deg).astype(np.int64), 0, nlon - 1)
    flat = i * nlon + j
    err = retrieved - reference
    count = np.bincount(flat, minlength=nlat * nlon).reshape(nlat, nlon)
    total = np.bincount(flat, weights=err,
                        minlength=nlat * nlon).reshape(nlat, nlon)
    with np.errstate(invalid="ignore"):
        mean = np.where(count > 0, total / np.maximum(count, 1), np.nan)
    return BiasMap(lat_edges=lat_edges, lon_edges=lon_edges,
                   mean_error=mean, count=count)


def ols_slope(x, y):
    """Ordinary least squares slope of y on x."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.size < 2:
        raise ValueError("need at least 2 records")
    xc = x - x.mean()
    denom = (xc * xc).sum()
    if denom == 0:
        raise ValueError("regressor has zero variance")
    return float((xc * (y - y.mean())).sum() / denom)


def slope_by_sst(retrieved, reference, sst):
    """OLS slope per SST interval; bins with < 2 records are NaN."""
    retrieved = np.asarray(retrieved, dtype=np.float64)
    reference = np.asarray(reference, dtype=np.float64)
    sst = np.asarray(sst, dtype=np.float64)
    edges = (-np.inf,) + SST_BIN_EDGES + (np.inf,)
    slopes = np.full(len(SST_BIN_LABELS), np.nan)
    for k in range(len(SST_BIN_LABELS)):
        mask = (sst >= edges[k]) & (sst < edges[k + 1])
        if mask.sum() >= 2 and np.ptp(reference[mask]) > 0:
            slopes[k] = ols_slope(reference[mask], retrieved[mask])
    return slopes


@dataclass(frozen=True)
class GlobalStats:
    """Global retrieval metrics plus the banded (45S-65N) box percentages."""

    bias: float
    std: float
    slope: float
    slope_sst_lt5: float
    slope_sst_5_10: float
    slope_sst_10_15: float
    slope_sst_15_20: float
    slope_sst_20_25: float
    slope_sst_gt25: float
    pct_below: float
    pct_above: float
    pct_below_band: float
    pct_above_band: float
    n_records: int
    n_boxes: int
    n_boxes_band: int

    @property
    def slopes_by_sst(self):
        return np.array([self.slope_sst_lt5, self.slope_sst_5_10,
                         self.slope_sst_10_15, self.slope_sst_15_20,
                         self.slope_sst_20_25, self.slope_sst_gt25])


def _box_percentages(bmap, lat_min=None, threshold=BIAS_THRESHOLD_PSU):
    populated = bmap.count > 0
    if lat_min is not None:
        populated = populated & (bmap.lat_centers[:, None] >= lat_min)
    n = int(populated.sum())
    if n == 0:
        return 0.0, 0.0, 0
    vals = bmap.mean_error[populated]
    below = 100.0 * float((vals < -threshold).sum()) / n
    above = 100.0 * float((vals > threshold).sum()) / n
    return below, above, n


def global_stats(retrieved, reference, sst, bmap,
                 band_lat_min=BAND_LAT_MIN, threshold=BIAS_THRESHOLD_PSU):
    """Global bias/std/slope, per-SST-bin slopes, and the percentages of
    geographic boxes biased beyond the threshold (global and banded)."""
    retrieved = np.asarray(retrieved, dtype=np.float64)
    reference = np.asarray(reference, dtype=np.float64)
    err = retrieved - reference
    if err.size < 2:
        raise ValueError("need at least 2 records")
    slopes = slope_by_sst(retrieved, reference, sst)
    below, above, n_boxes = _box_percentages(bmap, None, threshold)
    below_b, above_b, n_band = _box_percentages(bmap, band_lat_min, threshold)
    return GlobalStats(
        bias=float(err.mean()), std=float(err.std()),
        slope=ols_slope(reference, retrieved),
        slope_sst_lt5=float(slopes[0]), slope_sst_5_10=float(slopes[1]),
        slope_sst_10_15=float(slopes[2]), slope_sst_15_20=float(slopes[3]),
        slope_sst_20_25=float(slopes[4]), slope_sst_gt25=float(slopes[5]),
        pct_below=below, pct_above=above,
        pct_below_band=below_b, pct_above_band=above_b,
        n_records=int(err.size), n_boxes=n_boxes, n_boxes_band=n_band)


def blend_outputs(out_a, out_b, lat, lo=BLEND_SOUTH_LAT, hi=BLEND_NORTH_LAT):
    """Latitude-dependent linear combination of two network outputs.

    ``out_a`` is used at latitudes >= hi, ``out_b`` at latitudes <= lo, with
    a continuous linear ramp between (avoids edge effects at the seam).
    """
    if not lo < hi:
        raise ValueError("need lo < hi")
    lat = np.asarray(lat, dtype=np.float64)
    w = np.clip((lat - lo) / (hi - lo), 0.0, 1.0)
    out = w * np.asarray(out_a) + (1.0 - w) * np.asarray(out_b)
    return float(out) if out.ndim == 0 else out


def write_report(path, stats):
    """GlobalStats as a metric,value CSV (floats via repr for exactness)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["metric", "value"])
        for f in dc_fields(stats):
            value = getattr(stats, f.name)
            writer.writerow([f.name, repr(float(value))])


def read_report(path):
    """Report file back as an ordered {metric: value} dict."""
    out = {}
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != ["metric", "value"]:
            raise ValueError(f"not a report file: {path}")
        for row in reader:
            out[row[0]] = float(row[1])
    return out


def write_bias_map(path, bmap):
    """Bias map as CSV rows (lat_center, lon_center, mean_error, count) for
    populated boxes only."""
    lat_c = bmap.lat_centers
    lon_c = 0.5 * (bmap.lon_edges[:-1] + bmap.lon_edges[1:])
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["lat", "lon", "mean_error", "count",
                         "box_deg", repr(float(bmap.lat_edges[1]
                                               - bmap.lat_edges[0]))])
        for i, j in zip(*np.nonzero(bmap.count)):
            writer.writerow([repr(float(lat_c[i])), repr(float(lon_c[j])),
                             repr(float(bmap.mean_error[i, j])),
                             int(bmap.count[i, j])])


def read_bias_map(path):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        box_deg = float(header[5])
        lat_edges = np.arange(-LAT_LIMIT, LAT_LIMIT + box_deg / 2, box_deg)
        lon_edges = np.arange(-180.0, 180.0 + box_deg / 2, box_deg)
        nlat, nlon = lat_edges.size - 1, lon_edges.size - 1
        mean = np.full((nlat, nlon), np.nan)
        count = np.zeros((nlat, nlon), dtype=np.int64)
        for row in reader:
            i = int((float(row[0]) - lat_edges[0]) / box_deg)
            j = int((float(row[1]) - lon_edges[0]) / box_deg)
            mean[i, j] = float(row[2])
            count[i, j] = int(row[3])
    return BiasMap(lat_edges=lat_edges, lon_edges=lon_edges,
                   mean_error=mean, count=count)


def render_bias_map(bmap, path, scale=1.0, cmap="coolwarm"):
    """Optional image rendering with a fixed color scale of +-scale psu."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(10, 4))
    im = ax.imshow(bmap.mean_error, origin="lower",
                   extent=[bmap.lon_edges[0], bmap.lon_edges[-1],
                           bmap.lat_edges[0], bmap.lat_edges[-1]],
                   vmin=-scale, vmax=scale, cmap=cmap, aspect="auto")
    fig.colorbar(im, ax=ax, label="mean retrieval error (psu)")
    ax.set_xlabel("longitude")
    ax.set_ylabel("latitude")
    fig.savefig(path, dpi=120)
    plt.close(fig)
