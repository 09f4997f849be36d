"""Synthetic ocean world and learning-database construction.

The world generator is a parametric substitute for reanalysis ocean fields:
monthly global (SSS, SST, W) grids between 65S and 65N with zonal
climatologies, seasonal modulation, gyre-scale texture and seeded noise.  It
is tuned so that, by construction, the band south of 45S has low salinity
variability (~0.3 psu std) around a cold mean (~6 degC), most sub-10-degC
water lies in that band, and the global salinity histogram is bell-shaped
with its peak near 34-35 psu.

Learning databases are all derived from one materialized pool:

* random extraction (learning + disjoint validation split),
* per-box equalization over (SSS, SST, W) bins,
* boost extraction of the poorly retrieved boxes,
* a mixed build (geographic sampling for cold water, equalized for warm).

Records are materialized once: forward TBs on the class angle grid plus one
frozen draw of correlated residual-matched noise, plus Gaussian noise on the
auxiliary SST and wind inputs.
"""

import csv
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ._text import fmt
from .forward_model import (SSS_BOUNDS, SST_BOUNDS, WIND_BOUNDS,
                            RadiometerSpec, first_stokes_grid)
from .noise_model import draw_correlated, perturb_aux

LAT_LIMIT = 65.0
DEFAULT_BOX_WIDTHS = (0.2, 0.5, 1.0)   # psu, degC, m/s
BOX_ANCHORS = (0.0, -2.0, 0.0)

PROVENANCES = ("B0", "B1", "B2", "B3", "Bm", "validation")


def _sigmoid(x):
    return 1.0 / (1.0 + np.exp(-x))


@dataclass(frozen=True)
class WorldConfig:
    """Resolution, month selection and climatology parameters of the
    synthetic world."""

    resolution_deg: float = 2.0
    months: tuple = (1, 4, 7, 10)

    # SST climatology (degC)
    sst_equator: float = 28.0
    sst_south_amp: float = 27.5
    sst_south_power: float = 1.2
    sst_north_amp: float = 21.0
    sst_north_power: float = 1.6
    sst_season_amp: float = 2.5
    sst_texture_amp: float = 1.0
    sst_noise: float = 1.35

    # SSS climatology (psu).  Salinity is made only loosely predictable from
    # (SST, W): basin patches and a scale-mixture noise give each stratum a
    # peaked conditional distribution with wide occupied tails, so that a
    # representative training set concentrates on the peak while the box
    # support stays broad.  The tapered southern band stays tight.
    sss_base: float = 34.8
    sss_subtropic_amp: float = 1.5
    sss_subtropic_lat: float = 22.0
    sss_subtropic_width: float = 11.0
    sss_equator_dip: float = 0.9
    sss_equator_width: float = 8.0
    sss_north_fresh: float = 1.1
    sss_south_fresh: float = 0.75
    sss_basin_salty: float = 1.25
    sss_basin_fresh: float = 0.5
    sss_texture_amp: float = 0.30
    sss_noise: float = 0.42
    sss_tail_frac: float = 0.12
    sss_tail_scale: float = 4.0
    sss_south_noise: float = 0.20
    sss_season_amp: float = 0.1
    plume_scale: float = 1.8

    # wind climatology (m/s)
    wind_base: float = 5.2
    wind_westerly_amp: float = 3.8
    wind_westerly_lat: float = 47.0
    wind_westerly_width: float = 12.0
    wind_south_boost: float = 0.28
    wind_trade_amp: float = 2.2
    wind_trade_lat: float = 13.0
    wind_trade_width: float = 7.0
    wind_texture_amp: float = 1.0
    wind_noise: float = 1.7

    def __post_init__(self):
        if self.resolution_deg <= 0:
            raise ValueError("resolution_deg must be > 0")
        if not self.months or any(not 1 <= m <= 12 for m in self.months):
            raise ValueError("months must be a non-empty tuple within 1..12")


@dataclass(frozen=True)
class OceanField:
    """One month's gridded (SSS, SST, W) state with the static ocean mask."""

    month: int
    lat: np.ndarray
    lon: np.ndarray
    sss: np.ndarray
    sst: np.ndarray
    wind: np.ndarray
    ocean: np.ndarray


def land_mask(lat, lon):
    """Stylized continents: heavy land in the northern hemisphere, an open
    southern ocean below 55S."""
    west = (((lon >= -80) & (lon < -35) & (lat > -55))
            | ((lon >= -125) & (lon < -60) & (lat > 15)))
    east = (((lon >= 0) & (lon < 45) & (lat > -35) & (lat < 35))
            | ((lon >= 0) & (lon < 120) & (lat > 35)))
    austral = (lon >= 110) & (lon < 155) & (lat > -40) & (lat < -12)
    return west | east | austral


def generate_world(cfg=WorldConfig(), rng_seed=0):
    """Generate the monthly fields (one OceanField per configured month)."""
    rng = np.random.default_rng(rng_seed)
    res = cfg.resolution_deg
    lat = np.arange(-LAT_LIMIT + res / 2, LAT_LIMIT, res)
    lon = np.arange(-180.0 + res / 2, 180.0, res)
    glat, glon = np.meshgrid(lat, lon, indexing="ij")
    ocean = ~land_mask(glat, glon)

    ramp_s = np.clip(-glat, 0.0, None) / LAT_LIMIT
    ramp_n = np.clip(glat, 0.0, None) / LAT_LIMIT
    sst_zonal = (cfg.sst_equator
                 - cfg.sst_south_amp * ramp_s ** cfg.sst_south_power
                 - cfg.sst_north_amp * ramp_n ** cfg.sst_north_power)

    south_taper = _sigmoid((-glat - 42.0) / 2.5)
    sss_zonal = (cfg.sss_base
                 + cfg.sss_subtropic_amp * np.exp(
                     -((np.abs(glat) - cfg.sss_subtropic_lat)
                       / cfg.sss_subtropic_width) ** 2)
                 - cfg.sss_equator_dip * np.exp(
                     -(glat / cfg.sss_equator_width) ** 2)
                 - cfg.sss_north_fresh * _sigmoid((glat - 48.0) / 5.0)
                 - cfg.sss_south_fresh * _sigmoid((-glat - 50.0) / 4.0))
    plumes = cfg.plume_scale * (
        -1.4 * np.exp(-((glat - 5.0) / 6.0) ** 2 - ((glon + 48.0) / 10.0) ** 2)
        - 1.1 * np.exp(-((glat - 12.0) / 7.0) ** 2 - ((glon - 88.0) / 12.0) ** 2)
        - 0.9 * np.exp(-((glat + 8.0) / 6.0) ** 2 - ((glon - 15.0) / 11.0) ** 2))
    basin_frac = 1.0 - 0.93 * south_taper
    sss_amp = cfg.sss_texture_amp * (1.0 - 0.80 * south_taper)
    sss_sigma = (cfg.sss_noise * (1.0 - south_taper)
                 + cfg.sss_south_noise * south_taper)
    tail_scale_eff = 1.0 + (cfg.sss_tail_scale - 1.0) * (1.0 - south_taper)

    wind_zonal = (cfg.wind_base
                  + cfg.wind_westerly_amp
                  * np.exp(-((np.abs(glat) - cfg.wind_westerly_lat)
                             / cfg.wind_westerly_width) ** 2)
                  * (1.0 + cfg.wind_south_boost * (glat < 0))
                  + cfg.wind_trade_amp
                  * np.exp(-((np.abs(glat) - cfg.wind_trade_lat)
                             / cfg.wind_trade_width) ** 2))

    fields = []
    for month in cfg.months:
        phase = 2.0 * np.pi * (month - 1) / 12.0
        sst = (sst_zonal
               - cfg.sst_season_amp * np.sign(glat)
               * np.cos(phase - np.pi / 6.0)
               * np.minimum(np.abs(glat) / 40.0, 1.0)
               + cfg.sst_texture_amp
               * np.sin(2 * np.pi * glon / 120.0 + glat / 10.0 + phase)
               + cfg.sst_noise * rng.standard_normal(glat.shape))
        sst = np.clip(sst, *SST_BOUNDS)

        dlon_salty = (glon + 30.0 + 3.0 * np.cos(phase)) % 360.0 - 180.0
        dlon_fresh = (glon - 150.0) % 360.0 - 180.0
        basin = basin_frac * (
            cfg.sss_basin_salty * np.exp(-(dlon_salty / 30.0) ** 2)
            - cfg.sss_basin_fresh * np.exp(-(dlon_fresh / 55.0) ** 2))
        z = rng.standard_normal(glat.shape)
        inflated = rng.uniform(size=glat.shape) < cfg.sss_tail_frac
        z = np.where(inflated, tail_scale_eff * z, z)
        sss = (sss_zonal + plumes + basin
               + sss_amp * np.sin(2 * np.pi * glon / 90.0 + glat / 7.0 + phase)
               + sss_sigma * z
               + cfg.sss_season_amp * np.cos(phase))
        sss = np.clip(sss, *SSS_BOUNDS)

        wind = (wind_zonal
                + cfg.wind_texture_amp
                * np.sin(2 * np.pi * glon / 150.0 - glat / 12.0 + phase)
                + cfg.wind_noise * rng.standard_normal(glat.shape))
        wind = np.clip(wind, *WIND_BOUNDS)

        fields.append(OceanField(month=int(month), lat=lat.copy(),
                                 lon=lon.copy(), sss=sss, sst=sst,
                                 wind=wind, ocean=ocean))
    return fields


class WorldSamples(NamedTuple):
    """Flat ocean-cell samples pooled across months."""

    month: np.ndarray
    lat: np.ndarray
    lon: np.ndarray
    sss: np.ndarray
    sst: np.ndarray
    wind: np.ndarray

    def __len__(self):
        return self.sss.size


def world_samples(fields):
    """Flatten the ocean cells of every field into sample arrays."""
    months, lats, lons, ssss, ssts, winds = [], [], [], [], [], []
    for f in fields:
        glat, glon = np.meshgrid(f.lat, f.lon, indexing="ij")
        mask = f.ocean
        months.append(np.full(mask.sum(), f.month, dtype=np.int64))
        lats.append(glat[mask])
        lons.append(glon[mask])
        ssss.append(f.sss[mask])
        ssts.append(f.sst[mask])
        winds.append(f.wind[mask])
    return WorldSamples(month=np.concatenate(months),
                        lat=np.concatenate(lats),
                        lon=np.concatenate(lons),
                        sss=np.concatenate(ssss),
                        sst=np.concatenate(ssts),
                        wind=np.concatenate(winds))


def box_ids(sss, sst, wind, widths=DEFAULT_BOX_WIDTHS):
    """Half-open (SSS, SST, W) bin key, anchored at (0 psu, -2 degC, 0 m/s)."""
    i_sss = np.floor((np.asarray(sss) - BOX_ANCHORS[0]) / widths[0]).astype(np.int64)
    i_sst = np.floor((np.asarray(sst) - BOX_ANCHORS[1]) / widths[1]).astype(np.int64)
    i_w = np.floor((np.asarray(wind) - BOX_ANCHORS[2]) / widths[2]).astype(np.int64)
    return (i_w << 40) | (i_sst << 20) | i_sss


@dataclass(frozen=True)
class TrainingRecord:
    """One network-ready record (row view into a Database)."""

    inputs: np.ndarray
    target_sss: float
    box_id: int
    lat: float
    lon: float
    weight: float


@dataclass
class Database:
    """Materialized network-ready records for one pixel class.

    ``true_sst``/``true_wind`` are carried in memory when built in-process
    (they allow re-binning and SST-conditioned evaluation) but are not part
    of the serialized record schema.
    """

    class_id: int
    provenance: str
    build_seed: int
    box_widths: tuple
    inputs: np.ndarray
    target: np.ndarray
    lat: np.ndarray
    lon: np.ndarray
    box_id: np.ndarray
    weight: np.ndarray
    true_sst: np.ndarray | None = None
    true_wind: np.ndarray | None = None

    def __post_init__(self):
        if self.provenance not in PROVENANCES:
            raise ValueError(f"provenance must be one of {PROVENANCES}")
        n = self.inputs.shape[0]
        for name in ("target", "lat", "lon", "box_id", "weight"):
            if getattr(self, name).shape[0] != n:
                raise ValueError(f"{name} length mismatch")
        if n and np.any(self.weight < 1):
            raise ValueError("weights must be >= 1")

    def __len__(self):
        return self.inputs.shape[0]

    @property
    def n_inputs(self):
        return self.inputs.shape[1]

    def record(self, i):
        return TrainingRecord(inputs=self.inputs[i], target_sss=float(self.target[i]),
                              box_id=int(self.box_id[i]), lat=float(self.lat[i]),
                              lon=float(self.lon[i]), weight=float(self.weight[i]))

    def subset(self, idx, provenance=None, build_seed=None):
        idx = np.asarray(idx)
        return Database(
            class_id=self.class_id,
            provenance=self.provenance if provenance is None else provenance,
            build_seed=self.build_seed if build_seed is None else build_seed,
            box_widths=self.box_widths,
            inputs=self.inputs[idx], target=self.target[idx],
            lat=self.lat[idx], lon=self.lon[idx],
            box_id=self.box_id[idx], weight=self.weight[idx],
            true_sst=None if self.true_sst is None else self.true_sst[idx],
            true_wind=None if self.true_wind is None else self.true_wind[idx])


def materialize_records(samples, class_spec, noise_spec=None,
                        rad_spec=RadiometerSpec(), rng_seed=0,
                        provenance="B0", box_widths=DEFAULT_BOX_WIDTHS,
                        sst_sigma=None, wind_sigma=None):
    """Materialize network-ready records for a class from world samples.

    Noise-free TBs at the class grid get exactly one draw of the class's
    correlated residual noise (``noise_spec=None`` for noise-free records),
    and the auxiliary inputs one draw of Gaussian noise (``sst_sigma=0`` /
    ``wind_sigma=0`` for exact auxiliaries).
    """
    seq = np.random.SeedSequence(rng_seed)
    tb_seed, aux_seed = seq.spawn(2)
    grid = class_spec.grid_array
    tbs = first_stokes_grid(samples.sss, samples.sst, samples.wind,
                            grid, rad_spec)
    if noise_spec is not None:
        if noise_spec.n_angles != grid.size:
            raise ValueError("noise spec dimension does not match angle grid")
        tbs = tbs + draw_correlated(noise_spec, tb_seed, n=len(samples))
    kwargs = {}
    if sst_sigma is not None:
        kwargs["sst_sigma"] = sst_sigma
    if wind_sigma is not None:
        kwargs["wind_sigma"] = wind_sigma
    aux = perturb_aux(samples.sst, samples.wind, aux_seed, **kwargs)
    inputs = np.hstack([tbs, aux.noisy_sst[:, None], aux.noisy_wind[:, None]])
    return Database(
        class_id=class_spec.class_id, provenance=provenance,
        build_seed=int(rng_seed), box_widths=tuple(box_widths),
        inputs=inputs, target=samples.sss.astype(np.float64).copy(),
        lat=samples.lat.astype(np.float64).copy(),
        lon=samples.lon.astype(np.float64).copy(),
        box_id=box_ids(samples.sss, samples.sst, samples.wind, box_widths),
        weight=np.ones(len(samples)),
        true_sst=samples.sst.astype(np.float64).copy(),
        true_wind=samples.wind.astype(np.float64).copy())


def _split_sizes(n, fraction):
    """Learning/validation sizes of the random extraction:
    round(fraction*n) and round(fraction*n/4)."""
    return round(fraction * n), round(fraction * n / 4.0)


def extract_random(db, fraction, rng_seed=0):
    """Disjoint uniform random extraction into (learning, validation)."""
    if not 0 < fraction < 1:
        raise ValueError("fraction must be in (0, 1)")
    n = len(db)
    n_learn, n_val = _split_sizes(n, fraction)
    if n_learn < 1:
        raise ValueError("fraction too small: empty learning extraction")
    if n_learn + n_val > n:
        raise ValueError("fraction too large for disjoint extractions")
    perm = np.random.default_rng(rng_seed).permutation(n)
    learn = db.subset(np.sort(perm[:n_learn]), provenance="B1",
                      build_seed=_seed_int(rng_seed))
    valid = db.subset(np.sort(perm[n_learn:n_learn + n_val]),
                      provenance="validation", build_seed=_seed_int(rng_seed))
    return learn, valid


def _seed_int(rng_seed):
    return int(rng_seed) if np.isscalar(rng_seed) else 0


def _group_by_box(ids):
    order = np.argsort(ids, kind="stable")
    sorted_ids = ids[order]
    starts = np.flatnonzero(np.r_[True, sorted_ids[1:] != sorted_ids[:-1]])
    bounds = np.r_[starts, sorted_ids.size]
    return [(int(sorted_ids[starts[k]]), order[bounds[k]:bounds[k + 1]])
            for k in range(starts.size)]


def equalize(db, box_widths=None, per_box=10, rng_seed=0):
    """Equalized database: every occupied (SSS, SST, W) box contributes
    exactly ``per_box`` records.

    Overfull boxes are sampled uniformly without replacement; sparse boxes are
    filled by cyclic duplication of their (shuffled) members.  With
    ``box_widths=None`` the database's own binning is reused; re-binning with
    different widths needs the in-memory truth arrays.
    """
    if per_box < 1:
        raise ValueError("per_box must be >= 1")
    if box_widths is None:
        widths = db.box_widths
        ids = db.box_id
    else:
        if any(w <= 0 for w in box_widths):
            raise ValueError("box widths must be > 0")
        widths = tuple(box_widths)
        if widths == tuple(db.box_widths):
            ids = db.box_id
        else:
            if db.true_sst is None or db.true_wind is None:
                raise ValueError(
                    "re-binning with new widths needs in-memory truth arrays")
            ids = box_ids(db.target, db.true_sst, db.true_wind, widths)
    rng = np.random.default_rng(rng_seed)
    chosen = []
    for _, members in _group_by_box(ids):
        if members.size >= per_box:
            chosen.append(rng.choice(members, size=per_box, replace=False))
        else:
            order = rng.permutation(members)
            chosen.append(order[np.arange(per_box) % members.size])
    idx = np.concatenate(chosen)
    out = db.subset(idx, provenance="B2", build_seed=_seed_int(rng_seed))
    out.box_widths = widths
    out.box_id = ids[idx]
    return out


def box_mean_errors(db, retrieved):
    """Mean retrieval error per occupied (SSS, SST, W) box."""
    err = np.asarray(retrieved, dtype=np.float64) - db.target
    return {box: float(err[members].mean())
            for box, members in _group_by_box(db.box_id)}


def filter_to_boxes(db, boxes):
    """Records of ``db`` whose box id belongs to ``boxes`` (None if empty)."""
    keep = set(int(b) for b in boxes)
    mask = np.fromiter((int(b) in keep for b in db.box_id), dtype=bool,
                       count=len(db))
    if not mask.any():
        return None
    return db.subset(np.flatnonzero(mask))


def boost_extract(b2, box_bias, threshold=0.2):
    """Keep the whole boxes whose mean retrieval error exceeds the threshold
    in absolute value.  ``box_bias`` must cover every box present."""
    present = np.unique(b2.box_id)
    missing = [int(b) for b in present if int(b) not in box_bias]
    if missing:
        raise KeyError(f"box_bias missing {len(missing)} boxes, e.g. {missing[:3]}")
    keep_boxes = {int(b) for b in present if abs(box_bias[int(b)]) > threshold}
    mask = np.fromiter((int(b) in keep_boxes for b in b2.box_id),
                       dtype=bool, count=len(b2))
    return b2.subset(np.flatnonzero(mask), provenance="B3")


def build_mixed(db, sst_split=10.0, total_size=None, rng_seed=0,
                box_widths=None, per_box=10):
    """Mixed database: geographically sampled cold water (SST <= split, ties
    cold), equalized warm water, concatenated to ``total_size`` records."""
    if db.true_sst is None:
        raise ValueError("build_mixed needs in-memory truth arrays")
    rng = np.random.default_rng(rng_seed)
    cold_idx = np.flatnonzero(db.true_sst <= sst_split)
    warm_idx = np.flatnonzero(db.true_sst > sst_split)
    parts = []
    warm_n = 0
    if warm_idx.size:
        warm_eq = equalize(db.subset(warm_idx), box_widths=box_widths,
                           per_box=per_box, rng_seed=rng.integers(2**32))
        if total_size is not None and len(warm_eq) > total_size:
            keep = np.sort(rng.choice(len(warm_eq), size=int(total_size),
                                      replace=False))
            warm_eq = warm_eq.subset(keep)
        parts.append(warm_eq)
        warm_n = len(warm_eq)
    total = warm_n + cold_idx.size if total_size is None else int(total_size)
    cold_n = max(total - warm_n, 0)
    if cold_n and cold_idx.size:
        replace = cold_n > cold_idx.size
        pick = np.sort(rng.choice(cold_idx, size=cold_n, replace=replace))
        parts.append(db.subset(pick))
    if not parts:
        raise ValueError("no records available for the mixed build")
    out = parts[0] if len(parts) == 1 else _concat(parts)
    out.provenance = "Bm"
    out.build_seed = _seed_int(rng_seed)
    return out


def _concat(dbs):
    first = dbs[0]
    has_truth = all(d.true_sst is not None for d in dbs)
    return Database(
        class_id=first.class_id, provenance=first.provenance,
        build_seed=first.build_seed, box_widths=first.box_widths,
        inputs=np.vstack([d.inputs for d in dbs]),
        target=np.concatenate([d.target for d in dbs]),
        lat=np.concatenate([d.lat for d in dbs]),
        lon=np.concatenate([d.lon for d in dbs]),
        box_id=np.concatenate([d.box_id for d in dbs]),
        weight=np.concatenate([d.weight for d in dbs]),
        true_sst=np.concatenate([d.true_sst for d in dbs]) if has_truth else None,
        true_wind=np.concatenate([d.true_wind for d in dbs]) if has_truth else None)


def write_world(path, fields):
    """World CSV: one row per ocean cell per month."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["month", "lat", "lon", "sss", "sst", "wind"])
        for f in fields:
            glat, glon = np.meshgrid(f.lat, f.lon, indexing="ij")
            mask = f.ocean
            for la, lo, ss, st, wd in zip(glat[mask], glon[mask], f.sss[mask],
                                          f.sst[mask], f.wind[mask]):
                writer.writerow([f.month, fmt(la), fmt(lo), fmt(ss),
                                 fmt(st), fmt(wd)])


def read_world(path):
    """Load world samples back; rejects out-of-bounds values."""
    cols = {k: [] for k in ("month", "lat", "lon", "sss", "sst", "wind")}
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            cols["month"].append(int(row["month"]))
            for k in ("lat", "lon", "sss", "sst", "wind"):
                cols[k].append(float(row[k]))
    samples = WorldSamples(
        month=np.array(cols["month"], dtype=np.int64),
        lat=np.array(cols["lat"]), lon=np.array(cols["lon"]),
        sss=np.array(cols["sss"]), sst=np.array(cols["sst"]),
        wind=np.array(cols["wind"]))
    for name, vals, (lo, hi) in (("sss", samples.sss, SSS_BOUNDS),
                                 ("sst", samples.sst, SST_BOUNDS),
                                 ("wind", samples.wind, WIND_BOUNDS)):
        if np.any(vals < lo) or np.any(vals > hi):
            raise ValueError(f"world file has {name} outside [{lo}, {hi}]")
    return samples


def write_database(path, db):
    """Database CSV: metadata header rows, then one row per record."""
    n_angles = db.n_inputs - 2
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["class_id", "provenance", "seed",
                         "box_w_sss", "box_w_sst", "box_w_wind"])
        writer.writerow([db.class_id, db.provenance, db.build_seed,
                         fmt(db.box_widths[0]), fmt(db.box_widths[1]),
                         fmt(db.box_widths[2])])
        writer.writerow(["lat", "lon", "box_id", "weight"]
                        + [f"tb_{k+1}" for k in range(n_angles)]
                        + ["noisy_sst", "noisy_wind", "target_sss"])
        for i in range(len(db)):
            writer.writerow([fmt(db.lat[i]), fmt(db.lon[i]),
                             int(db.box_id[i]), fmt(db.weight[i])]
                            + [fmt(v) for v in db.inputs[i]]
                            + [fmt(db.target[i])])


def read_database(path):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        next(reader)  # metadata names
        meta = next(reader)
        header = next(reader)
        n_inputs = len(header) - 5
        rows = list(reader)
    n = len(rows)
    inputs = np.empty((n, n_inputs))
    target = np.empty(n)
    lat = np.empty(n)
    lon = np.empty(n)
    box_id = np.empty(n, dtype=np.int64)
    weight = np.empty(n)
    for i, row in enumerate(rows):
        lat[i] = float(row[0])
        lon[i] = float(row[1])
        box_id[i] = int(row[2])
        weight[i] = float(row[3])
        inputs[i] = [float(v) for v in row[4:4 + n_inputs]]
        target[i] = float(row[-1])
    return Database(class_id=int(meta[0]), provenance=meta[1],
                    build_seed=int(meta[2]),
                    box_widths=(float(meta[3]), float(meta[4]), float(meta[5])),
                    inputs=inputs, target=target, lat=lat, lon=lon,
                    box_id=box_id, weight=weight)
