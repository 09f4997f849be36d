"""Across-track pixel classes and synthetic raw observation sets.

Pixels are classed by their across-track distance into 10 classes, each with
a fixed grid of interpolation angles.  Raw (pre-smoothing) observations are
drawn as jittered-uniform incidence angles over a padded class span, with
independent Gaussian radiometric noise on the first-Stokes TBs.
"""

import csv
from dataclasses import dataclass

import numpy as np

from ._text import fmt
from .forward_model import (MAX_INCIDENCE_DEG, RadiometerSpec,
                            first_stokes_grid)

# n_angles and across-track intervals (km) for the 10 classes
_CLASS_LAYOUT = (
    (1, 23, (0.0, 100.0)),
    (2, 21, (100.0, 150.0)),
    (3, 18, (150.0, 200.0)),
    (4, 16, (200.0, 250.0)),
    (5, 13, (250.0, 300.0)),
    (6, 10, (300.0, 330.0)),
    (7, 5, (330.0, 400.0)),
    (8, 3, (400.0, 470.0)),
    (9, 1, (470.0, 540.0)),
    (10, 1, (540.0, 550.0)),
)

SWATH_MAX_KM = 550.0

# raw (pre-smoothing) radiometric noise std per class, K; calibrated so the
# post-smoothing residuals land in the intended per-class ranges
RAW_SIGMA_DEFAULTS = {1: 2.0, 2: 2.0, 3: 2.0, 4: 2.0, 5: 2.0, 6: 2.0,
                      7: 2.0, 8: 2.5, 9: 2.2, 10: 2.0}

# evenly spaced grids, common spacing, common centre, span shrinking with
# the class's angle count; single-angle classes sit at the centre
GRID_SPACING_DEG = 40.0 / 22.0
GRID_CENTER_DEG = 25.0

RAW_PAD_DEG = 3.0     # raw angles extend past the grid so ends stay interior
RAW_DENSITY = 3       # raw observations per interpolation angle


class OutOfSwathError(ValueError):
    """Across-track distance outside the 10-class partition."""


@dataclass(frozen=True)
class PixelClassSpec:
    """One across-track class: half-open km interval, its interpolation-angle
    grid, and the raw radiometric noise level used when simulating it."""

    class_id: int
    across_track: tuple
    n_angles: int
    angle_grid: tuple
    raw_sigma: float

    def __post_init__(self):
        if len(self.angle_grid) != self.n_angles:
            raise ValueError("angle_grid length must equal n_angles")
        grid = np.asarray(self.angle_grid)
        if self.n_angles > 1 and not np.all(np.diff(grid) > 0):
            raise ValueError("angle_grid must be strictly ascending")
        if np.any(grid < 0.0) or np.any(grid > MAX_INCIDENCE_DEG):
            raise ValueError(f"angle_grid outside [0, {MAX_INCIDENCE_DEG}]")
        if self.raw_sigma < 0:
            raise ValueError("raw_sigma must be >= 0")

    @property
    def grid_array(self):
        return np.asarray(self.angle_grid, dtype=np.float64)


def default_angle_grid(class_id, spacing=GRID_SPACING_DEG,
                       center=GRID_CENTER_DEG):
    """Evenly spaced interpolation angles for a class (degrees, ascending)."""
    n = _n_angles(class_id)
    half_span = 0.5 * spacing * (n - 1)
    return center - half_span + spacing * np.arange(n)


def _n_angles(class_id):
    for cid, n, _ in _CLASS_LAYOUT:
        if cid == class_id:
            return n
    raise ValueError(f"unknown class_id {class_id}")


def class_table(raw_sigmas=None, spacing=GRID_SPACING_DEG,
                center=GRID_CENTER_DEG):
    """The full 10-class table as a tuple of PixelClassSpec."""
    sig = dict(RAW_SIGMA_DEFAULTS)
    if raw_sigmas:
        sig.update(raw_sigmas)
    return tuple(
        PixelClassSpec(cid, interval, n,
                       tuple(default_angle_grid(cid, spacing, center)),
                       float(sig[cid]))
        for cid, n, interval in _CLASS_LAYOUT)


def get_class(class_id, **kwargs):
    for spec in class_table(**kwargs):
        if spec.class_id == class_id:
            return spec
    raise ValueError(f"unknown class_id {class_id}")


def classify_pixel(across_track_km):
    """Class id owning the across-track distance (half-open km intervals)."""
    if not np.isfinite(across_track_km) or across_track_km < 0.0 \
            or across_track_km >= SWATH_MAX_KM:
        raise OutOfSwathError(
            f"across-track distance {across_track_km} km outside [0, {SWATH_MAX_KM})")
    for cid, _, (lo, hi) in _CLASS_LAYOUT:
        if lo <= across_track_km < hi:
            return cid
    raise OutOfSwathError(f"unclassified distance {across_track_km}")  # pragma: no cover


@dataclass(frozen=True)
class RawObservationSet:
    """Raw incidence angles (unsorted, possibly gappy) and their noisy TBs."""

    angles: np.ndarray
    tbs: np.ndarray

    def __post_init__(self):
        if len(self.angles) != len(self.tbs):
            raise ValueError("angles and tbs must have equal length")

    def validate_for(self, class_spec):
        need = 2 * class_spec.n_angles if class_spec.n_angles > 1 else 3
        if len(self.angles) < need:
            raise ValueError(
                f"class {class_spec.class_id} needs >= {need} raw observations, "
                f"got {len(self.angles)}")


def raw_angle_span(class_spec, pad=RAW_PAD_DEG):
    """Angle interval raw observations are drawn from (padded grid span)."""
    grid = class_spec.grid_array
    return (max(float(grid[0]) - pad, 0.0),
            min(float(grid[-1]) + pad, MAX_INCIDENCE_DEG))


def simulate_raw_observations(class_spec, state, spec=RadiometerSpec(),
                              rng_seed=0, density=RAW_DENSITY,
                              raw_sigma=None, pad=RAW_PAD_DEG):
    """Synthesize one pixel's raw observation set.

    Draws ``density * n_angles`` incidence angles (jittered uniform over the
    padded class span, shuffled), evaluates the forward model and adds
    independent zero-mean Gaussian noise of std ``raw_sigma`` (class default
    when None).
    """
    rng = np.random.default_rng(rng_seed)
    sigma = class_spec.raw_sigma if raw_sigma is None else float(raw_sigma)
    m = max(density * class_spec.n_angles, 3)
    lo, hi = raw_angle_span(class_spec, pad)
    edges = np.linspace(lo, hi, m + 1)
    angles = edges[:-1] + rng.uniform(0.0, 1.0, m) * np.diff(edges)
    rng.shuffle(angles)
    tbs = first_stokes_grid(state.sss, state.sst, state.wind, angles, spec)
    if sigma > 0:
        tbs = tbs + sigma * rng.standard_normal(m)
    return RawObservationSet(angles=angles, tbs=tbs)


def write_class_table(path, specs=None):
    """Export the class table as CSV (angle list space-joined in one field)."""
    specs = class_table() if specs is None else specs
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["class_id", "lo_km", "hi_km", "n_angles",
                         "raw_sigma", "angles_deg"])
        for s in specs:
            writer.writerow([s.class_id, fmt(s.across_track[0]),
                             fmt(s.across_track[1]), s.n_angles,
                             fmt(s.raw_sigma),
                             " ".join(fmt(a) for a in s.angle_grid)])


def read_class_table(path):
    specs = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            specs.append(PixelClassSpec(
                class_id=int(row["class_id"]),
                across_track=(float(row["lo_km"]), float(row["hi_km"])),
                n_angles=int(row["n_angles"]),
                angle_grid=tuple(float(v) for v in row["angles_deg"].split()),
                raw_sigma=float(row["raw_sigma"])))
    return tuple(specs)
