"""Per-class inversion networks: one hidden tanh layer, linear output.

Inputs (interpolated TBs + noisy SST + noisy wind) and the target salinity
are standardized with learning-set statistics; training is mini-batch
gradient descent with momentum and a geometric learning-rate decay, keeping
the parameters of the best validation epoch (early stopping).  Boost
continuation reuses the trained weights and the frozen normalization.
"""

import csv
from dataclasses import dataclass, replace

import numpy as np

from . import kernels
from ._text import fmt

# hidden sizes per class (fixed empirically; configurable per class)
DEFAULT_HIDDEN = {1: 30, 2: 30, 3: 30, 4: 30, 5: 30,
                  6: 20, 7: 20, 8: 20, 9: 10, 10: 10}

PARAMS_FORMAT = "sssinv-params-v1"


@dataclass
class NetworkParams:
    """Weights plus input/output normalization constants (unset until fit)."""

    class_id: int
    w1: np.ndarray          # (n_hidden, n_inputs)
    b1: np.ndarray          # (n_hidden,)
    w2: np.ndarray          # (n_hidden,)
    b2: float
    in_mean: np.ndarray | None = None
    in_std: np.ndarray | None = None
    out_mean: float | None = None
    out_std: float | None = None

    @property
    def n_inputs(self):
        return self.w1.shape[1]

    @property
    def n_hidden(self):
        return self.w1.shape[0]

    @property
    def fitted(self):
        return self.in_mean is not None

    def copy(self):
        return NetworkParams(
            class_id=self.class_id, w1=self.w1.copy(), b1=self.b1.copy(),
            w2=self.w2.copy(), b2=float(self.b2),
            in_mean=None if self.in_mean is None else self.in_mean.copy(),
            in_std=None if self.in_std is None else self.in_std.copy(),
            out_mean=self.out_mean, out_std=self.out_std)


@dataclass(frozen=True)
class TrainConfig:
    max_epochs: int = 300
    patience: int = 40
    learning_rate: float = 0.1
    lr_decay: float = 0.995
    momentum: float = 0.9
    batch_size: int = 64
    seed: int = 0

    def __post_init__(self):
        if self.max_epochs < 1:
            raise ValueError("max_epochs must be >= 1")
        if self.patience < 1:
            raise ValueError("patience must be >= 1")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")


def init_network(class_spec, n_hidden=None, seed=0):
    """Small-magnitude symmetric random initialization for a class."""
    if n_hidden is None:
        n_hidden = DEFAULT_HIDDEN[class_spec.class_id]
    if n_hidden < 1:
        raise ValueError("n_hidden must be >= 1")
    n_inputs = class_spec.n_angles + 2
    rng = np.random.default_rng(seed)
    r1 = 1.0 / np.sqrt(n_inputs)
    r2 = 1.0 / np.sqrt(n_hidden)
    return NetworkParams(
        class_id=class_spec.class_id,
        w1=rng.uniform(-r1, r1, size=(n_hidden, n_inputs)),
        b1=np.zeros(n_hidden),
        w2=rng.uniform(-r2, r2, size=n_hidden),
        b2=0.0)


def fit_normalization(params, db):
    """Standardization constants from a learning database (returns a copy)."""
    out = params.copy()
    out.in_mean = db.inputs.mean(axis=0)
    out.in_std = np.maximum(db.inputs.std(axis=0), 1e-9)
    out.out_mean = float(db.target.mean())
    out.out_std = float(max(db.target.std(), 1e-9))
    return out


def _require_fitted(params):
    if not params.fitted:
        raise ValueError("normalization constants are not fitted")


def _forward_normalized(params, xn):
    return np.tanh(xn @ params.w1.T + params.b1) @ params.w2 + params.b2


def forward(params, inputs):
    """Retrieved salinity (psu) for one input vector or a batch."""
    _require_fitted(params)
    x = np.asarray(inputs, dtype=np.float64)
    single = x.ndim == 1
    x = np.atleast_2d(x)
    if x.shape[1] != params.n_inputs:
        raise ValueError(f"expected {params.n_inputs} inputs, got {x.shape[1]}")
    xn = (x - params.in_mean) / params.in_std
    yn = _forward_normalized(params, xn)
    y = yn * params.out_std + params.out_mean
    return float(y[0]) if single else y


@dataclass(frozen=True)
class Gradients:
    w1: np.ndarray
    b1: np.ndarray
    w2: np.ndarray
    b2: float

    def max_abs(self):
        return max(np.abs(self.w1).max(), np.abs(self.b1).max(),
                   np.abs(self.w2).max(), abs(self.b2))


def _prepare_batch(params, inputs, target, weight):
    x = np.atleast_2d(np.asarray(inputs, dtype=np.float64))
    y = np.atleast_1d(np.asarray(target, dtype=np.float64))
    if x.shape[0] == 0:
        raise ValueError("empty batch")
    w = (np.ones(x.shape[0]) if weight is None
         else np.atleast_1d(np.asarray(weight, dtype=np.float64)))
    xn = (x - params.in_mean) / params.in_std
    yn = (y - params.out_mean) / params.out_std
    return xn, yn, w


def loss(params, inputs, target, weight=None):
    """Weighted mean squared error on the normalized salinity scale."""
    _require_fitted(params)
    xn, yn, w = _prepare_batch(params, inputs, target, weight)
    e = _forward_normalized(params, xn) - yn
    return float((w * e * e).sum() / w.sum())


def gradient(params, inputs, target, weight=None):
    """Exact backpropagation gradient of the weighted MSE over a batch.

    A record of weight k contributes exactly like k unit-weight copies.
    """
    _require_fitted(params)
    xn, yn, w = _prepare_batch(params, inputs, target, weight)
    z = xn @ params.w1.T + params.b1
    hh = np.tanh(z)
    e = hh @ params.w2 + params.b2 - yn
    g = (2.0 / w.sum()) * w * e
    gz = np.outer(g, params.w2) * (1.0 - hh * hh)
    return Gradients(w1=gz.T @ xn, b1=gz.sum(axis=0),
                     w2=g @ hh, b2=float(g.sum()))


@dataclass(frozen=True)
class EpochStats:
    epoch: int
    train_loss: float
    val_rmse: float
    learning_rate: float


def _val_rmse(params, validation):
    err = forward(params, validation.inputs) - validation.target
    return float(np.sqrt(np.mean(err * err)))


def _run_training(params, learning, validation, cfg, epochs,
                  include_baseline=True):
    """Shared training loop; params' normalization must already be fitted.

    Tracks validation RMSE per epoch and returns the parameters of the best
    epoch, stopping after ``cfg.patience`` epochs without improvement.  With
    ``include_baseline`` the starting point counts as epoch 0 (so the result
    can never validate worse than the input); without it the best epoch of
    the run itself is returned.
    """
    work = params.copy()
    xn = np.ascontiguousarray((learning.inputs - work.in_mean) / work.in_std)
    yn = np.ascontiguousarray((learning.target - work.out_mean) / work.out_std)
    wgt = np.ascontiguousarray(learning.weight, dtype=np.float64)
    b2 = np.array([work.b2])
    vel = (np.zeros_like(work.w1), np.zeros_like(work.b1),
           np.zeros_like(work.w2), np.zeros(1))
    rng = np.random.default_rng(cfg.seed)
    best = work.copy() if include_baseline else None
    best_rmse = _val_rmse(work, validation) if include_baseline else np.inf
    since_best = 0
    lr = cfg.learning_rate
    history = []
    for epoch in range(1, epochs + 1):
        perm = rng.permutation(len(learning)).astype(np.int64)
        train_loss = kernels.sgd_epoch(
            xn, yn, wgt, perm, cfg.batch_size, lr, cfg.momentum,
            work.w1, work.b1, work.w2, b2, *vel)
        work.b2 = float(b2[0])
        rmse = _val_rmse(work, validation)
        history.append(EpochStats(epoch, float(train_loss), rmse, lr))
        if rmse < best_rmse:
            best = work.copy()
            best_rmse = rmse
            since_best = 0
        else:
            since_best += 1
            if since_best >= cfg.patience:
                break
        lr *= cfg.lr_decay
    return best, history


def _check_pair(learning, validation):
    if len(learning) == 0 or len(validation) == 0:
        raise ValueError("learning and validation databases must be non-empty")
    if learning.class_id != validation.class_id:
        raise ValueError("learning/validation class mismatch")


def train(params, learning, validation, cfg=TrainConfig()):
    """Fit normalization on the learning set, then train with validation-based
    early stopping.  Returns (best parameters, per-epoch history)."""
    _check_pair(learning, validation)
    if learning.n_inputs != params.n_inputs:
        raise ValueError("database input width does not match the network")
    fitted = fit_normalization(params, learning)
    return _run_training(fitted, learning, validation, cfg, cfg.max_epochs)


def continue_training(params, boost_db, validation, cfg=TrainConfig(),
                      epoch_budget=None):
    """Warm-start continuation on a boost database.

    Weights are *not* reinitialized and the normalization constants stay
    frozen exactly as fitted before.  Returns the best-validation parameters
    of the continuation run itself (the input parameters are the epoch-0
    state, not a candidate: the continuation commits to the boost
    distribution).  ``epoch_budget=0`` is the identity.
    """
    _require_fitted(params)
    _check_pair(boost_db, validation)
    epochs = cfg.max_epochs if epoch_budget is None else int(epoch_budget)
    if epochs == 0:
        return params.copy(), []
    return _run_training(params, boost_db, validation, cfg, epochs,
                         include_baseline=False)


def save_params(path, params):
    """Versioned text dump; round-trips bit-exactly (floats via repr)."""
    rows = [
        ["format", PARAMS_FORMAT],
        ["class_id", params.class_id],
        ["n_inputs", params.n_inputs],
        ["n_hidden", params.n_hidden],
        ["fitted", int(params.fitted)],
        ["w1"] + [fmt(v) for v in params.w1.ravel()],
        ["b1"] + [fmt(v) for v in params.b1],
        ["w2"] + [fmt(v) for v in params.w2],
        ["b2", fmt(params.b2)],
    ]
    if params.fitted:
        rows += [
            ["in_mean"] + [fmt(v) for v in params.in_mean],
            ["in_std"] + [fmt(v) for v in params.in_std],
            ["out_mean", fmt(params.out_mean)],
            ["out_std", fmt(params.out_std)],
        ]
    with open(path, "w", newline="") as fh:
        csv.writer(fh).writerows(rows)


def load_params(path):
    with open(path, newline="") as fh:
        fields = {row[0]: row[1:] for row in csv.reader(fh) if row}
    if fields.get("format") != [PARAMS_FORMAT]:
        raise ValueError(f"unsupported parameter file format in {path}")
    p = int(fields["n_inputs"][0])
    h = int(fields["n_hidden"][0])
    params = NetworkParams(
        class_id=int(fields["class_id"][0]),
        w1=np.array([float(v) for v in fields["w1"]]).reshape(h, p),
        b1=np.array([float(v) for v in fields["b1"]]),
        w2=np.array([float(v) for v in fields["w2"]]),
        b2=float(fields["b2"][0]))
    if int(fields["fitted"][0]):
        params.in_mean = np.array([float(v) for v in fields["in_mean"]])
        params.in_std = np.array([float(v) for v in fields["in_std"]])
        params.out_mean = float(fields["out_mean"][0])
        params.out_std = float(fields["out_std"][0])
    return params
