"""Diagnostics over (k, t) grids and cusp detection in the Loschmidt rate."""

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.ndimage import maximum_filter1d

from .diagnostics import RateFunctionSample, entropy, loschmidt_echo, otoc, rate_function
from .models import Model, ModeGrid, QuenchSpec, SshParams, TfiParams, gapped_mask

OUTPUTS = ("entropy", "echo", "otoc", "rate")
DIAGNOSTIC_COLUMNS = ("entropy", "echo", "otoc")

# finite-size sensitivity |lambda_N - lambda_2N| relative to max(1, |lambda|)
CORE_TOL = 1e-10
FLOOR_TOL = 1e-13
SMOOTH_HALF_WIDTH = 4
UNIFORM_RTOL = 1e-6


class EmptyGridError(ValueError):
    """Every mode of the requested grid is gapless."""


@dataclass(frozen=True)
class SweepConfig:
    spec: QuenchSpec
    n_cells: int
    t_max: float
    n_time: int
    t_min: float = 0.0
    outputs: tuple = OUTPUTS
    n_max_critical_times: int = 2
    tol: float = 1e-10

    def __post_init__(self):
        if not isinstance(self.spec, QuenchSpec):
            raise TypeError("spec must be a QuenchSpec")
        if int(self.n_cells) != self.n_cells or self.n_cells < 2:
            raise ValueError(f"n_cells must be an integer >= 2, got {self.n_cells!r}")
        if self.spec.model is Model.TFI and self.n_cells % 2:
            raise ValueError(f"n_cells must be even for TFI, got {self.n_cells!r}")
        if int(self.n_time) != self.n_time or self.n_time < 2:
            raise ValueError(f"n_time must be an integer >= 2, got {self.n_time!r}")
        if not np.isfinite(self.t_min) or not np.isfinite(self.t_max):
            raise ValueError("t_min and t_max must be finite")
        if not self.t_min < self.t_max:
            raise ValueError(f"t_min ({self.t_min!r}) must be smaller than t_max ({self.t_max!r})")
        unknown = set(self.outputs) - set(OUTPUTS)
        if unknown:
            raise ValueError(f"unknown outputs {sorted(unknown)}; choose from {list(OUTPUTS)}")
        if not self.outputs:
            raise ValueError("outputs must not be empty")
        if int(self.n_max_critical_times) != self.n_max_critical_times or self.n_max_critical_times < 0:
            raise ValueError("n_max_critical_times must be a non-negative integer")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        # canonical order keeps serialization and CSV columns stable
        object.__setattr__(self, "outputs", tuple(o for o in OUTPUTS if o in self.outputs))
        object.__setattr__(self, "n_cells", int(self.n_cells))
        object.__setattr__(self, "n_time", int(self.n_time))
        object.__setattr__(self, "t_min", float(self.t_min))
        object.__setattr__(self, "t_max", float(self.t_max))
        object.__setattr__(self, "n_max_critical_times", int(self.n_max_critical_times))
        object.__setattr__(self, "tol", float(self.tol))

    @property
    def grid(self):
        return ModeGrid(self.spec.model, self.n_cells)

    @property
    def times(self):
        return np.linspace(self.t_min, self.t_max, self.n_time)

    def to_dict(self):
        spec = self.spec
        if spec.model is Model.TFI:
            pre = {"h": spec.pre.h, "j": spec.pre.j}
            post = {"h": spec.post.h, "j": spec.post.j}
        else:
            pre = {"t1": spec.pre.t1, "t2": spec.pre.t2}
            post = {"t1": spec.post.t1, "t2": spec.post.t2}
        return {
            "model": spec.model.value,
            "pre": pre,
            "post": post,
            "n_cells": self.n_cells,
            "t_min": self.t_min,
            "t_max": self.t_max,
            "n_time": self.n_time,
            "outputs": list(self.outputs),
            "n_max_critical_times": self.n_max_critical_times,
            "tol": self.tol,
        }

    @classmethod
    def from_dict(cls, d):
        model = Model(d["model"])
        kind = TfiParams if model is Model.TFI else SshParams
        spec = QuenchSpec(model, kind(**d["pre"]), kind(**d["post"]))
        return cls(
            spec=spec,
            n_cells=d["n_cells"],
            t_min=d["t_min"],
            t_max=d["t_max"],
            n_time=d["n_time"],
            outputs=tuple(d["outputs"]),
            n_max_critical_times=d["n_max_critical_times"],
            tol=d["tol"],
        )


@dataclass(frozen=True, eq=False)
class SweepResult:
    """Column-oriented sweep output, rows in k-major then t order."""

    config: SweepConfig
    momenta: np.ndarray  # gapped modes only
    times: np.ndarray
    columns: dict = field(default_factory=dict)
    rate: tuple = ()
    skipped_modes: int = 0

    @property
    def n_rows(self):
        return self.momenta.size * self.times.size

    @property
    def k_column(self):
        return np.repeat(self.momenta, self.times.size)

    @property
    def t_column(self):
        return np.tile(self.times, self.momenta.size)

    def rate_arrays(self):
        return (
            np.array([s.t for s in self.rate], dtype=float),
            np.array([s.lam for s in self.rate], dtype=float),
        )


def _mode_rows(k, spec, times, columns):
    out = {}
    if "entropy" in columns:
        out["entropy"] = np.full(times.shape, float(entropy(k, spec)))
    if "echo" in columns:
        out["echo"] = np.asarray(loschmidt_echo(k, spec, times), dtype=float)
    if "otoc" in columns:
        out["otoc"] = np.asarray(otoc(k, spec, times), dtype=float)
    return out


def run_sweep(cfg, threads=1):
    """Evaluate the requested diagnostics on every gapped (k, t) cell.

    Work is split per momentum over ``threads`` workers and collected in
    momentum order, so the result does not depend on the worker count.
    """
    if threads < 1:
        raise ValueError("threads must be >= 1")
    spec, grid, times = cfg.spec, cfg.grid, cfg.times
    all_k = grid.momenta
    keep = gapped_mask(spec, all_k)
    momenta = all_k[keep]
    skipped = int(all_k.size - momenta.size)
    if momenta.size == 0:
        raise EmptyGridError(f"all {all_k.size} modes are gapless for this quench")

    columns = tuple(c for c in DIAGNOSTIC_COLUMNS if c in cfg.outputs)
    per_mode = []
    if columns:
        def task(k):
            return _mode_rows(k, spec, times, columns)

        if threads == 1:
            per_mode = [task(k) for k in momenta]
        else:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                per_mode = list(pool.map(task, momenta))
    stacked = {c: np.concatenate([m[c] for m in per_mode]) for c in columns}

    rate = ()
    if "rate" in cfg.outputs:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            lam = rate_function(spec, grid, times)
        rate = tuple(RateFunctionSample(float(a), float(b)) for a, b in zip(times, lam))
    return SweepResult(
        config=cfg, momenta=momenta, times=times, columns=stacked, rate=rate, skipped_modes=skipped
    )


# --- cusp detection -------------------------------------------------------------


@dataclass(frozen=True)
class CuspReport:
    """Detected cusp times with their sharpness (decades of finite-size
    sensitivity per unit time; grows linearly with N for a true cusp)."""

    times: tuple
    method: str = "derivative_sign_change"
    grid_dt: float = 0.0
    sharpness: tuple = ()


def _as_arrays(rate):
    if isinstance(rate, tuple) and len(rate) == 2 and np.ndim(rate[0]) == 1:
        t, lam = rate
    else:
        t = [s.t for s in rate]
        lam = [s.lam for s in rate]
    return np.asarray(t, dtype=float), np.asarray(lam, dtype=float)


def uniform_step(t):
    """Common spacing of a uniform ascending grid; ValueError otherwise."""
    t = np.asarray(t, dtype=float)
    if t.ndim != 1 or t.size < 3:
        raise ValueError("need at least three time samples")
    d = np.diff(t)
    dt = (t[-1] - t[0]) / (t.size - 1)
    if not dt > 0 or np.max(np.abs(d - dt)) > UNIFORM_RTOL * dt:
        raise ValueError("time grid is not uniform")
    return float(dt)


def _runs(mask):
    """Index pairs (start, stop) of the True runs of a boolean array, stop inclusive."""
    m = np.concatenate([[False], mask, [False]]).astype(np.int8)
    edges = np.flatnonzero(np.diff(m))
    return [(int(a), int(b) - 1) for a, b in zip(edges[::2], edges[1::2])]


def _merge(runs, min_gap):
    merged = []
    for a, b in runs:
        if merged:
            pa, pb = merged[-1]
            gap = a - pb - 1
            if gap <= max(min_gap, min(pb - pa, b - a)):
                merged[-1] = (pa, b)
                continue
        merged.append((a, b))
    return merged


def _fit_v(t, y, lo, hi, dt):
    """Least-squares fit y ~ c - m |t - t0| with t0 scanned on [lo, hi]."""
    centers = np.arange(lo, hi + 0.5 * dt / 10, dt / 10)
    x = np.abs(t[None, :] - centers[:, None])
    xm = x.mean(axis=1, keepdims=True)
    ym = y.mean()
    sxx = np.sum((x - xm) ** 2, axis=1)
    sxy = np.sum((x - xm) * (y - ym)[None, :], axis=1)
    slope = np.where(sxx > 0, sxy / np.where(sxx > 0, sxx, 1.0), 0.0)
    resid = np.sum((y[None, :] - ym - slope[:, None] * (x - xm)) ** 2, axis=1)
    i = int(np.argmin(resid))
    return float(centers[i]), float(-slope[i])


def detect_cusps(rate, grid, spec):
    """Locate the nonanalytic peaks of a finite-N Loschmidt rate.

    The rate on ``grid`` is compared with the same quench on the doubled grid.
    Away from a cusp the momentum sum converges exponentially in N and the
    two agree to rounding; near a cusp they differ, with
    log|lambda_N - lambda_2N| falling off linearly on both sides of t*.
    Each cluster of such finite-size sensitivity that contains a sign change
    of the first difference of lambda (a peak) is reported at the apex of a
    V fitted to the smoothed log-sensitivity.  The fitted slope is the
    sharpness.
    """
    t, lam = _as_arrays(rate)
    dt = uniform_step(t)
    if lam.shape != t.shape:
        raise ValueError("rate samples and times differ in length")
    if grid.model is not spec.model:
        raise ValueError("grid and quench spec refer to different models")

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        lam2 = rate_function(spec, ModeGrid(grid.model, 2 * grid.n_cells), t)
    scale = max(1.0, float(np.max(np.abs(lam))))
    sens = maximum_filter1d(np.abs(lam - lam2), size=2 * SMOOTH_HALF_WIDTH + 1, mode="nearest")
    clusters = _merge(_runs(sens > CORE_TOL * scale), min_gap=SMOOTH_HALF_WIDTH)

    rising = np.diff(lam) > 0
    peak_idx = np.flatnonzero(rising[:-1] & ~rising[1:]) + 1

    times, sharp = [], []
    for a, b in clusters:
        if not np.any((peak_idx >= a) & (peak_idx <= b)):
            continue
        pad = (b - a) // 2 + SMOOTH_HALF_WIDTH
        lo, hi = max(a - pad, 0), min(b + pad, t.size - 1)
        sl = slice(lo, hi + 1)
        use = sens[sl] > FLOOR_TOL * scale
        if np.count_nonzero(use) < 3:
            continue
        t0, m = _fit_v(t[sl][use], np.log10(sens[sl][use]), t[a], t[b], dt)
        # an apex on the window boundary may belong to a cusp outside it
        if m <= 0 or t0 - t[0] < dt or t[-1] - t0 < dt:
            continue
        times.append(t0)
        sharp.append(m)
    return CuspReport(times=tuple(times), grid_dt=dt, sharpness=tuple(sharp))
