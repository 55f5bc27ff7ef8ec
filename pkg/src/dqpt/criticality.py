"""Critical momenta, critical times and the triad check at k*."""

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import bisect

from .diagnostics import entropy, loschmidt_echo, otoc
from .models import Model, gapped_mask, mode_angles, ssh_bloch_vector

ROOT_TOL = 1e-12
NON_ROOT_TOL = 1e-8
LN2 = float(np.log(2.0))


@dataclass(frozen=True)
class CriticalPoint:
    k_star: float
    energy_at_kstar: float
    critical_times: tuple
    fisher_zero_ok: bool
    entropy_max_ok: bool
    otoc_zero_ok: bool
    residuals: dict = field(default_factory=dict, compare=False)

    @property
    def verified(self):
        return self.fisher_zero_ok and self.entropy_max_ok and self.otoc_zero_ok

    def to_dict(self):
        return {
            "k_star": self.k_star,
            "energy_at_kstar": self.energy_at_kstar,
            "critical_times": list(self.critical_times),
            "triad": {
                "fisher_zero_ok": self.fisher_zero_ok,
                "entropy_max_ok": self.entropy_max_ok,
                "otoc_zero_ok": self.otoc_zero_ok,
            },
            "residuals": dict(self.residuals),
        }


def critical_condition(k, spec):
    """Signed quantity whose zeros are the critical momenta.

    TFI: cos(2 dtheta).  SSH: d_i . d_f of the unit Bloch vectors.
    """
    if spec.model is Model.TFI:
        return np.cos(2 * mode_angles(k, spec).delta_theta)
    mode_angles(k, spec)  # gap checks for both parameter sets
    dxi, dyi, _ = ssh_bloch_vector(k, spec.pre)
    dxf, dyf, _ = ssh_bloch_vector(k, spec.post)
    return (dxi * dxf + dyi * dyf) / (np.hypot(dxi, dyi) * np.hypot(dxf, dyf))


def _scan_momenta(spec, grid):
    k = grid.momenta
    if spec.model is Model.SSH:
        # the condition depends on cos k only; scan [0, pi] with -pi folded to pi
        k = np.append(k[k >= 0], np.pi)
    return k[gapped_mask(spec, k)]


def find_critical_momenta(spec, grid):
    """Roots of ``critical_condition`` bracketed by sign changes on the grid.

    SSH roots come in pairs +-k*; only the representative in [0, pi] is
    returned.
    """
    if grid.model is not spec.model:
        raise ValueError("grid and quench spec refer to different models")
    k = _scan_momenta(spec, grid)
    if k.size < 2:
        return []
    f = critical_condition(k, spec)

    def cond(x):
        return float(critical_condition(x, spec))

    roots = []
    for i in range(k.size - 1):
        a, b = k[i], k[i + 1]
        if f[i] == 0.0:
            roots.append(float(a))
        elif f[i] * f[i + 1] < 0:
            r = bisect(cond, a, b, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
            roots.append(float(r))
    if f[-1] == 0.0:
        roots.append(float(k[-1]))
    for r in roots:
        # bisection stalls at the float spacing; the residual there is noise
        if abs(cond(r)) > ROOT_TOL:
            raise RuntimeError(f"root refinement failed at k = {r!r}: residual {cond(r)!r}")
    return roots


def _time_family(k, spec, n_max):
    e = float(mode_angles(k, spec).energy_post)
    n = np.arange(n_max + 1)
    # TFI zeros need cos(2 eps t) = -1, SSH zeros need cos(E t) = 0
    return tuple(float(x) for x in (2 * n + 1) * np.pi / (2 * e))


def critical_times(k_star, spec, n_max):
    """Times t*_n, n = 0..n_max, at which the mode k* hits a Fisher zero.

    Both models give t*_n = (2n+1) pi / (2 E) with E the post-quench mode
    energy (eps for TFI, |d_f| for SSH).
    """
    residual = float(critical_condition(k_star, spec))
    if abs(residual) > NON_ROOT_TOL:
        raise ValueError(f"k = {k_star!r} is not a critical momentum (condition = {residual:.3e})")
    return list(_time_family(k_star, spec, n_max))


def verify_triad(k_star, spec, t_samples, tol=1e-10, n_max=2):
    """Check Fisher zero, maximal entropy and vanishing OTOC at one momentum."""
    t_samples = np.asarray(t_samples, dtype=float)
    if t_samples.size == 0:
        raise ValueError("t_samples must not be empty")
    times = _time_family(k_star, spec, n_max)
    min_echo = float(np.min(loschmidt_echo(k_star, spec, np.asarray(times))))
    entropy_gap = float(abs(entropy(k_star, spec) - LN2))
    max_otoc = float(np.max(otoc(k_star, spec, t_samples)))
    return CriticalPoint(
        k_star=float(k_star),
        energy_at_kstar=float(mode_angles(k_star, spec).energy_post),
        critical_times=times,
        fisher_zero_ok=min_echo < tol**2,
        entropy_max_ok=entropy_gap < tol,
        otoc_zero_ok=max_otoc < tol,
        residuals={
            "condition": float(critical_condition(k_star, spec)),
            "min_echo_at_critical_times": min_echo,
            "entropy_gap_to_ln2": entropy_gap,
            "max_otoc": max_otoc,
        },
    )
