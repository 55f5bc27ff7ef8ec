"""Closed-form mode diagnostics: entropy, Loschmidt amplitude/echo, OTOC.

Every function broadcasts over numpy arrays of ``k`` and ``t``.
"""

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import entr

from .models import Model, gapped_mask, mode_angles, ssh_bloch_vector

ECHO_FLOOR = 1e-300

__all__ = [
    "DiagnosticsSample",
    "RateFunctionSample",
    "binary_entropy",
    "entropy",
    "entropy_tfi",
    "entropy_ssh",
    "loschmidt_amplitude",
    "loschmidt_echo",
    "loschmidt_echo_tfi",
    "otoc",
    "otoc_tfi",
    "otoc_ssh",
    "rate_function",
    "mode_log_echo",
]


@dataclass(frozen=True)
class DiagnosticsSample:
    k: float
    t: float
    entropy: float
    loschmidt_echo: float
    otoc: float


@dataclass(frozen=True)
class RateFunctionSample:
    t: float
    lam: float


def binary_entropy(p):
    """Shannon entropy (nats) of a two-outcome distribution ``(p, 1-p)``."""
    p = np.clip(p, 0.0, 1.0)
    return entr(p) + entr(1.0 - p)


def _check(spec, model):
    if spec.model is not model:
        raise ValueError(f"expected a {model.value} quench, got {spec.model.value}")


def entropy_tfi(k, spec):
    _check(spec, Model.TFI)
    d = mode_angles(k, spec).delta_theta
    return binary_entropy(np.cos(d) ** 2)


def entropy_ssh(k, spec):
    _check(spec, Model.SSH)
    d = mode_angles(k, spec).delta_theta
    return binary_entropy(np.cos(0.5 * d) ** 2)


def entropy(k, spec):
    return entropy_tfi(k, spec) if spec.model is Model.TFI else entropy_ssh(k, spec)


def _ssh_overlap_of_directions(k, spec):
    dxi, dyi, _ = ssh_bloch_vector(k, spec.pre)
    dxf, dyf, _ = ssh_bloch_vector(k, spec.post)
    return (dxi * dxf + dyi * dyf) / (np.hypot(dxi, dyi) * np.hypot(dxf, dyf))


def loschmidt_amplitude(k, spec, t):
    """Per-mode amplitude ``G_k(t) = <psi_k(0)|psi_k(t)>``.

    TFI: cos^2(dtheta) e^{i eps t} + sin^2(dtheta) e^{-i eps t}, the
    quasiparticle vacuum sitting at energy -eps.
    SSH: cos(E t) + i (d_i . d_f) sin(E t) with unit Bloch vectors.
    """
    ang = mode_angles(k, spec)
    k, t = np.asarray(k), np.asarray(t)
    phase = ang.energy_post * t
    if spec.model is Model.TFI:
        c2 = np.cos(ang.delta_theta) ** 2
        return c2 * np.exp(1j * phase) + (1.0 - c2) * np.exp(-1j * phase)
    return np.cos(phase) + 1j * _ssh_overlap_of_directions(k, spec) * np.sin(phase)


def loschmidt_echo_tfi(k, spec, t):
    """|a|^4 + |b|^4 + 2|a|^2|b|^2 cos(2 eps t), with |a|^2 = cos^2(dtheta).

    Evaluated as cos^2(2 dtheta) + sin^2(2 dtheta) cos^2(eps t), the same
    expression written as a sum of non-negative terms so that it stays
    accurate down to the Fisher zeros.
    """
    _check(spec, Model.TFI)
    ang = mode_angles(k, spec)
    two_d = 2 * ang.delta_theta
    return np.cos(two_d) ** 2 + np.sin(two_d) ** 2 * np.cos(ang.energy_post * np.asarray(t)) ** 2


def loschmidt_echo(k, spec, t):
    if spec.model is Model.TFI:
        return loschmidt_echo_tfi(k, spec, t)
    return np.abs(loschmidt_amplitude(k, spec, t)) ** 2


def otoc_tfi(k, spec, t):
    """sin^2(2 theta_post) sin^2(eps t) cos^2(2 dtheta)."""
    _check(spec, Model.TFI)
    ang = mode_angles(k, spec)
    return (
        np.sin(2 * ang.theta_post) ** 2
        * np.sin(ang.energy_post * np.asarray(t)) ** 2
        * np.cos(2 * ang.delta_theta) ** 2
    )


def otoc_ssh(k, spec, t):
    """sin^2(theta_post) sin^2(|d_f| t) cos^2(dtheta)."""
    _check(spec, Model.SSH)
    ang = mode_angles(k, spec)
    return (
        np.sin(ang.theta_post) ** 2
        * np.sin(ang.energy_post * np.asarray(t)) ** 2
        * np.cos(ang.delta_theta) ** 2
    )


def otoc(k, spec, t):
    return otoc_tfi(k, spec, t) if spec.model is Model.TFI else otoc_ssh(k, spec, t)


def mode_log_echo(spec, k, times):
    """``ln L_k(t)`` for one mode over an array of times, floored at 1e-300."""
    return np.log(np.maximum(loschmidt_echo(k, spec, times), ECHO_FLOOR))


def rate_function(spec, grid, t):
    """Loschmidt rate ``-(1/N) sum_k ln L_k(t)``.

    Modes are summed in ascending-k order.  Gapless modes are skipped with a
    warning.  Resolving the cusps needs roughly
    ``N >= 100 * t_max * max(eps) / pi``; this is not checked.
    """
    if grid.model is not spec.model:
        raise ValueError("grid and quench spec refer to different models")
    momenta = grid.momenta
    keep = gapped_mask(spec, momenta)
    skipped = int(np.count_nonzero(~keep))
    if skipped:
        warnings.warn(f"rate_function skipped {skipped} gapless mode(s)", RuntimeWarning, stacklevel=2)
    times = np.atleast_1d(np.asarray(t, dtype=float))
    total = np.zeros_like(times)
    for k in momenta[keep]:
        total += mode_log_echo(spec, k, times)
    lam = -total / grid.n_cells
    return float(lam[0]) if np.ndim(t) == 0 else lam
