"""Single-mode Hamiltonians of the transverse-field Ising (TFI) and SSH chains.

All scalar functions broadcast over numpy arrays of momenta.
"""

import enum
from dataclasses import dataclass
from typing import Union

import numpy as np

GAP_TOL = 1e-12


class Model(str, enum.Enum):
    TFI = "tfi"
    SSH = "ssh"


class GaplessPointError(ValueError):
    """The Hamiltonian has no gap at the requested momentum."""

    def __init__(self, k, message="gapless point"):
        self.k = k
        super().__init__(f"{message} at k = {k!r}")


@dataclass(frozen=True)
class TfiParams:
    h: float
    j: float = 1.0

    def __post_init__(self):
        if not self.j > 0:
            raise ValueError(f"TFI coupling j must be positive, got {self.j!r}")


@dataclass(frozen=True)
class SshParams:
    t1: float
    t2: float

    def __post_init__(self):
        if self.t1 < 0 or self.t2 < 0:
            raise ValueError("SSH hoppings must be non-negative")
        if self.t1 == 0 and self.t2 == 0:
            raise ValueError("SSH hoppings cannot both vanish")


Params = Union[TfiParams, SshParams]


@dataclass(frozen=True)
class QuenchSpec:
    """Model tag plus the pre- and post-quench parameters."""

    model: Model
    pre: Params
    post: Params

    def __post_init__(self):
        model = Model(self.model)
        object.__setattr__(self, "model", model)
        kind = TfiParams if model is Model.TFI else SshParams
        if not isinstance(self.pre, kind) or not isinstance(self.post, kind):
            raise TypeError(f"{model.value} quench needs {kind.__name__} before and after")

    @classmethod
    def tfi(cls, h0, h1, j=1.0):
        return cls(Model.TFI, TfiParams(h=h0, j=j), TfiParams(h=h1, j=j))

    @classmethod
    def ssh(cls, t2_pre, t2_post, t1=1.0):
        return cls(Model.SSH, SshParams(t1, t2_pre), SshParams(t1, t2_post))


@dataclass(frozen=True)
class ModeGrid:
    """Momentum grid of a chain with ``n_cells`` unit cells.

    TFI keeps the k > 0 half of the antiperiodic sector, (2m+1)pi/N for
    m = 0..N/2-1.  SSH covers the full zone, 2 pi m / N - pi for m = 0..N-1.
    """

    model: Model
    n_cells: int

    def __post_init__(self):
        object.__setattr__(self, "model", Model(self.model))
        if self.n_cells < 2:
            raise ValueError("n_cells must be at least 2")
        if self.model is Model.TFI and self.n_cells % 2:
            raise ValueError("TFI grid needs an even number of sites")

    @property
    def momenta(self):
        n = self.n_cells
        if self.model is Model.TFI:
            return (2 * np.arange(n // 2) + 1) * np.pi / n
        return 2 * np.pi * np.arange(n) / n - np.pi

    def __len__(self):
        return self.n_cells // 2 if self.model is Model.TFI else self.n_cells


@dataclass(frozen=True)
class ModeAngles:
    theta_pre: np.ndarray
    theta_post: np.ndarray
    delta_theta: np.ndarray
    energy_post: np.ndarray


def _raise_if_gapless(k, energy, tol=GAP_TOL):
    gapless = np.asarray(energy) <= tol
    if np.any(gapless):
        k = np.broadcast_to(k, np.shape(gapless))[gapless] if np.ndim(gapless) else k
        raise GaplessPointError(k)


# --- transverse-field Ising ---------------------------------------------------


def tfi_bdg_matrix(k, p):
    """2x2 BdG block in the Nambu basis (c_k, c_{-k}^dagger)."""
    a = -p.j * np.cos(k) - p.h
    b = p.j * np.sin(k)
    return np.array([[a, 1j * b], [-1j * b, -a]], dtype=np.complex128)


def tfi_dispersion(k, p):
    return np.hypot(p.h + p.j * np.cos(k), p.j * np.sin(k))


def tfi_angle(k, p):
    """Bogoliubov angle, ``theta = atan2(J sin k, h + J cos k) / 2``."""
    y = p.j * np.sin(k)
    x = p.h + p.j * np.cos(k)
    _raise_if_gapless(k, np.hypot(x, y))
    return 0.5 * np.arctan2(y, x)


# --- SSH --------------------------------------------------------------------


def ssh_bloch_vector(k, p):
    dx = p.t1 + p.t2 * np.cos(k)
    dy = p.t2 * np.sin(k)
    return dx, dy, np.zeros_like(dx)


def ssh_energy(k, p):
    """Upper-band energy ``|d_k|``."""
    dx, dy, _ = ssh_bloch_vector(k, p)
    return np.hypot(dx, dy)


def ssh_angle(k, p):
    """Polar angle of the Bloch vector in the xy plane, in (-pi, pi]."""
    dx, dy, _ = ssh_bloch_vector(k, p)
    _raise_if_gapless(k, np.hypot(dx, dy))
    return np.arctan2(dy, dx)


# --- per-mode quench data -------------------------------------------------------


def model_angle(k, spec, which):
    p = spec.pre if which == "pre" else spec.post
    return tfi_angle(k, p) if spec.model is Model.TFI else ssh_angle(k, p)


def band_energy(k, p):
    """Positive single-mode energy for either parameter type."""
    return tfi_dispersion(k, p) if isinstance(p, TfiParams) else ssh_energy(k, p)


def energy_post(k, spec):
    return band_energy(k, spec.post)


def gapped_mask(spec, momenta):
    """True where both the pre- and post-quench Hamiltonians are gapped."""
    return (band_energy(momenta, spec.pre) > GAP_TOL) & (band_energy(momenta, spec.post) > GAP_TOL)


def mode_angles(k, spec):
    e = energy_post(k, spec)
    _raise_if_gapless(k, e)
    pre = model_angle(k, spec, "pre")
    post = model_angle(k, spec, "post")
    return ModeAngles(theta_pre=pre, theta_post=post, delta_theta=post - pre, energy_post=e)
