"""Closed-form per-mode states after a sudden quench."""

from dataclasses import dataclass

import numpy as np

from .models import Model, QuenchSpec, mode_angles, ssh_angle, ssh_energy

__all__ = ["ModeState", "QuenchSpec", "mode_state", "tfi_mode_state", "ssh_mode_state", "ssh_sublattice_state", "ssh_frame_hamiltonian"]


@dataclass(frozen=True)
class ModeState:
    """Amplitudes of one momentum sector on a two-state basis.

    ``basis == "tfi_pair"``: (|0~ 0~>, |1~ 1~>) of post-quench quasiparticles.
    ``basis == "ssh_band"``: (|psi_+^f>, |psi_-^f>) post-quench bands.
    """

    k: float
    basis: str
    amp0: complex
    amp1: complex
    energy_post: float

    @property
    def populations(self):
        return abs(self.amp0) ** 2, abs(self.amp1) ** 2


def _require(spec, model):
    if spec.model is not model:
        raise ValueError(f"expected a {model.value} quench, got {spec.model.value}")


def tfi_mode_state(k, spec, t):
    _require(spec, Model.TFI)
    ang = mode_angles(k, spec)
    e, d = ang.energy_post, ang.delta_theta
    return ModeState(
        k=k,
        basis="tfi_pair",
        amp0=np.cos(d) * np.exp(1j * e * t),
        amp1=np.sin(d) * np.exp(-1j * e * t),
        energy_post=e,
    )


def ssh_mode_state(k, spec, t):
    _require(spec, Model.SSH)
    ang = mode_angles(k, spec)
    e, half = ang.energy_post, 0.5 * ang.delta_theta
    return ModeState(
        k=k,
        basis="ssh_band",
        amp0=-np.sin(half) * np.exp(-1j * e * t),
        amp1=-np.cos(half) * np.exp(1j * e * t),
        energy_post=e,
    )


def mode_state(k, spec, t):
    if spec.model is Model.TFI:
        return tfi_mode_state(k, spec, t)
    return ssh_mode_state(k, spec, t)


def ssh_sublattice_state(k, spec, t):
    """SSH amplitudes ``(a_A, a_B)`` on the occupation basis (|10>, |01>).

    Band amplitudes are rotated back with real half-angle spinors,
    |psi_+> = (cos, -sin) and |psi_-> = -(sin, cos) at theta_post / 2, the
    signs that reproduce the overlaps p_+ = -sin(dtheta/2), p_- = -cos(dtheta/2)
    and the ground state sin(theta/2)|10> + cos(theta/2)|01>.  These are the
    eigenvectors of |d|(cos(theta) s_z - sin(theta) s_x), a real pseudospin
    frame, not of d.sigma itself; see ``ssh_frame_hamiltonian``.
    """
    st = ssh_mode_state(k, spec, t)
    half = 0.5 * mode_angles(k, spec).theta_post
    c, s = np.cos(half), np.sin(half)
    a_A = st.amp0 * c - st.amp1 * s
    a_B = -st.amp0 * s - st.amp1 * c
    return complex(a_A), complex(a_B)


def ssh_frame_hamiltonian(k, p):
    """2x2 Hamiltonian whose eigenvectors are the real half-angle spinors."""
    th, e = ssh_angle(k, p), ssh_energy(k, p)
    return e * np.array([[np.cos(th), -np.sin(th)], [-np.sin(th), -np.cos(th)]], dtype=np.complex128)
