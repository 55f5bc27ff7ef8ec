"""Brute-force per-mode verification in the 4-dimensional two-mode Fock space.

Nothing here uses the closed-form angles or formulas: Hamiltonians are
assembled from Jordan-Wigner ladder operators, the initial state is the
numerically computed ground state of the pre-quench Hamiltonian, and time
evolution goes through an eigen-decomposition.

Basis index is ``2 * n_first + n_second``; (first, second) = (k, -k) for TFI
and (A, B) for SSH.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import smalllin
from .models import GAP_TOL, GaplessPointError, Model

IMAG_TOL = 1e-10

_SM = np.array([[0, 1], [0, 0]], dtype=np.complex128)  # |1> -> |0>
_JW = np.diag([1.0, -1.0]).astype(np.complex128)  # (-1)^n
_I2 = np.eye(2, dtype=np.complex128)
_I4 = np.eye(4, dtype=np.complex128)


class OracleConsistencyError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class FockOperator:
    matrix: np.ndarray
    label: str

    @property
    def dim(self):
        return self.matrix.shape[0]

    @property
    def dag(self):
        return self.matrix.conj().T


A_FIRST = FockOperator(np.kron(_SM, _I2), "annihilation_first")
A_SECOND = FockOperator(np.kron(_JW, _SM), "annihilation_second")
N_FIRST = FockOperator(A_FIRST.dag @ A_FIRST.matrix, "n_first")
N_SECOND = FockOperator(A_SECOND.dag @ A_SECOND.matrix, "n_second")


def build_tfi_pair_hamiltonian(k, p):
    """a (n_k + n_-k - 1) + i b c_k^+ c_-k^+ - i b c_-k c_k, a = -J cos k - h, b = J sin k."""
    a = -p.j * np.cos(k) - p.h
    b = p.j * np.sin(k)
    c1, c2 = A_FIRST.matrix, A_SECOND.matrix
    h = a * (N_FIRST.matrix + N_SECOND.matrix - _I4)
    h = h + 1j * b * (A_FIRST.dag @ A_SECOND.dag) - 1j * b * (c2 @ c1)
    return FockOperator(h, "hamiltonian")


def build_ssh_pair_hamiltonian(k, p):
    """(d_x - i d_y) c_A^+ c_B + h.c. with d = (t1 + t2 cos k, t2 sin k)."""
    dx = p.t1 + p.t2 * np.cos(k)
    dy = p.t2 * np.sin(k)
    hop = (dx - 1j * dy) * (A_FIRST.dag @ A_SECOND.matrix)
    return FockOperator(hop + hop.conj().T, "hamiltonian")


def build_pair_hamiltonian(k, model, p):
    if Model(model) is Model.TFI:
        return build_tfi_pair_hamiltonian(k, p)
    return build_ssh_pair_hamiltonian(k, p)


def _ground_state(h, k):
    w, v = smalllin.eig_hermitian(h)
    if w[1] - w[0] <= GAP_TOL:
        raise GaplessPointError(k, "degenerate pre-quench ground state")
    return v[:, 0]


def _block_eigvecs(h, idx):
    """Eigenvectors of ``h`` restricted to basis states ``idx``, embedded in 4 dims."""
    w, v = smalllin.eig_hermitian(h[np.ix_(idx, idx)])
    out = np.zeros((4, len(idx)), dtype=np.complex128)
    out[idx, :] = v
    return w, out


@dataclass(frozen=True, eq=False)
class _Mode:
    h_post: np.ndarray
    psi0: np.ndarray
    post_pair: np.ndarray  # columns: post-quench two-state basis of the relevant sector


@lru_cache(maxsize=4096)
def _mode(k, spec):
    h_pre = build_pair_hamiltonian(k, spec.model, spec.pre).matrix
    h_post = build_pair_hamiltonian(k, spec.model, spec.post).matrix
    psi0 = _ground_state(h_pre, k)
    if spec.model is Model.TFI:
        # even-parity sector {|00>, |11>}: columns (vacuum, pair excitation)
        w, vecs = _block_eigvecs(h_post, [0, 3])
    else:
        # one-particle sector {|01>, |10>}: columns (upper band, lower band)
        w, vecs = _block_eigvecs(h_post, [1, 2])
        vecs = vecs[:, ::-1]
    if w[1] - w[0] <= GAP_TOL:
        raise GaplessPointError(k, "gapless post-quench Hamiltonian")
    return _Mode(h_post=h_post, psi0=psi0, post_pair=vecs)


def oracle_state(k, spec, t):
    m = _mode(float(k), spec)
    return smalllin.evolve(m.h_post, m.psi0, t)


def oracle_mode_amplitudes(k, spec, t):
    """Amplitudes of the evolved state on the post-quench two-state basis.

    Ordering follows ``quench.ModeState``: TFI (vacuum, pair), SSH (upper,
    lower band).  Each basis vector carries an arbitrary numerical phase.
    """
    m = _mode(float(k), spec)
    amps = m.post_pair.conj().T @ oracle_state(k, spec, t)
    return complex(amps[0]), complex(amps[1])


def oracle_entropy(k, spec, t, bipartition=None):
    """Entanglement entropy of the evolved mode state, by partial trace.

    TFI bipartitions: ``"quasiparticle"`` (default; post-quench k~ / -k~
    modes) or ``"bare"`` (c_k / c_-k).
    SSH bipartitions: ``"sublattice"`` (default; A / B) or ``"band"``
    (post-quench upper / lower band modes).
    """
    psi = oracle_state(k, spec, t)
    if spec.model is Model.TFI:
        bipartition = bipartition or "quasiparticle"
        if bipartition == "quasiparticle":
            c_vac, c_pair = oracle_mode_amplitudes(k, spec, t)
            psi = np.array([c_vac, 0, 0, c_pair])
        elif bipartition != "bare":
            raise ValueError(f"unknown TFI bipartition {bipartition!r}")
    else:
        bipartition = bipartition or "sublattice"
        if bipartition == "band":
            c_up, c_low = oracle_mode_amplitudes(k, spec, t)
            # first factor = upper-band mode: |1_+ 0_-> -> index 2, |0_+ 1_-> -> index 1
            psi = np.array([0, c_low, c_up, 0])
        elif bipartition != "sublattice":
            raise ValueError(f"unknown SSH bipartition {bipartition!r}")
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > 1e-10:
        raise OracleConsistencyError(f"state leaked out of the two-state sector (norm {norm!r})")
    rho = smalllin.pure_density_matrix(psi / norm)
    return smalllin.von_neumann_entropy(smalllin.partial_trace(rho, keep="first"))


def oracle_loschmidt_amplitude(k, spec, t):
    m = _mode(float(k), spec)
    return complex(np.vdot(m.psi0, smalllin.evolve(m.h_post, m.psi0, t)))


def oracle_loschmidt(k, spec, t):
    return abs(oracle_loschmidt_amplitude(k, spec, t)) ** 2


def oracle_otoc(k, spec, t):
    """-<psi(0)| [W(t), V]^2 |psi(0)> with W = n_first, V = n_second."""
    m = _mode(float(k), spec)
    u = smalllin.propagator(m.h_post, t)
    w_t = u.conj().T @ N_FIRST.matrix @ u
    v = N_SECOND.matrix
    comm = w_t @ v - v @ w_t
    val = -np.vdot(m.psi0, comm @ (comm @ m.psi0))
    if abs(val.imag) > IMAG_TOL:
        raise OracleConsistencyError(f"OTOC has imaginary part {val.imag!r}")
    return float(val.real)


ORACLES = {
    "entropy": lambda k, spec, t: oracle_entropy(k, spec, t),
    "echo": oracle_loschmidt,
    "otoc": oracle_otoc,
}


def closed_forms():
    from .diagnostics import entropy, loschmidt_echo, otoc

    return {
        "entropy": lambda k, spec, t: entropy(k, spec) + 0.0 * t,
        "echo": loschmidt_echo,
        "otoc": otoc,
    }


@dataclass(frozen=True)
class Deviation:
    diagnostic: str
    max_abs: float
    k: float
    t: float


def compare_closed_forms(spec, momenta, times, closed=None):
    """Largest |closed form - oracle| per diagnostic over a (k, t) grid.

    ``closed`` maps diagnostic name to a replacement closed form; the
    defaults are the library functions.  Gapless momenta are skipped.
    """
    from .models import gapped_mask

    forms = closed_forms()
    forms.update(closed or {})
    momenta = np.asarray(momenta, dtype=float)
    momenta = momenta[gapped_mask(spec, momenta)]
    times = np.asarray(times, dtype=float)
    out = {}
    for name, oracle in ORACLES.items():
        cf = np.asarray(forms[name](momenta[:, None], spec, times[None, :]), dtype=float)
        ref = np.array([[oracle(k, spec, t) for t in times] for k in momenta])
        err = np.abs(cf - ref)
        i, j = np.unravel_index(np.argmax(err), err.shape)
        out[name] = Deviation(name, float(err[i, j]), float(momenta[i]), float(times[j]))
    return out
