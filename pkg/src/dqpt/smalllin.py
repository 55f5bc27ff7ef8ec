"""Dense complex linear algebra on 2- and 4-dimensional Hilbert spaces.

Matrices are plain ``complex128`` numpy arrays.  Four-dimensional spaces are
two-mode Fock spaces with basis index ``2 * n_first + n_second``.
"""

import numpy as np

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
NORM_TOL = 1e-12
_EIG_CUTOFF = 1e-14

__all__ = [
    "NotHermitianError",
    "as_matrix",
    "asymmetry",
    "eig_hermitian",
    "evolve",
    "propagator",
    "pure_density_matrix",
    "partial_trace",
    "von_neumann_entropy",
]


class NotHermitianError(ValueError):
    """Raised when a matrix expected to be Hermitian is not."""

    def __init__(self, max_asymmetry):
        self.max_asymmetry = float(max_asymmetry)
        super().__init__(f"matrix is not Hermitian: max |A - A^H| = {self.max_asymmetry:.3e}")


def as_matrix(m):
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] not in (2, 4):
        raise ValueError(f"expected a 2x2 or 4x4 matrix, got shape {m.shape}")
    return m


def asymmetry(m):
    """Largest entry of ``|A - A^H|``."""
    m = np.asarray(m)
    return float(np.max(np.abs(m - m.conj().T)))


def _check_hermitian(m, tol=HERMITIAN_TOL):
    # scale-aware so large-energy Hamiltonians are not rejected on round-off
    err = asymmetry(m)
    if err > tol * max(1.0, float(np.max(np.abs(m)))):
        raise NotHermitianError(err)


def eig_hermitian(m):
    """Eigen-decomposition of a Hermitian matrix.

    Returns ``(eigenvalues, eigenvectors)`` with eigenvalues ascending and
    eigenvectors stored as columns, so ``m = V @ diag(w) @ V^H``.
    """
    m = as_matrix(m)
    _check_hermitian(m)
    # symmetrise away the sub-tolerance asymmetry before LAPACK sees it
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    return w, v


def propagator(m_hamiltonian, t):
    """``exp(-i H t)`` built from the eigen-decomposition of ``H``."""
    w, v = eig_hermitian(m_hamiltonian)
    return (v * np.exp(-1j * w * t)) @ v.conj().T


def evolve(m_hamiltonian, state, t):
    """Apply ``exp(-i H t)`` to a normalized state vector."""
    state = np.asarray(state, dtype=np.complex128)
    norm = np.linalg.norm(state)
    if abs(norm - 1.0) > NORM_TOL:
        raise ValueError(f"state is not normalized (norm = {norm!r})")
    if t == 0:
        return state.copy()
    w, v = eig_hermitian(m_hamiltonian)
    if v.shape[0] != state.shape[0]:
        raise ValueError("state dimension does not match the Hamiltonian")
    return v @ (np.exp(-1j * w * t) * (v.conj().T @ state))


def pure_density_matrix(state):
    state = np.asarray(state, dtype=np.complex128)
    return np.outer(state, state.conj())


def _check_density_matrix(rho):
    rho = as_matrix(rho)
    _check_hermitian(rho)
    tr = np.trace(rho)
    if abs(tr - 1.0) > TRACE_TOL:
        raise ValueError(f"density matrix trace is {tr!r}, expected 1")
    return rho


def partial_trace(rho, keep="first"):
    """Reduce a two-mode (4x4) density matrix to one mode.

    ``keep`` selects the factor that survives: ``"first"`` or ``"second"``.
    """
    rho = as_matrix(rho)
    if rho.shape != (4, 4):
        raise ValueError("partial_trace needs a 4x4 density matrix")
    r = rho.reshape(2, 2, 2, 2)  # (n1, n2, n1', n2')
    if keep == "first":
        return np.einsum("ijkj->ik", r)
    if keep == "second":
        return np.einsum("jijk->ik", r)
    raise ValueError(f"keep must be 'first' or 'second', not {keep!r}")


def von_neumann_entropy(rho):
    """``-Tr rho ln rho`` in nats."""
    rho = _check_density_matrix(rho)
    w, _ = eig_hermitian(rho)
    if w[0] < -HERMITIAN_TOL:
        raise ValueError(f"density matrix has negative eigenvalue {w[0]!r}")
    w = np.clip(w, 0.0, None)
    w = w[w > _EIG_CUTOFF]
    return float(-np.sum(w * np.log(w)))
