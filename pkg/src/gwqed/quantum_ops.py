"""Dense operator algebra on small multi-qubit Hilbert spaces.

Operators are plain complex ``numpy`` arrays of shape (2**n, 2**n) with the
site-0 factor leftmost in the Kronecker product.  Everything here is sized
for the desk-scale computations in this package: chains of at most
``N_MAX = 12`` qubits, for which dense storage (4096 x 4096 complex at the
cap) is the simplest correct choice.

Two ladder-operator conventions are supported.  The default is the standard
half-convention sigma_pm = (sigma_x +- i sigma_y)/2, i.e. sigma_+ = |e><g|.
The alternative ``convention="double"`` uses sigma_pm = sigma_x +- i sigma_y
(twice the standard matrices), which some spin-chain bookkeeping uses when
rotating between ladder and Cartesian couplings; it exists so both readings
of a coupling formula can be compared explicitly.
"""

from __future__ import annotations

import numpy as np

from gwqed.errors import DomainError

N_MAX = 12

HERM_TOL = 1e-12

_SIGMA = {
    "x": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "y": np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    "z": np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
}
# sigma_+ = |e><g| in the basis (|e>, |g|) = (index 0, index 1), matching
# sigma_z = diag(+1, -1) with |e> the sigma_z = +1 state.
_SIGMA["+"] = 0.5 * (_SIGMA["x"] + 1.0j * _SIGMA["y"])
_SIGMA["-"] = 0.5 * (_SIGMA["x"] - 1.0j * _SIGMA["y"])


def _check_n_sites(n_sites: int) -> None:
    if not 1 <= n_sites <= N_MAX:
        raise DomainError(
            f"n_sites={n_sites} outside [1, {N_MAX}]; dense operators above "
            f"{N_MAX} qubits exceed the memory budget"
        )


def identity(n_sites: int) -> np.ndarray:
    """Identity operator on ``n_sites`` qubits."""
    _check_n_sites(n_sites)
    return np.eye(2**n_sites, dtype=complex)


def single_site(kind: str, convention: str = "half") -> np.ndarray:
    """2x2 Pauli or ladder matrix for one qubit."""
    if kind not in _SIGMA:
        raise DomainError(f"unknown operator kind {kind!r}")
    op = _SIGMA[kind]
    if convention == "half":
        return op.copy()
    if convention == "double":
        # sigma_pm = sigma_x +- i sigma_y; x, y, z are unaffected.
        return 2.0 * op if kind in "+-" else op.copy()
    raise DomainError(f"unknown ladder convention {convention!r}")


def pauli(kind: str, site: int, n_sites: int, convention: str = "half") -> np.ndarray:
    """Embed a single-site operator at ``site`` in an ``n_sites``-qubit space.

    Returns I (x) ... (x) sigma_kind (x) ... (x) I with the operator at the
    given site (site 0 is the leftmost Kronecker factor).
    """
    _check_n_sites(n_sites)
    if not 0 <= site < n_sites:
        raise DomainError(f"site {site} out of range for {n_sites} sites")
    op = single_site(kind, convention)
    left = np.eye(2**site, dtype=complex)
    right = np.eye(2 ** (n_sites - site - 1), dtype=complex)
    return np.kron(np.kron(left, op), right)


def hermitize_check(op: np.ndarray, tol: float = HERM_TOL) -> bool:
    """True iff max-entry deviation between op and its adjoint is below tol."""
    return bool(np.max(np.abs(op - op.conj().T)) < tol)


def eig_herm(op: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian operator.

    Returns eigenvalues in ascending order and the matching eigenvector
    columns.  Raises ``DomainError`` for non-Hermitian input so callers
    cannot silently diagonalize the wrong thing.
    """
    if not hermitize_check(op):
        raise DomainError("eig_herm requires a Hermitian operator")
    vals, vecs = np.linalg.eigh(op)
    return vals, vecs


def frobenius_coeff(op: np.ndarray, basis_op: np.ndarray) -> complex:
    """Coefficient of ``basis_op`` in ``op`` under the Frobenius inner product.

    Assumes the expansion basis is orthogonal (true for distinct Pauli
    strings and ladder products used in this package).
    """
    norm = np.vdot(basis_op, basis_op)
    return complex(np.vdot(basis_op, op) / norm)
