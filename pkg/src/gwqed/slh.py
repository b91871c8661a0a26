"""(S, L, H) triplet algebra for atoms cascaded along the parametric waveguide.

A network element is a triplet of a scattering phase per channel, a list of
jump operators, and a Hamiltonian.  Elements compose by the series product

    G2 <| G1  =  (S2 S1,  L2 + S2 L1,  H1 + H2 + Im(L2^dag S2 L1)),

with Im(X) = (X - X^dag)/(2i), and by channel concatenation, which stacks
scattering phases and jump lists and adds Hamiltonians.  The series law is
the standard single-channel input-output composition rule; the cascades it
generates double as the regression oracle for every closed-form coupling in
:mod:`gwqed.interactions`.

Each coupling point of a giant atom contributes a squeeze-dressed jump
operator.  For the right-moving squeezed field entering at z = 0,

    S_R(z) = cosh(G z / 2) sigma_-  -  i e^{i theta_R} sinh(G z / 2) e^{2 i z} sigma_+,

and the left-moving mirror uses the distance L - z, the left pump phase,
and e^{-2 i z}.  Cascading all points in spatial order produces the total
jump operator in which squeezing noise can interfere destructively; the
coupling profiles that null it live in :mod:`gwqed.dfree`.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from gwqed.errors import DomainError
from gwqed.quantum_ops import frobenius_coeff, hermitize_check, identity, pauli
from gwqed.waveguide import WaveguideConfig

UNIT_MODULUS_TOL = 1e-12


@dataclass(frozen=True)
class CouplingPoint:
    """One atom-waveguide contact: position z (phase units) and strength g."""

    z: float
    g: float

    def __post_init__(self) -> None:
        if self.g < 0:
            raise DomainError("coupling strength must be >= 0")

    @property
    def gamma(self) -> float:
        """Relaxation rate sqrt(2 pi g^2) associated with this point (v = 1)."""
        return self.g * math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class GiantAtom:
    """A multi-point emitter: detuning plus coupling points sorted along z."""

    detuning: float
    points: tuple[CouplingPoint, ...]

    def __post_init__(self) -> None:
        if len(self.points) < 1:
            raise DomainError("a giant atom needs at least one coupling point")
        zs = [p.z for p in self.points]
        if any(b <= a for a, b in zip(zs, zs[1:])):
            raise DomainError("coupling points must be strictly increasing in z")

    @property
    def n_points(self) -> int:
        return len(self.points)

    @property
    def span(self) -> tuple[float, float]:
        return self.points[0].z, self.points[-1].z


@dataclass(frozen=True)
class SlhTriplet:
    """Scattering phases (one complex scalar per channel), jumps, Hamiltonian."""

    scattering: tuple[complex, ...]
    jumps: tuple[np.ndarray, ...]
    hamiltonian: np.ndarray

    def __post_init__(self) -> None:
        for s in self.scattering:
            if abs(abs(s) - 1.0) > UNIT_MODULUS_TOL:
                raise DomainError("scattering entries must have unit modulus")
        if not hermitize_check(self.hamiltonian):
            raise DomainError("triplet Hamiltonian must be Hermitian")

    @property
    def n_channels(self) -> int:
        return len(self.scattering)

    @property
    def dim(self) -> int:
        return self.hamiltonian.shape[0]


def phase_triplet(phi: float, n_atoms: int) -> SlhTriplet:
    """Pure propagation phase: (e^{i phi}, no jumps, zero Hamiltonian)."""
    dim = 2**n_atoms
    return SlhTriplet(
        scattering=(cmath.exp(1j * phi),),
        jumps=(),
        hamiltonian=np.zeros((dim, dim), dtype=complex),
    )


def series_product(downstream: SlhTriplet, upstream: SlhTriplet) -> SlhTriplet:
    """Feed the upstream element's output into the downstream element."""
    if downstream.n_channels != 1 or upstream.n_channels != 1:
        raise DomainError("series product is defined for single-channel triplets")
    if downstream.dim != upstream.dim:
        raise DomainError("series product requires a common Hilbert space")
    s2 = downstream.scattering[0]
    s1 = upstream.scattering[0]

    dim = downstream.dim
    l1 = upstream.jumps[0] if upstream.jumps else np.zeros((dim, dim), dtype=complex)
    l2 = (
        downstream.jumps[0]
        if downstream.jumps
        else np.zeros((dim, dim), dtype=complex)
    )
    l_new = l2 + s2 * l1

    cross = s2 * (l2.conj().T @ l1)
    h_new = upstream.hamiltonian + downstream.hamiltonian + (cross - cross.conj().T) / 2j
    return SlhTriplet(scattering=(s2 * s1,), jumps=(l_new,), hamiltonian=h_new)


def concatenate(right: SlhTriplet, left: SlhTriplet) -> SlhTriplet:
    """Stack two independent channels; Hamiltonians add."""
    if right.dim != left.dim:
        raise DomainError("concatenation requires a common Hilbert space")
    return SlhTriplet(
        scattering=right.scattering + left.scattering,
        jumps=right.jumps + left.jumps,
        hamiltonian=right.hamiltonian + left.hamiltonian,
    )


def jump_op_right(
    atom_index: int, point: CouplingPoint, cfg: WaveguideConfig, n_atoms: int
) -> np.ndarray:
    """Squeeze-dressed jump operator of one coupling point, right-moving field."""
    if not 0.0 <= point.z <= cfg.length:
        raise DomainError(f"coupling point z={point.z} outside the waveguide")
    half = 0.5 * cfg.gain * point.z
    sm = pauli("-", atom_index, n_atoms)
    sp = pauli("+", atom_index, n_atoms)
    squeeze = -1j * cmath.exp(1j * cfg.theta_right) * math.sinh(half)
    return math.cosh(half) * sm + squeeze * cmath.exp(2j * point.z) * sp


def jump_op_left(
    atom_index: int, point: CouplingPoint, cfg: WaveguideConfig, n_atoms: int
) -> np.ndarray:
    """Mirror of :func:`jump_op_right` for the left-moving field (d = L - z)."""
    if not 0.0 <= point.z <= cfg.length:
        raise DomainError(f"coupling point z={point.z} outside the waveguide")
    half = 0.5 * cfg.gain * (cfg.length - point.z)
    sm = pauli("-", atom_index, n_atoms)
    sp = pauli("+", atom_index, n_atoms)
    squeeze = -1j * cmath.exp(1j * cfg.theta_left) * math.sinh(half)
    return math.cosh(half) * sm + squeeze * cmath.exp(-2j * point.z) * sp


def _sorted_contacts(atoms: list[GiantAtom]) -> list[tuple[float, int, CouplingPoint]]:
    contacts = [
        (point.z, idx, point) for idx, atom in enumerate(atoms) for point in atom.points
    ]
    contacts.sort(key=lambda item: item[0])
    zs = [z for z, _, _ in contacts]
    if any(b <= a for a, b in zip(zs, zs[1:])):
        raise DomainError("coupling points of different atoms must not coincide")
    return contacts


def validate_braided_pair(a: GiantAtom, b: GiantAtom) -> None:
    """Require strict interleaving a1 b1 a2 b2 ... of two equal-size atoms."""
    if a.n_points != b.n_points:
        raise DomainError("braided pair must have equally many coupling points")
    order = [idx for _, idx, _ in _sorted_contacts([a, b])]
    expected = [i % 2 for i in range(2 * a.n_points)]
    if order != expected:
        raise DomainError("coupling points are not in braided (alternating) order")


def cascade_right(
    atoms: list[GiantAtom],
    cfg: WaveguideConfig,
    include_detuning: bool = True,
) -> SlhTriplet:
    """Cascade every coupling point against the right-moving field.

    The field enters at z = 0, so points compose upstream-to-downstream in
    increasing z with a pure phase element between consecutive points.  Each
    atom's detuning term (Delta/2) sigma_z rides along with its first point
    (the series product only ever adds Hamiltonians, so the location is a
    bookkeeping choice).
    """
    n_atoms = len(atoms)
    contacts = _sorted_contacts(atoms)
    dim = 2**n_atoms

    detuning_seen: set[int] = set()
    total: SlhTriplet | None = None
    prev_z = None
    for z, idx, point in contacts:
        h_elem = np.zeros((dim, dim), dtype=complex)
        if include_detuning and idx not in detuning_seen:
            h_elem += 0.5 * atoms[idx].detuning * pauli("z", idx, n_atoms)
            detuning_seen.add(idx)
        elem = SlhTriplet(
            scattering=(1.0 + 0.0j,),
            jumps=(math.sqrt(point.gamma / 2.0) * jump_op_right(idx, point, cfg, n_atoms),),
            hamiltonian=h_elem,
        )
        if total is None:
            total = elem
        else:
            total = series_product(phase_triplet(z - prev_z, n_atoms), total)
            total = series_product(elem, total)
        prev_z = z
    assert total is not None
    return total


def cascade_left(
    atoms: list[GiantAtom],
    cfg: WaveguideConfig,
    include_detuning: bool = False,
) -> SlhTriplet:
    """Cascade against the left-moving field entering at z = L.

    Points compose in decreasing z.  Detuning terms are carried by the
    right-moving cascade by default, so they are not added twice when both
    directions are concatenated.
    """
    n_atoms = len(atoms)
    contacts = _sorted_contacts(atoms)[::-1]
    dim = 2**n_atoms

    detuning_seen: set[int] = set()
    total: SlhTriplet | None = None
    prev_z = None
    for z, idx, point in contacts:
        h_elem = np.zeros((dim, dim), dtype=complex)
        if include_detuning and idx not in detuning_seen:
            h_elem += 0.5 * atoms[idx].detuning * pauli("z", idx, n_atoms)
            detuning_seen.add(idx)
        elem = SlhTriplet(
            scattering=(1.0 + 0.0j,),
            jumps=(math.sqrt(point.gamma / 2.0) * jump_op_left(idx, point, cfg, n_atoms),),
            hamiltonian=h_elem,
        )
        if total is None:
            total = elem
        else:
            total = series_product(phase_triplet(prev_z - z, n_atoms), total)
            total = series_product(elem, total)
        prev_z = z
    assert total is not None
    return total


def cascade_total(atoms: list[GiantAtom], cfg: WaveguideConfig) -> SlhTriplet:
    """Both propagation directions concatenated: right channel then left."""
    return concatenate(
        cascade_right(atoms, cfg, include_detuning=True),
        cascade_left(atoms, cfg, include_detuning=False),
    )


def reference_phases(atoms: list[GiantAtom]) -> list[tuple[int, float, float, float]]:
    """Propagation phases (phi_R, phi_L) of every contact.

    Right-moving phases are measured to the most downstream (largest-z)
    contact, left-moving ones to the smallest-z contact, so that
    phi_R + phi_L equals the total network span for every point.
    """
    contacts = _sorted_contacts(atoms)
    z_first = contacts[0][0]
    z_last = contacts[-1][0]
    return [(idx, z, z_last - z, z - z_first) for z, idx, _ in contacts]


def jump_sum_right(atoms: list[GiantAtom], cfg: WaveguideConfig) -> np.ndarray:
    """Total right-moving jump operator as an explicit phase-weighted sum.

    Equals the cascaded jump operator entrywise: each contact carries the
    propagation phase to the most downstream contact.
    """
    n_atoms = len(atoms)
    contacts = _sorted_contacts(atoms)
    z_last = contacts[-1][0]
    total = np.zeros((2**n_atoms, 2**n_atoms), dtype=complex)
    for z, idx, point in contacts:
        weight = math.sqrt(point.gamma / 2.0) * cmath.exp(1j * (z_last - z))
        total += weight * jump_op_right(idx, point, cfg, n_atoms)
    return total


def jump_sum_left(atoms: list[GiantAtom], cfg: WaveguideConfig) -> np.ndarray:
    """Left-moving counterpart of :func:`jump_sum_right` (reference at min z)."""
    n_atoms = len(atoms)
    contacts = _sorted_contacts(atoms)
    z_first = contacts[0][0]
    total = np.zeros((2**n_atoms, 2**n_atoms), dtype=complex)
    for z, idx, point in contacts:
        weight = math.sqrt(point.gamma / 2.0) * cmath.exp(1j * (z - z_first))
        total += weight * jump_op_left(idx, point, cfg, n_atoms)
    return total


def gauge_rotation(theta_plus: float, n_atoms: int) -> np.ndarray:
    """Local sigma_z rotation removing the pump-phase sum from pair terms.

    Conjugation by this unitary multiplies every sigma_+ by
    e^{-i theta_plus / 4}, so a double-raising term sigma_+ sigma_+ picks up
    e^{-i theta_plus / 2} -- exactly cancelling the phase the cascaded
    pairing interaction inherits from the pumps.  Exchange terms
    sigma_+ sigma_- and all sigma_z terms are left untouched.
    """
    phases = np.zeros(2**n_atoms, dtype=complex)
    for idx in range(n_atoms):
        phases = phases + np.diag(pauli("z", idx, n_atoms)).real
    return np.diag(np.exp(1j * (theta_plus / 8.0) * phases))


def gauge_transformed(hamiltonian: np.ndarray, theta_plus: float, n_atoms: int) -> np.ndarray:
    """Hamiltonian in the gauge where pairing couplings are real."""
    u = gauge_rotation(theta_plus, n_atoms)
    return u.conj().T @ hamiltonian @ u


def operator_norm(op: np.ndarray) -> float:
    """Largest singular value."""
    return float(np.linalg.norm(op, 2))


@dataclass(frozen=True)
class PairCoefficients:
    """Two-atom couplings read off a (gauge-transformed) cascade Hamiltonian."""

    delta_a: float
    delta_b: float
    exchange: complex
    pairing: complex
    residual: float = field(default=0.0)


def extract_pair_coefficients(hamiltonian: np.ndarray) -> PairCoefficients:
    """Project a 4x4 two-atom Hamiltonian onto its coupling structure.

    Returns the detunings and the (possibly complex) coefficients of
    sigma_+^a sigma_-^b and sigma_+^a sigma_+^b, plus the max-entry residual
    of the reconstruction, which is nonzero if the Hamiltonian contains any
    other operator content.
    """
    if hamiltonian.shape != (4, 4):
        raise DomainError("pair extraction expects a two-atom (4x4) Hamiltonian")
    sz_a = pauli("z", 0, 2)
    sz_b = pauli("z", 1, 2)
    exch = pauli("+", 0, 2) @ pauli("-", 1, 2)
    pair = pauli("+", 0, 2) @ pauli("+", 1, 2)

    delta_a = 2.0 * frobenius_coeff(hamiltonian, sz_a).real
    delta_b = 2.0 * frobenius_coeff(hamiltonian, sz_b).real
    jc = frobenius_coeff(hamiltonian, exch)
    jp = frobenius_coeff(hamiltonian, pair)

    rebuilt = (
        0.5 * delta_a * sz_a
        + 0.5 * delta_b * sz_b
        + jc * exch
        + np.conj(jc) * exch.conj().T
        + jp * pair
        + np.conj(jp) * pair.conj().T
    )
    residual = float(np.max(np.abs(hamiltonian - rebuilt)))
    return PairCoefficients(
        delta_a=delta_a, delta_b=delta_b, exchange=jc, pairing=jp, residual=residual
    )
