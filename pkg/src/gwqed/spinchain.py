"""Anisotropic XY chain built from the engineered pairing/exchange couplings.

The many-body layer works with the spin Hamiltonian

    H = 2 sum_n [ (J_p + J_c) sx_n sx_{n+1} + (J_c - J_p) sy_n sy_{n+1} ]
        + sum_n Delta_n sz_n,

open or periodic.  Its exact fermionization is a quadratic form with
hopping 4 J_c, pairing 4 J_p, onsite -2 Delta_n, constant sum(Delta), and,
for a periodic ring, a boundary bond multiplied by -(-1)^{N_f}; fixing the
fermion-parity sector resolves that sign and quantizes the momenta at
k = (2m+1) pi / N (even parity, antiperiodic fermions) or k = 2 m pi / N
(odd parity, periodic fermions).

Momentum blocks (c_k, c^dag_{-k}) have diagonal xi_k = 8 J_c cos k - 2 Delta
and pairing magnitude B_k = 8 J_p sin k, giving the excitation energy
eps_k = sqrt(xi_k^2 + B_k^2), which is algebraically identical to the
closed-form :func:`dispersion`.  The Bogoliubov ground-state angle is
theta_k = atan2(-B_k, xi_k) / 2 (:func:`bdg_angle`).

Two transcriptions of these coefficients circulate for this model family
with different ladder-operator normalizations; they are retained here for
explicit comparison (:func:`momentum_hamiltonian_coeffs`,
:func:`bogoliubov_angle`, :func:`convention_report`) but everything
dynamical -- spectra, gaps, fidelities -- uses the internally consistent
set above, which is validated spectrum-by-spectrum against dense exact
diagonalization of the spin Hamiltonian.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
import scipy.linalg

from gwqed.errors import DomainError, NumericalError
from gwqed.quantum_ops import N_MAX, pauli

PI = math.pi

RADICAND_TOL = -1e-12


@dataclass(frozen=True)
class SpinChainSpec:
    """Chain size, couplings, uniform detuning, and fermion-parity sector."""

    n_sites: int
    jc: float = 1.0
    jp: float = 0.0
    delta: float = 0.0
    parity: str = "even"

    def __post_init__(self) -> None:
        if self.n_sites < 2:
            raise DomainError("chain needs at least two sites")
        if self.parity not in ("even", "odd"):
            raise DomainError("parity sector must be 'even' or 'odd'")

    def with_(self, **kwargs) -> "SpinChainSpec":
        return replace(self, **kwargs)


def _delta_array(spec: SpinChainSpec | None, delta, n: int) -> np.ndarray:
    values = np.atleast_1d(np.asarray(delta, dtype=float))
    if values.size == 1:
        return np.full(n, float(values[0]))
    if values.size != n:
        raise DomainError("per-site detuning needs one value per site")
    return values.astype(float)


# ---------------------------------------------------------------------------
# Dense spin Hamiltonian (exact-diagonalization side of the oracle pair)
# ---------------------------------------------------------------------------


def build_xy_hamiltonian(
    spec: SpinChainSpec, boundary: str = "open", delta_site=None
) -> np.ndarray:
    """Dense 2^N x 2^N anisotropic XY Hamiltonian.

    ``delta_site`` may override the uniform detuning with per-site values.
    The periodic variant simply adds the (N-1, 0) spin bond; fermion-parity
    signs belong to the fermionic picture, not to this matrix.
    """
    n = spec.n_sites
    if n > N_MAX:
        raise DomainError(f"dense construction is capped at {N_MAX} sites")
    if boundary not in ("open", "periodic"):
        raise DomainError("boundary must be 'open' or 'periodic'")
    deltas = _delta_array(spec, spec.delta if delta_site is None else delta_site, n)

    dim = 2**n
    h = np.zeros((dim, dim), dtype=complex)
    cx = 2.0 * (spec.jp + spec.jc)
    cy = 2.0 * (spec.jc - spec.jp)
    bonds = [(i, i + 1) for i in range(n - 1)]
    if boundary == "periodic":
        bonds.append((n - 1, 0))
    for i, j in bonds:
        h += cx * pauli("x", i, n) @ pauli("x", j, n)
        h += cy * pauli("y", i, n) @ pauli("y", j, n)
    for i in range(n):
        h += deltas[i] * pauli("z", i, n)
    return h


def basis_parities(n_sites: int) -> np.ndarray:
    """Fermion parity (-1)^{N_f} of every computational basis state.

    Under the string transformation, each down spin (sz = -1) is one
    fermion, so the parity of basis index i is (-1)^popcount(i).
    """
    idx = np.arange(2**n_sites, dtype=np.uint64)
    counts = np.zeros_like(idx)
    while idx.any():
        counts += idx & 1
        idx >>= 1
    return np.where(counts % 2 == 0, 1, -1)


def sector_indices(n_sites: int, parity: str) -> np.ndarray:
    sign = 1 if parity == "even" else -1
    return np.nonzero(basis_parities(n_sites) == sign)[0]


def sector_eigh(
    hamiltonian: np.ndarray, n_sites: int, parity: str
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Eigendecomposition restricted to one fermion-parity sector.

    Returns (eigenvalues ascending, eigenvector columns in the sector
    basis, sector basis indices).  Restricting first avoids arbitrary
    mixing inside quasi-degenerate cross-sector ground-state pairs.
    """
    idx = sector_indices(n_sites, parity)
    block = hamiltonian[np.ix_(idx, idx)]
    vals, vecs = np.linalg.eigh(block)
    return vals, vecs, idx


# ---------------------------------------------------------------------------
# Fermionic quadratic form (free-fermion side of the oracle pair)
# ---------------------------------------------------------------------------


def jw_quadratic_form(
    spec: SpinChainSpec,
    boundary: str = "open",
    convention: str = "spin",
    delta_site=None,
) -> tuple[np.ndarray, np.ndarray, float]:
    """Hopping matrix A, pairing matrix B, and constant of the fermion chain.

    H = sum A_mn c^dag_m c_n + (1/2) sum B_mn c^dag_m c^dag_n + h.c. + const
    with A symmetric and B antisymmetric (both real).

    ``convention="spin"`` produces the exact fermionization of
    :func:`build_xy_hamiltonian` (hopping 4 J_c, pairing 4 J_p);
    ``convention="bare"`` uses the couplings unscaled (hopping J_c, pairing
    J_p), the compact transcription in which the interaction is often
    quoted.  The two differ only by that factor of four on the bond terms.

    For a periodic ring the boundary bond carries the factor
    -(-1)^{N_f} resolved by ``spec.parity``: -1 in the even sector
    (antiperiodic fermions), +1 in the odd sector (periodic fermions).
    """
    n = spec.n_sites
    if boundary not in ("open", "periodic"):
        raise DomainError("boundary must be 'open' or 'periodic'")
    if convention == "spin":
        t, p = 4.0 * spec.jc, 4.0 * spec.jp
    elif convention == "bare":
        t, p = spec.jc, spec.jp
    else:
        raise DomainError("convention must be 'spin' or 'bare'")
    deltas = _delta_array(spec, spec.delta if delta_site is None else delta_site, n)

    a = np.zeros((n, n))
    b = np.zeros((n, n))
    for i in range(n - 1):
        a[i, i + 1] = a[i + 1, i] = t
        b[i, i + 1] = p
        b[i + 1, i] = -p
    if boundary == "periodic":
        sign = -1.0 if spec.parity == "even" else 1.0
        a[n - 1, 0] += sign * t
        a[0, n - 1] += sign * t
        b[n - 1, 0] += sign * p
        b[0, n - 1] -= sign * p
    for i in range(n):
        a[i, i] = -2.0 * deltas[i]
    return a, b, float(np.sum(deltas))


def majorana_form(a: np.ndarray, b: np.ndarray, const: float) -> tuple[np.ndarray, float]:
    """Rewrite the quadratic form as H = (i/4) sum M_uv g_u g_v + const'.

    Majorana ordering (g_A1, g_B1, g_A2, g_B2, ...) with g_A = c + c^dag
    and g_B = i(c^dag - c); for real A (symmetric) and B (antisymmetric)
    the matrix couples only A-type to B-type Majoranas.
    """
    n = a.shape[0]
    m = np.zeros((2 * n, 2 * n))
    for i in range(n):
        for j in range(n):
            coeff = a[i, j] - b[i, j]
            m[2 * i, 2 * j + 1] += coeff
            m[2 * j + 1, 2 * i] -= coeff
    return m, const + 0.5 * float(np.trace(a))


def majorana_modes(m: np.ndarray) -> tuple[np.ndarray, float]:
    """Canonical mode energies and vacuum parity of a Majorana form.

    Brings the real antisymmetric matrix to block form with 2x2 blocks
    [[0, eps], [-eps, 0]], eps >= 0, by a real orthogonal transform W; the
    Bogoliubov-vacuum fermion parity equals det(W).  Returns (eps ascending,
    parity).
    """
    m = 0.5 * (m - m.T)
    t, q = scipy.linalg.schur(m, output="real")
    n2 = m.shape[0]
    tol = 1e-12 * max(1.0, float(np.max(np.abs(m))))
    eps: list[float] = []
    n_zero_singles = 0
    det_sign = 1.0 if np.linalg.det(q) > 0 else -1.0
    i = 0
    # quasi-triangular form: a nonzero subdiagonal entry marks a 2x2 block;
    # lone 1x1 blocks are exact zero modes and pair up among themselves
    # (their parity assignment is immaterial: both sectors are degenerate).
    while i < n2:
        if i + 1 < n2 and abs(t[i + 1, i]) > tol:
            block = t[i, i + 1]
            if block < 0:
                det_sign = -det_sign
            eps.append(abs(block))
            i += 2
        else:
            n_zero_singles += 1
            i += 1
    if n_zero_singles % 2 != 0:
        raise NumericalError("odd number of zero Majorana modes in Schur form")
    eps.extend([0.0] * (n_zero_singles // 2))
    return np.sort(np.asarray(eps)), det_sign


def quadratic_modes(
    a: np.ndarray, b: np.ndarray, const: float
) -> tuple[np.ndarray, float, float]:
    """(mode energies, vacuum energy, vacuum parity) of a quadratic form."""
    m, const2 = majorana_form(a, b, const)
    eps, parity = majorana_modes(m)
    e_vac = const2 - 0.5 * float(np.sum(eps))
    return eps, e_vac, parity


def many_body_energies(
    a: np.ndarray, b: np.ndarray, const: float, parity: str | None = None
) -> np.ndarray:
    """All many-body energies of the quadratic form, optionally parity-filtered.

    Enumerates every quasiparticle occupation pattern (2^N states), so it
    is an oracle-scale tool; the chain length is capped accordingly.
    """
    n = a.shape[0]
    if n > N_MAX + 2:
        raise DomainError("many-body enumeration is an oracle tool; chain too long")
    eps, e_vac, p_vac = quadratic_modes(a, b, const)
    patterns = (np.arange(2**n)[:, None] >> np.arange(n)[None, :]) & 1
    energies = e_vac + patterns @ eps
    if parity is not None:
        want = 1 if parity == "even" else -1
        state_parity = np.where(patterns.sum(axis=1) % 2 == 0, p_vac, -p_vac)
        energies = energies[state_parity == want]
    return np.sort(energies)


# ---------------------------------------------------------------------------
# Momentum space (translation-invariant, even chain length)
# ---------------------------------------------------------------------------


def _require_momentum_applicable(spec: SpinChainSpec) -> None:
    if spec.n_sites % 2 != 0:
        raise DomainError("momentum quantization assumes an even chain length")


def allowed_momenta(spec: SpinChainSpec) -> tuple[np.ndarray, tuple[float, ...]]:
    """(paired k > 0, unpaired momenta) for the spec's parity sector.

    Even parity (antiperiodic fermions): k = (2m+1) pi / N, all paired.
    Odd parity (periodic fermions): k = 2 m pi / N with the self-paired
    k = 0 and k = pi listed separately.
    """
    _require_momentum_applicable(spec)
    n = spec.n_sites
    if spec.parity == "even":
        paired = np.array([(2 * m + 1) * PI / n for m in range(n // 2)])
        return paired, ()
    paired = np.array([2 * m * PI / n for m in range(1, n // 2)])
    return paired, (0.0, PI)


def momentum_coeffs(k: float, spec: SpinChainSpec) -> tuple[float, float]:
    """Canonical block coefficients (xi_k, B_k) of the fermionized chain."""
    xi = 8.0 * spec.jc * math.cos(k) - 2.0 * spec.delta
    b = 8.0 * spec.jp * math.sin(k)
    return xi, b


def momentum_hamiltonian_coeffs(k: float, spec: SpinChainSpec) -> tuple[float, float]:
    """Alternate transcription of the momentum-block coefficients.

    Returns (16 J_c cos k - 2 Delta, -8 J_p sin k).  Kept verbatim for
    comparison: its diagonal carries twice the hopping of the canonical
    block (see :func:`convention_report`), so it is not used by the
    spectrum or fidelity paths.
    """
    diag = 16.0 * spec.jc * math.cos(k) - 2.0 * spec.delta
    offdiag = -8.0 * spec.jp * math.sin(k)
    return diag, offdiag


def dispersion(k: float, spec: SpinChainSpec) -> float:
    """Closed-form excitation energy eps_k of the chain.

    eps_k = 2 sqrt(Delta^2 + 8(J_p^2 + J_c^2) - 8 Delta J_c cos k
                   - 8 (J_p^2 - J_c^2) cos 2k),

    algebraically equal to sqrt(xi_k^2 + B_k^2).  A radicand below
    -1e-12 signals an implementation bug and raises.
    """
    jc, jp, delta = spec.jc, spec.jp, spec.delta
    radicand = (
        delta * delta
        + 8.0 * (jp * jp + jc * jc)
        - 8.0 * delta * jc * math.cos(k)
        - 8.0 * (jp * jp - jc * jc) * math.cos(2.0 * k)
    )
    if radicand < RADICAND_TOL:
        raise NumericalError(f"negative dispersion radicand {radicand} at k={k}")
    return 2.0 * math.sqrt(max(radicand, 0.0))


def bdg_angle(k: float, spec: SpinChainSpec) -> float:
    """Bogoliubov ground-state angle theta_k = atan2(-B_k, xi_k)/2.

    Branch (-pi/2, pi/2]; the block ground state is
    (cos theta_k + i sin theta_k c^dag_k c^dag_{-k}) |0>, which is what the
    fidelity product formula consumes.
    """
    xi, b = momentum_coeffs(k, spec)
    return 0.5 * math.atan2(-b, xi)


def bogoliubov_angle(k: float, spec: SpinChainSpec) -> float:
    """Compact angle relation tan(2 theta) = -J_p sin k / (J_c cos k + Delta).

    Branch (-pi/4, pi/4], with the 0/0 case resolved to zero.  This is the
    widely quoted compact form; it is *not* consistent with the canonical
    block coefficients (wrong detuning sign and normalization), so it is
    retained only for comparison -- see :func:`convention_report`.
    """
    num = -spec.jp * math.sin(k)
    den = spec.jc * math.cos(k) + spec.delta
    if num == 0.0 and den == 0.0:
        return 0.0
    if den == 0.0:
        return PI / 4.0 if num > 0 else -PI / 4.0
    return 0.5 * math.atan(num / den)


def energy_gap(spec: SpinChainSpec, mode: str = "finite", n_grid: int = 10001) -> float:
    """Minimum excitation energy, over quantized momenta or the continuum.

    ``mode="finite"`` minimizes over the parity sector's allowed momenta;
    ``mode="continuum"`` scans a dense k grid on [0, pi] and refines the
    minimizer by golden-section search to absolute tolerance 1e-10.
    """
    if mode == "finite":
        paired, unpaired = allowed_momenta(spec)
        ks = list(paired) + list(unpaired)
        return min(dispersion(k, spec) for k in ks)
    if mode != "continuum":
        raise DomainError("mode must be 'finite' or 'continuum'")

    ks = np.linspace(0.0, PI, n_grid)
    values = [dispersion(float(k), spec) for k in ks]
    i0 = int(np.argmin(values))
    lo = ks[max(i0 - 1, 0)]
    hi = ks[min(i0 + 1, n_grid - 1)]
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = hi - invphi * (hi - lo)
    d = lo + invphi * (hi - lo)
    fc = dispersion(c, spec)
    fd = dispersion(d, spec)
    for _ in range(100):
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - invphi * (hi - lo)
            fc = dispersion(c, spec)
        else:
            lo, c, fc = c, d, fd
            d = lo + invphi * (hi - lo)
            fd = dispersion(d, spec)
    best = min(values[i0], fc, fd)
    return float(best)


def unpaired_occupations(spec: SpinChainSpec) -> tuple[dict[float, int], float]:
    """Ground occupations of the self-paired modes in the odd sector.

    Unconstrained minimum first; if its parity is even, flip the cheaper
    of the two unpaired modes.  (A cheaper parity flip via a broken pair
    cannot occur for the gapped parameter ranges this package scans; it
    would make the product-state ansatz invalid, so it raises.)
    """
    xi = {0.0: momentum_coeffs(0.0, spec)[0], PI: momentum_coeffs(PI, spec)[0]}
    occ = {k: 1 if xi[k] < 0 else 0 for k in (0.0, PI)}
    if (occ[0.0] + occ[PI]) % 2 == 0:
        flip_costs = {k: abs(xi[k]) for k in (0.0, PI)}
        target = min(flip_costs, key=flip_costs.get)
        paired, _ = allowed_momenta(spec)
        if paired.size:
            min_eps = min(dispersion(float(k), spec) for k in paired)
            if min_eps < flip_costs[target] - 1e-12:
                raise NumericalError(
                    "odd-sector ground state requires a broken momentum pair; "
                    "outside the product-state regime"
                )
        occ[target] = 1 - occ[target]
    energy = occ[0.0] * xi[0.0] + occ[PI] * xi[PI]
    return occ, energy


def sector_ground_energy(spec: SpinChainSpec, parity: str | None = None) -> float:
    """Ground energy of one fermion-parity sector from the momentum blocks."""
    if parity is not None:
        spec = spec.with_(parity=parity)
    _require_momentum_applicable(spec)
    paired, unpaired = allowed_momenta(spec)
    energy = spec.n_sites * spec.delta
    for k in paired:
        xi, b = momentum_coeffs(float(k), spec)
        energy += xi - math.hypot(xi, b)
    if unpaired:
        _, extra = unpaired_occupations(spec)
        energy += extra
    return energy


def ground_parity(spec: SpinChainSpec) -> str:
    """Parity sector holding the physical (lower-energy) ground state."""
    e_even = sector_ground_energy(spec, "even")
    e_odd = sector_ground_energy(spec, "odd")
    return "even" if e_even <= e_odd else "odd"


def convention_report(spec: SpinChainSpec, n_samples: int = 64) -> dict[str, float]:
    """Quantify the two coefficient transcriptions against each other.

    Keys:
      ``dispersion_vs_bdg_max``      max |closed form - sqrt(xi^2 + B^2)|,
                                     zero: the two are identical algebra;
      ``alt_diag_hopping_ratio``     hopping coefficient of the alternate
                                     momentum transcription over the
                                     canonical one (2.0);
      ``alt_dispersion_reldev_max``  max relative deviation of the alternate
                                     2x2 spectrum from the closed form;
      ``compact_angle_dev_max``      max |compact angle - canonical angle|
                                     over the sampled momenta.
    """
    ks = np.linspace(1e-3, PI - 1e-3, n_samples)
    disp_dev = 0.0
    alt_dev = 0.0
    angle_dev = 0.0
    for k in ks:
        xi, b = momentum_coeffs(float(k), spec)
        disp_dev = max(disp_dev, abs(dispersion(float(k), spec) - math.hypot(xi, b)))
        diag, off = momentum_hamiltonian_coeffs(float(k), spec)
        alt_eps = math.hypot(diag, 2.0 * off)
        canon = dispersion(float(k), spec)
        if canon > 1e-9:
            alt_dev = max(alt_dev, abs(alt_eps - canon) / canon)
        angle_dev = max(
            angle_dev,
            abs(bogoliubov_angle(float(k), spec) - bdg_angle(float(k), spec)),
        )
    return {
        "dispersion_vs_bdg_max": disp_dev,
        "alt_diag_hopping_ratio": 2.0,
        "alt_dispersion_reldev_max": alt_dev,
        "compact_angle_dev_max": angle_dev,
    }
