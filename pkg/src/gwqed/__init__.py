"""Giant atoms coupled to a traveling-wave parametric waveguide.

Simulation library for squeezing-amplified, decoherence-free interactions
between multi-point ("giant") atoms in a chi^(2) parametric waveguide, and
for the anisotropic-XY many-body physics those interactions realize.

Subpackages group the physics layers:

``quantum_ops``
    Dense multi-qubit operator algebra (Pauli/ladder embeddings, Hermitian
    eigensolver) used by the cascade and the exact-diagonalization oracle.
``waveguide``
    Coupled-wave propagation in the parametric waveguide, squeeze
    coefficients, and the traveling-wave amplifier closed forms.
``slh``
    (S, L, H) triplet algebra: squeeze-dressed jump operators, series
    product, concatenation, and full right/left cascades over atom chains.
``dfree``
    Decoherence-free coupling profiles: the three-point construction,
    two-point infeasibility, and braided pair/chain geometry builders.
``interactions``
    Closed-form exchange (J_c) and pairing (J_p) couplings, the effective
    two-atom Hamiltonian, and parameter scans.
``spinchain``
    Anisotropic XY chain: dense spin Hamiltonian, fermionic quadratic forms,
    momentum-space diagonalization, dispersion and energy gaps.
``criticality``
    Ground-state fidelity, fidelity susceptibility, peak detection, and the
    (pairing, detuning) phase diagram.
``cli``
    Command-line front end emitting CSV/JSON scans.
"""

from gwqed.errors import DomainError, NumericalError, SectorMismatchError

__version__ = "0.1.0"

__all__ = ["DomainError", "NumericalError", "SectorMismatchError", "__version__"]
