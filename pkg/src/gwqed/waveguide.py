"""Field propagation in the chi^(2) traveling-wave parametric waveguide.

Units: positions are phase units (k0 = 1, group velocity v = 1, hbar = 1),
so the gain ``G``, losses, and wavevector mismatch are all per radian of
propagation phase.  The two degenerate modes amplified by a pump at twice
the carrier obey, for the right-moving pair,

    d a1/dz     = -(alpha1/2) a1     - (i/2) G e^{i theta} a2* e^{-i dk z}
    d a2*/dz    = -(alpha2/2) a2*    + (i/2) G e^{-i theta} a1 e^{+i dk z}

where ``theta`` is the pump phase for that direction.  The lossless system
has the closed-form hyperbolic solution implemented in
:func:`propagate_analytic`; for ``dk > G`` the hyperbolic functions continue
to trigonometric ones through the complex gain parameter
b = sqrt(G^2 - dk^2)/2, which is the unique analytic extension.

Phase matching (dk = 0) reduces the solution to the cosh/sinh squeeze
dressing returned by :func:`squeeze_coeffs`: a right-moving mode at position
z is a Bogoliubov mixture of the input modes with weights cosh(G d/2) and
sinh(G d/2), where d = z for right movers and d = L - z for left movers.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from gwqed.errors import DomainError

_B_SMALL = 1e-30


@dataclass(frozen=True)
class WaveguideConfig:
    """Parametric waveguide parameters, all in phase units (per radian).

    ``theta_right``/``theta_left`` are the pump phases of the right- and
    left-propagating squeezing processes.  Losses and mismatch affect only
    the numerical integrator; the squeeze dressing assumes the lossless,
    phase-matched regime.
    """

    gain: float
    theta_right: float = 0.0
    theta_left: float = 0.0
    length: float = 4.0 * math.pi
    loss1: float = 0.0
    loss2: float = 0.0
    delta_k: float = 0.0

    def __post_init__(self) -> None:
        if self.gain < 0:
            raise DomainError("gain must be >= 0")
        if self.length <= 0:
            raise DomainError("waveguide length must be > 0")
        if self.loss1 < 0 or self.loss2 < 0:
            raise DomainError("losses must be >= 0")

    @property
    def theta_plus(self) -> float:
        """Pump phase sum theta_right + theta_left."""
        return self.theta_right + self.theta_left

    @property
    def theta_minus(self) -> float:
        """Pump phase difference theta_right - theta_left."""
        return self.theta_right - self.theta_left


@dataclass(frozen=True)
class ModeAmplitudes:
    """Amplitudes of the two coupled modes at position ``z``.

    ``a2_conj`` stores the conjugated second-mode amplitude, i.e. the
    component that the parametric process couples directly to ``a1``.
    """

    a1: complex
    a2_conj: complex
    z: float = 0.0


@dataclass(frozen=True)
class SqueezeCoeffs:
    """Bogoliubov weights (c, s) of the squeeze dressing after distance d.

    c = cosh(G d / 2) and s = -i e^{i theta} sinh(G d / 2); the hyperbolic
    identity c^2 - |s|^2 = 1 preserves the bosonic commutators.
    """

    c: float
    s: complex
    d: float

    def identity_residual(self) -> float:
        """Relative residual |c^2 - |s|^2 - 1| / max(1, c^2).

        Relative because c^2 and |s|^2 both grow like e^{G d}, so the
        absolute difference carries their rounding; the relative form stays
        at machine precision for any gain and distance.
        """
        return abs(self.c**2 - abs(self.s) ** 2 - 1.0) / max(1.0, self.c**2)


def _gain_parameter(gain: float, delta_k: float) -> complex:
    """b = sqrt(G^2 - dk^2)/2 on the branch continuing cosh -> cos."""
    return cmath.sqrt(complex(gain * gain - delta_k * delta_k)) / 2.0


def _cosh_sinc(b: complex, z: float) -> tuple[complex, complex]:
    """cosh(b z) and sinh(b z)/b, with the b -> 0 limit handled exactly."""
    if abs(b) < _B_SMALL:
        return 1.0 + 0.0j, complex(z)
    bz = b * z
    return cmath.cosh(bz), cmath.sinh(bz) / b


def propagate_analytic(
    cfg: WaveguideConfig, init: ModeAmplitudes, z: float
) -> ModeAmplitudes:
    """Closed-form lossless propagation of the right-moving pair to ``z``.

    Requires zero loss.  Covers both the amplifying regime (G > |dk|) and
    the oscillatory regime (G < |dk|) through the complex gain parameter.
    """
    if cfg.loss1 != 0.0 or cfg.loss2 != 0.0:
        raise DomainError("analytic propagation is defined for the lossless case")
    g = cfg.gain
    dk = cfg.delta_k
    theta = cfg.theta_right
    b = _gain_parameter(g, dk)
    ch, shb = _cosh_sinc(b, z)

    phase = cmath.exp(-0.5j * dk * z)
    drive = cmath.exp(1j * theta)
    a1 = phase * (
        (ch + 0.5j * dk * shb) * init.a1 - 0.5j * g * drive * shb * init.a2_conj
    )
    a2c = phase.conjugate() * (
        (ch - 0.5j * dk * shb) * init.a2_conj + 0.5j * g * shb * init.a1 / drive
    )
    return ModeAmplitudes(a1=a1, a2_conj=a2c, z=init.z + z)


def _coupled_wave_rhs(
    cfg: WaveguideConfig, z: float, a1: complex, a2c: complex
) -> tuple[complex, complex]:
    g = cfg.gain
    drive = cmath.exp(1j * cfg.theta_right)
    mismatch = cmath.exp(-1j * cfg.delta_k * z)
    d_a1 = -0.5 * cfg.loss1 * a1 - 0.5j * g * drive * a2c * mismatch
    d_a2c = -0.5 * cfg.loss2 * a2c + 0.5j * g * a1 / (drive * mismatch)
    return d_a1, d_a2c


def integrate_coupled_wave(
    cfg: WaveguideConfig,
    init: ModeAmplitudes,
    z_end: float,
    step: float = 1e-3,
) -> ModeAmplitudes:
    """Fixed-step RK4 integration of the coupled-wave equations.

    Handles loss and phase mismatch; serves as the independent check on
    :func:`propagate_analytic` in the lossless case.
    """
    if step <= 0:
        raise DomainError("integration step must be positive")
    if z_end < 0:
        raise DomainError("z_end must be >= 0")

    n_full, rem = divmod(z_end, step)
    steps = [step] * int(n_full)
    if rem > 1e-15 * max(1.0, z_end):
        steps.append(rem)

    a1, a2c = complex(init.a1), complex(init.a2_conj)
    z = 0.0
    for h in steps:
        k1 = _coupled_wave_rhs(cfg, z, a1, a2c)
        k2 = _coupled_wave_rhs(cfg, z + h / 2, a1 + h / 2 * k1[0], a2c + h / 2 * k1[1])
        k3 = _coupled_wave_rhs(cfg, z + h / 2, a1 + h / 2 * k2[0], a2c + h / 2 * k2[1])
        k4 = _coupled_wave_rhs(cfg, z + h, a1 + h * k3[0], a2c + h * k3[1])
        a1 += h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        a2c += h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
        z += h
    return ModeAmplitudes(a1=a1, a2_conj=a2c, z=init.z + z_end)


def squeeze_coeffs(cfg: WaveguideConfig, z: float, direction: str) -> SqueezeCoeffs:
    """Squeeze dressing (c, s) at position ``z`` for one propagation direction.

    Right movers accumulate over d = z from the input facet at z = 0; left
    movers over d = L - z from the facet at z = L.
    """
    if not 0.0 <= z <= cfg.length:
        raise DomainError(f"z={z} outside the waveguide [0, {cfg.length}]")
    if direction == "right":
        d, theta = z, cfg.theta_right
    elif direction == "left":
        d, theta = cfg.length - z, cfg.theta_left
    else:
        raise DomainError(f"direction must be 'right' or 'left', got {direction!r}")
    half = 0.5 * cfg.gain * d
    c = math.cosh(half)
    s = -1j * cmath.exp(1j * theta) * math.sinh(half)
    return SqueezeCoeffs(c=c, s=s, d=d)


def transmon_coupling(cap_ratio: float, omega_k: float, c_w: float) -> float:
    """Qubit-waveguide coupling g_k = (C_J^g / C_Sigma) sqrt(omega_k / C_W).

    Normalized units (hbar = e = 1).  The capacitance ratio may be zero
    (decoupled qubit); frequency and waveguide capacitance must be positive.
    """
    if cap_ratio < 0:
        raise DomainError("capacitance ratio must be >= 0")
    if omega_k <= 0 or c_w <= 0:
        raise DomainError("mode frequency and waveguide capacitance must be > 0")
    return cap_ratio * math.sqrt(omega_k / c_w)


@dataclass(frozen=True)
class JtwpaParams:
    """Coupled-mode parameters of the Josephson traveling-wave amplifier.

    The coupling factors and phase-modulation wavevector shifts are opaque
    complex inputs in normalized units; circuit constants behind them are
    not modeled here.  ``delta_k_linear`` is the bare dispersion mismatch,
    and the effective mismatch adds the pump self/cross phase shifts.
    """

    kappa_s: complex
    kappa_i: complex
    alpha_p: complex = 0.0
    alpha_s: complex = 0.0
    alpha_i: complex = 0.0
    delta_k_linear: float = 0.0

    @property
    def total_mismatch(self) -> complex:
        """dk = dk_linear + 2 alpha_p - alpha_s - alpha_i."""
        return self.delta_k_linear + 2 * self.alpha_p - self.alpha_s - self.alpha_i

    @property
    def gain_b(self) -> complex:
        """b = sqrt(kappa_s kappa_i* - (dk/2)^2) for the signal line."""
        dk = self.total_mismatch
        return cmath.sqrt(self.kappa_s * self.kappa_i.conjugate() - (dk / 2) ** 2)


def jtwpa_solution(
    p: JtwpaParams, a_s0: complex, a_i0: complex, x: float
) -> tuple[complex, complex]:
    """Closed-form signal/idler amplitudes after propagation distance ``x``.

    Each line uses its own gain parameter (b for the signal, the conjugate
    pairing for the idler) so the expressions solve the coupled-mode
    equations exactly for arbitrary complex couplings; the two coincide
    whenever kappa_s kappa_i* is real.

    The combined mismatch must be real (lossless line): the closed form
    conjugates the partner amplitude, which only closes the system when
    e^{i dk x} and its conjugate are reciprocal.
    """
    if x < 0:
        raise DomainError("propagation distance must be >= 0")
    dk = p.total_mismatch
    if abs(dk.imag) > 1e-12 * max(1.0, abs(dk)):
        raise DomainError(
            "phase-modulation shifts must combine to a real mismatch; "
            "a complex (lossy) mismatch has no closed-form solution here"
        )
    dk = dk.real
    envelope = cmath.exp(0.5j * dk * x)

    b_s = cmath.sqrt(p.kappa_s * p.kappa_i.conjugate() - (dk / 2) ** 2)
    ch, shb = _cosh_sinc(b_s, x)
    a_s = ((ch - 0.5j * dk * shb) * a_s0 + 1j * p.kappa_s * shb * a_i0.conjugate()) * envelope

    b_i = cmath.sqrt(p.kappa_i * p.kappa_s.conjugate() - (dk / 2) ** 2)
    ch_i, shb_i = _cosh_sinc(b_i, x)
    a_i = ((ch_i - 0.5j * dk * shb_i) * a_i0 + 1j * p.kappa_i * shb_i * a_s0.conjugate()) * envelope

    return a_s, a_i


def jtwpa_ode_residual(
    p: JtwpaParams, a_s0: complex, a_i0: complex, x: float, h: float = 1e-5
) -> float:
    """Max residual of the coupled-mode equations at ``x`` by central differences.

    The closed forms must satisfy da_s/dx = i kappa_s a_i* e^{i dk x} and the
    idler counterpart; the returned number is the larger violation.
    """
    if x < h:
        raise DomainError("central differences need x >= h")
    s_plus, i_plus = jtwpa_solution(p, a_s0, a_i0, x + h)
    s_minus, i_minus = jtwpa_solution(p, a_s0, a_i0, x - h)
    s_mid, i_mid = jtwpa_solution(p, a_s0, a_i0, x)

    d_s = (s_plus - s_minus) / (2 * h)
    d_i = (i_plus - i_minus) / (2 * h)
    phase = cmath.exp(1j * p.total_mismatch * x)
    res_s = abs(d_s - 1j * p.kappa_s * i_mid.conjugate() * phase)
    res_i = abs(d_i - 1j * p.kappa_i * s_mid.conjugate() * phase)
    return max(res_s, res_i)
