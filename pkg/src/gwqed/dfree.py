"""Decoherence-free coupling profiles and braided geometries.

A giant atom with M coupling points spaced by pi decouples from both
squeezed-noise channels when two interference sums vanish simultaneously:
the alternating-sign, root-coupling-weighted sums over cosh(G z_i / 2) and
over sinh(G z_i / 2).  With two points the two conditions fix incompatible
coupling ratios (cosh^2 vs sinh^2), so M >= 3 is necessary.  Three points
admit the closed-form profile

    g1 : g2 : g3  =  1 : 4 cosh^2(G d / 2) : 1

(d the point spacing), which nulls both sums for every base position by the
hyperbolic midpoint identity cosh(u) + cosh(u + 2v) = 2 cosh(v) cosh(u + v).

Builders return :class:`~gwqed.slh.GiantAtom` geometries: a braided pair
(points interleaved a1 b1 a2 b2 a3 b3 for spacing 0 < d_s < pi) and a chain
whose uniform spacing keeps nearest neighbors overlapping while
next-nearest neighbors share no coupling region, which makes their mediated
interaction vanish identically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from gwqed.errors import DomainError
from gwqed.slh import CouplingPoint, GiantAtom

PI = math.pi

# Overall coupling scale: the closed-form interaction weight
# sqrt(pi * g_i * g_j / 2) equals one for a pair of reference-strength
# points, so plotted couplings are O(1) in these units.
G_REF = math.sqrt(2.0 / PI)


@dataclass(frozen=True)
class DfProfile:
    """A decoherence-free coupling profile and its interference residuals."""

    spacing: float
    ratios: tuple[float, ...]
    gain: float
    residual_cosh: complex
    residual_sinh: complex

    @property
    def n_points(self) -> int:
        return len(self.ratios)


def residual_check(atom: GiantAtom, gain: float) -> tuple[complex, complex]:
    """Interference sums whose simultaneous vanishing makes the atom dark.

    Returns (sum_i sqrt(g_i) (-1)^(M-i) cosh(G z_i / 2),
             sum_i sqrt(g_i) (-1)^(M-i) sinh(G z_i / 2)).
    Both below 1e-12 in magnitude iff the pi-spaced atom is
    decoherence-free at this gain.
    """
    m = atom.n_points
    res_c = 0.0 + 0.0j
    res_s = 0.0 + 0.0j
    for i, point in enumerate(atom.points, start=1):
        sign = (-1.0) ** (m - i)
        amp = math.sqrt(point.g) * sign
        res_c += amp * math.cosh(0.5 * gain * point.z)
        res_s += amp * math.sinh(0.5 * gain * point.z)
    return res_c, res_s


def df_ratios_m3(gain: float, spacing: float = PI, base: float = 0.0) -> DfProfile:
    """Three-point decoherence-free profile [1, 4 cosh^2(G d / 2), 1].

    The residuals are evaluated on a probe atom at ``base``; the midpoint
    identity makes them vanish for any base position.
    """
    if spacing <= 0:
        raise DomainError("point spacing must be positive")
    if gain < 0:
        raise DomainError("gain must be >= 0")
    middle = 4.0 * math.cosh(0.5 * gain * spacing) ** 2
    ratios = (1.0, middle, 1.0)
    probe = GiantAtom(
        detuning=0.0,
        points=tuple(
            CouplingPoint(z=base + i * spacing, g=r * G_REF)
            for i, r in enumerate(ratios)
        ),
    )
    res_c, res_s = residual_check(probe, gain)
    return DfProfile(
        spacing=spacing,
        ratios=ratios,
        gain=gain,
        residual_cosh=res_c,
        residual_sinh=res_s,
    )


def prove_m2_infeasible(z1: float, z2: float, gain: float) -> float:
    """Gap between the two coupling-ratio conditions for a two-point atom.

    The cosh interference sum fixes g1/g2 = cosh^2(G z2/2)/cosh^2(G z1/2),
    the sinh sum fixes the sinh analogue; their separation

        |cosh^2(G z2/2)/cosh^2(G z1/2) - sinh^2(G z2/2)/sinh^2(G z1/2)|

    is strictly positive for z1 != z2 and G > 0, so no real coupling ratio
    nulls both channels.  At G = 0 the sinh condition degenerates (there is
    no squeezed component to cancel) and the question is ill-posed.
    """
    if gain <= 0:
        raise DomainError("two-point infeasibility is degenerate at zero gain")
    if z1 <= 0 or z2 <= 0:
        raise DomainError("coupling positions must be positive")
    if z1 == z2:
        raise DomainError("coupling points must be distinct")
    ch = math.cosh(0.5 * gain * z2) ** 2 / math.cosh(0.5 * gain * z1) ** 2
    sh = math.sinh(0.5 * gain * z2) ** 2 / math.sinh(0.5 * gain * z1) ** 2
    return abs(ch - sh)


def _m2_max_residual(ratio: float, z1: float, z2: float, gain: float) -> float:
    root = math.sqrt(ratio)
    res_c = abs(root * math.cosh(0.5 * gain * z1) - math.cosh(0.5 * gain * z2))
    res_s = abs(root * math.sinh(0.5 * gain * z1) - math.sinh(0.5 * gain * z2))
    return max(res_c, res_s)


def minimize_m2_residual(
    z1: float,
    z2: float,
    gain: float,
    ratio_max: float = 100.0,
    n_grid: int = 400,
) -> tuple[float, float]:
    """Numerically minimize the worst-channel residual over the coupling ratio.

    Scans g1/g2 in (0, ratio_max] on a log grid with golden-section
    refinement.  Returns (min residual, argmin ratio).  The optimum is
    bounded below by a positive floor whenever the analytic ratio gap of
    :func:`prove_m2_infeasible` is nonzero.
    """
    if gain <= 0:
        raise DomainError("two-point infeasibility is degenerate at zero gain")
    log_lo, log_hi = math.log(1e-6), math.log(ratio_max)
    best_x = None
    best_val = math.inf
    for i in range(n_grid + 1):
        x = log_lo + (log_hi - log_lo) * i / n_grid
        val = _m2_max_residual(math.exp(x), z1, z2, gain)
        if val < best_val:
            best_val, best_x = val, x

    step = (log_hi - log_lo) / n_grid
    lo, hi = best_x - step, best_x + step
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = hi - invphi * (hi - lo)
    d = lo + invphi * (hi - lo)
    fc = _m2_max_residual(math.exp(c), z1, z2, gain)
    fd = _m2_max_residual(math.exp(d), z1, z2, gain)
    for _ in range(80):
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - invphi * (hi - lo)
            fc = _m2_max_residual(math.exp(c), z1, z2, gain)
        else:
            lo, c, fc = c, d, fd
            d = lo + invphi * (hi - lo)
            fd = _m2_max_residual(math.exp(d), z1, z2, gain)
    x_opt = 0.5 * (lo + hi)
    return _m2_max_residual(math.exp(x_opt), z1, z2, gain), math.exp(x_opt)


def df_atom(
    base: float, gain: float, detuning: float = 0.0, g_ref: float = G_REF
) -> GiantAtom:
    """Single decoherence-free atom: pi-spaced points with the M=3 profile."""
    middle = 4.0 * math.cosh(0.5 * gain * PI) ** 2
    return GiantAtom(
        detuning=detuning,
        points=(
            CouplingPoint(z=base, g=g_ref),
            CouplingPoint(z=base + PI, g=middle * g_ref),
            CouplingPoint(z=base + 2 * PI, g=g_ref),
        ),
    )


def build_braided_pair(
    d_s: float,
    gain: float,
    base: float = 0.0,
    detuning_a: float = 0.0,
    detuning_b: float = 0.0,
    g_ref: float = G_REF,
) -> tuple[GiantAtom, GiantAtom]:
    """Two decoherence-free atoms with interleaved pi-spaced coupling points.

    Atom a sits at base + {0, pi, 2 pi}, atom b is offset by d_s; the
    adjacent-contact phases d_s and pi - d_s sum to pi.  Requires
    0 < d_s < pi so the contacts alternate strictly.
    """
    if not 0.0 < d_s < PI:
        raise DomainError("braided pair spacing must satisfy 0 < d_s < pi")
    atom_a = df_atom(base, gain, detuning=detuning_a, g_ref=g_ref)
    atom_b = df_atom(base + d_s, gain, detuning=detuning_b, g_ref=g_ref)
    return atom_a, atom_b


def centered_base(d_s: float) -> float:
    """Base position placing a braided pair symmetrically about the origin."""
    return -0.5 * (2.0 * PI + d_s)


def build_braided_chain(
    n_atoms: int,
    d_s: float,
    gain: float,
    base: float = 0.0,
    detunings: list[float] | None = None,
    g_ref: float = G_REF,
) -> list[GiantAtom]:
    """Uniformly spaced chain of decoherence-free three-point atoms.

    Atom n occupies base + n d_s + {0, pi, 2 pi}.  Neighbors must share a
    coupling region (d_s < 2 pi) and next-nearest neighbors must not
    (2 d_s >= 2 pi), so chains with three or more atoms require
    pi <= d_s < 2 pi; a two-atom chain with d_s < pi reduces to
    :func:`build_braided_pair`.
    """
    if n_atoms < 2:
        raise DomainError("a chain needs at least two atoms")
    if not 0.0 < d_s < 2.0 * PI:
        raise DomainError("chain spacing must satisfy 0 < d_s < 2 pi (neighbors overlap)")
    if n_atoms >= 3 and d_s < PI:
        raise DomainError(
            "chain spacing below pi makes next-nearest coupling regions overlap; "
            "use pi <= d_s < 2 pi"
        )
    if detunings is None:
        detunings = [0.0] * n_atoms
    if len(detunings) != n_atoms:
        raise DomainError("need one detuning per atom")
    return [
        df_atom(base + n * d_s, gain, detuning=detunings[n], g_ref=g_ref)
        for n in range(n_atoms)
    ]
