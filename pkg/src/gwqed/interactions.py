"""Closed-form waveguide-mediated couplings between giant atoms.

Summing the cascaded interaction over all pairs of coupling points gives
two closed-form couplings between atoms a and b (positions in phase units,
k0 = 1):

    J_c = sum_{i,j} sqrt(pi g_ai g_bj / 2) sin|z_bj - z_ai| cosh[(G/2)(z_bj - z_ai)]
    J_p = sum_{i,j} sqrt(pi g_ai g_bj / 2) sgn(z_bj - z_ai)
              cos[theta_minus/2 + z_ai + z_bj] sinh[(G/2)(z_bj - z_ai)]

J_c exchanges one excitation (sigma_+^a sigma_-^b + h.c.), is independent
of the pump phases, and survives at zero gain.  J_p creates or destroys
excitation pairs (sigma_+^a sigma_+^b + h.c.), is proportional to the
squeezing (sinh factor, so J_p = 0 at G = 0), oscillates in the pump phase
difference theta_minus with period 4 pi, and depends on the absolute atom
positions through the cos argument -- translating the pair by T is the same
as shifting theta_minus by 4 T.

Both formulas are validated against an independent path: the full SLH
cascade of :mod:`gwqed.slh`, whose Hamiltonian (after the pump-phase gauge
rotation) must equal :func:`effective_hamiltonian` entrywise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from gwqed.dfree import build_braided_pair, centered_base, df_atom
from gwqed.errors import DomainError
from gwqed.quantum_ops import pauli
from gwqed.scan import ScanResult, format_value
from gwqed.slh import GiantAtom
from gwqed.waveguide import WaveguideConfig

PI = math.pi


@dataclass(frozen=True)
class EffectivePair:
    """Parameters of the effective two-atom Hamiltonian."""

    jc: float
    jp: float
    delta_a: float
    delta_b: float
    theta_minus: float
    gain: float


def _pair_weight(g_a: float, g_b: float) -> float:
    return math.sqrt(PI * g_a * g_b / 2.0)


def compute_jc(a: GiantAtom, b: GiantAtom, cfg: WaveguideConfig) -> float:
    """Exchange coupling J_c between two atoms (pump-phase independent)."""
    total = 0.0
    for pa in a.points:
        for pb in b.points:
            diff = pb.z - pa.z
            total += (
                _pair_weight(pa.g, pb.g)
                * math.sin(abs(diff))
                * math.cosh(0.5 * cfg.gain * diff)
            )
    return total


def compute_jp(a: GiantAtom, b: GiantAtom, cfg: WaveguideConfig) -> float:
    """Pairing coupling J_p between two atoms in the pump-phase gauge.

    Real by construction; its value (including sign) depends on where the
    pair sits along the waveguide through cos(theta_minus/2 + z_ai + z_bj).
    """
    half_theta = 0.5 * cfg.theta_minus
    total = 0.0
    for pa in a.points:
        for pb in b.points:
            diff = pb.z - pa.z
            if diff == 0.0:
                continue
            total += (
                _pair_weight(pa.g, pb.g)
                * math.copysign(1.0, diff)
                * math.cos(half_theta + pa.z + pb.z)
                * math.sinh(0.5 * cfg.gain * diff)
            )
    return total


def effective_pair(a: GiantAtom, b: GiantAtom, cfg: WaveguideConfig) -> EffectivePair:
    """Closed-form couplings and detunings for one atom pair."""
    return EffectivePair(
        jc=compute_jc(a, b, cfg),
        jp=compute_jp(a, b, cfg),
        delta_a=a.detuning,
        delta_b=b.detuning,
        theta_minus=cfg.theta_minus,
        gain=cfg.gain,
    )


def effective_hamiltonian(pair: EffectivePair) -> np.ndarray:
    """4x4 two-atom Hamiltonian: detunings, exchange, and pairing terms."""
    sz_a = pauli("z", 0, 2)
    sz_b = pauli("z", 1, 2)
    exch = pauli("+", 0, 2) @ pauli("-", 1, 2)
    prs = pauli("+", 0, 2) @ pauli("+", 1, 2)
    h = (
        0.5 * pair.delta_a * sz_a
        + 0.5 * pair.delta_b * sz_b
        + pair.jc * (exch + exch.conj().T)
        + pair.jp * (prs + prs.conj().T)
    )
    return h


def _pair_geometry(
    d_s: float, gain: float, centered: bool, base: float | None
) -> tuple[GiantAtom, GiantAtom]:
    if base is None:
        base = centered_base(d_s) if centered else 0.0
    return build_braided_pair(d_s, gain, base=base)


def _pair_config(gain: float, theta_minus: float) -> WaveguideConfig:
    # theta_plus = 0 keeps the gauge rotation trivial; only the difference
    # enters the couplings.
    return WaveguideConfig(
        gain=gain,
        theta_right=0.5 * theta_minus,
        theta_left=-0.5 * theta_minus,
        length=8.0 * PI,
    )


def couplings_at(
    d_s: float,
    gain: float,
    theta_minus: float,
    centered: bool = True,
    base: float | None = None,
) -> tuple[float, float]:
    """(J_c, J_p) of a braided decoherence-free pair at the given knobs."""
    a, b = _pair_geometry(d_s, gain, centered, base)
    cfg = _pair_config(gain, theta_minus)
    return compute_jc(a, b, cfg), compute_jp(a, b, cfg)


def scan_vs_gain(
    d_s: float,
    theta_minus: float,
    gains: np.ndarray,
    centered: bool = True,
    base: float | None = None,
) -> ScanResult:
    """Couplings versus parametric gain; the profile is re-tuned per gain."""
    result = ScanResult(header=("gain", "jc", "jp"))
    for g in gains:
        jc, jp = couplings_at(d_s, float(g), theta_minus, centered, base)
        result.append((g, jc, jp))
    result.metadata.update(
        ds=format_value(d_s), theta_minus=format_value(theta_minus), scan="gain"
    )
    return result


def scan_vs_theta(
    d_s: float,
    gain: float,
    thetas: np.ndarray,
    centered: bool = True,
    base: float | None = None,
) -> ScanResult:
    """Couplings versus pump phase difference at fixed gain and spacing."""
    result = ScanResult(header=("theta_minus", "jc", "jp"))
    for theta in thetas:
        jc, jp = couplings_at(d_s, gain, float(theta), centered, base)
        result.append((theta, jc, jp))
    result.metadata.update(ds=format_value(d_s), gain=format_value(gain), scan="theta")
    return result


def scan_vs_separation(
    gain: float,
    theta_minus: float,
    separations: np.ndarray,
    centered: bool = True,
    base: float | None = None,
) -> ScanResult:
    """Couplings and their ratio versus atom spacing.

    The ratio column is NaN where J_c = 0.  Spacings at or beyond pi leave
    the strictly braided regime; they are evaluated on the same uniform
    geometry (atom b offset by d_s) so the scan can run out to separated
    atoms, where both couplings vanish.
    """
    result = ScanResult(header=("ds", "jc", "jp", "jp_over_jc"))
    for d_s in separations:
        jc, jp = _couplings_any_separation(float(d_s), gain, theta_minus, centered, base)
        ratio = jp / jc if jc != 0.0 else math.nan
        result.append((d_s, jc, jp, ratio))
    result.metadata.update(
        gain=format_value(gain), theta_minus=format_value(theta_minus), scan="ds"
    )
    return result


def _couplings_any_separation(
    d_s: float,
    gain: float,
    theta_minus: float,
    centered: bool,
    base: float | None,
) -> tuple[float, float]:
    """Couplings for arbitrary positive spacing (braided or separated)."""
    if d_s <= 0:
        raise DomainError("atom spacing must be positive")
    if base is None:
        base = centered_base(d_s) if centered else 0.0
    atom_a = df_atom(base, gain)
    atom_b = df_atom(base + d_s, gain)
    cfg = _pair_config(gain, theta_minus)
    return compute_jc(atom_a, atom_b, cfg), compute_jp(atom_a, atom_b, cfg)


def _bisect_root(fn, lo: float, hi: float, tol: float = 1e-10) -> float:
    f_lo, f_hi = fn(lo), fn(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if f_lo * f_hi > 0:
        raise DomainError("bisection bracket does not straddle a sign change")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        f_mid = fn(mid)
        if f_mid == 0.0:
            return mid
        if f_lo * f_mid < 0:
            hi = mid
        else:
            lo, f_lo = mid, f_mid
    return 0.5 * (lo + hi)


def _refine_abs_min(fn, lo: float, hi: float, iterations: int = 90) -> float:
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = hi - invphi * (hi - lo)
    d = lo + invphi * (hi - lo)
    fc, fd = abs(fn(c)), abs(fn(d))
    for _ in range(iterations):
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - invphi * (hi - lo)
            fc = abs(fn(c))
        else:
            lo, c, fc = c, d, fd
            d = lo + invphi * (hi - lo)
            fd = abs(fn(d))
    return 0.5 * (lo + hi)


def find_coupling_roots(
    gain: float,
    theta_minus: float,
    lo: float,
    hi: float,
    n_grid: int = 400,
    centered: bool = True,
    base: float | None = None,
    tangential_tol: float = 1e-9,
) -> tuple[list[float], list[float]]:
    """Locate spacings where J_c and J_p vanish inside (lo, hi).

    Sign changes are bisected to 1e-10 in d_s.  Tangential zeros (the
    coupling touches zero without changing sign, as J_c does at the braid
    boundary d_s = pi) are caught by refining interior local minima of the
    magnitude and accepting those below ``tangential_tol``.  Returns
    (jc_roots, jp_roots).
    """
    grid = np.linspace(lo, hi, n_grid + 1)

    def jc_fn(d):
        return _couplings_any_separation(d, gain, theta_minus, centered, base)[0]

    def jp_fn(d):
        return _couplings_any_separation(d, gain, theta_minus, centered, base)[1]

    roots: dict[str, list[float]] = {"jc": [], "jp": []}
    for name, fn in (("jc", jc_fn), ("jp", jp_fn)):
        values = [fn(float(d)) for d in grid]
        found: list[float] = []
        for k in range(n_grid):
            if values[k] == 0.0:
                found.append(float(grid[k]))
            elif values[k] * values[k + 1] < 0:
                found.append(_bisect_root(fn, float(grid[k]), float(grid[k + 1])))
        for k in range(1, n_grid):
            y0, y1, y2 = abs(values[k - 1]), abs(values[k]), abs(values[k + 1])
            if y1 < y0 and y1 <= y2:
                x = _refine_abs_min(fn, float(grid[k - 1]), float(grid[k + 1]))
                if abs(fn(x)) < tangential_tol and not any(
                    abs(x - r) < 1e-6 for r in found
                ):
                    found.append(x)
        roots[name] = sorted(found)
    return roots["jc"], roots["jp"]
