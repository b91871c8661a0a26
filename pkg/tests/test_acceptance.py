"""Acceptance suite: one test per deliverable criterion, at stated tolerances.

Each test prints a PASS/FAIL line (visible with ``pytest -rA`` or ``-s``)
and asserts the criterion as written.  Criterion runtimes are asserted
with the stated budgets.
"""

import math
import time

import numpy as np
import pytest

from gwqed.criticality import ed_ground_overlap, fidelity_scan, ground_fidelity
from gwqed.dfree import (
    build_braided_chain,
    build_braided_pair,
    df_atom,
    df_ratios_m3,
    minimize_m2_residual,
    residual_check,
)
from gwqed.interactions import (
    compute_jc,
    compute_jp,
    couplings_at,
    effective_hamiltonian,
    effective_pair,
    find_coupling_roots,
    scan_vs_gain,
    scan_vs_theta,
)
from gwqed.slh import (
    cascade_left,
    cascade_right,
    gauge_transformed,
    operator_norm,
)
from gwqed.spinchain import (
    SpinChainSpec,
    build_xy_hamiltonian,
    energy_gap,
    jw_quadratic_form,
    many_body_energies,
    sector_eigh,
)
from gwqed.waveguide import (
    JtwpaParams,
    ModeAmplitudes,
    WaveguideConfig,
    integrate_coupled_wave,
    jtwpa_ode_residual,
    propagate_analytic,
)

PI = math.pi


def report(number: int, name: str, ok: bool, detail: str = "") -> None:
    verdict = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE {number} [{name}]: {verdict} {detail}".rstrip())
    assert ok, f"criterion {number} ({name}) failed: {detail}"


def test_criterion_1_decoherence_free_cancellation():
    t0 = time.perf_counter()
    worst_res = 0.0
    worst_norm = 0.0
    for gain in (0.0, 0.4, 0.8, 1.2, 2.0):
        profile = df_ratios_m3(gain, PI)
        worst_res = max(worst_res, abs(profile.residual_cosh), abs(profile.residual_sinh))
        atom = df_atom(0.0, gain)
        res_c, res_s = residual_check(atom, gain)
        worst_res = max(worst_res, abs(res_c), abs(res_s))
        pair = build_braided_pair(0.2 * PI, gain)
        cfg = WaveguideConfig(gain=gain, length=pair[1].points[-1].z)
        worst_norm = max(
            worst_norm,
            operator_norm(cascade_right(list(pair), cfg).jumps[0]),
            operator_norm(cascade_left(list(pair), cfg).jumps[0]),
        )
    elapsed = time.perf_counter() - t0
    ok = worst_res < 1e-10 and worst_norm < 1e-10 and elapsed < 1.0
    report(
        1,
        "decoherence-free cancellation",
        ok,
        f"max residual {worst_res:.2e}, max jump norm {worst_norm:.2e}, {elapsed:.2f}s",
    )


def test_criterion_2_two_point_infeasibility():
    t0 = time.perf_counter()
    floor = math.inf
    z1 = 1.0
    for gain in (0.1, 0.5, 1.0, 1.5, 2.0):
        for sep in (0.5, 1.0, 2.0, PI, 5.0, 2 * PI):
            value, _ = minimize_m2_residual(z1, z1 + sep, gain)
            floor = min(floor, value)
    elapsed = time.perf_counter() - t0
    ok = floor > 1e-3 and elapsed < 5.0
    report(2, "two-point infeasibility", ok, f"residual floor {floor:.3e}, {elapsed:.2f}s")


def test_criterion_3_cascade_equals_closed_form():
    t0 = time.perf_counter()
    rng = np.random.default_rng(20240817)
    worst = 0.0
    for _ in range(20):
        d_s = rng.uniform(0.05 * PI, 0.95 * PI)
        gain = rng.uniform(0.0, 1.5)
        atom_a, atom_b = build_braided_pair(
            d_s, gain, detuning_a=rng.normal(), detuning_b=rng.normal()
        )
        cfg = WaveguideConfig(
            gain=gain,
            theta_right=rng.uniform(0.0, 2 * PI),
            theta_left=rng.uniform(0.0, 2 * PI),
            length=atom_b.points[-1].z,
        )
        h_cascade = (
            cascade_right([atom_a, atom_b], cfg).hamiltonian
            + cascade_left([atom_a, atom_b], cfg).hamiltonian
        )
        gauged = gauge_transformed(h_cascade, cfg.theta_plus, 2)
        closed = effective_hamiltonian(effective_pair(atom_a, atom_b, cfg))
        worst = max(worst, float(np.max(np.abs(gauged - closed))))
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-10 and elapsed < 10.0
    report(3, "cascade vs closed form", ok, f"max entry dev {worst:.2e}, {elapsed:.2f}s")


def test_criterion_4a_couplings_grow_with_gain():
    gains = np.arange(0.0, 2.0001, 0.1)
    result = scan_vs_gain(0.2 * PI, 0.0, gains)
    jc = np.abs(np.array(result.column("jc")))
    jp = np.abs(np.array(result.column("jp")))
    window = gains >= 0.5
    ok = (
        jp[0] == 0.0
        and bool(np.all(np.diff(jc[window]) > 0))
        and bool(np.all(np.diff(jp[window]) > 0))
    )
    report(4, "gain scan: zero pairing at G=0, growth on [0.5, 2]", ok,
           f"|Jc|: {jc[5]:.3f}->{jc[-1]:.3f}, |Jp|: {jp[5]:.3f}->{jp[-1]:.3f}")


def test_criterion_4b_theta_scan_constancy_and_period():
    thetas = np.linspace(0.0, 8 * PI, 257)
    result = scan_vs_theta(0.2 * PI, 0.8, thetas)
    jc = np.array(result.column("jc"))
    jp = np.array(result.column("jp"))
    jc_const = float(np.max(np.abs(jc - jc[0])))
    quarter = 128  # 4 pi in index units
    period_dev = float(np.max(np.abs(jp[: len(jp) - quarter] - jp[quarter:])))
    ok = jc_const < 1e-12 and period_dev < 1e-10
    report(4, "theta scan: constant Jc, Jp period 4pi", ok,
           f"Jc spread {jc_const:.2e}, period dev {period_dev:.2e}")


def test_criterion_4c_separation_scan_roots():
    jc_roots, jp_roots = find_coupling_roots(0.8, 0.0, 0.01 * PI, 0.99 * PI)
    detail = f"jp roots {jp_roots}, jc roots {jc_roots}"
    has_jp = any(0 < r < PI for r in jp_roots)
    has_jc = any(0 < r < PI for r in jc_roots)
    # The exchange coupling of the tuned three-point pair is strictly
    # positive inside the braided range and only touches zero at the braid
    # boundary d_s = pi itself (see test_braid_boundary companion below), so
    # the open-interval J_c = 0 clause cannot be met by a faithful
    # implementation.  The assertion states the criterion as written.
    report(4, "separation scan: Jp and Jc roots inside (0, pi)",
           has_jp and has_jc, detail)


def test_companion_4c_exchange_zero_sits_at_braid_boundary():
    # companion to the criterion above: the J_c = 0 point exists and is the
    # tangential zero exactly at d_s = pi, where the coupling ratio diverges
    jc_roots, _ = find_coupling_roots(0.8, 0.0, 0.6 * PI, 1.4 * PI)
    assert any(abs(r - PI) < 1e-6 for r in jc_roots)
    jc_inside = [couplings_at(f * PI, 0.8, 0.0)[0] for f in np.linspace(0.05, 0.95, 19)]
    assert min(jc_inside) > 0.0


def test_criterion_5_nearest_neighbor_only_chain():
    t0 = time.perf_counter()
    gain = 1.2
    chain = build_braided_chain(4, 1.25 * PI, gain)
    cfg = WaveguideConfig(gain=gain, length=chain[-1].points[-1].z)
    nn = []
    nnn = []
    for i in range(3):
        nn.append(abs(compute_jc(chain[i], chain[i + 1], cfg)))
        nn.append(abs(compute_jp(chain[i], chain[i + 1], cfg)))
    for i in range(2):
        nnn.append(abs(compute_jc(chain[i], chain[i + 2], cfg)))
        nnn.append(abs(compute_jp(chain[i], chain[i + 2], cfg)))
    nnn.append(abs(compute_jc(chain[0], chain[3], cfg)))
    nnn.append(abs(compute_jp(chain[0], chain[3], cfg)))
    elapsed = time.perf_counter() - t0
    ok = min(nn) > 0.1 and max(nnn) < 1e-10 and elapsed < 5.0
    report(5, "nearest-neighbor-only chain", ok,
           f"nearest min {min(nn):.3f}, next-nearest max {max(nnn):.2e}, {elapsed:.2f}s")


def test_criterion_6_gap_topology():
    closing = [
        energy_gap(SpinChainSpec(16, 1.0, 0.5, 4.0), "continuum"),
        energy_gap(SpinChainSpec(16, 1.0, 0.5, -4.0), "continuum"),
    ]
    for delta in (-4.0, -2.0, 0.0, 1.0, 3.0, 4.0):
        closing.append(energy_gap(SpinChainSpec(16, 1.0, 0.0, delta), "continuum"))
    probes = [
        energy_gap(SpinChainSpec(16, 1.0, 0.5, 5.0), "continuum"),
        energy_gap(SpinChainSpec(16, 1.0, 0.5, 2.0), "continuum"),
    ]
    ok = max(closing) < 1e-10 and min(probes) > 0.01
    report(6, "gap closing lines and gapped probes", ok,
           f"max closing gap {max(closing):.2e}, min probe gap {min(probes):.3f}")


def test_criterion_7a_susceptibility_peaks_in_detuning():
    t0 = time.perf_counter()
    spec = SpinChainSpec(n_sites=16, jc=1.0, jp=0.5, delta=0.0, parity="even")
    step = 0.05
    grid = np.arange(-8.0, 8.0 + step / 2, step)
    scan = fidelity_scan(spec, "delta", grid, dh=0.01)
    elapsed = time.perf_counter() - t0
    outer = sorted(p for p in scan.peaks if abs(p) > 2.0)
    dev_minus = min((abs(p + 4.0) for p in outer), default=math.inf)
    dev_plus = min((abs(p - 4.0) for p in outer), default=math.inf)
    ok = dev_minus <= step and dev_plus <= step and elapsed < 10.0
    # Note: the finite-size pseudo-critical points of the N = 16 ring sit at
    # +-4 cos(pi/16) ~= +-3.923 (pulled to ~3.917 by neighboring modes), which
    # is 1.7 grid steps from +-4.0; see the companion test below.
    report(7, "susceptibility peaks at detuning +-4", ok,
           f"peak offsets ({dev_minus:.3f}, {dev_plus:.3f}) vs one step {step}, "
           f"{elapsed:.2f}s")


def test_companion_7a_peaks_match_finite_size_prediction():
    # the same scan peaks within one grid step of the finite-N mode edge
    # 4 cos(pi/N); the +-4.0 target is its thermodynamic (N -> inf) limit
    spec = SpinChainSpec(n_sites=16, jc=1.0, jp=0.5, delta=0.0, parity="even")
    step = 0.05
    grid = np.arange(2.0, 6.0 + step / 2, step)
    scan = fidelity_scan(spec, "delta", grid, dh=0.01)
    edge = 4.0 * math.cos(PI / 16)
    assert any(abs(p - edge) <= step for p in scan.peaks)
    # and the unmodified +-4.0 criterion is met once the chain is longer
    spec24 = spec.with_(n_sites=24)
    scan24 = fidelity_scan(spec24, "delta", grid, dh=0.01)
    assert any(abs(p - 4.0) <= step for p in scan24.peaks)


def test_criterion_7b_susceptibility_peak_in_pairing():
    t0 = time.perf_counter()
    spec = SpinChainSpec(n_sites=16, jc=1.0, jp=0.0, delta=2.0, parity="even")
    step = 0.05
    grid = np.arange(-2.0, 2.0 + step / 2, step)
    scan = fidelity_scan(spec, "jp", grid, dh=0.01)
    elapsed = time.perf_counter() - t0
    dev = min((abs(p) for p in scan.peaks), default=math.inf)
    ok = dev <= step and elapsed < 10.0
    report(7, "susceptibility peak at zero pairing", ok,
           f"peak offset {dev:.3f} vs one step {step}, {elapsed:.2f}s")


def test_criterion_8_oracle_equivalence_suite():
    t0 = time.perf_counter()
    rng = np.random.default_rng(77)

    spectral_dev = 0.0
    for n in (4, 6, 8):
        jc, jp, delta = rng.uniform(-1.2, 1.2, 3)
        for parity in ("even", "odd"):
            spec = SpinChainSpec(n_sites=n, jc=jc, jp=jp, delta=delta, parity=parity)
            h = build_xy_hamiltonian(spec, boundary="periodic")
            ed_vals, _, _ = sector_eigh(h, n, parity)
            a, b, const = jw_quadratic_form(spec, boundary="periodic")
            ff_vals = many_body_energies(a, b, const, parity=parity)
            spectral_dev = max(spectral_dev, float(np.max(np.abs(np.sort(ed_vals) - ff_vals))))

    fidelity_dev = 0.0
    draws = 0
    while draws < 50:
        n = int(rng.choice([4, 6, 8]))
        jc = rng.uniform(0.3, 1.5)
        jp = rng.uniform(0.2, 1.2) * rng.choice([-1.0, 1.0])
        delta = rng.uniform(-6.0, 6.0)
        if abs(abs(delta) - 4.0 * jc) < 0.3:
            continue  # stay in the gapped region
        h = delta
        dh = rng.uniform(0.005, 0.02)
        sector = str(rng.choice(["even", "odd"]))
        spec = SpinChainSpec(n_sites=n, jc=jc, jp=jp, delta=delta, parity=sector)
        f_prod = ground_fidelity(spec, "delta", h, dh)
        f_ed = ed_ground_overlap(spec, "delta", h, dh, sector=sector)
        fidelity_dev = max(fidelity_dev, abs(f_prod - f_ed))
        draws += 1

    elapsed = time.perf_counter() - t0
    ok = spectral_dev < 1e-8 and fidelity_dev < 1e-8 and elapsed < 60.0
    report(8, "dual-construction oracle suite", ok,
           f"spectra dev {spectral_dev:.2e}, fidelity dev {fidelity_dev:.2e}, "
           f"{elapsed:.1f}s")


def test_criterion_9_waveguide_propagation():
    t0 = time.perf_counter()
    seed = ModeAmplitudes(a1=1.0, a2_conj=0.0, z=0.0)
    prop_dev = 0.0
    for gain in (0.3, 0.8, 1.5):
        for dk in (0.0, 0.5, 2.5):
            cfg = WaveguideConfig(gain=gain, theta_right=0.6, delta_k=dk, length=20.0)
            for z in (0.5, 1.5, 3.0):
                analytic = propagate_analytic(cfg, seed, z)
                rk4 = integrate_coupled_wave(cfg, seed, z, step=1e-3)
                prop_dev = max(
                    prop_dev,
                    abs(analytic.a1 - rk4.a1),
                    abs(analytic.a2_conj - rk4.a2_conj),
                )

    ode_dev = 0.0
    params = (
        JtwpaParams(kappa_s=0.6, kappa_i=0.6),
        JtwpaParams(kappa_s=0.4 + 0.1j, kappa_i=0.35 - 0.05j, alpha_p=0.02,
                    alpha_s=0.03, alpha_i=-0.01, delta_k_linear=0.25),
        JtwpaParams(kappa_s=0.2, kappa_i=0.9, delta_k_linear=1.5),
    )
    for p in params:
        for x in (0.3, 1.0, 2.5):
            ode_dev = max(ode_dev, jtwpa_ode_residual(p, 1.0, 0.3 + 0.4j, x))

    elapsed = time.perf_counter() - t0
    ok = prop_dev < 1e-8 and ode_dev < 1e-6 and elapsed < 5.0
    report(9, "waveguide propagation oracles", ok,
           f"analytic-vs-rk4 {prop_dev:.2e}, amplifier ODE residual {ode_dev:.2e}, "
           f"{elapsed:.2f}s")
