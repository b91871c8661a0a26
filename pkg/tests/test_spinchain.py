import math

import numpy as np
import pytest

from gwqed.errors import DomainError, NumericalError
from gwqed.spinchain import (
    SpinChainSpec,
    allowed_momenta,
    bdg_angle,
    bogoliubov_angle,
    build_xy_hamiltonian,
    convention_report,
    dispersion,
    energy_gap,
    ground_parity,
    jw_quadratic_form,
    many_body_energies,
    momentum_coeffs,
    momentum_hamiltonian_coeffs,
    sector_eigh,
    sector_ground_energy,
)

PI = math.pi


def test_two_site_field_only_hamiltonian():
    spec = SpinChainSpec(n_sites=2, jc=0.0, jp=0.0, delta=1.0)
    h = build_xy_hamiltonian(spec, boundary="open")
    assert np.allclose(h, np.diag([2.0, 0.0, 0.0, -2.0]))


def test_two_site_exchange_spectrum_symmetric():
    spec = SpinChainSpec(n_sites=2, jc=0.7, jp=0.0, delta=0.0)
    vals = np.linalg.eigvalsh(build_xy_hamiltonian(spec, boundary="open"))
    assert np.max(np.abs(np.sort(vals) + np.sort(-vals)[::-1])) < 1e-12


def test_pairing_matrix_antisymmetric_and_zero_without_pairing():
    spec = SpinChainSpec(n_sites=6, jc=1.0, jp=0.0, delta=0.5)
    _, b, _ = jw_quadratic_form(spec, boundary="periodic")
    assert np.max(np.abs(b)) == 0.0
    spec = spec.with_(jp=0.4)
    _, b, _ = jw_quadratic_form(spec, boundary="periodic")
    assert np.max(np.abs(b + b.T)) < 1e-12


def test_bare_convention_scales_bonds_only():
    spec = SpinChainSpec(n_sites=4, jc=0.9, jp=0.3, delta=0.7)
    a_spin, b_spin, c_spin = jw_quadratic_form(spec, convention="spin")
    a_bare, b_bare, c_bare = jw_quadratic_form(spec, convention="bare")
    assert np.allclose(a_spin - np.diag(np.diag(a_spin)),
                       4.0 * (a_bare - np.diag(np.diag(a_bare))))
    assert np.allclose(b_spin, 4.0 * b_bare)
    assert np.allclose(np.diag(a_spin), np.diag(a_bare))
    assert c_spin == c_bare


def test_dual_construction_full_spectra():
    # dense spin diagonalization vs free-fermion enumeration, per sector
    rng = np.random.default_rng(7)
    for n in (4, 6):
        for _ in range(3):
            jc, jp, delta = rng.uniform(-1.5, 1.5, 3)
            for parity in ("even", "odd"):
                spec = SpinChainSpec(
                    n_sites=n, jc=jc, jp=jp, delta=delta, parity=parity
                )
                h = build_xy_hamiltonian(spec, boundary="periodic")
                ed_vals, _, _ = sector_eigh(h, n, parity)
                a, b, const = jw_quadratic_form(spec, boundary="periodic")
                ff_vals = many_body_energies(a, b, const, parity=parity)
                assert np.max(np.abs(np.sort(ed_vals) - ff_vals)) < 1e-8


def test_dual_construction_open_chain():
    rng = np.random.default_rng(17)
    for n in (4, 6):
        jc, jp, delta = rng.uniform(-1.5, 1.5, 3)
        spec = SpinChainSpec(n_sites=n, jc=jc, jp=jp, delta=delta)
        ed = np.sort(np.linalg.eigvalsh(build_xy_hamiltonian(spec, boundary="open")))
        a, b, const = jw_quadratic_form(spec, boundary="open")
        assert np.max(np.abs(ed - many_body_energies(a, b, const))) < 1e-8


def test_per_site_detuning_accepted_by_both_constructions():
    rng = np.random.default_rng(23)
    deltas = rng.uniform(-2, 2, 5)
    spec = SpinChainSpec(n_sites=5, jc=0.7, jp=0.3, delta=0.0)
    h = build_xy_hamiltonian(spec, boundary="open", delta_site=deltas)
    a, b, const = jw_quadratic_form(spec, boundary="open", delta_site=deltas)
    ed = np.sort(np.linalg.eigvalsh(h))
    assert np.max(np.abs(ed - many_body_energies(a, b, const))) < 1e-8


def test_momentum_sector_energy_matches_enumeration():
    rng = np.random.default_rng(31)
    for n in (4, 6, 8):
        jc, jp, delta = rng.uniform(-1.5, 1.5, 3)
        for parity in ("even", "odd"):
            spec = SpinChainSpec(n_sites=n, jc=jc, jp=jp, delta=delta, parity=parity)
            a, b, const = jw_quadratic_form(spec, boundary="periodic")
            e_enum = many_body_energies(a, b, const, parity=parity)[0]
            assert abs(sector_ground_energy(spec) - e_enum) < 1e-8


def test_momentum_quantization_by_sector():
    spec = SpinChainSpec(n_sites=8, parity="even")
    paired, unpaired = allowed_momenta(spec)
    assert np.allclose(paired, [(2 * m + 1) * PI / 8 for m in range(4)])
    assert unpaired == ()
    spec = spec.with_(parity="odd")
    paired, unpaired = allowed_momenta(spec)
    assert np.allclose(paired, [2 * m * PI / 8 for m in range(1, 4)])
    assert unpaired == (0.0, PI)
    with pytest.raises(DomainError):
        allowed_momenta(SpinChainSpec(n_sites=5))


def test_dispersion_collapses_without_pairing():
    spec = SpinChainSpec(n_sites=8, jc=0.8, jp=0.0, delta=1.3)
    for k in np.linspace(0, PI, 37):
        expected = 2.0 * abs(4.0 * 0.8 * math.cos(k) - 1.3)
        assert abs(dispersion(float(k), spec) - expected) < 1e-12


def test_dispersion_is_even_in_k():
    spec = SpinChainSpec(n_sites=8, jc=1.0, jp=0.5, delta=2.0)
    for k in np.linspace(0.1, PI - 0.1, 11):
        assert abs(dispersion(float(k), spec) - dispersion(-float(k), spec)) < 1e-12


def test_dispersion_equals_block_form():
    spec = SpinChainSpec(n_sites=8, jc=1.0, jp=0.5, delta=2.0)
    for k in np.linspace(0, PI, 29):
        xi, b = momentum_coeffs(float(k), spec)
        assert abs(dispersion(float(k), spec) - math.hypot(xi, b)) < 1e-12


def test_gap_closing_at_band_edges():
    spec = SpinChainSpec(n_sites=16, jc=1.0, jp=0.3, delta=4.0)
    assert abs(dispersion(0.0, spec)) < 1e-12
    spec = spec.with_(delta=-4.0)
    assert abs(dispersion(PI, spec)) < 1e-12
    # generic detuning: gap = 2 |delta - 4 jc| at k = 0
    spec = spec.with_(delta=2.5)
    assert abs(dispersion(0.0, spec) - 2.0 * abs(2.5 - 4.0)) < 1e-12


def test_continuum_gap_values():
    assert energy_gap(SpinChainSpec(16, 1.0, 0.5, 4.0), "continuum") < 1e-10
    assert energy_gap(SpinChainSpec(16, 1.0, 0.0, 2.0), "continuum") < 1e-10
    assert energy_gap(SpinChainSpec(16, 1.0, 0.5, 5.0), "continuum") > 0.01
    assert energy_gap(SpinChainSpec(16, 1.0, 0.5, 2.0), "continuum") > 0.01


def test_finite_size_gap_positive_off_the_exact_modes():
    # the even sector misses k = 0, so the gap stays open at delta = 4 jc
    spec = SpinChainSpec(n_sites=16, jc=1.0, jp=0.5, delta=4.0, parity="even")
    assert energy_gap(spec, "finite") > 1e-3
    # the odd sector contains k = 0 and hits the closing exactly
    assert energy_gap(spec.with_(parity="odd"), "finite") < 1e-12


def test_bdg_angle_matches_block_ground_state():
    spec = SpinChainSpec(n_sites=8, jc=1.0, jp=0.5, delta=2.0)
    for k in (0.4, 1.1, 2.3):
        theta = bdg_angle(k, spec)
        xi, b = momentum_coeffs(k, spec)
        # tan(2 theta) = -B/xi on the branch holding the ground state
        assert abs(math.tan(2 * theta) * xi + b) < 1e-10


def test_compact_angle_relation():
    spec = SpinChainSpec(n_sites=8, jc=1.0, jp=0.0, delta=0.7)
    for k in np.linspace(0, PI, 9):
        assert bogoliubov_angle(float(k), spec) == 0.0
    spec = spec.with_(jp=0.5)
    assert bogoliubov_angle(0.0, spec) == 0.0
    assert bogoliubov_angle(PI, spec) == pytest.approx(0.0, abs=1e-15)
    spec = SpinChainSpec(n_sites=8, jc=1.0, jp=0.5, delta=2.0)
    expected = 0.5 * math.atan(-0.25)
    assert abs(bogoliubov_angle(PI / 2, spec) - expected) < 1e-12
    # defining relation tan(2 theta) (jc cos k + delta) + jp sin k = 0
    for k in (0.3, 1.2, 2.0):
        theta = bogoliubov_angle(k, spec)
        residual = math.tan(2 * theta) * (spec.jc * math.cos(k) + spec.delta)
        assert abs(residual + spec.jp * math.sin(k)) < 1e-10


def test_momentum_transcription_coefficients():
    spec = SpinChainSpec(n_sites=8, jc=1.0, jp=0.5, delta=2.0)
    diag, off = momentum_hamiltonian_coeffs(PI / 2, spec)
    assert abs(diag - (-4.0)) < 1e-12
    assert abs(off - (-4.0)) < 1e-12
    diag, off = momentum_hamiltonian_coeffs(0.3, spec.with_(jp=0.0))
    assert off == 0.0


def test_convention_report_quantifies_transcriptions():
    spec = SpinChainSpec(n_sites=8, jc=1.0, jp=0.5, delta=2.0)
    report = convention_report(spec)
    assert report["dispersion_vs_bdg_max"] < 1e-10
    assert report["alt_diag_hopping_ratio"] == 2.0
    assert report["alt_dispersion_reldev_max"] > 0.1
    assert report["compact_angle_dev_max"] > 0.01


def test_ground_parity_in_polarized_phase():
    spec = SpinChainSpec(n_sites=16, jc=1.0, jp=0.5, delta=6.0)
    assert ground_parity(spec) == "even"


def test_radicand_guard():
    spec = SpinChainSpec(n_sites=8, jc=1.0, jp=0.5, delta=2.0)
    assert dispersion(0.0, spec) >= 0.0
    with pytest.raises(DomainError):
        energy_gap(spec, mode="typo")


def test_size_guards():
    with pytest.raises(DomainError):
        SpinChainSpec(n_sites=1)
    with pytest.raises(DomainError):
        build_xy_hamiltonian(SpinChainSpec(n_sites=14), boundary="open")
    with pytest.raises(DomainError):
        SpinChainSpec(n_sites=4, parity="mixed")
