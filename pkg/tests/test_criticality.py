import math

import numpy as np
import pytest

from gwqed.criticality import (
    count_gapped_regions,
    ed_ground_overlap,
    fidelity_scan,
    fidelity_susceptibility,
    find_peaks,
    ground_fidelity,
    phase_diagram,
    spec_with_param,
)
from gwqed.errors import DomainError, SectorMismatchError
from gwqed.spinchain import SpinChainSpec, sector_ground_energy

PI = math.pi

SPEC16 = SpinChainSpec(n_sites=16, jc=1.0, jp=0.5, delta=0.0, parity="even")


def test_identical_states_have_unit_fidelity():
    f = ground_fidelity(SPEC16.with_(delta=1.3), "delta", 1.3, 1e-30)
    assert f == pytest.approx(1.0, abs=1e-12)


def test_angle_free_sector_fidelity_is_one():
    # without pairing the Bogoliubov angles are locked, so any detuning path
    # that crosses no mode keeps fidelity exactly one
    spec = SpinChainSpec(n_sites=8, jc=1.0, jp=0.0, delta=5.0, parity="even")
    assert ground_fidelity(spec, "delta", 5.0, 0.01) == pytest.approx(1.0, abs=1e-14)


def test_product_formula_matches_ed_overlap():
    rng = np.random.default_rng(41)
    for n in (4, 6, 8):
        for _ in range(4):
            jc = rng.uniform(0.3, 1.5)
            jp = rng.uniform(0.2, 1.2) * rng.choice([-1.0, 1.0])
            delta = rng.uniform(-6.0, 6.0)
            dh = rng.uniform(0.005, 0.05)
            for sector in ("even", "odd"):
                spec = SpinChainSpec(n_sites=n, jc=jc, jp=jp, delta=delta, parity=sector)
                f_prod = ground_fidelity(spec, "delta", delta, dh)
                f_ed = ed_ground_overlap(spec, "delta", delta, dh, sector=sector)
                assert abs(f_prod - f_ed) < 1e-8


def test_product_formula_matches_ed_overlap_pairing_scan():
    spec = SpinChainSpec(n_sites=6, jc=1.0, jp=0.5, delta=2.0, parity="even")
    f_prod = ground_fidelity(spec, "jp", 0.5, 0.01)
    f_ed = ed_ground_overlap(spec, "jp", 0.5, 0.01, sector="even")
    assert abs(f_prod - f_ed) < 1e-8


def test_susceptibility_of_constant_state_is_zero():
    spec = SpinChainSpec(n_sites=8, jc=1.0, jp=0.0, delta=5.0, parity="even")
    assert fidelity_susceptibility(spec, "delta", 5.0, 0.01) == pytest.approx(0.0, abs=1e-9)


def test_delta_scan_peaks_near_band_edges():
    grid = np.arange(-8.0, 8.0001, 0.05)
    scan = fidelity_scan(SPEC16, "delta", grid, dh=0.01)
    big = sorted(p for p in scan.peaks if abs(p) > 3.0)
    assert len(big) == 2
    # finite chain: pseudo-critical points sit at +-4 cos(pi/N) pulled
    # slightly inward by neighboring modes
    edge = 4.0 * math.cos(PI / 16)
    assert abs(big[0] + edge) < 0.05
    assert abs(big[1] - edge) < 0.05


def test_jp_scan_peaks_at_zero_pairing():
    spec = SPEC16.with_(delta=2.0)
    grid = np.arange(-2.0, 2.0001, 0.05)
    scan = fidelity_scan(spec, "jp", grid, dh=0.01)
    assert any(abs(p) <= 0.05 for p in scan.peaks)
    top = grid[int(np.argmax(scan.chi))]
    assert abs(top) <= 0.05


def test_susceptibility_symmetric_in_detuning():
    grid = np.arange(-6.0, 6.0001, 0.1)
    scan = fidelity_scan(SPEC16, "delta", grid, dh=0.01)
    chi = scan.chi
    flipped = chi[::-1]
    # symmetric up to the forward-difference offset, i.e. one grid step
    assert np.max(np.abs(chi - flipped)) < np.max(np.abs(np.diff(chi))) * 1.5


def test_peak_height_grows_with_chain_length():
    heights = []
    for n in (8, 12, 16):
        spec = SpinChainSpec(n_sites=n, jc=1.0, jp=0.5, delta=0.0, parity="even")
        grid = np.arange(3.0, 5.0001, 0.05)
        scan = fidelity_scan(spec, "delta", grid, dh=0.01)
        heights.append(float(np.max(scan.chi)))
    assert heights[0] < heights[1] < heights[2]


def test_susceptibility_step_robustness():
    c1 = fidelity_susceptibility(SPEC16, "delta", 3.9, 0.01)
    c2 = fidelity_susceptibility(SPEC16, "delta", 3.9, 0.005)
    assert abs(c2 - c1) / c1 < 0.05


def test_sector_mismatch_reported_not_crossed():
    # in the ordered phase the sector energies are quasi-degenerate and
    # their order flips; auto mode must refuse to cross such a flip
    spec = SPEC16
    grid = np.linspace(0.0, 1.0, 201)
    diffs = [
        sector_ground_energy(spec.with_(delta=float(d)), "even")
        - sector_ground_energy(spec.with_(delta=float(d)), "odd")
        for d in grid
    ]
    crossing = None
    for k in range(len(grid) - 1):
        if diffs[k] == 0.0 or diffs[k] * diffs[k + 1] < 0:
            crossing = float(grid[k])
            break
    assert crossing is not None, "expected a sector crossing in [0, 1]"
    with pytest.raises(SectorMismatchError):
        ground_fidelity(spec, "delta", crossing, float(grid[1] - grid[0]), sector="auto")


def test_auto_sector_works_away_from_crossings():
    f = ground_fidelity(SPEC16, "delta", 6.0, 0.01, sector="auto")
    assert 0.99 < f <= 1.0


def test_find_peaks_monotone_is_empty():
    grid = np.linspace(0, 1, 20)
    assert find_peaks(grid, np.exp(grid)) == []


def test_find_peaks_symmetric_double_peak():
    grid = np.linspace(-3, 3, 121)
    values = np.exp(-((grid - 1.0) ** 2) / 0.1) + np.exp(-((grid + 1.0) ** 2) / 0.1)
    peaks = find_peaks(grid, values)
    assert len(peaks) == 2
    assert abs(peaks[0] + 1.0) < 0.05 and abs(peaks[1] - 1.0) < 0.05
    assert abs(peaks[0] + peaks[1]) < 1e-6


def test_find_peaks_quadratic_refinement_recovers_offset_vertex():
    grid = np.linspace(0, 2, 21)
    vertex = 1.03
    values = -((grid - vertex) ** 2)
    peaks = find_peaks(grid, values)
    assert len(peaks) == 1
    assert abs(peaks[0] - vertex) < 1e-9


def test_find_peaks_handles_infinite_marker():
    grid = np.linspace(0, 1, 5)
    values = np.array([0.0, 1.0, math.inf, 1.0, 0.0])
    assert find_peaks(grid, values) == [0.5]


def test_find_peaks_input_guards():
    with pytest.raises(DomainError):
        find_peaks(np.array([0.0, 0.0, 1.0]), np.zeros(3))
    with pytest.raises(DomainError):
        find_peaks(np.zeros(3), np.zeros(4))


def test_spec_with_param_guard():
    with pytest.raises(DomainError):
        spec_with_param(SPEC16, "jc", 1.0)


def test_phase_diagram_regions_and_boundaries():
    deltas = np.arange(-8.0, 8.001, 0.5)
    jps = np.arange(-2.0, 2.001, 0.5)
    diagram = phase_diagram(deltas, jps, jc=1.0)
    assert count_gapped_regions(diagram) == 4
    # boundary columns carry a vanishing gap for every pairing strength
    i_plus = int(np.argmin(np.abs(deltas - 4.0)))
    assert np.all(diagram.gap[i_plus, :] < diagram.threshold)
    # labels: polarized phases outside, pairing-split phases inside
    assert diagram.label[0, 0] == 1
    assert diagram.label[-1, -1] == 0
    mid = int(np.argmin(np.abs(deltas)))
    assert diagram.label[mid, 0] == 3
    assert diagram.label[mid, -1] == 2
    # interior points away from the lines are gapped
    assert diagram.gap[int(np.argmin(np.abs(deltas - 5.0))), 1] > 0.01


def test_phase_labels_change_only_across_small_gap():
    deltas = np.arange(-6.0, 6.001, 0.5)
    jps = np.arange(-1.0, 1.001, 0.25)
    diagram = phase_diagram(deltas, jps, jc=1.0)
    label, gap = diagram.label, diagram.gap
    for i in range(label.shape[0] - 1):
        for j in range(label.shape[1]):
            a, b = label[i, j], label[i + 1, j]
            if a != b and -1 not in (a, b):
                assert min(gap[i, j], gap[i + 1, j]) < 0.5
