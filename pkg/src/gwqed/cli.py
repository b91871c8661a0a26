"""Command-line front end: parameter scans to CSV, checks to JSON.

Subcommands
-----------
waveguide      z-sweep of the coupled-mode amplitudes
dfree          decoherence-free profile ratios and residuals (JSON or gain scan)
slh-check      cascade vs closed-form couplings for one braided pair (JSON)
interactions   J_c / J_p scans over gain, pump phase, or atom spacing
dispersion     excitation spectrum eps_k over the allowed momenta
gap            energy gap scan over detuning or pairing strength
fidelity       ground-state fidelity and susceptibility scan
phase-diagram  continuum gap and phase labels on a (delta, jp) grid

Values accept plain floats or multiples of pi written as ``0.2pi``.  A
config file (``--config``, flat ``key=value`` lines, ``#`` comments) seeds
the values; command-line flags override it.  Every scan echoes its full
effective configuration as ``# key=value`` metadata, so outputs are
reproducible byte for byte.

Exit codes: 0 success, 2 usage error, 3 domain error, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, fields

import numpy as np

from gwqed import __version__
from gwqed.dfree import (
    build_braided_pair,
    df_ratios_m3,
    residual_check,
)
from gwqed.errors import DomainError, NumericalError
from gwqed.interactions import (
    compute_jc,
    compute_jp,
    effective_hamiltonian,
    effective_pair,
    find_coupling_roots,
    scan_vs_gain,
    scan_vs_separation,
    scan_vs_theta,
)
from gwqed.scan import ScanResult, format_value
from gwqed.slh import (
    cascade_left,
    cascade_right,
    extract_pair_coefficients,
    gauge_transformed,
    operator_norm,
)
from gwqed.spinchain import SpinChainSpec, allowed_momenta, dispersion, energy_gap
from gwqed.criticality import fidelity_scan, phase_diagram
from gwqed.waveguide import (
    ModeAmplitudes,
    WaveguideConfig,
    integrate_coupled_wave,
    propagate_analytic,
)

PI = math.pi

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_NUMERICAL = 4

SUBCOMMANDS = (
    "waveguide",
    "dfree",
    "slh-check",
    "interactions",
    "dispersion",
    "gap",
    "fidelity",
    "phase-diagram",
)


def parse_pi_float(text: str) -> float:
    """Parse a float, allowing a trailing ``pi`` multiplier (``0.2pi``)."""
    s = text.strip().lower().replace(" ", "")
    if s.endswith("pi"):
        head = s[:-2]
        if head in ("", "+"):
            return PI
        if head == "-":
            return -PI
        return float(head) * PI
    return float(s)


@dataclass
class RunConfig:
    """Effective parameters of one CLI run (defaults match the figure setups)."""

    subcommand: str
    gain: float = 0.8
    theta_minus: float = 0.0
    ds: float = 0.2 * PI
    jc: float = 1.0
    jp: float = 0.5
    delta: float = 2.0
    n_sites: int = 16
    delta_h: float = 0.01
    center: bool = True
    scan: str | None = None
    scan_min: float | None = None
    scan_max: float | None = None
    steps: int | None = None
    jp_min: float = -2.0
    jp_max: float = 2.0
    jp_steps: int = 16
    continuum: bool = False
    gap_threshold: float = 1e-3
    delta_k: float = 0.0
    loss1: float = 0.0
    loss2: float = 0.0
    z_max: float = 2.0 * PI
    a1: complex = 1.0 + 0.0j
    a2c: complex = 0.0 + 0.0j
    method: str = "auto"
    trials: int = 0
    seed: int = 1234
    out: str | None = None
    fmt: str = "csv"

    def metadata(self) -> dict[str, str]:
        meta = {"version": __version__}
        for f in fields(self):
            value = getattr(self, f.name)
            if value is None:
                continue
            if isinstance(value, bool):
                meta[f.name] = "true" if value else "false"
            elif isinstance(value, complex):
                meta[f.name] = format_value(value.real) + "+" + format_value(value.imag) + "j"
            elif isinstance(value, float):
                meta[f.name] = format_value(value)
            else:
                meta[f.name] = str(value)
        return meta


_FLOAT_KEYS = {
    "gain",
    "theta_minus",
    "ds",
    "jc",
    "jp",
    "delta",
    "delta_h",
    "scan_min",
    "scan_max",
    "jp_min",
    "jp_max",
    "gap_threshold",
    "delta_k",
    "loss1",
    "loss2",
    "z_max",
}
_INT_KEYS = {"n_sites", "steps", "jp_steps", "trials", "seed"}
_BOOL_KEYS = {"center", "continuum"}
_COMPLEX_KEYS = {"a1", "a2c"}
_STR_KEYS = {"scan", "method", "out", "fmt"}


def _coerce(key: str, raw: str):
    if key in _FLOAT_KEYS:
        return parse_pi_float(raw)
    if key in _INT_KEYS:
        return int(raw)
    if key in _BOOL_KEYS:
        lowered = raw.strip().lower()
        if lowered in ("true", "1", "yes"):
            return True
        if lowered in ("false", "0", "no"):
            return False
        raise ValueError(f"cannot parse boolean {raw!r}")
    if key in _COMPLEX_KEYS:
        return complex(raw)
    if key in _STR_KEYS:
        return raw.strip()
    raise KeyError(key)


def read_config_file(path: str) -> dict[str, object]:
    """Flat key=value file; unknown keys or bad values are usage errors."""
    values: dict[str, object] = {}
    try:
        text = open(path, encoding="utf-8").read()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise UsageError(f"{path}:{lineno}: expected key=value, got {body!r}")
        key, raw = (part.strip() for part in body.split("=", 1))
        try:
            values[key] = _coerce(key, raw)
        except KeyError:
            raise UsageError(f"{path}:{lineno}: unknown config key {key!r}") from None
        except ValueError as exc:
            raise UsageError(f"{path}:{lineno}: bad value for {key}: {exc}") from None
    return values


class UsageError(Exception):
    """Malformed invocation (bad flag value, unreadable config file)."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # keep argparse's exit code, route text to stderr
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gwqed", description=__doc__.splitlines()[0])
    parser.add_argument("subcommand", choices=SUBCOMMANDS)
    parser.add_argument("--config", help="key=value config file; flags override it")
    parser.add_argument("--gain", "-g", type=parse_pi_float, default=None)
    parser.add_argument("--theta-minus", type=parse_pi_float, default=None,
                        help="pump phase difference (accepts e.g. 0.5pi)")
    parser.add_argument("--ds", type=parse_pi_float, default=None,
                        help="atom spacing in phase units")
    parser.add_argument("--jc", type=parse_pi_float, default=None)
    parser.add_argument("--jp", type=parse_pi_float, default=None)
    parser.add_argument("--delta", type=parse_pi_float, default=None)
    parser.add_argument("--n", dest="n_sites", type=int, default=None)
    parser.add_argument("--delta-h", type=parse_pi_float, default=None,
                        help="fidelity step")
    parser.add_argument("--center", dest="center", action="store_true", default=None,
                        help="place the braided pair symmetrically about z = 0")
    parser.add_argument("--no-center", dest="center", action="store_false")
    parser.add_argument("--scan", choices=("gain", "theta", "ds", "delta", "jp"),
                        default=None)
    parser.add_argument("--min", dest="scan_min", type=parse_pi_float, default=None)
    parser.add_argument("--max", dest="scan_max", type=parse_pi_float, default=None)
    parser.add_argument("--steps", type=int, default=None)
    parser.add_argument("--jp-min", type=parse_pi_float, default=None)
    parser.add_argument("--jp-max", type=parse_pi_float, default=None)
    parser.add_argument("--jp-steps", type=int, default=None)
    parser.add_argument("--continuum", action="store_true", default=None)
    parser.add_argument("--gap-threshold", type=parse_pi_float, default=None)
    parser.add_argument("--scan-gain", nargs=3, metavar=("MIN", "MAX", "STEPS"),
                        default=None, help="dfree: emit a gain scan as CSV")
    parser.add_argument("--delta-k", type=parse_pi_float, default=None)
    parser.add_argument("--loss1", type=parse_pi_float, default=None)
    parser.add_argument("--loss2", type=parse_pi_float, default=None)
    parser.add_argument("--z-max", type=parse_pi_float, default=None)
    parser.add_argument("--a1", type=complex, default=None)
    parser.add_argument("--a2c", type=complex, default=None)
    parser.add_argument("--method", choices=("auto", "analytic", "rk4"), default=None)
    parser.add_argument("--trials", type=int, default=None,
                        help="slh-check: number of random geometries")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--out", default=None, help="output path (default stdout)")
    parser.add_argument("--format", dest="fmt", choices=("csv", "json"), default=None)
    return parser


def parse_config(argv: list[str]) -> tuple[RunConfig, list[float] | None]:
    """Merge defaults, config file, and flags into a validated RunConfig.

    Returns the config plus the raw dfree --scan-gain triple, which is not
    a RunConfig field.
    """
    args = build_parser().parse_args(argv)
    merged: dict[str, object] = {}
    if args.config:
        merged.update(read_config_file(args.config))
    for f in fields(RunConfig):
        if f.name == "subcommand":
            continue
        flag_value = getattr(args, f.name, None)
        if flag_value is not None:
            merged[f.name] = flag_value
    config = RunConfig(subcommand=args.subcommand, **merged)
    scan_gain = None
    if args.scan_gain is not None:
        lo, hi = parse_pi_float(args.scan_gain[0]), parse_pi_float(args.scan_gain[1])
        scan_gain = [lo, hi, float(int(args.scan_gain[2]))]
    _validate(config, scan_gain)
    return config, scan_gain


def _validate(config: RunConfig, scan_gain) -> None:
    if config.n_sites < 2 or config.n_sites % 2 != 0:
        raise DomainError("chain length must be an even integer >= 2")
    if config.delta_h <= 0:
        raise DomainError("fidelity step must be positive")
    if config.gain < 0:
        raise DomainError("gain must be >= 0")
    if config.steps is not None and config.steps < 2:
        raise DomainError("scans need at least 2 steps")
    if config.scan_min is not None and config.scan_max is not None:
        if not config.scan_min < config.scan_max:
            raise DomainError("scan range must satisfy min < max")
    if scan_gain is not None:
        lo, hi, steps = scan_gain
        if not (lo < hi and lo >= 0 and steps >= 2):
            raise DomainError("--scan-gain needs 0 <= MIN < MAX and STEPS >= 2")
    braided_point_modes = ("slh-check",)
    if config.subcommand in braided_point_modes and not 0 < config.ds < PI:
        raise DomainError("braided mode needs atom spacing 0 < ds < pi")
    if config.subcommand == "interactions":
        scan = config.scan or "gain"
        if scan in ("gain", "theta") and not 0 < config.ds < PI:
            raise DomainError("braided mode needs atom spacing 0 < ds < pi")


def _scan_grid(config: RunConfig, default_min, default_max, default_steps,
               half_offset=False) -> np.ndarray:
    lo = config.scan_min if config.scan_min is not None else default_min
    hi = config.scan_max if config.scan_max is not None else default_max
    steps = config.steps if config.steps is not None else default_steps
    if half_offset:
        step = (hi - lo) / steps
        return lo + step * (np.arange(steps) + 0.5)
    return np.linspace(lo, hi, steps + 1)


def _spec(config: RunConfig) -> SpinChainSpec:
    return SpinChainSpec(
        n_sites=config.n_sites,
        jc=config.jc,
        jp=config.jp,
        delta=config.delta,
        parity="even",
    )


def _run_waveguide(config: RunConfig) -> ScanResult:
    cfg = WaveguideConfig(
        gain=config.gain,
        theta_right=0.5 * config.theta_minus,
        theta_left=-0.5 * config.theta_minus,
        length=max(config.z_max, 1e-9),
        loss1=config.loss1,
        loss2=config.loss2,
        delta_k=config.delta_k,
    )
    init = ModeAmplitudes(a1=config.a1, a2_conj=config.a2c, z=0.0)
    steps = config.steps if config.steps is not None else 200
    zs = np.linspace(0.0, config.z_max, steps + 1)
    method = config.method
    if method == "auto":
        method = "analytic" if (config.loss1 == 0.0 and config.loss2 == 0.0) else "rk4"
    result = ScanResult(header=("z", "re_a1", "im_a1", "re_a2c", "im_a2c"))
    for z in zs:
        if method == "analytic":
            amp = propagate_analytic(cfg, init, float(z))
        else:
            amp = integrate_coupled_wave(cfg, init, float(z))
        result.append((z, amp.a1.real, amp.a1.imag, amp.a2_conj.real, amp.a2_conj.imag))
    result.metadata["resolved_method"] = method
    return result


def _run_dfree_json(config: RunConfig) -> dict:
    profile = df_ratios_m3(config.gain)
    return {
        "gain": config.gain,
        "spacing": profile.spacing,
        "ratios": list(profile.ratios),
        "residual_cosh_abs": abs(profile.residual_cosh),
        "residual_sinh_abs": abs(profile.residual_sinh),
    }


def _run_dfree_scan(scan_gain: list[float]) -> ScanResult:
    lo, hi, steps = scan_gain
    result = ScanResult(
        header=("gain", "middle_ratio", "residual_cosh_abs", "residual_sinh_abs")
    )
    for g in np.linspace(lo, hi, int(steps) + 1):
        profile = df_ratios_m3(float(g))
        result.append(
            (g, profile.ratios[1], abs(profile.residual_cosh), abs(profile.residual_sinh))
        )
    return result


def _run_slh_check(config: RunConfig) -> dict:
    rng = np.random.default_rng(config.seed)
    trials = max(config.trials, 1)
    worst = {
        "l_r_norm": 0.0,
        "l_l_norm": 0.0,
        "h_deviation": 0.0,
        "im_jc": 0.0,
        "im_jp": 0.0,
    }
    report: dict = {}
    for trial in range(trials):
        if config.trials > 0:
            ds = rng.uniform(0.05 * PI, 0.95 * PI)
            gain = rng.uniform(0.0, 1.5)
            theta_r = rng.uniform(0.0, 2 * PI)
            theta_l = rng.uniform(0.0, 2 * PI)
        else:
            ds, gain = config.ds, config.gain
            theta_r, theta_l = 0.5 * config.theta_minus, -0.5 * config.theta_minus
        atom_a, atom_b = build_braided_pair(ds, gain)
        # minimal covering length: the couplings are length-independent and
        # extra pumped guide only amplifies floating-point cancellation
        cfg = WaveguideConfig(
            gain=gain,
            theta_right=theta_r,
            theta_left=theta_l,
            length=atom_b.points[-1].z,
        )
        triplet_r = cascade_right([atom_a, atom_b], cfg)
        triplet_l = cascade_left([atom_a, atom_b], cfg)
        h_total = gauge_transformed(
            triplet_r.hamiltonian + triplet_l.hamiltonian, cfg.theta_plus, 2
        )
        pair = effective_pair(atom_a, atom_b, cfg)
        h_closed = effective_hamiltonian(pair)
        coeffs = extract_pair_coefficients(h_total)
        worst["l_r_norm"] = max(worst["l_r_norm"], operator_norm(triplet_r.jumps[0]))
        worst["l_l_norm"] = max(worst["l_l_norm"], operator_norm(triplet_l.jumps[0]))
        worst["h_deviation"] = max(
            worst["h_deviation"], float(np.max(np.abs(h_total - h_closed)))
        )
        worst["im_jc"] = max(worst["im_jc"], abs(coeffs.exchange.imag))
        worst["im_jp"] = max(worst["im_jp"], abs(coeffs.pairing.imag))
        if trial == 0:
            report.update(
                jc_closed=pair.jc,
                jp_closed=pair.jp,
                jc_cascade=coeffs.exchange.real,
                jp_cascade=coeffs.pairing.real,
            )
    report.update(worst)
    report["trials"] = trials
    return report


def _run_interactions(config: RunConfig) -> ScanResult:
    scan = config.scan or "gain"
    if scan == "gain":
        grid = _scan_grid(config, 0.0, 2.0, 100)
        if np.any(grid < 0):
            raise DomainError("gain scan requires gain >= 0")
        result = scan_vs_gain(config.ds, config.theta_minus, grid, centered=config.center)
    elif scan == "theta":
        grid = _scan_grid(config, 0.0, 4.0 * PI, 200)
        result = scan_vs_theta(config.ds, config.gain, grid, centered=config.center)
    elif scan == "ds":
        grid = _scan_grid(config, 0.02 * PI, 0.98 * PI, 200)
        if np.any(grid <= 0):
            raise DomainError("spacing scan requires ds > 0")
        result = scan_vs_separation(
            config.gain, config.theta_minus, grid, centered=config.center
        )
        jc_roots, jp_roots = find_coupling_roots(
            config.gain,
            config.theta_minus,
            float(grid[0]),
            float(grid[-1]),
            centered=config.center,
        )
        result.metadata["jc_roots"] = ";".join(format_value(r) for r in jc_roots)
        result.metadata["jp_roots"] = ";".join(format_value(r) for r in jp_roots)
    else:
        raise DomainError(f"interactions does not support scan={scan!r}")
    return result


def _run_dispersion(config: RunConfig) -> ScanResult:
    spec = _spec(config)
    result = ScanResult(header=("k", "eps_k"))
    if config.continuum:
        steps = config.steps if config.steps is not None else 400
        ks = np.linspace(0.0, PI, steps + 1)
    else:
        paired, unpaired = allowed_momenta(spec)
        ks = np.sort(np.concatenate([paired, np.asarray(unpaired)]))
    for k in ks:
        result.append((k, dispersion(float(k), spec)))
    return result


def _run_gap(config: RunConfig) -> ScanResult:
    scan = config.scan or "delta"
    if scan not in ("delta", "jp"):
        raise DomainError("gap scan parameter must be delta or jp")
    grid = _scan_grid(config, *((-8.0, 8.0, 320) if scan == "delta" else (-2.0, 2.0, 80)))
    mode = "continuum" if config.continuum else "finite"
    result = ScanResult(header=(scan, "gap"))
    base = _spec(config)
    for value in grid:
        spec = base.with_(**{scan: float(value)})
        result.append((value, energy_gap(spec, mode=mode)))
    result.metadata["mode"] = mode
    return result


def _run_fidelity(config: RunConfig) -> ScanResult:
    scan = config.scan or "delta"
    if scan not in ("delta", "jp"):
        raise DomainError("fidelity scan parameter must be delta or jp")
    # half-step offset keeps exact critical points off the grid
    grid = _scan_grid(
        config,
        *((-8.0, 8.0, 320) if scan == "delta" else (-2.0, 2.0, 80)),
        half_offset=True,
    )
    spec = _spec(config)
    scan_data = fidelity_scan(spec, scan, grid, dh=config.delta_h)
    result = ScanResult(header=("h", "fidelity", "chi_f"))
    for h, f, chi in zip(scan_data.grid, scan_data.fidelity, scan_data.chi):
        result.append((h, f, chi))
    result.metadata["peaks"] = ";".join(format_value(p) for p in scan_data.peaks)
    result.metadata["scan_param"] = scan
    return result


def _run_phase_diagram(config: RunConfig) -> ScanResult:
    steps = config.steps if config.steps is not None else 64
    lo = config.scan_min if config.scan_min is not None else -8.0
    hi = config.scan_max if config.scan_max is not None else 8.0
    deltas = np.linspace(lo, hi, steps + 1)
    jps = np.linspace(config.jp_min, config.jp_max, config.jp_steps + 1)
    diagram = phase_diagram(deltas, jps, jc=config.jc, gap_threshold=config.gap_threshold)
    result = ScanResult(header=("delta", "jp", "gap", "label"))
    for i, d in enumerate(diagram.delta_grid):
        for j, jp in enumerate(diagram.jp_grid):
            result.append((d, jp, diagram.gap[i, j], float(diagram.label[i, j])))
    return result


def run(config: RunConfig, stream, scan_gain=None) -> int:
    """Execute one configured subcommand, writing CSV or JSON to ``stream``."""
    meta = config.metadata()
    if config.subcommand == "dfree":
        if scan_gain is not None:
            result = _run_dfree_scan(scan_gain)
        else:
            payload = _run_dfree_json(config)
            payload["metadata"] = meta
            stream.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
            return EXIT_OK
    elif config.subcommand == "slh-check":
        payload = _run_slh_check(config)
        payload["metadata"] = meta
        stream.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
        return EXIT_OK
    elif config.subcommand == "waveguide":
        result = _run_waveguide(config)
    elif config.subcommand == "interactions":
        result = _run_interactions(config)
    elif config.subcommand == "dispersion":
        result = _run_dispersion(config)
    elif config.subcommand == "gap":
        result = _run_gap(config)
    elif config.subcommand == "fidelity":
        result = _run_fidelity(config)
    elif config.subcommand == "phase-diagram":
        result = _run_phase_diagram(config)
    else:  # unreachable behind argparse choices
        raise DomainError(f"unknown subcommand {config.subcommand}")

    result.metadata = {**meta, **result.metadata}
    if config.fmt == "json":
        stream.write(result.to_json() + "\n")
    else:
        result.write_csv(stream)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        config, scan_gain = parse_config(argv)
    except UsageError as exc:
        print(f"gwqed: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"gwqed: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        if config.out:
            with open(config.out, "w", encoding="utf-8", newline="\n") as handle:
                return run(config, handle, scan_gain)
        return run(config, sys.stdout, scan_gain)
    except DomainError as exc:
        print(f"gwqed: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except NumericalError as exc:
        print(f"gwqed: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    raise SystemExit(main())
