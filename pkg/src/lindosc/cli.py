"""Command-line front end.

Scenario configuration is a flat JSON document with oscillator, diffusion,
initial-state, times and output blocks; command-line flags override file
values.  All commands emit deterministic CSV or JSON with floats at 17
significant digits.  Exit codes: 0 success, 1 validation failure, 2
numerical-consistency failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import warnings

import numpy as np

from . import entropy, model, phasespace, propagator, purity
from .model import (
    ConsistencyError,
    DiffusionSpec,
    InvalidStateError,
    LindbladOps,
    OscillatorSpec,
    ParameterError,
    UnitSystem,
)
from .phasespace import CCSpec, CoherentWindow
from .propagator import GaussianState

RUN_COLUMNS = (
    "t", "sigma_q", "sigma_p", "sigma_qq", "sigma_pp", "sigma_pq",
    "sigma", "nu", "s_vn", "t_eff", "gamma", "s_lin", "s_lin_rate",
    "wehrl", "energy",
)


class ConfigError(ValueError):
    """Malformed or inconsistent scenario configuration."""


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isinf(value):
            return "inf"
        return format(value, ".17g")
    return str(value)


def _load_config(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config root must be a JSON object")
    return cfg


def _complex_from(value) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(value[0], value[1])
    raise ConfigError(f"expected number or [re, im] pair, got {value!r}")


def build_oscillator(cfg: dict, hbar_override: float | None = None) -> OscillatorSpec:
    block = cfg.get("oscillator")
    if not isinstance(block, dict):
        raise ConfigError("missing 'oscillator' block")
    hbar = hbar_override if hbar_override is not None else block.get("hbar", 1.0)
    units = UnitSystem(hbar=hbar, boltzmann=block.get("boltzmann", 1.0))
    try:
        return OscillatorSpec(
            mass=block.get("m", 1.0),
            omega=block["omega"],
            lam=block["lambda"],
            mu=block.get("mu", 0.0),
            units=units,
        )
    except KeyError as exc:
        raise ConfigError(f"oscillator block missing key {exc}") from exc


def build_diffusion(cfg: dict, osc: OscillatorSpec) -> tuple[DiffusionSpec, float | None]:
    """Diffusion coefficients and, for the thermal preset, the bath temperature."""
    block = cfg.get("diffusion")
    if not isinstance(block, dict):
        raise ConfigError("missing 'diffusion' block")
    has_preset = "preset" in block
    has_explicit = any(k in block for k in ("d_qq", "d_pp", "d_pq"))
    has_ops = "ops" in block
    if sum((has_preset, has_explicit, has_ops)) != 1:
        raise ConfigError(
            "diffusion block must give exactly one of: preset, explicit "
            "coefficients, lindblad ops"
        )
    if has_preset:
        preset = block["preset"]
        if preset == "gibbs":
            if "temperature" not in block:
                raise ConfigError("gibbs preset requires 'temperature'")
            temp = block["temperature"]
            return model.preset_gibbs(osc, temp), temp
        if preset == "pure":
            return model.preset_pure_state(osc), None
        raise ConfigError(f"unknown diffusion preset {preset!r}")
    if has_ops:
        ops = LindbladOps(
            ops=tuple(
                (_complex_from(entry["a"]), _complex_from(entry["b"]))
                for entry in block["ops"]
            )
        )
        diff, lam = model.coefficients_from_ops(ops, osc.units)
        scale = max(abs(lam), abs(osc.lam), 1e-300)
        if abs(lam - osc.lam) > 1e-9 * scale:
            raise ConfigError(
                f"friction from lindblad ops ({lam}) disagrees with "
                f"oscillator lambda ({osc.lam})"
            )
        return diff, None
    try:
        return (
            DiffusionSpec(
                d_qq=block["d_qq"], d_pp=block["d_pp"], d_pq=block.get("d_pq", 0.0)
            ),
            None,
        )
    except KeyError as exc:
        raise ConfigError(f"diffusion block missing key {exc}") from exc


def build_initial_state(cfg: dict, osc: OscillatorSpec) -> GaussianState:
    block = cfg.get("initial_state")
    if not isinstance(block, dict):
        raise ConfigError("missing 'initial_state' block")
    kind = block.get("kind")
    explicit = all(
        k in block for k in ("sigma_q", "sigma_p", "sigma_qq", "sigma_pp", "sigma_pq")
    )
    if (kind is None) == (not explicit):
        raise ConfigError(
            "initial_state block must give exactly one source: a 'kind' or "
            "the five explicit moments"
        )
    if explicit:
        state = GaussianState(
            sigma_q=block["sigma_q"],
            sigma_p=block["sigma_p"],
            sigma_qq=block["sigma_qq"],
            sigma_pp=block["sigma_pp"],
            sigma_pq=block["sigma_pq"],
        )
        propagator.require_physical(state, osc.hbar)
        return state
    if kind == "ground":
        return propagator.ground_state(osc)
    if kind == "coherent":
        eta = math.sqrt(osc.hbar / (2 * osc.mass * osc.omega))
        alpha = _complex_from(block.get("alpha", 0.0))
        return CCSpec(eta=eta, r=0.0, alpha=alpha, hbar=osc.hbar).state()
    if kind == "ccs":
        try:
            ccs = CCSpec(
                eta=block["eta"],
                r=block["r"],
                alpha=_complex_from(block.get("alpha", 0.0)),
                hbar=osc.hbar,
            )
        except KeyError as exc:
            raise ConfigError(f"ccs initial state missing key {exc}") from exc
        return ccs.state()
    raise ConfigError(f"unknown initial state kind {kind!r}")


def build_times(cfg: dict) -> list[float]:
    block = cfg.get("times")
    if not isinstance(block, dict):
        raise ConfigError("missing 'times' block")
    if "list" in block:
        times = [float(t) for t in block["list"]]
    else:
        try:
            n = int(block["n_samples"])
            if n < 1:
                raise ConfigError("n_samples must be >= 1")
            times = list(np.linspace(block["t_start"], block["t_end"], n))
        except KeyError as exc:
            raise ConfigError(f"times block missing key {exc}") from exc
    if any(t < 0 for t in times):
        raise ConfigError("times must be >= 0")
    if any(b <= a for a, b in zip(times, times[1:])):
        raise ConfigError("times must be strictly increasing")
    return times


def _window(cfg: dict, osc: OscillatorSpec, args) -> CoherentWindow:
    s_qq = getattr(args, "window_sqq", None)
    if s_qq is None:
        s_qq = cfg.get("window", {}).get("s_qq")
    if s_qq is None:
        return CoherentWindow.matched(osc)
    return CoherentWindow.squeezed(s_qq, hbar=osc.hbar)


def _py(value):
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def _emit(args, cfg: dict, header: list[str], rows: list[list], comments: list[str] | None = None) -> None:
    out_block = cfg.get("output", {})
    fmt = args.format or out_block.get("format", "csv")
    path = args.out or out_block.get("path")
    rows = [[_py(v) for v in row] for row in rows]
    if fmt == "csv":
        buf = io.StringIO()
        for line in comments or []:
            buf.write(f"# {line}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
        text = buf.getvalue()
    elif fmt == "json":
        clean = [
            [None if isinstance(v, float) and math.isnan(v) else v for v in row]
            for row in rows
        ]
        payload = {"rows": [dict(zip(header, row)) for row in clean]}
        if comments:
            payload["metadata"] = comments
        text = json.dumps(payload, indent=1, allow_nan=False) + "\n"
    else:
        raise ConfigError(f"unknown output format {fmt!r}")
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _run_row(t, state: GaussianState, scalars: entropy.DerivedScalars, osc) -> list:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        t_eff = (
            scalars.t_eff
            if scalars.t_eff is not None
            else entropy.effective_temperature(osc, state)
        )
    return [
        t, state.sigma_q, state.sigma_p, state.sigma_qq, state.sigma_pp,
        state.sigma_pq, scalars.sigma_det, scalars.nu, scalars.s_vn, t_eff,
        scalars.gamma, scalars.s_lin,
        scalars.s_lin_rate if scalars.s_lin_rate is not None else math.nan,
        scalars.wehrl, scalars.energy,
    ]


def cmd_validate(args) -> int:
    cfg = _load_config(args.config)
    osc = build_oscillator(cfg, args.hbar)
    diff, _ = build_diffusion(cfg, osc)
    report = model.validate(diff, osc)
    for check in report.checks:
        status = "PASS" if check.passed else "FAIL"
        print(f"constraint {check.name}: {status} (margin={_fmt(float(check.margin))})")
    return 0 if report.all_passed else 1


def _scenario(args):
    cfg = _load_config(args.config)
    osc = build_oscillator(cfg, args.hbar)
    diff, temp = build_diffusion(cfg, osc)
    state0 = build_initial_state(cfg, osc)
    return cfg, osc, diff, temp, state0


def cmd_evolve(args) -> int:
    cfg, osc, diff, temp, state0 = _scenario(args)
    times = build_times(cfg)
    window = _window(cfg, osc, args)
    rows = []
    traj = propagator.sample_trajectory(osc, diff, state0, times, thermal_temperature=temp)
    for state, _ in traj:
        scalars = entropy.derived_scalars(
            osc, state, diff=diff, window=window, thermal_temperature=temp
        )
        rows.append(_run_row(state.t, state, scalars, osc))
    _emit(args, cfg, list(RUN_COLUMNS), rows)
    return 0


def cmd_steady(args) -> int:
    cfg, osc, diff, temp, _ = _scenario(args)
    window = _window(cfg, osc, args)
    state = propagator.steady_state(osc, diff)
    scalars = entropy.derived_scalars(
        osc, state, diff=diff, window=window, thermal_temperature=temp
    )
    row = _run_row("inf", state, scalars, osc)
    _emit(args, cfg, list(RUN_COLUMNS), [row])
    return 0


def _state_at(osc, diff, state0, t: float) -> GaussianState:
    if t == 0:
        return state0
    return propagator.evolve(osc, diff, state0, t)


def cmd_wigner_grid(args) -> int:
    cfg, osc, diff, _, state0 = _scenario(args)
    state = _state_at(osc, diff, state0, args.time)
    grid = phasespace.wigner_grid(
        state, n_q=args.n_q, n_p=args.n_p, width_sigmas=args.width_sigmas
    )
    _emit_grid(args, cfg, grid)
    return 0


def cmd_husimi_grid(args) -> int:
    cfg, osc, diff, _, state0 = _scenario(args)
    state = _state_at(osc, diff, state0, args.time)
    window = _window(cfg, osc, args)
    grid = phasespace.husimi_grid(
        state, window, n_q=args.n_q, n_p=args.n_p, width_sigmas=args.width_sigmas
    )
    _emit_grid(args, cfg, grid)
    return 0


def _emit_grid(args, cfg, grid: phasespace.PhaseSpaceGrid) -> None:
    comments = [f"measure={grid.measure}"]
    rows = [
        [q, p, grid.values[i, j]]
        for i, q in enumerate(grid.q_axis)
        for j, p in enumerate(grid.p_axis)
    ]
    _emit(args, cfg, ["q", "p", "value"], rows, comments=comments)


def cmd_kernel(args) -> int:
    cfg, osc, diff, _, state0 = _scenario(args)
    state = _state_at(osc, diff, state0, args.time)
    half = args.width_sigmas * math.sqrt(state.sigma_qq)
    axis = np.linspace(state.sigma_q - half, state.sigma_q + half, args.n_x)
    rows = []
    for x in axis:
        for y in axis:
            value = phasespace.density_kernel_at(state, x, y, hbar=osc.hbar)
            rows.append([float(x), float(y), value.real, value.imag])
    _emit(args, cfg, ["x", "y", "re", "im"], rows)
    return 0


def cmd_purity_scan(args) -> int:
    cfg, osc, diff, _, state0 = _scenario(args)
    times = build_times(cfg)
    reports = purity.purity_scan(osc, diff, state0, times)
    residual_names = (
        "diffusion_determinant", "mixed_balance", "cross_balance",
        "constant_sigma_qq", "constant_sigma_pp", "constant_sigma_pq",
    )
    header = ["t", "sigma", "gamma", "r", "is_pure", "preserving"] + [
        f"res_{n}" for n in residual_names
    ]
    rows = []
    for rep in reports:
        rows.append(
            [rep.t, rep.sigma_det, rep.gamma, rep.r, rep.is_pure, rep.preserving]
            + [rep.conditions.get(n, math.nan) for n in residual_names]
        )
    _emit(args, cfg, header, rows)
    return 0


def _selftest_checks(seed: int):
    rng = np.random.default_rng(seed)
    results = []

    margins = []
    for _ in range(200):
        ab = rng.standard_normal(4) * 2
        ops = LindbladOps(ops=((complex(ab[0], ab[1]), complex(ab[2], ab[3])),))
        diff, lam = model.coefficients_from_ops(ops)
        margins.append(model.determinant_margin(diff, lam, 1.0))
    results.append(("coefficient determinant margin >= 0", min(margins) >= -1e-12))

    ok = True
    for _ in range(100):
        omega = rng.uniform(0.5, 2.0)
        lam = rng.uniform(0.01, 0.3) * omega
        mu = rng.uniform(-0.5, 0.5) * omega
        osc = OscillatorSpec(mass=rng.uniform(0.5, 2.0), omega=omega, lam=lam, mu=mu)
        d_qq, d_pp = rng.uniform(0.05, 0.5, 2)
        floor = lam / 2
        scale = max(floor, 0.05) / math.sqrt(d_qq * d_pp) * rng.uniform(1.0, 4.0)
        d_qq *= scale
        d_pp *= scale
        cap = math.sqrt(d_qq * d_pp - floor**2)
        d_pq = rng.uniform(-0.9, 0.9) * cap
        diff = DiffusionSpec(d_qq=d_qq, d_pp=d_pp, d_pq=d_pq)
        state0 = propagator.ground_state(osc)
        for t in np.linspace(0, 10 / lam, 23)[1:]:
            det = propagator.evolve(osc, diff, state0, float(t)).uncertainty_det
            if det < 0.25 * (1 - 1e-10):
                ok = False
    results.append(("uncertainty preserved along evolution", ok))

    ok = True
    for _ in range(500):
        s_qq, s_pp = np.exp(rng.uniform(-1.5, 1.5, 2))
        r = rng.uniform(-0.99, 0.99)
        s_pq = r * math.sqrt(s_qq * s_pp)
        det = s_qq * s_pp - s_pq**2
        scale = max(1.0, 0.5 / math.sqrt(det)) * (1 + rng.uniform(0, 3))
        state = GaussianState(
            rng.normal(), rng.normal(), s_qq * scale, s_pp * scale, s_pq * scale
        )
        s = entropy.von_neumann_entropy(state)
        window = CoherentWindow.squeezed(math.sqrt(state.sigma_qq / state.sigma_pp) / 2 * 1.0)
        wehrl = entropy.wehrl_entropy_closed(state, window)
        if not (
            wehrl >= max(1.0, s) - 1e-9
            and entropy.linear_entropy(state) <= 1 - math.exp(-s) + 1e-12
            and entropy.minimized_uncertainty_bound(state) >= -1e-12
        ):
            ok = False
    results.append(("entropy inequality chain", ok))
    return results


def cmd_selftest(args) -> int:
    results = _selftest_checks(args.seed)
    all_ok = True
    for name, ok in results:
        print(f"selftest {name}: {'PASS' if ok else 'FAIL'}")
        all_ok = all_ok and ok
    return 0 if all_ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lindosc",
        description=(
            "Gaussian-state simulator for the damped quantum harmonic "
            "oscillator under Lindblad dynamics"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, config_required=True):
        p.add_argument("--config", required=config_required, help="scenario JSON file")
        p.add_argument("--format", choices=("csv", "json"), default=None)
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--hbar", type=float, default=None, help="override hbar")
        p.add_argument(
            "--window-sqq", type=float, default=None,
            help="position variance of the smoothing window (squeezing)",
        )

    p = sub.add_parser("validate", help="check the diffusion-coefficient constraints")
    common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("evolve", help="sample the trajectory with derived scalars")
    common(p)
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("steady", help="asymptotic state and derived scalars")
    common(p)
    p.set_defaults(func=cmd_steady)

    for name, func in (("wigner-grid", cmd_wigner_grid), ("husimi-grid", cmd_husimi_grid)):
        p = sub.add_parser(name, help=f"emit a {name.split('-')[0]} phase-space grid")
        common(p)
        p.add_argument("--time", type=float, default=0.0)
        p.add_argument("--n-q", type=int, default=64)
        p.add_argument("--n-p", type=int, default=64)
        p.add_argument("--width-sigmas", type=float, default=8.0)
        p.set_defaults(func=func)

    p = sub.add_parser("kernel", help="emit the coordinate density kernel on a grid")
    common(p)
    p.add_argument("--time", type=float, default=0.0)
    p.add_argument("--n-x", type=int, default=21)
    p.add_argument("--width-sigmas", type=float, default=4.0)
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("purity-scan", help="per-time purity reports")
    common(p)
    p.set_defaults(func=cmd_purity_scan)

    p = sub.add_parser("selftest", help="run built-in random property sweeps")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_selftest)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ParameterError, InvalidStateError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ConsistencyError as exc:
        print(f"numerical-consistency error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
