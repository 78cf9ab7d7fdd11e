"""Configuration-driven command line entry point.

Subcommands: ring, select, born, current, spread.  Every run validates
its config strictly, echoes the fully resolved config (defaults
included, plus the artifact version) into the output directory, and
writes CSV/JSON results plus an SVG plot where the experiment produces a
curve.  Identical (config, seed) runs produce byte-identical CSV and
JSON regardless of worker count.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
The output directory resolves as: --out flag, else the COHERENTLAB_OUT
environment variable, else the config's "out" entry.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .borngeo import sweep_transition_prob
from .config import ConfigError, resolve_config
from .currents import (
    FieldMode,
    Trajectory,
    current_divergence,
    current_j,
    displacement_from_current,
    trajectories_from_csv,
    vacuum_persistence,
)
from .modes import ModeBasis
from .reporting import svg_line_plot, write_csv, write_json
from .ring import (
    Absorber,
    classical_survival,
    fourier_mode_state,
    survival_curve,
    uniform_ensemble,
    uniform_state,
    von_mises_state,
)
from .selection import (
    UrgencySchedule,
    no_drift,
    offset_spawn,
    record_as_dict,
    run_sequence,
    seeded_spawn,
)
from .states import CoherentPoint, SuperposedState

#: CODATA value of the reduced Planck constant, J s.
HBAR_SI = 1.054571817e-34

ENV_OUT = "COHERENTLAB_OUT"


def spread_estimate(t: float, x: float, m: float) -> float:
    """Free spreading t * (hbar / x) / m of a packet squeezed through width x.

    SI units: t in seconds, x in meters, m in kilograms; the result is in
    meters.  All inputs must be strictly positive.
    """
    for name, value in (("t", t), ("x", x), ("m", m)):
        if not (value > 0 and np.isfinite(value)):
            raise ValueError(f"{name} must be positive and finite, got {value}")
    return t * (HBAR_SI / x) / m


def _echo_config(outdir: Path, config: dict) -> None:
    echoed = dict(config)
    echoed["version"] = __version__
    echoed["out"] = str(outdir)
    write_json(outdir / "config_resolved.json", echoed)


def _run_ring(config: dict, outdir: Path) -> None:
    p = config["parameters"]
    init = p["initial"]
    if init["profile"] == "uniform":
        state = uniform_state(p["n_grid"], p["mass"])
    elif init["profile"] == "von_mises":
        state = von_mises_state(
            p["n_grid"], init["center"], init["concentration"], init["boost"], p["mass"]
        )
    else:
        state = fourier_mode_state(p["n_grid"], init["mode"], p["mass"])
    a = p["absorber"]
    absorber = Absorber(
        kind=a["kind"], center=a["center"], strength=a["strength"],
        width=a["width"], sigma=a["sigma"],
    )
    curve = survival_curve(state, absorber, p["dt"], p["steps"], p["record_every"])
    write_csv(
        outdir / "survival.csv",
        ["t (natural units)", "norm (dimensionless)"],
        zip(curve.t.tolist(), curve.survival.tolist()),
    )
    series = [(curve.t, curve.survival, "quantum")]
    if p["classical"] is not None:
        c = p["classical"]
        ensemble = uniform_ensemble(c["members"], config["seed"])
        classical = classical_survival(ensemble, c["region_center"], c["region_width"], curve.t)
        write_csv(
            outdir / "classical.csv",
            ["t (natural units)", "survival (fraction)"],
            zip(classical.t.tolist(), classical.survival.tolist()),
        )
        series.append((classical.t, classical.survival, "classical"))
    svg_line_plot(
        outdir / "survival.svg",
        series,
        title="Ring survival",
        xlabel="t (natural units)",
        ylabel="survival",
    )


def _run_select(config: dict, outdir: Path) -> None:
    p = config["parameters"]
    basis = ModeBasis(
        omegas=np.array(p["basis"]["omegas"]), weights=np.array(p["basis"]["weights"])
    )
    coeffs, points = [], []
    for comp in p["initial"]["components"]:
        re = comp["coeff"][0]
        im = comp["coeff"][1] if len(comp["coeff"]) > 1 else 0.0
        coeffs.append(complex(re, im))
        points.append(CoherentPoint(q=np.array(comp["q"]), p=np.array(comp["p"])))
    state = SuperposedState(coeffs, points, basis)
    schedule = UrgencySchedule(p["schedule"]["energy"])
    d = p["drift"]
    if d["kind"] == "none":
        drift = no_drift
    elif d["kind"] == "offset_spawn":
        drift = offset_spawn(d["coeff"], d["dq"], d["dp"])
    else:
        drift = seeded_spawn(config["seed"], d["count"], d["spread"], d["coeff"])
    records = run_sequence(state, schedule, drift, p["n_events"], p["t0"])
    n = basis.n_modes
    header = (
        ["index", "time (natural units)", "v (dimensionless)", "blocked (bool)"]
        + [f"q{k} (quadrature units)" for k in range(n)]
        + [f"p{k} (quadrature units)" for k in range(n)]
    )
    rows = [
        [r.index, r.time, r.v_at_choice, r.blocked]
        + [float(v) for v in r.chosen.q]
        + [float(v) for v in r.chosen.p]
        for r in records
    ]
    write_csv(outdir / "events.csv", header, rows)
    write_json(outdir / "events.json", {"events": [record_as_dict(r) for r in records]})
    svg_line_plot(
        outdir / "events.svg",
        [([r.time for r in records], [r.v_at_choice for r in records], "v at choice")],
        title="Selection events",
        xlabel="t (natural units)",
        ylabel="v",
    )


def _run_born(config: dict, outdir: Path, workers: int) -> None:
    p = config["parameters"]
    rows = sweep_transition_prob(
        p["thetas"], p["samples"], config["seed"], shards=p["shards"], workers=workers
    )
    write_csv(
        outdir / "born.csv",
        [
            "theta (rad)",
            "n (count)",
            "p_hat (dimensionless)",
            "stderr (dimensionless)",
            "cos2theta (dimensionless)",
            "z_score (dimensionless)",
        ],
        [[r["theta"], r["n"], r["p_hat"], r["stderr"], r["cos2theta"], r["z_score"]] for r in rows],
    )
    thetas = [r["theta"] for r in rows]
    svg_line_plot(
        outdir / "born.svg",
        [
            (thetas, [r["p_hat"] for r in rows], "measured"),
            (thetas, [r["cos2theta"] for r in rows], "cos^2 theta"),
        ],
        title="Acceptance frequency vs transition angle",
        xlabel="theta (rad)",
        ylabel="acceptance",
    )


def _run_current(config: dict, outdir: Path) -> None:
    p = config["parameters"]
    modes = [
        FieldMode(k_vec=np.array(m["k"]), weight=m["weight"], polarization=m["polarization"])
        for m in p["modes"]
    ]
    traj_spec = p["trajectories"]
    if isinstance(traj_spec, dict):
        trajectories = trajectories_from_csv(traj_spec["csv"])
    else:
        trajectories = [
            Trajectory.from_breakpoints(t["charge"], t["points"]) for t in traj_spec
        ]
    point = displacement_from_current(trajectories, modes)
    persistence = vacuum_persistence(trajectories, modes)
    header = [
        "mode (index)",
        "k0 (natural units)", "kx (natural units)", "ky (natural units)", "kz (natural units)",
        "weight (dimensionless)", "polarization (index)",
        "j0_re", "j0_im", "jx_re", "jx_im", "jy_re", "jy_im", "jz_re", "jz_im",
        "k_dot_j_re", "k_dot_j_im",
        "q (quadrature units)", "p (quadrature units)",
    ]
    rows = []
    for i, mode in enumerate(modes):
        j = current_j(trajectories, mode.k4)
        div = current_divergence(trajectories, mode.k4)
        rows.append(
            [i, mode.omega, *[float(v) for v in mode.k_vec], mode.weight, mode.polarization]
            + [float(f(j[mu])) for mu in range(4) for f in (lambda z: z.real, lambda z: z.imag)]
            + [div.real, div.imag, float(point.q[i]), float(point.p[i])]
        )
    write_csv(outdir / "current.csv", header, rows)
    write_json(
        outdir / "current.json",
        {
            "vacuum_persistence": persistence,
            "n_modes": len(modes),
            "n_trajectories": len(trajectories),
            "displacement": {
                "q": [float(v) for v in point.q],
                "p": [float(v) for v in point.p],
            },
        },
    )


def _run_spread(config: dict, outdir: Path) -> None:
    p = config["parameters"]
    result = spread_estimate(p["t_seconds"], p["x_meters"], p["mass_kg"])
    write_json(
        outdir / "spread.json",
        {
            "t_seconds": p["t_seconds"],
            "x_meters": p["x_meters"],
            "mass_kg": p["mass_kg"],
            "spread_meters": result,
        },
    )


def run(config: dict, workers: int = 1) -> None:
    """Dispatch a resolved config to its experiment runner."""
    outdir = Path(config["out"])
    outdir.mkdir(parents=True, exist_ok=True)
    _echo_config(outdir, config)
    experiment = config["experiment"]
    if experiment == "ring":
        _run_ring(config, outdir)
    elif experiment == "select":
        _run_select(config, outdir)
    elif experiment == "born":
        _run_born(config, outdir, workers)
    elif experiment == "current":
        _run_current(config, outdir)
    else:
        _run_spread(config, outdir)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coherentlab",
        description="Coherent-state dynamics laboratory experiment runner",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name in ("ring", "select", "born", "current", "spread"):
        sp = sub.add_parser(name, help=f"run the {name} experiment family")
        sp.add_argument("--config", required=True, help="path to the JSON config file")
        sp.add_argument("--out", default=None, help="output directory")
        sp.add_argument("--seed", type=int, default=None, help="seed override")
        sp.add_argument("--workers", type=int, default=1, help="worker threads (never changes results)")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        with open(args.config) as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error[config]: cannot read config: {exc}", file=sys.stderr)
        return 2
    if not isinstance(raw, dict):
        print("error[config]: config must be a JSON object", file=sys.stderr)
        return 2
    raw.setdefault("experiment", args.experiment)
    if raw["experiment"] != args.experiment:
        print(
            f"error[config]: config is for experiment {raw['experiment']!r} "
            f"but the {args.experiment!r} subcommand was invoked",
            file=sys.stderr,
        )
        return 2
    if args.seed is not None:
        raw["seed"] = args.seed
    try:
        config = resolve_config(raw)
    except ConfigError as exc:
        print(f"error[config]: {exc}", file=sys.stderr)
        return 2
    out = args.out or os.environ.get(ENV_OUT) or config.get("out")
    if not out:
        print("error[config]: no output directory (use --out, the config, or "
              f"{ENV_OUT})", file=sys.stderr)
        return 2
    config["out"] = out
    if args.workers < 1:
        print("error[config]: workers must be >= 1", file=sys.stderr)
        return 2
    try:
        run(config, workers=args.workers)
    except (ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"error[numeric]: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error[io]: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
