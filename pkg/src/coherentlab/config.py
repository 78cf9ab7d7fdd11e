"""Strict experiment configuration schema.

Configs are plain JSON objects.  Every key is checked against the schema
for its experiment; unknown or misspelled keys are rejected before any
computation starts, and resolution fills in all defaults so the echoed
config is complete.
"""

from __future__ import annotations

import numpy as np

EXPERIMENTS = ("ring", "select", "born", "current", "spread")

_REQUIRED = object()


class ConfigError(ValueError):
    """Invalid or unknown configuration content."""


def _strict(raw, spec: dict, where: str) -> dict:
    if not isinstance(raw, dict):
        raise ConfigError(f"{where} must be an object")
    for key in raw:
        if key not in spec:
            raise ConfigError(f"unknown key {key!r} in {where}")
    out = {}
    for key, (default, cast) in spec.items():
        if key in raw:
            out[key] = cast(raw[key], f"{where}.{key}")
        elif default is _REQUIRED:
            raise ConfigError(f"missing required key {key!r} in {where}")
        else:
            out[key] = default
    return out


def _float(value, where, minimum=None, maximum=None, strict_min=False):
    try:
        v = float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{where} must be a number") from None
    if not np.isfinite(v):
        raise ConfigError(f"{where} must be finite")
    if minimum is not None and (v <= minimum if strict_min else v < minimum):
        raise ConfigError(f"{where} must be {'>' if strict_min else '>='} {minimum}")
    if maximum is not None and v > maximum:
        raise ConfigError(f"{where} must be <= {maximum}")
    return v


def _int(value, where, minimum=None):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{where} must be an integer")
    if minimum is not None and value < minimum:
        raise ConfigError(f"{where} must be >= {minimum}")
    return value


def _str_choice(choices):
    def cast(value, where):
        if value not in choices:
            raise ConfigError(f"{where} must be one of {sorted(choices)}")
        return value

    return cast


def _float_list(value, where, min_len=1):
    if not isinstance(value, list) or len(value) < min_len:
        raise ConfigError(f"{where} must be a list of at least {min_len} number(s)")
    return [_float(v, f"{where}[{i}]") for i, v in enumerate(value)]


def _absorber(value, where):
    out = _strict(
        value,
        {
            "kind": (_REQUIRED, _str_choice(("delta", "plateau"))),
            "center": (0.0, lambda v, w: _float(v, w, minimum=0.0)),
            "strength": (_REQUIRED, lambda v, w: _float(v, w, minimum=0.0)),
            "width": (None, lambda v, w: _float(v, w, minimum=0.0, strict_min=True)),
            "sigma": (None, lambda v, w: _float(v, w, minimum=0.0, strict_min=True)),
        },
        where,
    )
    if out["center"] >= 1.0:
        raise ConfigError(f"{where}.center must lie in [0, 1)")
    if out["kind"] == "plateau" and (out["width"] is None or out["sigma"] is None):
        raise ConfigError(f"{where} of kind 'plateau' needs width and sigma")
    return out


def _ring_initial(value, where):
    return _strict(
        value,
        {
            "profile": ("uniform", _str_choice(("uniform", "von_mises", "fourier_mode"))),
            "center": (0.5, _float),
            "concentration": (40.0, lambda v, w: _float(v, w, minimum=0.0, strict_min=True)),
            "boost": (0, _int),
            "mode": (1, _int),
        },
        where,
    )


def _classical(value, where):
    if value is None:
        return None
    return _strict(
        value,
        {
            "members": (100000, lambda v, w: _int(v, w, minimum=1)),
            "region_center": (0.0, _float),
            "region_width": (_REQUIRED, lambda v, w: _float(v, w, minimum=0.0, maximum=1.0)),
        },
        where,
    )


def _ring_params(raw, where):
    if not isinstance(raw, dict):
        raise ConfigError(f"{where} must be an object")
    raw = dict(raw)
    raw.setdefault("initial", {})
    return _strict(
        raw,
        {
            "n_grid": (256, lambda v, w: _int(v, w, minimum=64)),
            "mass": (1.0, lambda v, w: _float(v, w, minimum=0.0, strict_min=True)),
            "dt": (2.5e-4, lambda v, w: _float(v, w, minimum=0.0, strict_min=True)),
            "steps": (20000, lambda v, w: _int(v, w, minimum=1)),
            "record_every": (10, lambda v, w: _int(v, w, minimum=1)),
            "absorber": (_REQUIRED, _absorber),
            "initial": (_REQUIRED, _ring_initial),
            "classical": (None, _classical),
        },
        where,
    )


def _components(value, where):
    if not isinstance(value, list) or not value:
        raise ConfigError(f"{where} must be a non-empty list")
    out = []
    for i, comp in enumerate(value):
        c = _strict(
            comp,
            {
                "coeff": (_REQUIRED, lambda v, w: _float_list(v, w, min_len=1)),
                "q": (_REQUIRED, _float_list),
                "p": (_REQUIRED, _float_list),
            },
            f"{where}[{i}]",
        )
        if len(c["coeff"]) > 2:
            raise ConfigError(f"{where}[{i}].coeff must be [re] or [re, im]")
        if len(c["q"]) != len(c["p"]):
            raise ConfigError(f"{where}[{i}] q and p lengths differ")
        out.append(c)
    return out


def _basis(value, where):
    out = _strict(
        value,
        {
            "omegas": (_REQUIRED, _float_list),
            "weights": (None, _float_list),
        },
        where,
    )
    if out["weights"] is None:
        out["weights"] = [1.0] * len(out["omegas"])
    if len(out["weights"]) != len(out["omegas"]):
        raise ConfigError(f"{where} omegas and weights lengths differ")
    return out


def _schedule(value, where):
    out = _strict(value, {"energy": (_REQUIRED, lambda v, w: v)}, where)
    e = out["energy"]
    if isinstance(e, list):
        out["energy"] = [_float(v, f"{where}.energy[{i}]", minimum=0.0, strict_min=True) for i, v in enumerate(e)]
    else:
        out["energy"] = _float(e, f"{where}.energy", minimum=0.0, strict_min=True)
    return out


def _drift(value, where):
    out = _strict(
        value,
        {
            "kind": ("none", _str_choice(("none", "offset_spawn", "seeded_spawn"))),
            "coeff": (0.1, _float),
            "dq": (None, _float_list),
            "dp": (None, _float_list),
            "count": (1, lambda v, w: _int(v, w, minimum=1)),
            "spread": (8.0, lambda v, w: _float(v, w, minimum=0.0, strict_min=True)),
        },
        where,
    )
    if out["kind"] == "offset_spawn" and (out["dq"] is None or out["dp"] is None):
        raise ConfigError(f"{where} of kind 'offset_spawn' needs dq and dp")
    return out


def _select_params(raw, where):
    if not isinstance(raw, dict):
        raise ConfigError(f"{where} must be an object")
    raw = dict(raw)
    raw.setdefault("schedule", {"energy": 1.0})
    raw.setdefault("drift", {})
    out = _strict(
        raw,
        {
            "basis": (_REQUIRED, _basis),
            "initial": (_REQUIRED, lambda v, w: _strict(v, {"components": (_REQUIRED, _components)}, w)),
            "n_events": (3, lambda v, w: _int(v, w, minimum=1)),
            "schedule": (_REQUIRED, _schedule),
            "drift": (_REQUIRED, _drift),
            "t0": (0.0, _float),
        },
        where,
    )
    n_modes = len(out["basis"]["omegas"])
    for i, comp in enumerate(out["initial"]["components"]):
        if len(comp["q"]) != n_modes:
            raise ConfigError(f"{where}.initial.components[{i}] does not match the basis mode count")
    return out


def _born_params(raw, where):
    out = _strict(
        raw,
        {
            "thetas": ([round(0.1 * i, 10) for i in range(1, 16)], _float_list),
            "samples": (100000, lambda v, w: _int(v, w, minimum=1)),
            "shards": (16, lambda v, w: _int(v, w, minimum=1)),
        },
        where,
    )
    for i, theta in enumerate(out["thetas"]):
        if not (0.0 <= theta <= np.pi / 2):
            raise ConfigError(f"{where}.thetas[{i}] must lie in [0, pi/2]")
    return out


def _modes(value, where):
    if not isinstance(value, list) or not value:
        raise ConfigError(f"{where} must be a non-empty list")
    out = []
    for i, mode in enumerate(value):
        m = _strict(
            mode,
            {
                "k": (_REQUIRED, lambda v, w: _float_list(v, w, min_len=3)),
                "weight": (1.0, lambda v, w: _float(v, w, minimum=0.0, strict_min=True)),
                "polarization": (0, lambda v, w: _int(v, w, minimum=0)),
            },
            f"{where}[{i}]",
        )
        if len(m["k"]) != 3:
            raise ConfigError(f"{where}[{i}].k must be a 3-vector")
        if m["polarization"] not in (0, 1):
            raise ConfigError(f"{where}[{i}].polarization must be 0 or 1")
        out.append(m)
    return out


def _trajectories(value, where):
    if isinstance(value, dict):
        return _strict(value, {"csv": (_REQUIRED, lambda v, w: str(v))}, where)
    if not isinstance(value, list) or not value:
        raise ConfigError(f"{where} must be a non-empty list or {{'csv': path}}")
    out = []
    for i, traj in enumerate(value):
        t = _strict(
            traj,
            {
                "charge": (_REQUIRED, _float),
                "points": (_REQUIRED, lambda v, w: v),
            },
            f"{where}[{i}]",
        )
        pts = t["points"]
        if not isinstance(pts, list) or len(pts) < 2:
            raise ConfigError(f"{where}[{i}].points needs at least two [t, x, y, z] rows")
        t["points"] = [_float_list(row, f"{where}[{i}].points[{j}]", min_len=4) for j, row in enumerate(pts)]
        for j, row in enumerate(t["points"]):
            if len(row) != 4:
                raise ConfigError(f"{where}[{i}].points[{j}] must be [t, x, y, z]")
        out.append(t)
    return out


def _current_params(raw, where):
    return _strict(
        raw,
        {
            "modes": (_REQUIRED, _modes),
            "trajectories": (_REQUIRED, _trajectories),
        },
        where,
    )


def _spread_params(raw, where):
    return _strict(
        raw,
        {
            "t_seconds": (_REQUIRED, lambda v, w: _float(v, w, minimum=0.0, strict_min=True)),
            "x_meters": (_REQUIRED, lambda v, w: _float(v, w, minimum=0.0, strict_min=True)),
            "mass_kg": (_REQUIRED, lambda v, w: _float(v, w, minimum=0.0, strict_min=True)),
        },
        where,
    )


_PARAM_RESOLVERS = {
    "ring": _ring_params,
    "select": _select_params,
    "born": _born_params,
    "current": _current_params,
    "spread": _spread_params,
}


def resolve_config(raw: dict) -> dict:
    """Validate a raw config object and fill in every default."""
    top = _strict(
        raw,
        {
            "experiment": (_REQUIRED, _str_choice(EXPERIMENTS)),
            "seed": (0, lambda v, w: _int(v, w, minimum=0)),
            "out": (None, lambda v, w: str(v)),
            "parameters": ({}, lambda v, w: v),
        },
        "config",
    )
    resolver = _PARAM_RESOLVERS[top["experiment"]]
    top["parameters"] = resolver(top["parameters"], f"config.parameters({top['experiment']})")
    return top
