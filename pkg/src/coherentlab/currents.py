"""Classical-current source terms for the field modes.

A charged particle on a piecewise-linear trajectory x(t) sources, for an
on-shell wave 4-vector k (k0 = |k|, metric signature (+,-,-,-), so
k.x = k0 t - k_vec . x_vec), the current

    J_mu(k) = sum_particles -i e * integral dt (dx_mu/dt) exp(i k.x)

which is closed-form per linear segment: a segment entered at event
x(t_a) with constant 4-velocity v = (1, v_vec) over duration dt
contributes -i e * v_mu * exp(i k.x(t_a)) * (exp(i phi dt) - 1)/(i phi)
with phi = k.v (the phi -> 0 limit is dt).

The mode-summed bracket of two per-mode 4-vectors is
sum_k weight_k X(k).Y(k) with the Lorentz contraction
X.Y = X0 Y0 - X1 Y1 - X2 Y2 - X3 Y3 (bilinear, no conjugation; callers
conjugate one side where needed).  Note that for finite open segments
k.J does not vanish (the endpoints source charge); use
current_divergence to inspect it.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .modes import ModeBasis
from .states import CoherentPoint, SuperposedState

ON_SHELL_TOL = 1e-9

#: metric tensor diag(+1, -1, -1, -1) as contraction signs
_METRIC_SIGNS = np.array([1.0, -1.0, -1.0, -1.0])


@dataclass(frozen=True)
class FourVector:
    """Complex 4-vector with metric signature (+,-,-,-)."""

    components: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.components, dtype=complex)
        if c.shape != (4,):
            raise ValueError("a four-vector has exactly 4 components")
        if not np.all(np.isfinite(c)):
            raise ValueError("four-vector components must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "components", c)

    def __getitem__(self, mu: int) -> complex:
        return complex(self.components[mu])

    @property
    def time(self) -> complex:
        return complex(self.components[0])

    @property
    def spatial(self) -> np.ndarray:
        return self.components[1:]


def lorentz_dot(x, y) -> complex:
    """Contraction X.Y = X0 Y0 - X.Y (spatial), bilinear, no conjugation."""
    xc = x.components if isinstance(x, FourVector) else np.asarray(x, dtype=complex)
    yc = y.components if isinstance(y, FourVector) else np.asarray(y, dtype=complex)
    return complex(np.sum(_METRIC_SIGNS * xc * yc))


@dataclass(frozen=True)
class Trajectory:
    """Piecewise-linear charged-particle worldline.

    Breakpoints are (t, x, y, z) events with strictly increasing t; every
    segment must be subluminal (|v| < 1, natural units c = 1).
    """

    charge: float
    times: np.ndarray
    positions: np.ndarray

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        positions = np.asarray(self.positions, dtype=float)
        if times.ndim != 1 or times.size < 2:
            raise ValueError("a trajectory needs at least two breakpoints")
        if positions.shape != (times.size, 3):
            raise ValueError("positions must have shape (n_breakpoints, 3)")
        if not (np.all(np.isfinite(times)) and np.all(np.isfinite(positions))):
            raise ValueError("breakpoints must be finite")
        dt = np.diff(times)
        if np.any(dt <= 0):
            raise ValueError("breakpoint times must strictly increase")
        speeds = np.linalg.norm(np.diff(positions, axis=0), axis=1) / dt
        if np.any(speeds >= 1.0):
            raise ValueError(f"superluminal segment (max |v| = {speeds.max():g})")
        if not np.isfinite(self.charge):
            raise ValueError("charge must be finite")
        times.setflags(write=False)
        positions.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "positions", positions)

    @classmethod
    def from_breakpoints(cls, charge: float, breakpoints) -> "Trajectory":
        """Build from an iterable of (t, (x, y, z)) or (t, x, y, z) rows."""
        ts, xs = [], []
        for bp in breakpoints:
            if len(bp) == 2:
                t, xyz = bp
            else:
                t, xyz = bp[0], bp[1:4]
            ts.append(float(t))
            xs.append([float(v) for v in xyz])
        return cls(charge=charge, times=np.array(ts), positions=np.array(xs))

    @property
    def span(self) -> tuple[float, float]:
        return float(self.times[0]), float(self.times[-1])


def _check_on_shell(k) -> np.ndarray:
    k = np.asarray(k, dtype=float)
    if k.shape != (4,):
        raise ValueError("the wave vector must have 4 components (k0, kx, ky, kz)")
    if abs(k[0] - np.linalg.norm(k[1:])) > ON_SHELL_TOL:
        raise ValueError(
            f"wave vector off the mass shell: k0 = {k[0]:g}, |k| = {np.linalg.norm(k[1:]):g}"
        )
    return k


def _check_common_span(trajectories) -> None:
    spans = {traj.span for traj in trajectories}
    if len(spans) > 1:
        raise ValueError(f"trajectories must share one time interval, got {sorted(spans)}")


def current_j(trajectories, k) -> FourVector:
    """Total current 4-vector J_mu(k) of a trajectory set at on-shell k."""
    trajectories = list(trajectories)
    if not trajectories:
        raise ValueError("need at least one trajectory")
    k = _check_on_shell(k)
    _check_common_span(trajectories)
    total = np.zeros(4, dtype=complex)
    for traj in trajectories:
        if traj.charge == 0.0:
            continue
        dts = np.diff(traj.times)
        vel = np.diff(traj.positions, axis=0) / dts[:, None]
        # k.x at segment entry events and phi = k.v per segment
        kx_a = k[0] * traj.times[:-1] - traj.positions[:-1] @ k[1:]
        phi = k[0] - vel @ k[1:]
        seg = np.empty(dts.size, dtype=complex)
        small = np.abs(phi * dts) < 1e-8
        ph = phi[~small]
        seg[~small] = (np.exp(1j * ph * dts[~small]) - 1.0) / (1j * ph)
        # series (e^{i phi dt} - 1)/(i phi) = dt (1 + i phi dt/2 - (phi dt)^2/6)
        sm = phi[small] * dts[small]
        seg[small] = dts[small] * (1.0 + 0.5j * sm - sm * sm / 6.0)
        seg = seg * np.exp(1j * kx_a)
        v4 = np.concatenate([np.ones((dts.size, 1)), vel], axis=1)
        total += -1j * traj.charge * (seg @ v4)
    return FourVector(components=total)


def current_divergence(trajectories, k) -> complex:
    """k.J, which vanishes only for conserved currents (reported, not asserted)."""
    return lorentz_dot(np.asarray(_check_on_shell(k), dtype=complex), current_j(trajectories, k))


def mass_shell_bracket(x_values, y_values, basis: ModeBasis) -> complex:
    """Weighted mode sum of Lorentz contractions, sum_k w_k X(k).Y(k)."""
    xs = [v.components if isinstance(v, FourVector) else np.asarray(v, complex) for v in x_values]
    ys = [v.components if isinstance(v, FourVector) else np.asarray(v, complex) for v in y_values]
    if len(xs) != basis.n_modes or len(ys) != basis.n_modes:
        raise ValueError("need one four-vector per basis mode on each side")
    dots = np.array([np.sum(_METRIC_SIGNS * x * y) for x, y in zip(xs, ys)])
    return complex(np.sum(basis.weights * dots))


@dataclass(frozen=True)
class FieldMode:
    """One discretized mode: spatial wave vector, quadrature weight, polarization."""

    k_vec: np.ndarray
    weight: float = 1.0
    polarization: int = 0

    def __post_init__(self):
        k = np.asarray(self.k_vec, dtype=float)
        if k.shape != (3,):
            raise ValueError("k_vec must be a spatial 3-vector")
        if not np.all(np.isfinite(k)) or np.linalg.norm(k) <= 0:
            raise ValueError("k_vec must be finite and nonzero")
        if not (self.weight > 0 and np.isfinite(self.weight)):
            raise ValueError("mode weight must be positive")
        if self.polarization not in (0, 1):
            raise ValueError("polarization index must be 0 or 1")
        k.setflags(write=False)
        object.__setattr__(self, "k_vec", k)

    @property
    def omega(self) -> float:
        return float(np.linalg.norm(self.k_vec))

    @property
    def k4(self) -> np.ndarray:
        return np.concatenate([[self.omega], self.k_vec])


def mode_basis_for(modes) -> ModeBasis:
    """ModeBasis whose frequencies are the |k| of the listed field modes."""
    modes = list(modes)
    return ModeBasis(
        omegas=np.array([m.omega for m in modes]),
        weights=np.array([m.weight for m in modes]),
    )


def polarization_vectors(k_vec) -> tuple[np.ndarray, np.ndarray]:
    """Deterministic orthonormal transverse pair (e1, e2) for a direction.

    e1 = normalize(z x k), falling back to normalize(x x k) within 1e-6 of
    the z axis; e2 = k_hat x e1.
    """
    k_hat = np.asarray(k_vec, dtype=float)
    k_hat = k_hat / np.linalg.norm(k_hat)
    ref = np.array([0.0, 0.0, 1.0])
    if np.linalg.norm(np.cross(ref, k_hat)) < 1e-6:
        ref = np.array([1.0, 0.0, 0.0])
    e1 = np.cross(ref, k_hat)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(k_hat, e1)
    return e1, e2


def mode_amplitudes(trajectories, modes) -> np.ndarray:
    """Transverse amplitude eps_lambda . J_vec(k) for each field mode."""
    modes = list(modes)
    out = np.empty(len(modes), dtype=complex)
    for i, mode in enumerate(modes):
        j = current_j(trajectories, mode.k4)
        e1, e2 = polarization_vectors(mode.k_vec)
        eps = e1 if mode.polarization == 0 else e2
        out[i] = np.sum(eps * j.spatial)
    return out


def radiated_quanta(trajectories, modes) -> float:
    """Expected number of emitted quanta over the listed k-quadrature.

    Per mode this is the squared transverse current content summed over
    both polarizations, weight_k * (|J_vec|^2 - |k_hat . J_vec|^2); the
    timelike and longitudinal pieces source no physical quanta, so the
    result is non-negative for every current (a static charge radiates
    nothing) and quadratic in every charge.
    """
    modes = list(modes)
    total = 0.0
    for mode in modes:
        j = current_j(trajectories, mode.k4).spatial
        k_hat = mode.k_vec / np.linalg.norm(mode.k_vec)
        transverse_sq = float(np.sum(np.abs(j) ** 2) - abs(np.sum(k_hat * j)) ** 2)
        total += mode.weight * max(transverse_sq, 0.0)
    return total


def vacuum_persistence(trajectories, modes) -> float:
    """Probability that the current leaves the field unexcited.

    exp(-E) with E the coherent-norm content of the sourced state,
    i.e. the weighted mode sum of squared transverse current amplitudes
    over both polarizations (see radiated_quanta).  Always in (0, 1]:
    the raw Lorentz contraction conj(J).J is indefinite for open
    trajectory segments and would not yield a probability, so the
    physical-mode form is used here; mass_shell_bracket remains
    available for the general contraction.  Doubling a lone charge
    quadruples the exponent exactly.
    """
    return float(np.exp(-radiated_quanta(trajectories, modes)))


def displacement_from_current(trajectories, modes) -> CoherentPoint:
    """Coherent displacement sourced by the current: one (q, p) per mode.

    Convention: q_k = sqrt(2) Re(alpha_k), p_k = sqrt(2) Im(alpha_k) with
    alpha_k the transverse amplitude of the mode's polarization; timelike
    and longitudinal pieces are excluded.
    """
    amps = mode_amplitudes(trajectories, modes)
    return CoherentPoint(q=np.sqrt(2.0) * amps.real, p=np.sqrt(2.0) * amps.imag)


def displaced_state(trajectories, modes) -> SuperposedState:
    """The sourced coherent state as a one-component superposition."""
    point = displacement_from_current(trajectories, modes)
    return SuperposedState.single(point, mode_basis_for(modes))


def trajectories_from_csv(path) -> list[Trajectory]:
    """Load trajectories from CSV columns: particle, charge, t, x, y, z.

    Rows are grouped by particle id; each particle's charge must be
    consistent across its rows; rows may appear in any order.
    """
    groups: dict[str, dict] = {}
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        required = {"particle", "charge", "t", "x", "y", "z"}
        if reader.fieldnames is None or not required.issubset(set(reader.fieldnames)):
            raise ValueError(f"trajectory CSV needs columns {sorted(required)}")
        for row in reader:
            pid = row["particle"]
            entry = groups.setdefault(pid, {"charge": float(row["charge"]), "rows": []})
            if entry["charge"] != float(row["charge"]):
                raise ValueError(f"particle {pid} has inconsistent charges")
            entry["rows"].append(
                (float(row["t"]), float(row["x"]), float(row["y"]), float(row["z"]))
            )
    out = []
    for pid in sorted(groups):
        rows = sorted(groups[pid]["rows"])
        out.append(Trajectory.from_breakpoints(groups[pid]["charge"], rows))
    return out
