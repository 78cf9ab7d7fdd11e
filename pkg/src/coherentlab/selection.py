"""Causal selection engine: event scheduling, landscape maxima, collapse.

An event at time t replaces the state by the single coherent state at the
global maximum of its phase-space landscape.  Event times follow the
urgency schedule t_{i+1} = t_i + 1/E_i (hbar = 1).  A blocking vector can
veto the transition, in which case the state is left unchanged until the
next scheduled event.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .borngeo import BlockingVector, is_blocked, theta_from_norms
from .landscape import ascend, ascent_starts
from .states import CoherentPoint, SuperposedState, amplitude, evolve_free

#: |dv| below which two global maxima count as tied (resolved lexicographically).
TIE_TOLERANCE = 1e-12

#: Converged maxima closer than this (flattened Euclidean) are merged.
DEDUP_RADIUS = 1e-6


@dataclass(frozen=True)
class Candidate:
    """One local maximum of the landscape."""

    point: CoherentPoint
    v: float


@dataclass(frozen=True)
class MaximaResult:
    """Deduplicated landscape maxima, sorted by descending value."""

    maxima: list[Candidate]
    failed_starts: int = 0

    def __iter__(self):
        return iter(self.maxima)

    def __len__(self):
        return len(self.maxima)


@dataclass(frozen=True)
class EventRecord:
    """Log entry for one selection event."""

    index: int
    time: float
    chosen: CoherentPoint
    v_at_choice: float
    candidates: list[Candidate] = field(default_factory=list)
    blocked: bool = False
    tie: bool = False
    failed_starts: int = 0


@dataclass(frozen=True)
class CollapseOutcome:
    state_next: SuperposedState
    record: EventRecord

    @property
    def accepted(self) -> bool:
        return not self.record.blocked


class UrgencySchedule:
    """Urgency energies E > 0; the interval to the next event is 1/E."""

    def __init__(self, energies):
        if np.isscalar(energies):
            energies = [energies]
        self.energies = [float(e) for e in energies]
        for e in self.energies:
            if not (e > 0 and np.isfinite(e)):
                raise ValueError(f"urgency energy must be positive and finite, got {e}")

    def energy_for(self, step: int) -> float:
        """Energy for event number ``step`` (1-based); a scalar schedule repeats."""
        if len(self.energies) == 1:
            return self.energies[0]
        if step < 1 or step > len(self.energies):
            raise ValueError(f"schedule has {len(self.energies)} entries, asked for {step}")
        return self.energies[step - 1]


def next_event_time(t_i: float, e: float) -> float:
    """t_{i+1} = t_i + 1/E for urgency energy E > 0 (hbar = 1)."""
    e = float(e)
    if not (e > 0 and np.isfinite(e)):
        raise ValueError(f"urgency energy must be positive and finite, got {e}")
    return float(t_i) + 1.0 / e


def find_local_maxima(
    state: SuperposedState,
    tol: float = 1e-10,
    max_iter: int = 200,
    dedup_radius: float = DEDUP_RADIUS,
) -> MaximaResult:
    """Locate local maxima of the landscape by multi-start ascent.

    Starts are all component centers plus midpoints of near pairs.
    Non-converged starts are dropped and counted in ``failed_starts``.
    States are immutable, so the result is cached on the state instance
    (keyed by the search parameters).
    """
    cache = state.__dict__.setdefault("_maxima_cache", {})
    cache_key = (tol, max_iter, dedup_radius)
    if cache_key in cache:
        return cache[cache_key]
    found: list[tuple[np.ndarray, float]] = []
    failed = 0
    for start in ascent_starts(state):
        x, v, ok = ascend(state, start, tol=tol, max_iter=max_iter)
        if not ok:
            failed += 1
            continue
        for k, (xk, vk) in enumerate(found):
            if np.linalg.norm(x - xk) < dedup_radius:
                if v > vk:
                    found[k] = (x, v)
                break
        else:
            found.append((x, v))
    if failed:
        warnings.warn(
            f"{failed} ascent start(s) dropped (non-convergent or not at a maximum)",
            RuntimeWarning,
        )
    found.sort(key=lambda item: (-item[1], tuple(item[0])))
    maxima = [Candidate(point=CoherentPoint.from_vector(x), v=v) for x, v in found]
    result = MaximaResult(maxima=maxima, failed_starts=failed)
    cache[cache_key] = result
    return result


def _argmax_candidate(result: MaximaResult) -> tuple[Candidate, bool]:
    """Global maximum with lexicographic tie-breaking on (q, p)."""
    top = result.maxima[0]
    tied = [c for c in result.maxima if abs(c.v - top.v) < TIE_TOLERANCE]
    tie = len(tied) > 1
    if tie:
        tied.sort(key=lambda c: tuple(c.point.as_vector()))
        top = tied[0]
    return top, tie


def select_and_collapse(state: SuperposedState, t: float, index: int = 1) -> CollapseOutcome:
    """Actualize the global landscape maximum as the next state.

    The state after the event is the single coherent state at the argmax
    with coefficient 1 (renormalized projection).  Applying the operation
    again re-selects the same point with landscape value 1.
    """
    result = find_local_maxima(state)
    chosen, tie = _argmax_candidate(result)
    record = EventRecord(
        index=index,
        time=float(t),
        chosen=chosen.point,
        v_at_choice=chosen.v,
        candidates=result.maxima,
        blocked=False,
        tie=tie,
        failed_starts=result.failed_starts,
    )
    state_next = SuperposedState.single(chosen.point, state.basis)
    return CollapseOutcome(state_next=state_next, record=record)


def blocked_select(
    state: SuperposedState,
    t: float,
    phi: BlockingVector,
    index: int = 1,
) -> CollapseOutcome:
    """Argmax selection routed through the sphere-geometry blocking test.

    The transition angle satisfies cos^2(theta) = |P Psi|^2 / |Psi|^2 for
    the argmax projector P.  If phi blocks, the state is left unchanged
    and the record is marked blocked.
    """
    result = find_local_maxima(state)
    chosen, tie = _argmax_candidate(result)
    proj_sq = abs(amplitude(state, chosen.point)) ** 2
    geom = theta_from_norms(state.norm_sq, proj_sq)
    blocked = is_blocked(geom, phi)
    record = EventRecord(
        index=index,
        time=float(t),
        chosen=chosen.point,
        v_at_choice=chosen.v,
        candidates=result.maxima,
        blocked=blocked,
        tie=tie,
        failed_starts=result.failed_starts,
    )
    state_next = state if blocked else SuperposedState.single(chosen.point, state.basis)
    return CollapseOutcome(state_next=state_next, record=record)


DriftHook = Callable[[SuperposedState, int], SuperposedState]


def no_drift(state: SuperposedState, step: int) -> SuperposedState:
    return state


def offset_spawn(coeff: complex, dq: Sequence[float], dp: Sequence[float]) -> DriftHook:
    """Hook that appends one component at a fixed offset from the leading one."""
    dq = np.asarray(dq, dtype=float)
    dp = np.asarray(dp, dtype=float)

    def hook(state: SuperposedState, step: int) -> SuperposedState:
        lead = int(np.argmax(np.abs(state.coeffs)))
        point = CoherentPoint(q=state.q[lead] + dq, p=state.p[lead] + dp)
        return state.with_component(coeff, point)

    return hook


def seeded_spawn(seed: int, count: int = 1, spread: float = 8.0, coeff: float = 0.3) -> DriftHook:
    """Hook that appends ``count`` randomly offset components each step.

    Deterministic: the generator is keyed by (seed, step), so a rerun with
    the same seed reproduces the sequence exactly.
    """

    def hook(state: SuperposedState, step: int) -> SuperposedState:
        rng = np.random.default_rng([seed, step])
        lead = int(np.argmax(np.abs(state.coeffs)))
        out = state
        for _ in range(count):
            point = CoherentPoint(
                q=state.q[lead] + rng.normal(0.0, spread, size=state.n_modes),
                p=state.p[lead] + rng.normal(0.0, spread, size=state.n_modes),
            )
            out = out.with_component(coeff * rng.uniform(0.5, 1.0), point)
        return out

    return hook


def run_sequence(
    initial: SuperposedState,
    schedule: UrgencySchedule,
    drift: DriftHook | None = None,
    n_events: int = 1,
    t0: float = 0.0,
    phi_source: Callable[[int], BlockingVector] | None = None,
) -> list[EventRecord]:
    """Run a sequence of scheduled selection events.

    Each step evolves freely over 1/E, applies the drift hook (which
    regenerates alternatives between events), then selects and collapses.
    If ``phi_source`` is given, each event is routed through the blocking
    test with phi_source(step).  If the hook ever produces a state that
    cannot be constructed (zero norm), the run aborts and the partial log
    is returned.
    """
    if n_events < 1:
        raise ValueError("n_events must be >= 1")
    drift = drift or no_drift
    records: list[EventRecord] = []
    state = initial
    t = float(t0)
    for i in range(1, n_events + 1):
        t_next = next_event_time(t, schedule.energy_for(i))
        state = evolve_free(state, t_next - t)
        try:
            state = drift(state, i)
        except ValueError as exc:
            warnings.warn(f"drift hook failed at event {i} ({exc}); aborting", RuntimeWarning)
            return records
        if not isinstance(state, SuperposedState):
            raise TypeError("drift hook must return a SuperposedState")
        if phi_source is None:
            outcome = select_and_collapse(state, t_next, index=i)
        else:
            outcome = blocked_select(state, t_next, phi_source(i), index=i)
        records.append(outcome.record)
        state = outcome.state_next
        t = t_next
    return records


def record_as_dict(record: EventRecord) -> dict:
    """JSON-ready mirror of an EventRecord."""
    return {
        "index": record.index,
        "time": record.time,
        "v_at_choice": record.v_at_choice,
        "blocked": record.blocked,
        "tie": record.tie,
        "failed_starts": record.failed_starts,
        "chosen": {
            "q": [float(v) for v in record.chosen.q],
            "p": [float(v) for v in record.chosen.p],
        },
        "candidates": [
            {
                "v": c.v,
                "q": [float(v) for v in c.point.q],
                "p": [float(v) for v in c.point.p],
            }
            for c in record.candidates
        ],
    }
