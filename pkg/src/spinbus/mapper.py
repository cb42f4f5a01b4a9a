"""Mapping strategies: turn circuits into timestamped shuttle+gate schedules.

Five strategies, each an improvement on the last:

  baseline          one gate at a time; 1q gates in the qubit's own zone,
                    2q gates in the central zone ceil((i+j)/2); qubits
                    return to their original sites; fixed velocity
  parallel          gates grouped into slices; 2q gates use zone max(i, j)
                    so every move points right and all operands of a slice
                    shuttle simultaneously; returns to original sites
  min_return        as parallel, but after each slice qubits return to the
                    nearest free sites left of their zone (zones processed
                    right to left), so the layout evolves
  tunable_velocity  min_return movements with a per-phase velocity chosen
                    to minimize the dephasing of the longest shuttle
  swap_return       tunable_velocity plus future-aware assignment of the
                    two occupants of a zone to their two return sites

Each slice episode has three globally barriered phases: all operands
shuttle out together, all gates fire together, all operands return
together. Phase duration is the maximum individual duration within it.
Qubits untouched by a slice stay parked and accrue no error.
"""
from __future__ import annotations

import bisect
import json
from dataclasses import dataclass

from .architecture import (
    ArchitectureSpec,
    Location,
    LocationKind,
    distance,
    position,
    shuttle_time,
)
from .circuit import Circuit, Gate, GateKind, SlicedCircuit
from .error_model import ErrorModelParams, V_BRACKET, optimal_velocity, phase_error
from .placement import Placement

STRATEGIES = ("baseline", "parallel", "min_return", "tunable_velocity", "swap_return")

_EPS_T = 1e-15  # seconds; schedule times are exact accumulations


@dataclass(frozen=True)
class ShuttleOp:
    """One qubit moving src -> dst at constant velocity, incurring delta_c."""

    qubit: int
    src: Location
    dst: Location
    start: float
    velocity: float
    duration: float
    delta_c: float

    @property
    def end(self) -> float:
        return self.start + self.duration


@dataclass(frozen=True)
class GateOp:
    """Gate ``gate_index`` of the circuit executing in ``zone``."""

    gate_index: int
    zone: int
    start: float
    duration: float

    @property
    def end(self) -> float:
        return self.start + self.duration


@dataclass(frozen=True)
class LayoutState:
    """Where every virtual qubit sits; sites hold one qubit, zones two."""

    assignment: tuple[Location, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "assignment", tuple(self.assignment))
        counts: dict[Location, int] = {}
        for loc in self.assignment:
            counts[loc] = counts.get(loc, 0) + 1
        for loc, count in counts.items():
            cap = 1 if loc.is_site else 2
            if count > cap:
                raise ValueError(f"{loc!r} holds {count} qubits (capacity {cap})")

    @staticmethod
    def from_sites(sites: list[int] | tuple[int, ...]) -> "LayoutState":
        return LayoutState(tuple(Location.site(s) for s in sites))

    def occupancy(self) -> dict[Location, tuple[int, ...]]:
        inverse: dict[Location, list[int]] = {}
        for q, loc in enumerate(self.assignment):
            inverse.setdefault(loc, []).append(q)
        return {loc: tuple(qs) for loc, qs in inverse.items()}

    def zone_counts(self) -> dict[int, int]:
        counts: dict[int, int] = {}
        for loc in self.assignment:
            if not loc.is_site:
                counts[loc.index] = counts.get(loc.index, 0) + 1
        return counts


@dataclass(frozen=True)
class Schedule:
    """A validated plan: time-ordered ops plus accumulated per-qubit error."""

    strategy: str
    circuit: Circuit
    arch: ArchitectureSpec
    error_params: ErrorModelParams
    initial_sites: tuple[int, ...]
    ops: tuple[ShuttleOp | GateOp, ...]
    total_time: float
    per_qubit_error: tuple[float, ...]
    final_sites: tuple[int, ...]

    @property
    def final_layout(self) -> LayoutState:
        return LayoutState.from_sites(self.final_sites)

    def shuttle_ops(self) -> list[ShuttleOp]:
        return [op for op in self.ops if isinstance(op, ShuttleOp)]

    def gate_ops(self) -> list[GateOp]:
        return [op for op in self.ops if isinstance(op, GateOp)]


@dataclass(frozen=True)
class Violation:
    """One broken schedule rule; rule letters follow the validity contract."""

    rule: str
    op_index: int | None
    message: str


class _Builder:
    def __init__(
        self,
        strategy: str,
        circuit: Circuit,
        spec: ArchitectureSpec,
        placement: Placement,
        errp: ErrorModelParams,
    ):
        if circuit.num_qubits != spec.n_sites:
            raise ValueError(
                f"circuit has {circuit.num_qubits} qubits but the architecture "
                f"has {spec.n_sites} sites"
            )
        if placement.n != spec.n_sites:
            raise ValueError(
                f"placement covers {placement.n} qubits, architecture has {spec.n_sites}"
            )
        self.strategy = strategy
        self.circuit = circuit
        self.spec = spec
        self.errp = errp
        self.initial_sites = tuple(placement.perm)
        self.ops: list[ShuttleOp | GateOp] = []
        self.err = [0.0] * spec.n_sites

    def shuttle(self, qubit: int, src: Location, dst: Location, start: float, v: float) -> float:
        dist = distance(src, dst, self.spec)
        if dist == 0.0:
            return 0.0
        dur = shuttle_time(dist, v)
        dc = phase_error(v, dist, self.errp)
        self.ops.append(ShuttleOp(qubit, src, dst, start, v, dur, dc))
        self.err[qubit] += dc
        return dur

    def gate(self, gate_index: int, zone: int, start: float, duration: float) -> None:
        self.ops.append(GateOp(gate_index, zone, start, duration))

    def finish(self, total_time: float, final_sites: list[int]) -> Schedule:
        return Schedule(
            strategy=self.strategy,
            circuit=self.circuit,
            arch=self.spec,
            error_params=self.errp,
            initial_sites=self.initial_sites,
            ops=tuple(self.ops),
            total_time=total_time,
            per_qubit_error=tuple(self.err),
            final_sites=tuple(final_sites),
        )


def _require_native(c: Circuit) -> None:
    if not c.is_native:
        raise ValueError("mapper needs a native-basis circuit (run decompose first)")


def _schedulable(g: Gate, measure_duration: float | None) -> bool:
    if g.kind is GateKind.BARRIER:
        return False
    if g.kind is GateKind.MEASURE:
        return measure_duration is not None
    return True


def _gate_duration(g: Gate, spec: ArchitectureSpec, measure_duration: float | None) -> float:
    if g.kind is GateKind.MEASURE:
        return measure_duration
    return spec.t_2q if g.is_two_qubit else spec.t_1q


def map_baseline(
    c: Circuit,
    spec: ArchitectureSpec,
    placement: Placement,
    errp: ErrorModelParams,
    measure_duration: float | None = None,
) -> Schedule:
    """Strictly sequential mapping with a static layout.

    The two operand shuttles of a two-qubit gate run simultaneously (the
    conveyor moves both wells at once); gates themselves never overlap.
    """
    _require_native(c)
    b = _Builder("baseline", c, spec, placement, errp)
    v = spec.default_velocity
    sites = list(placement.perm)
    t = 0.0
    for gi, g in enumerate(c.gates):
        if not _schedulable(g, measure_duration):
            continue
        if g.is_two_qubit:
            i, j = sites[g.qubits[0]], sites[g.qubits[1]]
            zone = (i + j + 1) // 2
        else:
            zone = sites[g.qubits[0]]
        zone_loc = Location.zone(zone)
        gate_start = t
        for q in g.qubits:
            dur = b.shuttle(q, Location.site(sites[q]), zone_loc, t, v)
            gate_start = max(gate_start, t + dur)
        g_dur = _gate_duration(g, spec, measure_duration)
        b.gate(gi, zone, gate_start, g_dur)
        ret_start = gate_start + g_dur
        t = ret_start
        for q in g.qubits:
            dur = b.shuttle(q, zone_loc, Location.site(sites[q]), ret_start, v)
            t = max(t, ret_start + dur)
    return b.finish(t, sites)


def map_parallel(
    sc: SlicedCircuit,
    spec: ArchitectureSpec,
    placement: Placement,
    errp: ErrorModelParams,
    measure_duration: float | None = None,
) -> Schedule:
    """Slice-parallel mapping, static layout, fixed velocity."""
    return _map_sliced(
        sc, spec, placement, errp,
        strategy="parallel", dynamic_return=False, tunable=False, swap_returns=False,
        measure_duration=measure_duration,
    )


def map_min_return(
    sc: SlicedCircuit,
    spec: ArchitectureSpec,
    placement: Placement,
    errp: ErrorModelParams,
    measure_duration: float | None = None,
) -> Schedule:
    """Slice-parallel mapping with dynamic leftward returns, fixed velocity."""
    return _map_sliced(
        sc, spec, placement, errp,
        strategy="min_return", dynamic_return=True, tunable=False, swap_returns=False,
        measure_duration=measure_duration,
    )


def map_tunable_velocity(
    sc: SlicedCircuit,
    spec: ArchitectureSpec,
    placement: Placement,
    errp: ErrorModelParams,
    measure_duration: float | None = None,
    v_bracket: tuple[float, float] = V_BRACKET,
) -> Schedule:
    """min_return movements with per-phase dephasing-optimal velocities."""
    return _map_sliced(
        sc, spec, placement, errp,
        strategy="tunable_velocity", dynamic_return=True, tunable=True,
        swap_returns=False, measure_duration=measure_duration, v_bracket=v_bracket,
    )


def map_swap_return(
    sc: SlicedCircuit,
    spec: ArchitectureSpec,
    placement: Placement,
    errp: ErrorModelParams,
    measure_duration: float | None = None,
    v_bracket: tuple[float, float] = V_BRACKET,
) -> Schedule:
    """tunable_velocity plus future-aware two-occupant return assignment."""
    return _map_sliced(
        sc, spec, placement, errp,
        strategy="swap_return", dynamic_return=True, tunable=True,
        swap_returns=True, measure_duration=measure_duration, v_bracket=v_bracket,
    )


def map_strategy(
    strategy: str,
    sc: SlicedCircuit,
    spec: ArchitectureSpec,
    placement: Placement,
    errp: ErrorModelParams,
    measure_duration: float | None = None,
) -> Schedule:
    """Dispatch by strategy name; baseline maps the flat gate list."""
    if strategy == "baseline":
        return map_baseline(sc.circuit, spec, placement, errp, measure_duration)
    table = {
        "parallel": map_parallel,
        "min_return": map_min_return,
        "tunable_velocity": map_tunable_velocity,
        "swap_return": map_swap_return,
    }
    if strategy not in table:
        raise ValueError(f"unknown strategy {strategy!r}")
    return table[strategy](sc, spec, placement, errp, measure_duration)


def _map_sliced(
    sc: SlicedCircuit,
    spec: ArchitectureSpec,
    placement: Placement,
    errp: ErrorModelParams,
    *,
    strategy: str,
    dynamic_return: bool,
    tunable: bool,
    swap_returns: bool,
    measure_duration: float | None = None,
    v_bracket: tuple[float, float] = V_BRACKET,
) -> Schedule:
    c = sc.circuit
    _require_native(c)
    b = _Builder(strategy, c, spec, placement, errp)
    sites: list[int | None] = list(placement.perm)  # None while in a zone
    site_taken: list[int | None] = [None] * spec.n_sites
    for q, s in enumerate(placement.perm):
        site_taken[s] = q

    # per-qubit future two-qubit interactions: (layer, partner), layer-sorted
    future: list[list[tuple[int, int]]] = [[] for _ in range(c.num_qubits)]
    if swap_returns:
        for layer_idx, layer in enumerate(sc.layers):
            for gate_idx in layer:
                g = c.gates[gate_idx]
                if g.is_two_qubit:
                    qa, qb = g.qubits
                    future[qa].append((layer_idx, qb))
                    future[qb].append((layer_idx, qa))

    vel_cache: dict[float, float] = {}

    def phase_velocity(max_dist: float) -> float:
        if not tunable:
            return spec.default_velocity
        if max_dist not in vel_cache:
            vel_cache[max_dist] = optimal_velocity(max_dist, errp, *v_bracket)
        return vel_cache[max_dist]

    t = 0.0
    for layer_idx, layer in enumerate(sc.layers):
        episodes = []  # (gate_index, gate, zone)
        for gate_idx in layer:
            g = c.gates[gate_idx]
            if not _schedulable(g, measure_duration):
                continue
            if g.is_two_qubit:
                zone = max(sites[g.qubits[0]], sites[g.qubits[1]])
            else:
                zone = sites[g.qubits[0]]
            episodes.append((gate_idx, g, zone))
        if not episodes:
            continue

        # out phase: every operand shuttles to its zone simultaneously
        out_moves = []  # (qubit, src_site, zone)
        for _, g, zone in episodes:
            for q in g.qubits:
                out_moves.append((q, sites[q], zone))
        max_out = max(
            distance(Location.site(s), Location.zone(z), spec) for _, s, z in out_moves
        )
        v_out = phase_velocity(max_out)
        for q, s, z in sorted(out_moves):
            b.shuttle(q, Location.site(s), Location.zone(z), t, v_out)
            site_taken[s] = None
            sites[q] = None
        gate_start = t + shuttle_time(max_out, v_out)

        # gate phase: all gates start together
        max_dur = 0.0
        for gate_idx, g, zone in episodes:
            g_dur = _gate_duration(g, spec, measure_duration)
            b.gate(gate_idx, zone, gate_start, g_dur)
            max_dur = max(max_dur, g_dur)
        ret_start = gate_start + max_dur

        # return phase: pick destination sites, then shuttle simultaneously
        if dynamic_return:
            returns = _assign_dynamic_returns(
                episodes, sites, site_taken, spec, swap_returns, future, layer_idx
            )
        else:
            returns = [(q, z, s) for q, s, z in out_moves]
        max_ret = max(
            distance(Location.zone(z), Location.site(s), spec) for _, z, s in returns
        )
        v_ret = phase_velocity(max_ret)
        t_next = ret_start
        for q, z, s in sorted(returns):
            dur = b.shuttle(q, Location.zone(z), Location.site(s), ret_start, v_ret)
            t_next = max(t_next, ret_start + dur)
            sites[q] = s
            site_taken[s] = q
        t = ret_start + shuttle_time(max_ret, v_ret)

    return b.finish(t, [int(s) for s in sites])


def _assign_dynamic_returns(
    episodes,
    sites: list[int | None],
    site_taken: list[int | None],
    spec: ArchitectureSpec,
    swap_returns: bool,
    future: list[list[tuple[int, int]]],
    layer_idx: int,
) -> list[tuple[int, int, int]]:
    """Assign each zone occupant a return site, zones right to left.

    Every occupant takes the rightmost free site left of its zone. With two
    occupants the default gives the smaller virtual index the rightmost
    site; swap_returns instead matches occupants to the two sites in order
    of their next partner's position, so each returns toward its upcoming
    interaction.
    """
    free = sorted(s for s in range(spec.n_sites) if site_taken[s] is None)
    in_zone = {q: zone for _, g, zone in episodes for q in g.qubits}
    assigned: dict[int, int] = {}

    def current_pos(q: int) -> float:
        if q in assigned:
            return position(Location.site(assigned[q]), spec)
        if q in in_zone:
            return position(Location.zone(in_zone[q]), spec)
        return position(Location.site(sites[q]), spec)

    def next_partner_pos(q: int) -> float | None:
        entries = future[q]
        i = bisect.bisect_right(entries, (layer_idx, float("inf")))
        if i >= len(entries):
            return None
        return current_pos(entries[i][1])

    returns: list[tuple[int, int, int]] = []
    for gate_idx, g, zone in sorted(episodes, key=lambda e: -e[2]):
        # eligible sites sit at positions <= the zone's: site index <= zone index
        cut = bisect.bisect_right(free, zone)
        occupants = list(g.qubits)
        if cut < len(occupants):
            raise RuntimeError(
                f"no free site left of zone {zone} for gate {gate_idx}"
            )
        if len(occupants) == 1:
            chosen = {occupants[0]: free[cut - 1]}
        else:
            s_hi, s_lo = free[cut - 1], free[cut - 2]
            qa, qb = occupants
            chosen = _assign_pair(
                qa, qb, s_hi, s_lo, spec, swap_returns, next_partner_pos
            )
        for q, s in chosen.items():
            assigned[q] = s
            free.remove(s)
            returns.append((q, zone, s))
    return returns


def _assign_pair(
    qa: int,
    qb: int,
    s_hi: int,
    s_lo: int,
    spec: ArchitectureSpec,
    swap_returns: bool,
    next_partner_pos,
) -> dict[int, int]:
    def default() -> dict[int, int]:
        # arbitrary but fixed: smaller virtual index takes the rightmost site
        if qa < qb:
            return {qa: s_hi, qb: s_lo}
        return {qa: s_lo, qb: s_hi}

    if not swap_returns:
        return default()
    pa = next_partner_pos(qa)
    pb = next_partner_pos(qb)
    if pa is None and pb is None:
        return default()
    pos_hi = position(Location.site(s_hi), spec)
    pos_lo = position(Location.site(s_lo), spec)
    if pa is None or pb is None:
        # the qubit with a future interaction takes its distance-minimizing site
        q_with, p = (qa, pa) if pa is not None else (qb, pb)
        q_other = qb if q_with == qa else qa
        if abs(pos_hi - p) < abs(pos_lo - p):
            return {q_with: s_hi, q_other: s_lo}
        if abs(pos_hi - p) > abs(pos_lo - p):
            return {q_with: s_lo, q_other: s_hi}
        return default()
    if pa == pb:
        return default()
    # order-preserving matching: the qubit whose next partner sits further
    # left takes the left site (minimizes the pair's future travel)
    if pa < pb:
        return {qa: s_lo, qb: s_hi}
    return {qa: s_hi, qb: s_lo}


def validate_schedule(s: Schedule, spec: ArchitectureSpec) -> list[Violation]:
    """Check the schedule validity rules; an empty list means valid.

    (a) gate operands are at the gate's zone for its whole duration
    (b) no zone ever holds more than two qubits
    (c) no storage site ever holds more than one qubit
    (d) simultaneously moving qubits never cross
    (e) every qubit ends parked in storage
    (f) stored per-qubit errors match a fold over the shuttle ops
    (g) total_time is the latest op end
    plus internal shuttle-op consistency (duration, delta_c, chaining).
    """
    out: list[Violation] = []
    n = s.circuit.num_qubits

    shuttles: list[tuple[int, ShuttleOp]] = []
    gates: list[tuple[int, GateOp]] = []
    for idx, op in enumerate(s.ops):
        if isinstance(op, ShuttleOp):
            shuttles.append((idx, op))
        else:
            gates.append((idx, op))

    # shuttle-op internal consistency
    for idx, op in shuttles:
        dist = distance(op.src, op.dst, spec)
        if dist == 0.0:
            out.append(Violation("op", idx, "zero-distance shuttle present"))
            continue
        want_dur = shuttle_time(dist, op.velocity)
        if op.duration != want_dur:
            out.append(Violation("op", idx, f"duration {op.duration} != {want_dur}"))
        want_dc = phase_error(op.velocity, dist, s.error_params)
        if op.delta_c != want_dc:
            out.append(Violation("op", idx, f"delta_c {op.delta_c} != {want_dc}"))

    # per-qubit motion chains and presence timelines
    timelines: dict[int, list[tuple[Location, float, float]]] = {}
    if sorted(s.initial_sites) != list(range(n)):
        out.append(Violation("c", None, "initial placement is not a bijection"))
    by_qubit: dict[int, list[tuple[int, ShuttleOp]]] = {q: [] for q in range(n)}
    for idx, op in shuttles:
        if not 0 <= op.qubit < n:
            out.append(Violation("op", idx, f"unknown qubit {op.qubit}"))
            continue
        by_qubit[op.qubit].append((idx, op))
    for q in range(n):
        chain = sorted(by_qubit[q], key=lambda pair: (pair[1].start, pair[0]))
        cur: Location = Location.site(s.initial_sites[q])
        arrived = 0.0
        timeline: list[tuple[Location, float, float]] = []
        for idx, op in chain:
            if op.src != cur:
                out.append(
                    Violation("op", idx, f"qubit {q} departs {op.src!r} but is at {cur!r}")
                )
            if op.start < arrived - _EPS_T:
                out.append(
                    Violation("op", idx, f"qubit {q} departs at {op.start} before arriving at {arrived}")
                )
            timeline.append((cur, arrived, op.start))
            cur = op.dst
            arrived = op.end
        timeline.append((cur, arrived, float("inf")))
        timelines[q] = timeline

    # (a) gate operands present at the zone for the full gate
    for idx, op in gates:
        if not 0 <= op.gate_index < len(s.circuit.gates):
            out.append(Violation("a", idx, f"gate index {op.gate_index} out of range"))
            continue
        zone_loc = Location.zone(op.zone)
        for q in s.circuit.gates[op.gate_index].qubits:
            ok = any(
                loc == zone_loc and t0 <= op.start + _EPS_T and op.end <= t1 + _EPS_T
                for loc, t0, t1 in timelines.get(q, [])
            )
            if not ok:
                out.append(
                    Violation("a", idx, f"qubit {q} not at {zone_loc!r} for gate interval")
                )

    # (b) zone capacity 2, (c) site capacity 1, via interval sweeps
    zone_events: dict[int, list[tuple[float, int]]] = {}
    site_events: dict[int, list[tuple[float, int]]] = {}
    for q, timeline in timelines.items():
        for loc, t0, t1 in timeline:
            if t1 <= t0:
                continue
            bucket = site_events if loc.is_site else zone_events
            bucket.setdefault(loc.index, []).append((t0, +1))
            if t1 != float("inf"):
                bucket.setdefault(loc.index, []).append((t1, -1))
    for events, cap, rule, noun in (
        (zone_events, 2, "b", "zone"),
        (site_events, 1, "c", "site"),
    ):
        for index, evts in events.items():
            count = 0
            for _, delta in sorted(evts, key=lambda e: (e[0], e[1])):
                count += delta
                if count > cap:
                    out.append(
                        Violation(rule, None, f"{noun} {index} exceeds capacity {cap}")
                    )
                    break

    # (d) simultaneously moving qubits keep their spatial order
    def pos_at(op: ShuttleOp, t: float) -> float:
        p0 = position(op.src, spec)
        p1 = position(op.dst, spec)
        return p0 + (p1 - p0) * (t - op.start) / op.duration

    moving = sorted(shuttles, key=lambda pair: (pair[1].start, pair[0]))
    active: list[tuple[int, ShuttleOp]] = []
    for idx, op in moving:
        active = [(i, o) for i, o in active if o.end > op.start + _EPS_T]
        for other_idx, other in active:
            if other.qubit == op.qubit:
                continue
            lo = max(op.start, other.start)
            hi = min(op.end, other.end)
            if hi - lo <= _EPS_T:
                continue
            d0 = pos_at(op, lo) - pos_at(other, lo)
            d1 = pos_at(op, hi) - pos_at(other, hi)
            if d0 * d1 < 0 and min(abs(d0), abs(d1)) > 1e-12:
                out.append(
                    Violation(
                        "d", idx, f"qubits {op.qubit} and {other.qubit} cross mid-flight"
                    )
                )
        active.append((idx, op))

    # (e) everything parked at the end, bijectively
    final: list[int | None] = [None] * n
    for q, timeline in timelines.items():
        loc = timeline[-1][0]
        if not loc.is_site:
            out.append(Violation("e", None, f"qubit {q} ends in {loc!r}"))
        else:
            final[q] = loc.index
    if None not in final:
        if sorted(final) != list(range(n)):
            out.append(Violation("e", None, "final sites are not a bijection"))
        elif tuple(final) != s.final_sites:
            out.append(Violation("e", None, "final_sites does not match op history"))

    # (f) per-qubit error fold
    folded = [0.0] * n
    for _, op in shuttles:
        if 0 <= op.qubit < n:
            folded[op.qubit] += op.delta_c
    for q in range(n):
        stored = s.per_qubit_error[q]
        if abs(folded[q] - stored) > 1e-15 * max(1.0, abs(stored)):
            out.append(
                Violation("f", None, f"qubit {q} error {stored} != folded {folded[q]}")
            )

    # (g) total time
    end = max((op.end for op in s.ops), default=0.0)
    if abs(end - s.total_time) > 1e-12 * max(1.0, end):
        out.append(Violation("g", None, f"total_time {s.total_time} != last op end {end}"))

    return out


# JSON serialization: header (strategy, architecture, placement, error
# params), then the op array. Times round to 1 ps for cross-platform
# byte-determinism.
def _loc_json(loc: Location) -> dict:
    return {"kind": loc.kind.value, "idx": loc.index}


def _loc_from_json(obj: dict) -> Location:
    return Location(LocationKind(obj["kind"]), int(obj["idx"]))


def schedule_to_json(s: Schedule) -> str:
    ops = []
    for op in s.ops:
        if isinstance(op, ShuttleOp):
            ops.append(
                {
                    "q": op.qubit,
                    "from": _loc_json(op.src),
                    "to": _loc_json(op.dst),
                    "t0_ns": round(op.start * 1e9, 3),
                    "v_mps": op.velocity,
                    "dC": op.delta_c,
                }
            )
        else:
            ops.append(
                {
                    "gate": op.gate_index,
                    "zone": op.zone,
                    "t0_ns": round(op.start * 1e9, 3),
                    "dur_ns": round(op.duration * 1e9, 3),
                }
            )
    doc = {
        "strategy": s.strategy,
        "arch": s.arch.to_config(),
        "placement": list(s.initial_sites),
        "error_params": s.error_params.to_config(),
        "ops": ops,
        "total_time_ns": round(s.total_time * 1e9, 3),
        "per_qubit_error": list(s.per_qubit_error),
        "final_sites": list(s.final_sites),
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def schedule_from_json(text: str, circuit: Circuit | None = None) -> Schedule:
    """Rebuild a Schedule from its JSON form.

    Op timestamps come back ps-rounded; durations and errors are recomputed
    from geometry so the result revalidates. The circuit is not part of the
    wire format and must be supplied for gate-aware validation.
    """
    doc = json.loads(text)
    arch = ArchitectureSpec.from_config(doc["arch"])
    errp = ErrorModelParams.from_config(doc["error_params"])
    if circuit is None:
        circuit = Circuit(arch.n_sites, ())
    ops: list[ShuttleOp | GateOp] = []
    for entry in doc["ops"]:
        if "q" in entry:
            src = _loc_from_json(entry["from"])
            dst = _loc_from_json(entry["to"])
            v = float(entry["v_mps"])
            dist = distance(src, dst, arch)
            ops.append(
                ShuttleOp(
                    qubit=int(entry["q"]),
                    src=src,
                    dst=dst,
                    start=float(entry["t0_ns"]) * 1e-9,
                    velocity=v,
                    duration=shuttle_time(dist, v),
                    delta_c=float(entry["dC"]),
                )
            )
        else:
            ops.append(
                GateOp(
                    gate_index=int(entry["gate"]),
                    zone=int(entry["zone"]),
                    start=float(entry["t0_ns"]) * 1e-9,
                    duration=float(entry["dur_ns"]) * 1e-9,
                )
            )
    return Schedule(
        strategy=doc["strategy"],
        circuit=circuit,
        arch=arch,
        error_params=errp,
        initial_sites=tuple(int(x) for x in doc["placement"]),
        ops=tuple(ops),
        total_time=float(doc["total_time_ns"]) * 1e-9,
        per_qubit_error=tuple(float(x) for x in doc["per_qubit_error"]),
        final_sites=tuple(int(x) for x in doc["final_sites"]),
    )
