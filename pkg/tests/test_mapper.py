import pytest

from spinbus.architecture import ArchitectureSpec, Location, distance, position
from spinbus.circuit import Circuit, Gate, GateKind, decompose, slice_circuit
from spinbus.error_model import ErrorModelParams, optimal_velocity, phase_error
from spinbus.benchgen import BenchmarkSpec, generate
from spinbus.mapper import (
    GateOp,
    LayoutState,
    Schedule,
    ShuttleOp,
    STRATEGIES,
    _map_sliced,
    map_baseline,
    map_min_return,
    map_parallel,
    map_strategy,
    map_swap_return,
    map_tunable_velocity,
    schedule_from_json,
    schedule_to_json,
    validate_schedule,
)
from spinbus.metrics import summarize
from spinbus.placement import Placement

US = 1e-6
NS = 1e-9


def cz(a, b):
    return Gate(GateKind.CZ, (a, b))


def h(q):
    return Gate(GateKind.H, (q,))


def arch(n):
    return ArchitectureSpec(n_sites=n)


@pytest.fixture(scope="module")
def errp():
    return ErrorModelParams()


def run(strategy, circuit, n, errp, placement=None, **kwargs):
    sc = slice_circuit(circuit)
    placement = placement or Placement.identity(n)
    s = map_strategy(strategy, sc, arch(n), placement, errp, **kwargs)
    assert validate_schedule(s, arch(n)) == []
    return s


class TestBaseline:
    def test_two_qubit_episode_timing(self, errp):
        # CZ on sites 2 and 3 -> central zone 3; distances 3 um and 1 um
        s = run("baseline", Circuit(4, (cz(2, 3),)), 4, errp)
        shuttles = s.shuttle_ops()
        gate = s.gate_ops()[0]
        assert gate.zone == 3
        dists = sorted(
            distance(op.src, op.dst, s.arch) for op in shuttles if op.start == 0.0
        )
        assert dists == pytest.approx([1e-6, 3e-6], rel=1e-12)
        assert gate.start == pytest.approx(0.3 * US)
        assert gate.duration == pytest.approx(45 * NS)
        assert s.total_time == pytest.approx(0.3 * US + 45 * NS + 0.3 * US)

    def test_single_qubit_uses_own_zone(self, errp):
        s = run("baseline", Circuit(6, (h(5),)), 6, errp)
        assert s.gate_ops()[0].zone == 5
        assert s.total_time == pytest.approx(0.1 * US + 20 * NS + 0.1 * US)

    def test_empty_circuit(self, errp):
        s = run("baseline", Circuit(3, ()), 3, errp)
        assert s.ops == ()
        assert s.total_time == 0.0
        assert s.per_qubit_error == (0.0, 0.0, 0.0)

    def test_layout_static(self, errp):
        c = Circuit(5, (cz(0, 4), h(2), cz(1, 3)))
        s = run("baseline", c, 5, errp)
        assert s.final_sites == s.initial_sites

    def test_gates_strictly_sequential(self, errp):
        c = Circuit(4, (h(0), h(1), h(2)))
        s = run("baseline", c, 4, errp)
        gates = s.gate_ops()
        for earlier, later in zip(gates, gates[1:]):
            assert later.start >= earlier.end

    def test_placement_respected(self, errp):
        # virtual qubit 0 parked at site 3: its zone is 3, not 0
        placement = Placement((3, 0, 1, 2))
        s = run("baseline", Circuit(4, (h(0),)), 4, errp, placement)
        assert s.gate_ops()[0].zone == 3


class TestParallel:
    def test_slice_episode_from_fig(self, errp):
        # slice {CZ(sites 2,5), H(site 0)} -> zones 5 and 0; site 2 at 4 um
        # travels to zone 5 at 11 um: out phase 0.7 us
        c = Circuit(6, (cz(2, 5), h(0)))
        s = run("parallel", c, 6, errp)
        zones = sorted(op.zone for op in s.gate_ops())
        assert zones == [0, 5]
        out_phase = max(op.end for op in s.shuttle_ops() if op.start == 0.0)
        assert out_phase == pytest.approx(0.7 * US)
        for gate in s.gate_ops():
            assert gate.start == pytest.approx(0.7 * US)

    def test_single_gate_slice_matches_baseline_for_adjacent_pair(self, errp):
        # for adjacent sites max(i,j) equals the central zone, so the two
        # strategies coincide gate for gate
        c = Circuit(4, (cz(2, 3),))
        par = run("parallel", c, 4, errp)
        base = run("baseline", c, 4, errp)
        assert par.total_time == pytest.approx(base.total_time)

    def test_two_single_qubit_gates_share_a_slice(self, errp):
        c = Circuit(4, (h(1), h(2)))
        s = run("parallel", c, 4, errp)
        assert sorted(op.zone for op in s.gate_ops()) == [1, 2]
        assert s.total_time == pytest.approx(0.1 * US + 20 * NS + 0.1 * US)

    def test_zone_assignments_always_distinct(self, errp):
        # exhaustive over disjoint gate pairs on 8 sites
        n = 8
        singles = [(q,) for q in range(n)]
        pairs = [(a, b) for a in range(n) for b in range(n) if a != b]
        operands = singles + pairs

        def zone(ops):
            return max(ops)

        for g1 in operands:
            for g2 in operands:
                if set(g1) & set(g2):
                    continue
                assert zone(g1) != zone(g2)

    def test_returns_to_original_sites(self, errp):
        c = Circuit(6, (cz(0, 5), cz(1, 3), h(4)))
        s = run("parallel", c, 6, errp)
        assert s.final_sites == s.initial_sites


class TestMinReturn:
    def test_hand_simulated_six_qubit_slice(self, errp):
        # one slice: CZ(q0@0, q5@5) in zone 5, CZ(q3@3, q4@4) in zone 4.
        # Zone 5 occupants take the two rightmost free sites under 11 um:
        # q0 -> site 5 (1 um back), q5 -> site 4 (3 um back). Zone 4 then
        # takes sites 3 and 0.
        c = Circuit(6, (cz(0, 5), cz(3, 4)))
        s = run("min_return", c, 6, errp)
        returns = {
            op.qubit: op for op in s.shuttle_ops() if op.src.kind.value == "zone"
        }
        assert returns[0].dst == Location.site(5)
        assert distance(returns[0].src, returns[0].dst, s.arch) == pytest.approx(1e-6)
        assert returns[5].dst == Location.site(4)
        assert distance(returns[5].src, returns[5].dst, s.arch) == pytest.approx(3e-6)
        assert returns[3].dst == Location.site(3)
        assert returns[4].dst == Location.site(0)
        assert s.final_sites == (5, 1, 2, 3, 0, 4)

    def test_single_qubit_gate_returns_home_when_free(self, errp):
        s = run("min_return", Circuit(4, (h(2),)), 4, errp)
        assert s.final_sites == s.initial_sites

    def test_all_returns_move_left(self, errp):
        for seed in range(10):
            c = decompose(generate(BenchmarkSpec(family="random", n=8, seed=seed)))
            s = run("min_return", c, 8, errp)
            for op in s.shuttle_ops():
                src_pos = position(op.src, s.arch)
                dst_pos = position(op.dst, s.arch)
                if op.src.is_site:
                    assert dst_pos > src_pos  # outbound: rightward
                else:
                    assert dst_pos < src_pos  # return: leftward

    def test_total_time_rarely_worse_than_parallel(self, errp):
        # golden regression: 45 of 50 seeded random circuits map at least
        # as fast under min_return as under parallel
        wins = 0
        for seed in range(50):
            c = decompose(generate(BenchmarkSpec(family="random", n=8, seed=seed)))
            sc = slice_circuit(c)
            p = Placement.identity(8)
            tm = map_min_return(sc, arch(8), p, errp).total_time
            tp = map_parallel(sc, arch(8), p, errp).total_time
            wins += tm <= tp + 1e-15
        assert wins == 45


class TestTunableVelocity:
    def test_phase_velocity_is_the_optimizer_output(self, errp):
        # slice with max out-distance 3 um: all outbound shuttles share
        # optimal_velocity(3 um)
        c = Circuit(4, (cz(2, 3),))
        s = run("tunable_velocity", c, 4, errp)
        v_out = optimal_velocity(3e-6, errp)
        outs = [op for op in s.shuttle_ops() if op.src.is_site]
        assert {op.velocity for op in outs} == {v_out}
        rets = [op for op in s.shuttle_ops() if not op.src.is_site]
        assert {op.velocity for op in rets} == {optimal_velocity(3e-6, errp)}

    def test_out_and_return_velocities_differ_when_distances_do(self, errp):
        # slice {CZ(0,5), CZ(3,4)}: out max 11 um, but the min-return sites
        # shrink the return max to 9 um, so the two phases tune differently
        c = Circuit(6, (cz(0, 5), cz(3, 4)))
        s = run("tunable_velocity", c, 6, errp)
        outs = {op.velocity for op in s.shuttle_ops() if op.src.is_site}
        rets = {op.velocity for op in s.shuttle_ops() if not op.src.is_site}
        assert outs == {optimal_velocity(11e-6, errp)}
        assert rets == {optimal_velocity(9e-6, errp)}
        assert outs != rets

    def test_beats_fixed_velocity_for_max_distance_qubit(self, errp):
        c = Circuit(6, (cz(0, 5),))
        tun = run("tunable_velocity", c, 6, errp)
        fixed = run("min_return", c, 6, errp)
        assert tun.per_qubit_error[0] <= fixed.per_qubit_error[0]

    def test_short_phase_well_defined(self, errp):
        # all operands adjacent to their zones: 1 um phases
        c = Circuit(4, (h(1), h(2)))
        s = run("tunable_velocity", c, 4, errp)
        v = optimal_velocity(1e-6, errp)
        assert all(op.velocity == v for op in s.shuttle_ops())
        assert v > 0


class TestSwapReturn:
    def test_rule_direction(self, errp):
        # q3 next meets q0 (far left), q4 next meets q7 (far right):
        # q3 takes the left return site, q4 the right one
        c = Circuit(8, (cz(3, 4), cz(0, 3), cz(4, 7)))
        s = run("swap_return", c, 8, errp)
        first_returns = {
            op.qubit: op.dst
            for op in s.shuttle_ops()
            if op.src == Location.zone(4)
        }
        assert first_returns[3] == Location.site(3)
        assert first_returns[4] == Location.site(4)

    def test_swapped_when_futures_reversed(self, errp):
        # q3 next meets q7 (far right), q4 next meets q0 (far left)
        c = Circuit(8, (cz(3, 4), cz(3, 7), cz(0, 4)))
        s = run("swap_return", c, 8, errp)
        first_returns = {
            op.qubit: op.dst
            for op in s.shuttle_ops()
            if op.src == Location.zone(4)
        }
        assert first_returns[3] == Location.site(4)
        assert first_returns[4] == Location.site(3)
        # min_return's fixed pairing puts q3 (smaller index) on the right
        s_min = run("min_return", c, 8, errp)
        min_returns = {
            op.qubit: op.dst
            for op in s_min.shuttle_ops()
            if op.src == Location.zone(4)
        }
        assert min_returns[3] == Location.site(4)
        assert min_returns[4] == Location.site(3)

    def test_one_sided_future_takes_closest_site(self, errp):
        # only q3 has a future partner (q0, far left): q3 gets the site
        # minimizing that distance even though min_return would hand it the
        # rightmost one
        c = Circuit(8, (cz(3, 4), cz(0, 3)))
        s = run("swap_return", c, 8, errp)
        first_returns = {
            op.qubit: op.dst
            for op in s.shuttle_ops()
            if op.src == Location.zone(4)
        }
        assert first_returns[3] == Location.site(3)
        assert first_returns[4] == Location.site(4)

    def test_no_future_matches_tunable_velocity(self, errp):
        # with no future two-qubit gates the return rule falls back to the
        # min-return pairing; movements equal tunable_velocity's exactly
        c = Circuit(6, (cz(1, 4), h(0)))
        sw = run("swap_return", c, 6, errp)
        tv = run("tunable_velocity", c, 6, errp)
        assert sw.ops == tv.ops

    def test_error_regression_against_min_return(self, errp):
        # golden fraction: at fixed velocity the future-aware returns beat
        # plain min_return on 43 of 50 seeded random circuits
        wins = 0
        for seed in range(50):
            c = decompose(generate(BenchmarkSpec(family="random", n=8, seed=seed)))
            sc = slice_circuit(c)
            p = Placement.identity(8)
            plain = summarize(map_min_return(sc, arch(8), p, errp))
            swapped = _map_sliced(
                sc, arch(8), p, errp,
                strategy="swap_return_fixed_v",
                dynamic_return=True, tunable=False, swap_returns=True,
            )
            assert validate_schedule(swapped, arch(8)) == []
            wins += summarize(swapped).mean_error <= plain.mean_error + 1e-18
        assert wins == 43


class TestScheduleInvariants:
    @pytest.mark.parametrize("strategy", STRATEGIES)
    def test_gate_completeness_and_order(self, errp, strategy):
        c = decompose(generate(BenchmarkSpec(family="qft", n=6, seed=0)))
        s = run(strategy, c, 6, errp)
        indices = [op.gate_index for op in s.gate_ops()]
        assert sorted(indices) == list(range(len(c.gates)))
        by_start = sorted(s.gate_ops(), key=lambda op: (op.start, op.gate_index))
        for q in range(6):
            mine = [op.gate_index for op in by_start if q in c.gates[op.gate_index].qubits]
            assert mine == sorted(mine)

    @pytest.mark.parametrize("strategy", STRATEGIES)
    def test_error_accounting_fold(self, errp, strategy):
        c = decompose(generate(BenchmarkSpec(family="qaoa", n=6, seed=1)))
        s = run(strategy, c, 6, errp)
        folded = [0.0] * 6
        for op in s.shuttle_ops():
            folded[op.qubit] += op.delta_c
        for got, want in zip(s.per_qubit_error, folded):
            assert got == want

    def test_untouched_qubits_accrue_nothing(self, errp):
        s = run("min_return", Circuit(6, (cz(0, 1),)), 6, errp)
        for q in (2, 3, 4, 5):
            assert s.per_qubit_error[q] == 0.0

    def test_determinism_byte_identical(self, errp):
        c = decompose(generate(BenchmarkSpec(family="graph_state", n=8, seed=4)))
        a = run("swap_return", c, 8, errp)
        b = run("swap_return", c, 8, errp)
        assert schedule_to_json(a) == schedule_to_json(b)

    def test_measure_scheduling_flag(self, errp):
        c = Circuit(3, (h(0), Gate(GateKind.MEASURE, (0,))))
        stripped = run("min_return", c, 3, errp)
        assert len(stripped.gate_ops()) == 1
        timed = run("min_return", c, 3, errp, measure_duration=100 * NS)
        assert len(timed.gate_ops()) == 2
        measure_op = timed.gate_ops()[1]
        assert measure_op.duration == pytest.approx(100 * NS)

    def test_barrier_consumes_no_time(self, errp):
        plain = run("parallel", Circuit(3, (h(0), h(0))), 3, errp)
        fenced = run(
            "parallel", Circuit(3, (h(0), Gate(GateKind.BARRIER, (0, 1, 2)), h(0))), 3, errp
        )
        assert fenced.total_time == pytest.approx(plain.total_time)

    def test_mapper_rejects_extended_basis(self, errp):
        with pytest.raises(ValueError):
            map_baseline(Circuit(2, (Gate(GateKind.CX, (0, 1)),)), arch(2), Placement.identity(2), errp)

    def test_size_mismatch_rejected(self, errp):
        with pytest.raises(ValueError):
            map_baseline(Circuit(2, ()), arch(4), Placement.identity(4), errp)


class TestSerialization:
    def test_round_trip(self, errp):
        c = decompose(generate(BenchmarkSpec(family="dj", n=6, seed=0)))
        s = run("swap_return", c, 6, errp)
        text = schedule_to_json(s)
        back = schedule_from_json(text, circuit=s.circuit)
        assert back.strategy == s.strategy
        assert back.initial_sites == s.initial_sites
        assert back.final_sites == s.final_sites
        assert len(back.ops) == len(s.ops)
        assert back.total_time == pytest.approx(s.total_time, abs=1e-12)
        for got, want in zip(back.ops, s.ops):
            assert type(got) is type(want)
            assert got.start == pytest.approx(want.start, abs=1e-12)

    def test_header_fields(self, errp):
        import json

        s = run("baseline", Circuit(2, (h(0),)), 2, errp)
        doc = json.loads(schedule_to_json(s))
        assert doc["strategy"] == "baseline"
        assert doc["placement"] == [0, 1]
        assert doc["arch"]["n_sites"] == 2
        assert "l_c_nm" in doc["error_params"]
        shuttle = next(op for op in doc["ops"] if "q" in op)
        assert set(shuttle) == {"q", "from", "to", "t0_ns", "v_mps", "dC"}
        gate = next(op for op in doc["ops"] if "gate" in op)
        assert set(gate) == {"gate", "zone", "t0_ns", "dur_ns"}


class TestValidator:
    def _mk(self, n, ops, per_qubit_error=None, total=None, final=None, errp=None):
        errp = errp or ErrorModelParams()
        folded = [0.0] * n
        for op in ops:
            if isinstance(op, ShuttleOp):
                folded[op.qubit] += op.delta_c
        return Schedule(
            strategy="handmade",
            circuit=Circuit(n, ()),
            arch=arch(n),
            error_params=errp,
            initial_sites=tuple(range(n)),
            ops=tuple(ops),
            total_time=total if total is not None else max((op.end for op in ops), default=0.0),
            per_qubit_error=tuple(per_qubit_error or folded),
            final_sites=tuple(final or range(n)),
        )

    def _shuttle(self, q, src, dst, start, v=10.0, errp=None):
        errp = errp or ErrorModelParams()
        d = distance(src, dst, arch(8))
        return ShuttleOp(q, src, dst, start, v, d / v, phase_error(v, d, errp))

    def test_clean_mapper_output_passes(self, errp):
        for strategy in STRATEGIES:
            c = decompose(generate(BenchmarkSpec(family="ghz", n=5, seed=0)))
            run(strategy, c, 5, errp)  # asserts empty violation list

    def test_zone_capacity_violation(self):
        ops = [
            self._shuttle(0, Location.site(0), Location.zone(2), 0.0),
            self._shuttle(1, Location.site(1), Location.zone(2), 0.0),
            self._shuttle(2, Location.site(2), Location.zone(2), 0.0),
        ]
        s = self._mk(8, ops)
        rules = {v.rule for v in validate_schedule(s, arch(8))}
        assert "b" in rules

    def test_crossing_violation(self):
        ops = [
            self._shuttle(0, Location.site(0), Location.zone(3), 0.0),
            self._shuttle(1, Location.site(3), Location.zone(0), 0.0),
            self._shuttle(0, Location.zone(3), Location.site(0), 1e-6),
            self._shuttle(1, Location.zone(0), Location.site(1), 1e-6),
        ]
        s = self._mk(8, ops, final=[0, 1] + list(range(2, 8)))
        rules = {v.rule for v in validate_schedule(s, arch(8))}
        assert "d" in rules

    def test_site_capacity_violation(self):
        ops = [self._shuttle(0, Location.site(0), Location.zone(0), 0.0),
               self._shuttle(0, Location.zone(0), Location.site(1), 1e-6)]
        s = self._mk(8, ops, final=[1] + list(range(1, 8)))
        rules = {v.rule for v in validate_schedule(s, arch(8))}
        assert "c" in rules  # site 1 already parked qubit 1

    def test_stranded_qubit_violation(self):
        ops = [self._shuttle(0, Location.site(0), Location.zone(0), 0.0)]
        s = self._mk(8, ops)
        rules = {v.rule for v in validate_schedule(s, arch(8))}
        assert "e" in rules

    def test_error_fold_violation(self, errp):
        s = run("baseline", Circuit(2, (h(0),)), 2, errp)
        tampered = Schedule(
            strategy=s.strategy, circuit=s.circuit, arch=s.arch,
            error_params=s.error_params, initial_sites=s.initial_sites,
            ops=s.ops, total_time=s.total_time,
            per_qubit_error=(0.0, 0.0), final_sites=s.final_sites,
        )
        rules = {v.rule for v in validate_schedule(tampered, s.arch)}
        assert "f" in rules

    def test_total_time_violation(self, errp):
        s = run("baseline", Circuit(2, (h(0),)), 2, errp)
        tampered = Schedule(
            strategy=s.strategy, circuit=s.circuit, arch=s.arch,
            error_params=s.error_params, initial_sites=s.initial_sites,
            ops=s.ops, total_time=s.total_time * 2,
            per_qubit_error=s.per_qubit_error, final_sites=s.final_sites,
        )
        rules = {v.rule for v in validate_schedule(tampered, s.arch)}
        assert "g" in rules

    def test_gate_without_operands_present(self, errp):
        c = Circuit(2, (h(0),))
        gate_only = Schedule(
            strategy="handmade", circuit=c, arch=arch(2),
            error_params=errp, initial_sites=(0, 1),
            ops=(GateOp(0, 0, 0.0, 20e-9),),
            total_time=20e-9, per_qubit_error=(0.0, 0.0), final_sites=(0, 1),
        )
        rules = {v.rule for v in validate_schedule(gate_only, arch(2))}
        assert "a" in rules


class TestLayoutState:
    def test_capacity_enforced(self):
        with pytest.raises(ValueError):
            LayoutState((Location.site(0), Location.site(0)))
        with pytest.raises(ValueError):
            LayoutState((Location.zone(1), Location.zone(1), Location.zone(1)))
        LayoutState((Location.zone(1), Location.zone(1)))  # two per zone is fine

    def test_occupancy_and_counts(self):
        layout = LayoutState((Location.zone(1), Location.zone(1), Location.site(0)))
        assert layout.occupancy()[Location.zone(1)] == (0, 1)
        assert layout.zone_counts() == {1: 2}

    def test_final_layout_of_schedule(self, errp):
        s = run("min_return", Circuit(4, (cz(0, 3),)), 4, errp)
        layout = s.final_layout
        assert all(loc.is_site for loc in layout.assignment)
