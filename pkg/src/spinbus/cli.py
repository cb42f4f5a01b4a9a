"""Command-line frontend: compile one circuit, run the benchmark matrix,
or sweep placement impact over qubit counts.

Exit codes: 0 success, 1 QASM parse error, 2 invalid configuration,
3 internal schedule-validation failure (always a bug).

Configuration merges three layers, later wins: built-in defaults, the
--config JSON file, explicit flags. All emitted CSV/JSON is
byte-deterministic under fixed seeds: rows are sorted, floats printed with
repr, newlines fixed to "\n".
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .architecture import ArchitectureSpec
from .benchgen import FAMILIES, BenchmarkSpec, generate
from .circuit import Circuit, decompose, slice_circuit
from .error_model import ErrorModelParams
from .mapper import STRATEGIES, map_strategy, schedule_to_json, validate_schedule
from .metrics import compare, reports_to_csv, reports_to_json, summarize
from .placement import (
    Placement,
    build_interaction_graph,
    random_placement,
    spectral_placement,
)
from .qasm import QasmError, parse_qasm

PLACEMENT_MODES = ("spectral", "random", "identity")

BENCH_HEADER = "family,strategy,placement,seed,total_time_ns,mean_dC,std_dC"
SWEEP_HEADER = "family,n,depth,strategy,time_ratio,error_ratio"
COMPARE_HEADER = "strategy,time_ratio,error_ratio"

_COMMON_DEFAULTS = {
    "arch_config": None,
    "error_config": None,
    "out": "out",
    "seed": 0,
    "runs": 10,
    "qaoa_rounds": 1,
}

DEFAULTS = {
    "compile": {
        **_COMMON_DEFAULTS,
        "input": None,
        "gen": None,
        "n": None,
        "depth": None,
        "strategy": "all",
        "placement": "spectral",
        "measure_duration": None,
        "format": "json,csv",
    },
    "bench": {**_COMMON_DEFAULTS, "n": 16, "families": ",".join(FAMILIES)},
    "sweep": {
        **_COMMON_DEFAULTS,
        "n_min": 10,
        "n_max": 30,
        "n_step": 5,
        "families": ",".join(FAMILIES),
    },
}


class ConfigError(Exception):
    pass


class ValidationFailure(Exception):
    pass


def _fmt(x: float | None) -> str:
    return "" if x is None else repr(x)


def _load_json_file(path: str, what: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {what} {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{what} {path!r} is not valid JSON: {exc}") from exc


def _merge_config(cmd: str, given: dict) -> argparse.Namespace:
    merged = dict(DEFAULTS[cmd])
    config_path = given.pop("config", None)
    if config_path:
        file_cfg = _load_json_file(config_path, "config file")
        if not isinstance(file_cfg, dict):
            raise ConfigError("config file must hold a JSON object")
        for key, value in file_cfg.items():
            if key not in merged:
                raise ConfigError(f"unknown config key {key!r} for {cmd}")
            merged[key] = value
    merged.update(given)
    # coerce config-file scalars to the type the default implies
    for key, default in DEFAULTS[cmd].items():
        value = merged[key]
        if value is None or default is None:
            continue
        if isinstance(value, list) and isinstance(default, str):
            value = ",".join(str(v) for v in value)
        try:
            merged[key] = type(default)(value)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad value for {key!r}: {value!r}") from exc
    return argparse.Namespace(cmd=cmd, **merged)


def _build_arch(n: int, path: str | None) -> ArchitectureSpec:
    if path is None:
        return ArchitectureSpec(n_sites=n)
    cfg = _load_json_file(path, "architecture config")
    cfg.setdefault("n_sites", n)
    try:
        arch = ArchitectureSpec.from_config(cfg)
    except (ValueError, KeyError) as exc:
        raise ConfigError(f"bad architecture config: {exc}") from exc
    if arch.n_sites != n:
        raise ConfigError(
            f"architecture has {arch.n_sites} sites but the circuit needs {n}"
        )
    return arch


def _build_errp(path: str | None) -> ErrorModelParams:
    if path is None:
        return ErrorModelParams()
    try:
        return ErrorModelParams.from_config(_load_json_file(path, "error-model config"))
    except ValueError as exc:
        raise ConfigError(f"bad error-model config: {exc}") from exc


def _load_circuit(args: argparse.Namespace) -> Circuit:
    if bool(args.input) == bool(args.gen):
        raise ConfigError("exactly one of --input and --gen is required")
    if args.input:
        try:
            with open(args.input, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read {args.input!r}: {exc}") from exc
        return parse_qasm(text)
    if args.n is None:
        raise ConfigError("--gen needs --n")
    try:
        spec = BenchmarkSpec(
            family=args.gen,
            n=int(args.n),
            seed=args.seed,
            qaoa_rounds=args.qaoa_rounds,
            depth=None if args.depth is None else int(args.depth),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return generate(spec)


def _placements(
    mode: str, sliced, n: int, seed: int, runs: int
) -> list[tuple[str, Placement]]:
    if mode == "spectral":
        return [("spectral", spectral_placement(build_interaction_graph(sliced)))]
    if mode == "identity":
        return [("identity", Placement.identity(n))]
    if mode == "random":
        if runs < 1:
            raise ConfigError("--runs must be >= 1")
        return [
            (f"random_s{seed + i}", random_placement(n, seed + i)) for i in range(runs)
        ]
    raise ConfigError(f"unknown placement mode {mode!r}")


def _compile_one(strategy, sliced, arch, placement, errp, measure_duration):
    schedule = map_strategy(strategy, sliced, arch, placement, errp, measure_duration)
    violations = validate_schedule(schedule, arch)
    if violations:
        lines = "; ".join(f"[{v.rule}] {v.message}" for v in violations[:5])
        raise ValidationFailure(
            f"{strategy}: schedule failed validation ({len(violations)} issues): {lines}"
        )
    return schedule


def _mean_std(values: list[float]) -> tuple[float, float]:
    n = len(values)
    mean = sum(values) / n
    var = sum((x - mean) ** 2 for x in values) / n
    return mean, var**0.5


def cmd_compile(args: argparse.Namespace) -> int:
    if args.strategy not in ("all",) + STRATEGIES:
        raise ConfigError(f"unknown strategy {args.strategy!r}")
    circuit = _load_circuit(args)
    native = decompose(circuit)
    sliced = slice_circuit(native)
    n = circuit.num_qubits
    arch = _build_arch(n, args.arch_config)
    errp = _build_errp(args.error_config)
    measure_duration = (
        None if args.measure_duration is None else float(args.measure_duration) * 1e-9
    )
    strategies = list(STRATEGIES) if args.strategy == "all" else [args.strategy]
    placements = _placements(args.placement, sliced, n, args.seed, args.runs)
    formats = {f.strip() for f in args.format.split(",")} - {""}
    if not formats or not formats <= {"json", "csv"}:
        raise ConfigError(f"--format wants json,csv subsets, got {args.format!r}")

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    per_strategy: dict[str, list] = {s: [] for s in strategies}
    for ptag, placement in placements:
        reports = []
        for strategy in strategies:
            schedule = _compile_one(
                strategy, sliced, arch, placement, errp, measure_duration
            )
            if "json" in formats:
                path = out_dir / f"schedule_{strategy}__{ptag}.json"
                path.write_text(schedule_to_json(schedule), encoding="utf-8")
            report = summarize(schedule)
            reports.append(report)
            per_strategy[strategy].append(report)
        if "csv" in formats:
            (out_dir / f"reports__{ptag}.csv").write_text(
                reports_to_csv(reports), encoding="utf-8"
            )
        if "json" in formats:
            (out_dir / f"reports__{ptag}.json").write_text(
                reports_to_json(reports), encoding="utf-8"
            )
        if len(reports) == len(STRATEGIES) and "csv" in formats:
            rows = [COMPARE_HEADER]
            for ratios in compare(reports):
                rows.append(
                    f"{ratios.strategy},{_fmt(ratios.time_ratio)},{_fmt(ratios.error_ratio)}"
                )
            (out_dir / f"compare__{ptag}.csv").write_text(
                "\n".join(rows) + "\n", encoding="utf-8"
            )

    for strategy in strategies:
        reports = per_strategy[strategy]
        times = [r.total_time * 1e9 for r in reports]
        errors = [r.mean_error for r in reports]
        if len(reports) == 1:
            print(
                f"{strategy}: placement={placements[0][0]} "
                f"total_time_ns={times[0]:.3f} mean_dC={errors[0]:.6e}"
            )
        else:
            t_mean, t_std = _mean_std(times)
            e_mean, e_std = _mean_std(errors)
            print(
                f"{strategy}: placement={args.placement} runs={len(reports)} "
                f"total_time_ns={t_mean:.3f}+-{t_std:.3f} "
                f"mean_dC={e_mean:.6e}+-{e_std:.6e}"
            )
    return 0


def _parse_families(text: str) -> list[str]:
    families = [f.strip() for f in text.split(",") if f.strip()]
    for family in families:
        if family not in FAMILIES:
            raise ConfigError(f"unknown family {family!r}; pick from {FAMILIES}")
    if not families:
        raise ConfigError("no families selected")
    return families


def _family_pipeline(family: str, n: int, seed: int, qaoa_rounds: int):
    circuit = generate(
        BenchmarkSpec(family=family, n=n, seed=seed, qaoa_rounds=qaoa_rounds)
    )
    return slice_circuit(decompose(circuit))


def cmd_bench(args: argparse.Namespace) -> int:
    families = _parse_families(args.families)
    if args.runs < 1:
        raise ConfigError("--runs must be >= 1")
    try:
        arch = _build_arch(args.n, args.arch_config)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    errp = _build_errp(args.error_config)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    rows = []
    for family in families:
        sliced = _family_pipeline(family, args.n, args.seed, args.qaoa_rounds)
        graph = build_interaction_graph(sliced)
        placements = [("spectral", "", spectral_placement(graph))]
        placements += [
            ("random", str(args.seed + i), random_placement(args.n, args.seed + i))
            for i in range(args.runs)
        ]
        for strategy in STRATEGIES:
            for pmode, pseed, placement in placements:
                schedule = _compile_one(strategy, sliced, arch, placement, errp, None)
                report = summarize(schedule)
                rows.append(
                    (
                        family,
                        strategy,
                        pmode,
                        pseed,
                        repr(report.total_time * 1e9),
                        repr(report.mean_error),
                        repr(report.std_error),
                    )
                )
    rows.sort()
    text = "\n".join([BENCH_HEADER] + [",".join(r) for r in rows]) + "\n"
    (out_dir / "bench.csv").write_text(text, encoding="utf-8")
    print(f"bench: {len(rows)} rows -> {out_dir / 'bench.csv'}")
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    families = _parse_families(args.families)
    if args.runs < 1:
        raise ConfigError("--runs must be >= 1")
    if not (2 <= args.n_min <= args.n_max and args.n_step >= 1):
        raise ConfigError("need 2 <= n-min <= n-max and n-step >= 1")
    errp = _build_errp(args.error_config)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    rows = []
    for n in range(args.n_min, args.n_max + 1, args.n_step):
        arch = _build_arch(n, args.arch_config)
        for family in families:
            sliced = _family_pipeline(family, n, args.seed, args.qaoa_rounds)
            graph = build_interaction_graph(sliced)
            spectral = spectral_placement(graph)
            randoms = [random_placement(n, args.seed + i) for i in range(args.runs)]
            for strategy in STRATEGIES:
                spectral_report = summarize(
                    _compile_one(strategy, sliced, arch, spectral, errp, None)
                )
                rand_reports = [
                    summarize(_compile_one(strategy, sliced, arch, p, errp, None))
                    for p in randoms
                ]
                rand_time = sum(r.total_time for r in rand_reports) / len(rand_reports)
                rand_err = sum(r.mean_error for r in rand_reports) / len(rand_reports)
                time_ratio = (
                    None
                    if spectral_report.total_time == 0.0
                    else rand_time / spectral_report.total_time
                )
                error_ratio = (
                    None
                    if spectral_report.mean_error == 0.0
                    else rand_err / spectral_report.mean_error
                )
                rows.append(
                    (
                        family,
                        str(n),
                        str(sliced.depth),
                        strategy,
                        _fmt(time_ratio),
                        _fmt(error_ratio),
                    )
                )
    rows.sort()
    text = "\n".join([SWEEP_HEADER] + [",".join(r) for r in rows]) + "\n"
    (out_dir / "sweep.csv").write_text(text, encoding="utf-8")
    print(f"sweep: {len(rows)} rows -> {out_dir / 'sweep.csv'}")
    return 0


_COMMANDS = {"compile": cmd_compile, "bench": cmd_bench, "sweep": cmd_sweep}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinbus",
        description="Compile quantum circuits onto a 1D spin-qubit shuttling bus.",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--arch-config", help="architecture JSON (um/ns units)")
        p.add_argument("--error-config", help="error-model JSON (nm/us/ueV units)")
        p.add_argument("--config", help="JSON config file; flags override it")
        p.add_argument("--out", help="output directory (default: out)")
        p.add_argument("--seed", type=int)
        p.add_argument("--runs", type=int, help="random-placement repetitions")
        p.add_argument("--qaoa-rounds", type=int)

    p_compile = sub.add_parser(
        "compile", argument_default=argparse.SUPPRESS, help="compile one circuit"
    )
    common(p_compile)
    p_compile.add_argument("--input", help="OpenQASM 2.0 file")
    p_compile.add_argument("--gen", choices=FAMILIES, help="generate a benchmark family")
    p_compile.add_argument("--n", type=int, help="qubit count for --gen")
    p_compile.add_argument("--depth", type=int, help="depth for --gen random")
    p_compile.add_argument("--strategy", choices=("all",) + STRATEGIES)
    p_compile.add_argument("--placement", choices=PLACEMENT_MODES)
    p_compile.add_argument(
        "--measure-duration", type=float, help="schedule MEASURE as a gate of this many ns"
    )
    p_compile.add_argument("--format", help="comma-set of json,csv")

    p_bench = sub.add_parser(
        "bench",
        argument_default=argparse.SUPPRESS,
        help="families x strategies x placements matrix",
    )
    common(p_bench)
    p_bench.add_argument("--n", type=int)
    p_bench.add_argument("--families")

    p_sweep = sub.add_parser(
        "sweep",
        argument_default=argparse.SUPPRESS,
        help="placement-impact ratios over qubit counts",
    )
    common(p_sweep)
    p_sweep.add_argument("--n-min", type=int)
    p_sweep.add_argument("--n-max", type=int)
    p_sweep.add_argument("--n-step", type=int)
    p_sweep.add_argument("--families")

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    parsed = parser.parse_args(argv)
    given = vars(parsed)
    cmd = given.pop("cmd")
    try:
        args = _merge_config(cmd, given)
        return _COMMANDS[cmd](args)
    except QasmError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValidationFailure as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
