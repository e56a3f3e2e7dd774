"""Command-line interface: evolve, sweep, compile, check.

Runs are described by a RunConfig, read from a JSON file (--config) with
individual flags overriding file values.  evolve writes one CSV row per step
boundary with the frozen column set

    step, wt, nu, g2, lambda, negativity, log_negativity, retention

plus a JSON run summary next to the CSV.  sweep writes the same rows in long
form with the swept axis prepended.  Exit codes: 0 success, 1 runtime or
check/verify failure, 2 invalid configuration or usage.
"""
from __future__ import annotations

import argparse
import concurrent.futures
import csv
import dataclasses
import json
import sys

import numpy as np

from . import checks, engine, kernels, model, observables
from .compiler import (
    DEFAULT_SECTION_ORDER,
    TrotterSchedule,
    compile_step,
    step_target,
    trotter_evolve,
)
from .errors import (
    ParameterError,
    PulseSyntaxError,
    StructureError,
    UnboundSymbolError,
    ZeroSupportError,
)
from .gates import (
    AddressedZ,
    CollectiveRotation,
    EntanglingMS,
    Hide,
    Unhide,
    circuit_unitary,
)
from .pulses import emit_pulse_program

BACKENDS = ("exact-pure", "trotter-pure", "trotter-noisy")
SWEEP_AXES = ("m", "J", "w", "N")
VERIFY_TOL = 1e-6
DEFAULT_WT_MAX = 4.0


@dataclasses.dataclass
class RunConfig:
    """Everything one run needs; JSON layout mirrors the field groups."""

    N: int = 4
    w: float = 1.0
    J: float = 1.0
    m: float = 0.0
    epsilon0: int = 0
    T: float | None = None
    wt_max: float = DEFAULT_WT_MAX
    n_steps: int = 16
    J0: float = 1.0
    section_order: tuple = DEFAULT_SECTION_ORDER
    magnetization_shift: bool = True
    backend: str = "exact-pure"
    noise_p: float | None = None
    postselect: bool = False
    cut: int | None = None
    output: str | None = None
    seed: int | None = None

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        flat: dict = {}
        for group in ("params", "schedule"):
            sub = data.get(group, {})
            if not isinstance(sub, dict):
                raise ParameterError(f"config key {group!r} must be an object")
            flat.update(sub)
        flat.update({k: v for k, v in data.items() if k not in ("params", "schedule")})
        unknown = set(flat) - known
        if unknown:
            raise ParameterError(f"unknown config keys: {sorted(unknown)}")
        cfg = cls(**flat)
        cfg.normalize()
        return cfg

    def normalize(self) -> None:
        if isinstance(self.section_order, str):
            self.section_order = tuple(s.strip() for s in self.section_order.split(","))
        else:
            self.section_order = tuple(self.section_order)
        if self.backend not in BACKENDS:
            raise ParameterError(f"backend must be one of {BACKENDS}, got {self.backend!r}")
        if self.backend == "trotter-noisy" and self.noise_p is None:
            raise ParameterError("trotter-noisy requires noise_p")
        if self.noise_p is not None:
            engine.DephasingModel(self.noise_p)  # range check
        self.params()  # parameter checks

    def params(self) -> model.ModelParams:
        return model.ModelParams(
            N=int(self.N), w=self.w, J=self.J, m=self.m, epsilon0=self.epsilon0
        )

    def resolve_T(self) -> float:
        if self.T is not None:
            if not self.T >= 0:
                raise ParameterError(f"T must be >= 0, got {self.T}")
            return float(self.T)
        if self.w == 0 or self.n_steps == 0:
            raise ParameterError("T must be given explicitly when w = 0 or n_steps = 0")
        return float(self.wt_max) / (self.w * self.n_steps)

    def schedule(self) -> TrotterSchedule:
        return TrotterSchedule(
            T=self.resolve_T(),
            n_steps=int(self.n_steps),
            J0=self.J0,
            section_order=self.section_order,
        )

    def to_dict(self) -> dict:
        out = dataclasses.asdict(self)
        out["section_order"] = list(self.section_order)
        out["T"] = self.resolve_T()
        return out


def load_config(path: str | None, overrides: dict) -> RunConfig:
    data: dict = {}
    if path is not None:
        with open(path) as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise ParameterError("config file must hold a JSON object")
    cfg = RunConfig.from_dict(data)
    for key, value in overrides.items():
        if value is not None:
            setattr(cfg, key, value)
    cfg.normalize()
    return cfg


def run_states(cfg: RunConfig) -> list:
    """States at every step boundary per the configured backend."""
    params = cfg.params()
    T = cfg.resolve_T()
    if cfg.backend == "exact-pure":
        H = model.build_spin_hamiltonian(params)
        prop = engine.ExactPropagator(H)
        vac = model.vacuum_state(params.N)
        return [prop.evolve(vac, k * T) for k in range(cfg.n_steps + 1)]
    schedule = cfg.schedule()
    if cfg.backend == "trotter-pure":
        return trotter_evolve(
            params, schedule, magnetization_shift=cfg.magnetization_shift
        )
    rho = engine.to_density(model.vacuum_state(params.N))
    return trotter_evolve(
        params,
        schedule,
        initial=rho,
        noise=engine.DephasingModel(cfg.noise_p),
        magnetization_shift=cfg.magnetization_shift,
    )


def run_records(cfg: RunConfig) -> list:
    params = cfg.params()
    projector = model.physical_projector(params.N) if cfg.postselect else None
    return observables.time_series(
        run_states(cfg),
        params,
        cfg.resolve_T(),
        cut=cfg.cut,
        projector=projector,
    )


def _format_cell(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def write_rows(path: str, header: tuple, rows: list) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_format_cell(v) for v in row])


def summary_path(csv_path: str) -> str:
    return csv_path[: -len(".csv")] + ".json" if csv_path.endswith(".csv") else csv_path + ".json"


def write_summary(csv_path: str, payload: dict) -> str:
    path = summary_path(csv_path)
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def cmd_evolve(cfg: RunConfig) -> int:
    out = cfg.output or "evolve.csv"
    records = run_records(cfg)
    write_rows(out, observables.CSV_COLUMNS, [r.row() for r in records])
    write_summary(
        out,
        {
            "command": "evolve",
            "config": cfg.to_dict(),
            "columns": list(observables.CSV_COLUMNS),
            "rows": len(records),
            "kernel_backend": kernels.backend_name(),
            "csv": out,
        },
    )
    print(f"wrote {len(records)} rows to {out}")
    return 0


def _sweep_point(payload) -> list:
    cfg_dict, axis, value = payload
    cfg = RunConfig.from_dict(cfg_dict)
    setattr(cfg, "N" if axis == "N" else axis, value)
    cfg.normalize()
    axis_cell = value
    return [(axis_cell, *r.row()) for r in run_records(cfg)]


def cmd_sweep(cfg: RunConfig, axis: str, values: list, jobs: int) -> int:
    if axis not in SWEEP_AXES:
        raise ParameterError(f"sweep axis must be one of {SWEEP_AXES}, got {axis!r}")
    if not values:
        raise ParameterError("sweep needs at least one value")
    out = cfg.output or "sweep.csv"
    base = cfg.to_dict()
    base["T"] = cfg.T  # keep None so each point re-resolves from wt_max
    payloads = [(base, axis, v) for v in values]
    if jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
            blocks = list(pool.map(_sweep_point, payloads))
    else:
        blocks = [_sweep_point(p) for p in payloads]
    rows = [row for block in blocks for row in block]
    write_rows(out, (axis, *observables.CSV_COLUMNS), rows)
    write_summary(
        out,
        {
            "command": "sweep",
            "axis": axis,
            "values": values,
            "config": cfg.to_dict(),
            "columns": [axis, *observables.CSV_COLUMNS],
            "rows": len(rows),
            "kernel_backend": kernels.backend_name(),
            "csv": out,
        },
    )
    print(f"wrote {len(rows)} rows to {out}")
    return 0


def _describe_gate(gate) -> str:
    if isinstance(gate, Hide):
        return f"HIDE {gate.site}"
    if isinstance(gate, Unhide):
        return f"UNHIDE {gate.site}"
    if isinstance(gate, CollectiveRotation):
        sites = ",".join(map(str, gate.active))
        return f"ROT theta={gate.theta!r} phi={gate.phi!r} active={sites}"
    if isinstance(gate, EntanglingMS):
        sites = ",".join(map(str, gate.active))
        return f"MS theta={gate.theta!r} phi={gate.phi!r} active={sites}"
    return f"ZROT theta={gate.theta!r} site={gate.site}"


def cmd_compile(cfg: RunConfig, emit: str, symbolic: bool, verify: bool) -> int:
    params = cfg.params()
    schedule = cfg.schedule()
    if emit == "pulses":
        text = emit_pulse_program(
            params, schedule, symbolic=symbolic, magnetization_shift=cfg.magnetization_shift
        )
    else:
        circuit = compile_step(params, schedule, cfg.magnetization_shift)
        lines = [
            f"# one step: N={params.N} T={schedule.T!r} "
            f"sections={','.join(schedule.section_order)}"
        ]
        lines.extend(_describe_gate(g) for g in circuit.gates)
        text = "\n".join(lines) + "\n"
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(text)
        print(f"wrote {cfg.output}")
    else:
        sys.stdout.write(text)
    if verify:
        circuit = compile_step(params, schedule, cfg.magnetization_shift)
        U = circuit_unitary(circuit)
        target = step_target(params, schedule, cfg.magnetization_shift)
        residual = float(np.max(np.abs(U - target)))
        ok = residual < VERIFY_TOL
        print(f"verify: residual={residual:.3e} threshold={VERIFY_TOL:.0e} {'ok' if ok else 'FAIL'}")
        return 0 if ok else 1
    return 0


def cmd_check(fixture_path: str | None, zz_perturbation: float) -> int:
    fixture_text = None
    if fixture_path is not None:
        with open(fixture_path) as fh:
            fixture_text = fh.read()
    results = checks.run_checks(fixture_text=fixture_text, zz_perturbation=zz_perturbation)
    failed = 0
    for result in results:
        tag = "ok  " if result.passed else "FAIL"
        print(f"{tag} {result.name}: {result.detail}")
        failed += 0 if result.passed else 1
    if failed:
        print(f"{failed} of {len(results)} checks failed")
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="schwingersim",
        description="Simulate and compile encoded lattice Schwinger dynamics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="JSON run configuration")
        p.add_argument("--output", help="output path (CSV or emitted text)")
        p.add_argument("-N", "--sites", dest="N", type=int, help="number of sites")
        p.add_argument("--w", type=float, help="hopping rate")
        p.add_argument("--j", "--J", dest="J", type=float, help="electric energy scale")
        p.add_argument("--m", type=float, help="rest mass")
        p.add_argument("--t-step", dest="T", type=float, help="Trotter step duration")
        p.add_argument("--wt-max", dest="wt_max", type=float, help="total evolution in wt units")
        p.add_argument("--steps", dest="n_steps", type=int, help="number of Trotter steps")
        p.add_argument(
            "--section-order",
            dest="section_order",
            help="comma list permuting PM,Z,ZZ",
        )
        p.add_argument(
            "--no-shift",
            dest="magnetization_shift",
            action="store_false",
            default=None,
            help="disable the magnetization shift of the z section",
        )
        p.add_argument("--seed", type=int, help="seed recorded with the run")

    evolve = sub.add_parser("evolve", help="time evolution from the bare vacuum")
    add_common(evolve)
    evolve.add_argument("--backend", choices=BACKENDS, help="evolution backend")
    evolve.add_argument("--noise-p", dest="noise_p", type=float, help="dephasing probability")
    evolve.add_argument(
        "--postselect", action="store_true", default=None, help="project onto the physical sector"
    )
    evolve.add_argument("--cut", type=int, help="entanglement cut (default N/2)")

    sweep = sub.add_parser("sweep", help="evolve over a swept parameter")
    add_common(sweep)
    sweep.add_argument("--backend", choices=BACKENDS, help="evolution backend")
    sweep.add_argument("--noise-p", dest="noise_p", type=float, help="dephasing probability")
    sweep.add_argument(
        "--postselect", action="store_true", default=None, help="project onto the physical sector"
    )
    sweep.add_argument("--cut", type=int, help="entanglement cut (default N/2)")
    sweep.add_argument("--axis", required=True, choices=SWEEP_AXES)
    sweep.add_argument("--values", required=True, help="comma-separated axis values")
    sweep.add_argument("--jobs", type=int, default=1, help="parallel worker processes")

    comp = sub.add_parser("compile", help="emit one Trotter step as gates or pulses")
    add_common(comp)
    comp.add_argument("--emit", choices=("gates", "pulses"), default="gates")
    comp.add_argument("--symbolic", action="store_true", help="symbolic pulse angles")
    comp.add_argument("--verify", action="store_true", help="compare against the exact step target")

    chk = sub.add_parser("check", help="run the self-check suite")
    chk.add_argument("--fixture", help="override the packaged pulse fixture")
    chk.add_argument(
        "--perturb-zz",
        dest="perturb_zz",
        type=float,
        default=0.0,
        help="fault-injection hook: perturb one long-range coupling",
    )
    return parser


_OVERRIDE_KEYS = (
    "N",
    "w",
    "J",
    "m",
    "T",
    "wt_max",
    "n_steps",
    "section_order",
    "magnetization_shift",
    "backend",
    "noise_p",
    "postselect",
    "cut",
    "output",
    "seed",
)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "check":
            return cmd_check(args.fixture, args.perturb_zz)
        overrides = {k: getattr(args, k, None) for k in _OVERRIDE_KEYS}
        cfg = load_config(args.config, overrides)
        if args.command == "evolve":
            return cmd_evolve(cfg)
        if args.command == "sweep":
            values = [s.strip() for s in args.values.split(",") if s.strip()]
            typed = [int(v) if args.axis == "N" else float(v) for v in values]
            return cmd_sweep(cfg, args.axis, typed, args.jobs)
        return cmd_compile(cfg, args.emit, args.symbolic, args.verify)
    except (ParameterError, PulseSyntaxError, json.JSONDecodeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ZeroSupportError, StructureError, UnboundSymbolError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
