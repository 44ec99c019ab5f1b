"""Configuration-driven command line front end.

Commands::

    spectra solve   --config cfg.json [...]   full spectrum + diagnostics
    spectra scan    --config cfg.json [...]   parameter or Bloch-phase scan
    spectra check   --config cfg.json [...]   symmetry report for a potential
    spectra catalog --config cfg.json [...]   closed-form validation report
    spectra nls     --config cfg.json [...]   nonlinear stationary state

Runs are configured by a JSON file so they are archivable and exactly
reproducible; the flags ``--out --format --n --domain --tol --seed``
override the corresponding config fields.  Exit codes: 0 success,
2 validation failure, 3 solver non-convergence.  Scan points may run in
parallel up to ``SPECTRA_THREADS`` workers; outputs are written in scan
order either way, so results are byte-for-byte deterministic.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import catalog as catalog_mod
from .diagnostics import (
    CSV_HEADER,
    REALITY_TOL_DEFAULT,
    verify_reality_theorem,
)
from .eigen import EigenPair, SolverOptions, Spectrum, eigen_decompose
from .errors import (
    ConfigError,
    NonConvergenceError,
    SpectraError,
)
from .expr import (
    PotentialSpec,
    analyze_symmetry,
    evaluate_on_grid,
    parameter_names,
    parse,
)
from .grids import (
    DIRICHLET,
    BoundaryCondition,
    Grid,
    GridFunction,
    assemble_1d,
    assemble_radial,
    bloch,
    make_grid,
)
from .nls import NlsProblem, solve_stationary

__all__ = ["RunConfig", "load_config", "run", "write_outputs", "main"]

COMMANDS = ("solve", "scan", "check", "catalog", "nls")
DEFAULT_DOMAIN = (-10.0, 10.0)
DEFAULT_GRID_POINTS = 1000
DEFAULT_SCAN_STATES = 8

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NON_CONVERGENCE = 3


# --------------------------------------------------------------------------
# Config
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class RunConfig:
    command: str
    potential: str
    bindings: dict
    quantum: dict
    domain: tuple[float, float]
    grid_points: int
    explicit_grid: bool  # grid/box given in config (or via --domain)
    boundary: BoundaryCondition
    bloch_scan: int | None
    solver: SolverOptions
    reality_tol: float
    scan_param: str | None
    scan_values: tuple[float, ...]
    num_states: int | None
    nls: dict | None
    out: str | None
    fmt: str

    @property
    def is_catalog(self) -> bool:
        return self.potential in {e.id for e in catalog_mod.list_entries()}

    def make_grid(self, bindings: dict | None = None) -> Grid:
        """Run grid: catalog defaults apply unless the config pinned one."""
        if self.is_catalog and not self.explicit_grid:
            return catalog_mod.default_grid(
                self.potential, bindings or self.bindings, self.grid_points
            )
        return make_grid(self.domain[0], self.domain[1], self.grid_points)


def _expect(condition: bool, message: str, fld: str):
    if not condition:
        raise ConfigError(message, field=fld)


def _as_float(value, fld: str) -> float:
    _expect(isinstance(value, (int, float)) and not isinstance(value, bool),
            f"expected a number, got {value!r}", fld)
    return float(value)


def config_from_dict(raw: dict, command: str | None = None) -> RunConfig:
    """Validate a raw config mapping; errors carry the offending field path."""
    _expect(isinstance(raw, dict), "config must be a JSON object", "$")
    known = {
        "command", "potential", "bindings", "quantum", "grid", "box",
        "boundary", "solver", "reality_tol", "scan", "num_states", "nls",
        "out", "format",
    }
    for key in raw:
        _expect(key in known, f"unknown field {key!r}", key)

    cfg_command = raw.get("command", command)
    _expect(cfg_command in COMMANDS, f"command must be one of {COMMANDS}", "command")
    if command is not None and raw.get("command") is not None:
        _expect(raw["command"] == command,
                f"config command {raw['command']!r} conflicts with CLI command {command!r}",
                "command")

    potential = raw.get("potential")
    if potential is None and cfg_command == "nls":
        potential = "0"
    _expect(isinstance(potential, str) and potential != "",
            "potential must be a non-empty string", "potential")

    bindings = raw.get("bindings", {})
    _expect(isinstance(bindings, dict), "bindings must be an object", "bindings")
    bindings = {k: _as_float(v, f"bindings.{k}") for k, v in bindings.items()}

    quantum = raw.get("quantum", {})
    _expect(isinstance(quantum, dict), "quantum must be an object", "quantum")
    quantum = {k: int(_as_float(v, f"quantum.{k}")) for k, v in quantum.items()}

    _expect(not ("grid" in raw and "box" in raw),
            "give either grid or box, not both", "grid")
    explicit_grid = "grid" in raw or "box" in raw
    if "box" in raw:
        box = raw["box"]
        _expect(isinstance(box, dict), "box must be an object", "box")
        length = _as_float(box.get("L", 0.0), "box.L")
        _expect(length > 0, "box length L must be positive", "box.L")
        domain = (0.0, length)
        n = box.get("n", DEFAULT_GRID_POINTS)
    elif "grid" in raw:
        g = raw["grid"]
        _expect(isinstance(g, dict), "grid must be an object", "grid")
        a = _as_float(g.get("a", DEFAULT_DOMAIN[0]), "grid.a")
        b = _as_float(g.get("b", DEFAULT_DOMAIN[1]), "grid.b")
        _expect(b > a, "grid needs b > a", "grid")
        domain = (a, b)
        n = g.get("n", DEFAULT_GRID_POINTS)
    else:
        domain = DEFAULT_DOMAIN
        n = DEFAULT_GRID_POINTS
    n = int(_as_float(n, "grid.n"))
    _expect(n >= 2, "grid needs at least 2 interior nodes", "grid.n")

    boundary = DIRICHLET
    bloch_scan = None
    raw_boundary = raw.get("boundary", "dirichlet")
    if raw_boundary == "dirichlet":
        pass
    elif isinstance(raw_boundary, dict) and set(raw_boundary) == {"bloch"}:
        theta = _as_float(raw_boundary["bloch"], "boundary.bloch")
        _expect(0.0 <= theta < 2.0 * math.pi,
                "bloch phase must lie in [0, 2*pi)", "boundary.bloch")
        boundary = bloch(theta)
    elif isinstance(raw_boundary, dict) and set(raw_boundary) == {"bloch_scan"}:
        count = int(_as_float(raw_boundary["bloch_scan"], "boundary.bloch_scan"))
        _expect(count >= 1, "bloch_scan count must be >= 1", "boundary.bloch_scan")
        bloch_scan = count
    else:
        raise ConfigError(
            "boundary must be 'dirichlet', {'bloch': theta} or {'bloch_scan': count}",
            field="boundary",
        )

    solver_raw = raw.get("solver", {})
    _expect(isinstance(solver_raw, dict), "solver must be an object", "solver")
    solver_known = {"qr_max_sweeps", "deflation_tol", "inverse_tol", "seed"}
    for key in solver_raw:
        _expect(key in solver_known, f"unknown solver field {key!r}", f"solver.{key}")
    try:
        solver = SolverOptions(
            qr_max_sweeps=int(solver_raw.get("qr_max_sweeps", 60)),
            deflation_tol=float(solver_raw.get("deflation_tol", 1e-13)),
            inverse_tol=float(solver_raw.get("inverse_tol", 1e-12)),
            seed=int(solver_raw.get("seed", 1234)),
        )
    except ValueError as exc:
        raise ConfigError(str(exc), field="solver") from None

    reality_tol = _as_float(raw.get("reality_tol", REALITY_TOL_DEFAULT), "reality_tol")
    _expect(reality_tol > 0, "reality tolerance must be positive", "reality_tol")

    scan_param = None
    scan_values: tuple[float, ...] = ()
    if "scan" in raw:
        _expect(cfg_command == "scan",
                "scan section is only valid for the scan command", "scan")
        scan = raw["scan"]
        _expect(isinstance(scan, dict), "scan must be an object", "scan")
        scan_param = scan.get("param")
        _expect(isinstance(scan_param, str) and scan_param,
                "scan.param must be a parameter name", "scan.param")
        values = scan.get("values")
        _expect(isinstance(values, list) and len(values) > 0,
                "scan.values must be a non-empty list", "scan.values")
        scan_values = tuple(_as_float(v, "scan.values") for v in values)

    num_states = raw.get("num_states")
    if num_states is not None:
        num_states = int(_as_float(num_states, "num_states"))
        _expect(num_states >= 1, "num_states must be >= 1", "num_states")

    nls_raw = raw.get("nls")
    if cfg_command == "nls":
        nls_raw = dict(nls_raw or {})
        nls_known = {"c", "gain", "target_norm", "mixing", "max_iterations", "tol"}
        for key in nls_raw:
            _expect(key in nls_known, f"unknown nls field {key!r}", f"nls.{key}")
    else:
        _expect(nls_raw is None,
                "nls section is only valid for the nls command", "nls")

    fmt = raw.get("format", "csv")
    _expect(fmt in ("csv", "json"), "format must be 'csv' or 'json'", "format")

    out = raw.get("out")
    if out is not None:
        _expect(isinstance(out, str) and out, "out must be a path string", "out")

    config = RunConfig(
        command=cfg_command,
        potential=potential,
        bindings=bindings,
        quantum=quantum,
        domain=domain,
        grid_points=n,
        explicit_grid=explicit_grid,
        boundary=boundary,
        bloch_scan=bloch_scan,
        solver=solver,
        reality_tol=reality_tol,
        scan_param=scan_param,
        scan_values=scan_values,
        num_states=num_states,
        nls=nls_raw,
        out=out,
        fmt=fmt,
    )
    _validate_semantics(config)
    return config


def _validate_semantics(config: RunConfig) -> None:
    # the potential text must be a catalog id or a parseable expression
    if not config.is_catalog:
        try:
            tree = parse(config.potential)
        except SpectraError as exc:
            raise ConfigError(
                f"potential is neither a catalog id nor a valid expression: {exc}",
                field="potential",
            ) from None
        free = parameter_names(tree)
        if config.scan_param is not None and config.scan_param not in free:
            raise ConfigError(
                f"scan parameter {config.scan_param!r} does not occur in the potential",
                field="scan.param",
            )
        missing = free - set(config.bindings)
        if config.scan_param:
            missing -= {config.scan_param}
        if missing:
            raise ConfigError(
                f"unbound parameters: {sorted(missing)}", field="bindings"
            )
    else:
        entry = catalog_mod.get_entry(config.potential)
        if config.scan_param is not None and config.scan_param not in entry.defaults:
            raise ConfigError(
                f"scan parameter {config.scan_param!r} is not a parameter of "
                f"catalog entry {entry.id!r}",
                field="scan.param",
            )
    if config.command == "scan":
        if (config.scan_param is None) == (config.bloch_scan is None):
            raise ConfigError(
                "scan needs exactly one of scan.param or boundary.bloch_scan",
                field="scan",
            )
    elif config.bloch_scan is not None:
        raise ConfigError(
            "boundary.bloch_scan is only valid for the scan command",
            field="boundary",
        )


def load_config(path: str, command: str | None = None) -> RunConfig:
    """Read and validate a JSON run configuration."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}", field=path) from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}", field=path) from None
    return config_from_dict(raw, command=command)


# --------------------------------------------------------------------------
# Deterministic emitters (floats at 17 significant digits)
# --------------------------------------------------------------------------

def _fmt_float(x: float) -> str:
    return f"{x:.17g}"


def _json_value(obj) -> str:
    if isinstance(obj, bool) or obj is None or isinstance(obj, (str, int)):
        return json.dumps(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return json.dumps(None)
        return _fmt_float(obj)
    if isinstance(obj, complex):
        return _json_value({"re": obj.real, "im": obj.imag})
    if isinstance(obj, dict):
        body = ",".join(f"{json.dumps(str(k))}:{_json_value(v)}" for k, v in obj.items())
        return "{" + body + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(_json_value(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _report_dict(report) -> dict:
    return {
        "index": report.index,
        "re_E": report.energy.real,
        "im_E": report.energy.imag,
        "exp_UI": report.exp_imag_potential,
        "theorem_residual": report.theorem_residual,
        "eig_residual": report.eig_residual,
        "max_flux": report.max_flux,
        "parity_dev": report.density_parity_deviation,
        "class": report.classification,
    }


def _report_row(report) -> str:
    d = _report_dict(report)
    parity = d["parity_dev"]
    return ",".join(
        [
            str(d["index"]),
            _fmt_float(d["re_E"]),
            _fmt_float(d["im_E"]),
            _fmt_float(d["exp_UI"]),
            _fmt_float(d["theorem_residual"]),
            _fmt_float(d["eig_residual"]),
            _fmt_float(d["max_flux"]),
            "nan" if parity is None else _fmt_float(parity),
            d["class"],
        ]
    )


def write_outputs(reports: list, fmt: str, path: str) -> None:
    """Write per-state diagnostics as CSV (fixed header) or JSON."""
    if fmt == "csv":
        lines = [CSV_HEADER] + [_report_row(r) for r in reports]
        _write_text(path, "\n".join(lines) + "\n")
    else:
        payload = {"reports": [_report_dict(r) for r in reports]}
        _write_text(path, _json_value(payload) + "\n")


# --------------------------------------------------------------------------
# Commands
# --------------------------------------------------------------------------

def _resolve_problem(config: RunConfig, bindings: dict | None = None):
    """Grid, potential samples, and assembled matrix for one run point."""
    bindings = bindings if bindings is not None else config.bindings
    grid = config.make_grid(bindings)
    if config.is_catalog:
        entry = catalog_mod.get_entry(config.potential)
        spec = catalog_mod.potential_spec(config.potential, bindings, config.quantum)
        U = evaluate_on_grid(spec, grid)
        if entry.domain_kind == "radial":
            if config.boundary.kind != "dirichlet":
                raise ConfigError("radial problems are Dirichlet only", field="boundary")
            q = dict(entry.quantum_defaults)
            q.update(config.quantum)
            H = assemble_radial(U, int(q["l"]))
        else:
            H = assemble_1d(U, config.boundary)
        return grid, spec, U, H
    spec = PotentialSpec(parse(config.potential), bindings, "x")
    U = evaluate_on_grid(spec, grid)
    H = assemble_1d(U, config.boundary)
    return grid, spec, U, H


def _default_out(config: RunConfig) -> str:
    ext = "csv" if config.fmt == "csv" else "json"
    return f"spectra_{config.command}.{ext}"


def _run_solve(config: RunConfig) -> int:
    _, _, U, H = _resolve_problem(config)
    spectrum = eigen_decompose(H, config.solver)
    reports = verify_reality_theorem(H, spectrum, U, config.reality_tol)
    write_outputs(reports, config.fmt, config.out or _default_out(config))
    return EXIT_OK


def _is_real_value(value: complex, tol: float) -> bool:
    return abs(value.imag) <= tol * max(1.0, abs(value.real))


def _scan_rows(config: RunConfig, value: float) -> list[tuple[float, complex]]:
    limit = config.num_states or DEFAULT_SCAN_STATES
    if config.bloch_scan is not None:
        bindings = config.bindings
        grid = make_grid(config.domain[0], config.domain[1], config.grid_points)
        if config.is_catalog:
            spec = catalog_mod.potential_spec(config.potential, bindings, config.quantum)
        else:
            spec = PotentialSpec(parse(config.potential), bindings, "x")
        U = evaluate_on_grid(spec, grid)
        H = assemble_1d(U, bloch(value))
    else:
        bindings = dict(config.bindings)
        bindings[config.scan_param] = value
        _, _, _, H = _resolve_problem(config, bindings)
    spectrum = eigen_decompose(H, config.solver)
    return [(value, pair.value) for pair in spectrum.pairs[:limit]]


def _run_scan(config: RunConfig) -> int:
    if config.bloch_scan is not None:
        values = [2.0 * math.pi * m / config.bloch_scan for m in range(config.bloch_scan)]
    else:
        values = list(config.scan_values)

    workers = max(1, int(os.environ.get("SPECTRA_THREADS", "1")))
    if workers > 1 and len(values) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda v: _scan_rows(config, v), values))
    else:
        results = [_scan_rows(config, v) for v in values]

    rows = [row for chunk in results for row in chunk]
    path = config.out or _default_out(config)
    if config.fmt == "csv":
        lines = ["value,re_E,im_E,class"]
        for value, energy in rows:
            cls = "real" if _is_real_value(energy, config.reality_tol) else "complex"
            lines.append(
                f"{_fmt_float(value)},{_fmt_float(energy.real)},"
                f"{_fmt_float(energy.imag)},{cls}"
            )
        _write_text(path, "\n".join(lines) + "\n")
    else:
        payload = {
            "rows": [
                {
                    "value": value,
                    "re_E": energy.real,
                    "im_E": energy.imag,
                    "class": "real"
                    if _is_real_value(energy, config.reality_tol)
                    else "complex",
                }
                for value, energy in rows
            ]
        }
        _write_text(path, _json_value(payload) + "\n")
    return EXIT_OK


def _run_check(config: RunConfig) -> int:
    if config.is_catalog:
        spec = catalog_mod.potential_spec(config.potential, config.bindings, config.quantum)
    else:
        spec = PotentialSpec(parse(config.potential), config.bindings, "x")
    half = max(abs(config.domain[0]), abs(config.domain[1]))
    probe = make_grid(-half, half, config.grid_points)
    report = analyze_symmetry(spec, probe, config.reality_tol)
    payload = {
        "potential": config.potential,
        "is_hermitian": report.is_hermitian,
        "is_pt_symmetric": report.is_pt_symmetric,
        "imag_part_odd": report.imag_part_odd,
        "hermitian_deviation": report.hermitian_deviation,
        "pt_deviation": report.pt_deviation,
        "odd_imag_deviation": report.odd_imag_deviation,
        "skipped_probes": report.skipped_probes,
    }
    path = config.out or _default_out(config)
    if config.fmt == "csv":
        keys = list(payload)
        values = [
            payload[k] if isinstance(payload[k], str)
            else (str(payload[k]).lower() if isinstance(payload[k], bool)
                  else (_fmt_float(payload[k]) if isinstance(payload[k], float)
                        else str(payload[k])))
            for k in keys
        ]
        _write_text(path, ",".join(keys) + "\n" + ",".join(values) + "\n")
    else:
        _write_text(path, _json_value(payload) + "\n")
    return EXIT_OK


def _run_catalog(config: RunConfig) -> int:
    if config.explicit_grid:
        grid = make_grid(config.domain[0], config.domain[1], config.grid_points)
    else:
        grid = catalog_mod.default_grid(
            config.potential, config.bindings, config.grid_points
        )
    report = catalog_mod.validate_entry(
        config.potential,
        config.bindings,
        config.quantum,
        grid=grid,
        opts=config.solver,
    )
    payload = {
        "entry": report.entry_id,
        "params": report.params,
        "quantum": report.quantum,
        "grid_points": report.grid_points,
        "grid_spacing": report.grid_spacing,
        "exact_energy": report.exact_energy,
        "numeric_energy": report.numeric_energy,
        "energy_error": report.energy_error,
        "wavefunction_residual": report.wavefunction_residual,
        "state_overlap": report.state_overlap,
        "exp_UI": report.exp_imag_potential,
        "theorem_residual": report.theorem_residual,
        "eig_residual": report.eig_residual,
    }
    path = config.out or _default_out(config)
    if config.fmt == "csv":
        keys = [
            "entry", "grid_points", "grid_spacing", "exact_energy",
            "re_E", "im_E", "energy_error", "wavefunction_residual",
            "state_overlap", "exp_UI", "theorem_residual", "eig_residual",
        ]
        row = [
            report.entry_id,
            str(report.grid_points),
            _fmt_float(report.grid_spacing),
            _fmt_float(report.exact_energy),
            _fmt_float(report.numeric_energy.real),
            _fmt_float(report.numeric_energy.imag),
            _fmt_float(report.energy_error),
            _fmt_float(report.wavefunction_residual),
            _fmt_float(report.state_overlap),
            _fmt_float(report.exp_imag_potential),
            _fmt_float(report.theorem_residual),
            _fmt_float(report.eig_residual),
        ]
        _write_text(path, ",".join(keys) + "\n" + ",".join(row) + "\n")
    else:
        _write_text(path, _json_value(payload) + "\n")
    return EXIT_OK


def _run_nls(config: RunConfig) -> int:
    if config.is_catalog:
        entry = catalog_mod.get_entry(config.potential)
        if entry.domain_kind == "radial":
            raise ConfigError(
                "nls solves line problems; radial catalog entries are not supported",
                field="potential",
            )
    grid, spec, U, H0 = _resolve_problem(config)
    params = config.nls or {}
    gain_source = params.get("gain", "0")
    try:
        gain_spec = PotentialSpec(parse(gain_source), config.bindings, "x")
    except SpectraError as exc:
        raise ConfigError(f"invalid gain expression: {exc}", field="nls.gain") from None
    problem = NlsProblem(
        potential=spec,
        nonlinearity=float(params.get("c", 0.0)),
        gain=gain_spec,
        grid=grid,
        target_norm=float(params.get("target_norm", 1.0)),
    )
    solution = solve_stationary(
        problem,
        mixing=float(params.get("mixing", 0.5)),
        max_iterations=int(params.get("max_iterations", 200)),
        tol=float(params.get("tol", 1e-10)),
        opts=config.solver,
    )
    f_values = evaluate_on_grid(gain_spec, grid).values.real
    effective = GridFunction(grid, U.values
                             + problem.nonlinearity * np.abs(solution.psi.values) ** 2
                             + 1j * f_values)
    H_eff = assemble_1d(effective, DIRICHLET)
    unit = solution.psi.values / np.linalg.norm(solution.psi.values)
    pair = EigenPair(solution.energy, unit, solution.residual, solution.converged,
                     solution.iterations)
    reports = verify_reality_theorem(
        H_eff, Spectrum((pair,)), effective, config.reality_tol
    )
    path = config.out or _default_out(config)
    iteration_log = [
        {"iteration": it, "re_E": e.real, "im_E": e.imag, "delta_psi": d}
        for it, e, d in solution.history
    ]
    summary = {
        "energy": solution.energy,
        "iterations": solution.iterations,
        "residual": solution.residual,
        "exp_gain": solution.exp_gain,
        "converged": solution.converged,
    }
    if config.fmt == "csv":
        lines = [CSV_HEADER, _report_row(reports[0])]
        _write_text(path, "\n".join(lines) + "\n")
        log_lines = ["iteration,re_E,im_E,delta_psi"] + [
            f"{r['iteration']},{_fmt_float(r['re_E'])},"
            f"{_fmt_float(r['im_E'])},{_fmt_float(r['delta_psi'])}"
            for r in iteration_log
        ]
        _write_text(path + ".log", "\n".join(log_lines) + "\n")
    else:
        payload = {
            "solution": summary,
            "diagnostics": _report_dict(reports[0]),
            "iterations": iteration_log,
        }
        _write_text(path, _json_value(payload) + "\n")
    if not solution.converged:
        return EXIT_NON_CONVERGENCE
    return EXIT_OK


def run(config: RunConfig) -> int:
    """Execute a validated config; returns the process exit code."""
    handlers = {
        "solve": _run_solve,
        "scan": _run_scan,
        "check": _run_check,
        "catalog": _run_catalog,
        "nls": _run_nls,
    }
    return handlers[config.command](config)


# --------------------------------------------------------------------------
# Argument parsing
# --------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spectra",
        description="complex-potential Schrödinger spectra and diagnostics",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="JSON run configuration")
        p.add_argument("--out", help="output path (overrides config)")
        p.add_argument("--format", choices=("csv", "json"), help="output format")
        p.add_argument("--n", type=int, help="interior grid points")
        p.add_argument("--domain", help="domain as 'a,b'")
        p.add_argument("--tol", type=float, help="reality tolerance")
        p.add_argument("--seed", type=int, help="solver start-vector seed")
    return parser


def _apply_flags(config: RunConfig, args: argparse.Namespace) -> RunConfig:
    updates = {}
    if args.out is not None:
        updates["out"] = args.out
    if args.format is not None:
        updates["fmt"] = args.format
    if args.n is not None:
        if args.n < 2:
            raise ConfigError("grid needs at least 2 interior nodes", field="--n")
        updates["grid_points"] = args.n
    if args.domain is not None:
        parts = args.domain.split(",")
        if len(parts) != 2:
            raise ConfigError("domain must be 'a,b'", field="--domain")
        try:
            a, b = float(parts[0]), float(parts[1])
        except ValueError:
            raise ConfigError("domain must be two numbers", field="--domain") from None
        if not b > a:
            raise ConfigError("domain needs b > a", field="--domain")
        updates["domain"] = (a, b)
        updates["explicit_grid"] = True
    if args.tol is not None:
        if args.tol <= 0:
            raise ConfigError("tolerance must be positive", field="--tol")
        updates["reality_tol"] = args.tol
    if args.seed is not None:
        updates["solver"] = replace(config.solver, seed=args.seed)
    return replace(config, **updates) if updates else config


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = load_config(args.config, command=args.command)
        config = _apply_flags(config, args)
        return run(config)
    except NonConvergenceError as exc:
        print(_json_value({"error": exc.code, "message": str(exc)}), file=sys.stderr)
        return EXIT_NON_CONVERGENCE
    except SpectraError as exc:
        print(_json_value({"error": exc.code, "message": str(exc)}), file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
