# SPDX-FileCopyrightText: 2025 The atomgate authors
# SPDX-License-Identifier: GPL-2.0-only
"""Run scenarios and sweeps and record what they wrote."""

import hashlib
import json
import logging
import math
from collections.abc import Callable
from concurrent.futures import ProcessPoolExecutor
from datetime import UTC, datetime
from pathlib import Path

import numpy as np
from scipy import constants

from src import __version__
from src.config import Settings, settings
from src.errors import InvalidParameterError, TargetNotReachedError
from src.models.enums import StepId, Subcommand, SweepParameter
from src.models.grid import Grid
from src.models.schedule import GateSchedule
from src.schemas.config import ScenarioConfig
from src.schemas.dynamics import SimulationConfig
from src.schemas.results import (
    ConvergenceReport,
    GateBudget,
    InteractionReport,
    ManifestFile,
    RunManifest,
    StepResult,
)
from src.services import (
    budget_service,
    config_service,
    dynamics_service,
    export_service,
    interaction_service,
    optics_service,
    protocol_service,
)
from src.services.potential_service import (
    lattice_potential,
    locate_trap_minimum,
    nffd_field,
    on_axis_field,
    peak_intensity,
)
from src.services.protocol_service import GateSetup
from src.services.report_generator import RunReportGenerator
from src.services.wavefunction_service import overlap_fidelity

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"


class _Run:
    """Output directory, written files and optional workbook of one run."""

    def __init__(
        self, cfg: ScenarioConfig, subcommand: Subcommand, out: Path
    ) -> None:
        self.cfg = cfg
        self.subcommand = subcommand
        self.out = out
        self.files: list[Path] = []
        self.report = (
            RunReportGenerator(f"{cfg.output.name} {subcommand.value}")
            if cfg.output.report
            else None
        )

    def trace(
        self, name: str, rows: list[tuple[float, float]], x_label: str
    ) -> None:
        csv_name = export_service.output_name(name)
        header = (x_label, "fidelity")
        path = export_service.write_csv(self.out / csv_name, header, rows)
        self.files.append(path)
        if self.cfg.output.plots:
            script = self.out / export_service.output_name(name, suffix=".gp")
            self.files.append(
                export_service.write_gnuplot(
                    script, csv_name, x_label, "fidelity", name
                )
            )
        if self.report is not None:
            self.report.add_curve(name, rows, header)

    def summary(self, title: str, values: dict[str, float | int | str]) -> None:
        self.files.extend(export_service.write_summary(self.out, title, values))
        if self.report is not None:
            self.report.add_summary(values)

    def finish(self) -> RunManifest:
        if self.report is not None:
            self.files.append(self.report.write(self.out))
        manifest = RunManifest(
            subcommand=self.subcommand,
            version=__version__,
            config_sha256=hashlib.sha256(
                config_service.dump_config(self.cfg).encode("utf-8")
            ).hexdigest(),
            created_at=datetime.now(UTC).isoformat(),
            files=[_manifest_entry(self.out, p) for p in sorted(set(self.files))],
        )
        (self.out / MANIFEST_NAME).write_text(
            json.dumps(manifest.model_dump(mode="json"), indent=2) + "\n",
            encoding="utf-8",
        )
        logger.info(f"{self.subcommand.value}: wrote {len(manifest.files)} files")
        return manifest


def _manifest_entry(root: Path, path: Path) -> ManifestFile:
    data = path.read_bytes()
    return ManifestFile(
        path=path.relative_to(root).as_posix(),
        sha256=hashlib.sha256(data).hexdigest(),
        size_bytes=len(data),
    )


def resolve_output_dir(cfg: ScenarioConfig, out: Path | None = None) -> Path:
    """--out wins over the scenario file, which wins over the environment."""
    if out is not None:
        return out
    if cfg.output.directory is not None:
        return Path(cfg.output.directory)
    return settings.output_dir


# ---------------------------------------------------------------------------
# Building blocks
# ---------------------------------------------------------------------------


def _step1_grid(cfg: ScenarioConfig, setup: GateSetup) -> Grid:
    grid = cfg.grid
    return protocol_service.step1_grid(
        setup, grid.points, grid.dim, grid.half_width, (grid.z_min, grid.z_max)
    )


def _transport_grid(cfg: ScenarioConfig, setup: GateSetup) -> Grid:
    grid = cfg.grid
    return protocol_service.transport_grid(
        setup,
        cfg.schedule.n,
        grid.transport_points,
        grid.transport_margin,
        grid.transport_dim,
        grid.transverse_points,
    )


def _interaction(
    cfg: ScenarioConfig, setup: GateSetup, sim: SimulationConfig
) -> InteractionReport:
    section = cfg.interaction
    return protocol_service.run_interaction(
        setup,
        sim.ground_state,
        config_service.build_params(cfg).scattering_length,
        phase=cfg.schedule.phase,
        frequency_hz=(
            None if section.use_computed_frequency else section.frequency_hz
        ),
        method=section.method,
        points=section.points,
    )


def evaluate_step(
    cfg: ScenarioConfig, step: StepId, app_settings: Settings | None = None
) -> StepResult:
    """Run Step 1, Step 2 or the spectator with the scenario's schedule."""
    setup = config_service.build_setup(cfg)
    sim = config_service.build_simulation(cfg, app_settings or settings)
    schedule = cfg.schedule
    if step == StepId.STEP1:
        t_f = config_service.ramp_time_tau(cfg, setup)
        return protocol_service.run_step1(setup, _step1_grid(cfg, setup), sim, t_f)
    t_ol = config_service.transport_time_tau(cfg, setup)
    grid = _transport_grid(cfg, setup)
    if step == StepId.STEP2:
        return protocol_service.run_step2(
            setup, grid, sim, t_ol, schedule.n, schedule.state
        )
    if step == StepId.SPECTATOR:
        return protocol_service.run_spectator(
            setup, grid, sim, t_ol, schedule.n, schedule.state
        )
    raise InvalidParameterError(f"{step.value} cannot be evaluated on its own")


def with_parameter(
    cfg: ScenarioConfig, parameter: SweepParameter, value: float
) -> ScenarioConfig:
    """Scenario with one sweepable scalar replaced (times in tau, depths in E_r)."""
    overrides: dict[str, float | int | None] = {}
    match parameter:
        case SweepParameter.T_F:
            overrides = {"schedule.T_F_tau": value, "schedule.T_F_ms": None}
        case SweepParameter.T_OL:
            overrides = {"schedule.T_OL_tau": value, "schedule.T_OL_ms": None}
        case SweepParameter.N:
            if value != int(value):
                raise InvalidParameterError("n must be an integer")
            overrides = {"schedule.n": int(value)}
        case SweepParameter.V_0:
            overrides = {"lattice.depth_er": value, "lattice.depth_hz": None}
        case SweepParameter.U_0:
            overrides = {"aperture.depth_er": value, "aperture.depth_hz": None}
    return config_service.replace_values(cfg, overrides)


def _sweep_point(job: tuple[ScenarioConfig, StepId, SweepParameter, float]) -> float:
    cfg, step, parameter, value = job
    return evaluate_step(with_parameter(cfg, parameter, value), step).achieved_fidelity


def _search(
    cfg: ScenarioConfig,
    step: StepId,
    parameter: SweepParameter,
    bracket: tuple[float, float],
) -> dict[str, float | int | str]:
    """Shortest duration reaching the scenario's fidelity target."""
    def fidelity(duration: float) -> float:
        return _sweep_point((cfg, step, parameter, duration))

    target = cfg.schedule.fidelity_target
    try:
        best = protocol_service.find_min_time(
            fidelity, target, bracket, cfg.schedule.scan_step_tau
        )
    except TargetNotReachedError as e:
        logger.warning(str(e))
        return {"min_time_found": "false", "max_fidelity": e.max_fidelity}
    units = config_service.build_setup(cfg).units
    return {
        "min_time_found": "true",
        "min_time_tau": best,
        "min_time_ms": units.time_to_physical(best) * 1e3,
    }


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def _units(run: _Run) -> None:
    cfg = run.cfg
    params = config_service.build_params(cfg)
    setup = config_service.build_setup(cfg)
    units = setup.units
    delta = optics_service.detuning(params.trap_wavelength, params.atomic_line)
    z_star = units.length_to_physical(locate_trap_minimum(setup.aperture))
    values: dict[str, float | int | str] = {
        "E_r_hz": units.recoil_frequency,
        "E_r_J": units.recoil_energy,
        "tau_us": units.time_unit * 1e6,
        "k_OL_per_m": units.wavenumber,
        "U_0_over_E_r": setup.aperture.depth,
        "V_0_over_E_r": setup.lattice.depth,
        "detuning_rad_s": delta,
        "laser_power_w": optics_service.laser_power(
            params.trap_intensity, params.aperture_radius
        ),
        "trap_minimum_um": z_star * 1e6,
        "peak_relative_intensity": peak_intensity(setup.aperture),
    }
    if params.half_linewidth is not None:
        depth = optics_service.trap_depth_u0(
            params.trap_intensity,
            params.half_linewidth,
            delta,
            2.0 * math.pi / params.trap_wavelength,
        )
        values["U_0_from_intensity_hz"] = depth / constants.h
    run.summary("Scaled units", values)


def _potential(run: _Run) -> None:
    setup = config_service.build_setup(run.cfg)
    grid = _step1_grid(run.cfg, setup)
    lattice = lattice_potential(setup.lattice, grid)
    trap = nffd_field(setup.aperture, grid).potential
    run.files.append(
        export_service.write_field(
            run.out / "potential.csv",
            grid,
            {"lattice_er": lattice, "trap_er": trap, "total_er": lattice + trap},
        )
    )
    aperture = setup.aperture
    z = np.linspace(0.02, 6.0, 600)
    axis_rows = list(zip(z, np.abs(on_axis_field(aperture, z)) ** 2, strict=True))
    run.files.append(
        export_service.write_csv(
            run.out / "trap_axis.csv",
            ("z_over_lambda", "relative_intensity"),
            axis_rows,
        )
    )
    run.summary(
        "Potentials",
        {
            "trap_minimum_over_lambda": locate_trap_minimum(aperture),
            "lattice_center_over_lambda": setup.lattice.center,
            "min_total_er": float(np.min(lattice + trap)),
            "grid_points": int(np.prod(grid.shape)),
        },
    )


def _groundstate(run: _Run) -> None:
    cfg = run.cfg
    setup = config_service.build_setup(cfg)
    sim = config_service.build_simulation(cfg, settings)
    grid = _step1_grid(cfg, setup)
    combined, e_combined = protocol_service.combined_ground_state(
        setup, grid, sim.ground_state
    )
    lattice, e_lattice = protocol_service.lattice_ground_state(
        setup, grid, sim.ground_state
    )
    run.files.append(
        export_service.write_field(
            run.out / "groundstate.csv",
            grid,
            {
                "density_combined": combined.density(),
                "density_lattice": lattice.density(),
            },
        )
    )
    depth = setup.lattice.depth
    run.summary(
        "Ground states",
        {
            "E_combined_er": e_combined,
            "E_lattice_er": e_lattice,
            "E_lattice_harmonic_er": -depth + math.sqrt(depth),
            "sudden_overlap": overlap_fidelity(combined, lattice),
        },
    )


def _step_key(result: StepResult) -> str:
    if result.state_label is None:
        return result.step.value
    return f"{result.step.value}_state{result.state_label.value}"


def _trace_name(result: StepResult) -> str:
    return f"trace_{_step_key(result)}"


def _step(run: _Run, step: StepId) -> None:
    cfg = run.cfg
    result = evaluate_step(cfg, step)
    run.trace(_trace_name(result), result.fidelity_trace, "t_over_tau")
    units = config_service.build_setup(cfg).units
    values: dict[str, float | int | str] = {
        "duration_tau": result.duration_tau,
        "duration_ms": units.time_to_physical(result.duration_tau) * 1e3,
        "fidelity": result.achieved_fidelity,
        "norm_drift": result.norm_drift,
    }
    if step == StepId.SPECTATOR:
        values["dips"] = int(result.parameters["dips"])
        values["min_fidelity"] = min(f for _, f in result.fidelity_trace)
    if cfg.schedule.find_min_time and step != StepId.SPECTATOR:
        if step == StepId.STEP1:
            parameter, bracket = SweepParameter.T_F, cfg.schedule.T_F_bracket_tau
        else:
            parameter, bracket = SweepParameter.T_OL, cfg.schedule.T_OL_bracket_tau
        values.update(_search(cfg, step, parameter, bracket))
    if cfg.propagator.check_convergence:
        report = convergence(cfg, step)
        values["dt_delta"] = report.dt_delta
        values["dt_converged"] = "true" if report.passed else "false"
    run.summary(f"{step.value} result", values)


def _interaction_cmd(run: _Run) -> None:
    cfg = run.cfg
    setup = config_service.build_setup(cfg)
    sim = config_service.build_simulation(cfg, settings)
    report = _interaction(cfg, setup, sim)
    run.summary(
        "Interaction",
        {
            "E_int_over_E_r": report.interaction_ratio,
            "nu_int_computed_hz": setup.units.energy_to_frequency(
                report.interaction_ratio
            ),
            "nu_int_hz": report.frequency_hz,
            "t_hold_ms": report.hold_time_s * 1e3,
            "t_hold_tau": report.hold_time_tau,
            "phase": report.phase,
        },
    )


def _budget_values(budget: GateBudget) -> dict[str, float | int | str]:
    return {
        "T_F": budget.t_f * 1e3,
        "T_OL": budget.t_ol * 1e3,
        "t_hold": budget.t_hold * 1e3,
        "T_overall_ms": budget.total_time * 1e3,
        "F_overall": budget.overall_fidelity,
        "per_process_fidelity": budget.per_process_fidelity,
        "previous_proposal_fidelity": budget.previous_proposal_fidelity,
    }


def _gate_schedule(
    cfg: ScenarioConfig, setup: GateSetup, report: InteractionReport
) -> GateSchedule:
    return GateSchedule(
        t_f=config_service.ramp_time_tau(cfg, setup),
        t_ol=config_service.transport_time_tau(cfg, setup),
        n=cfg.schedule.n,
        t_hold=report.hold_time_tau,
        atom_site_separation=cfg.schedule.atom_site_separation,
    )


def _gate(run: _Run, achieved_only: bool = False) -> None:
    cfg = run.cfg
    setup = config_service.build_setup(cfg)
    sim = config_service.build_simulation(cfg, settings)
    report = _interaction(cfg, setup, sim)
    schedule = _gate_schedule(cfg, setup, report)
    gate = protocol_service.run_gate(
        setup,
        schedule,
        sim,
        _step1_grid(cfg, setup),
        _transport_grid(cfg, setup),
        report,
    )
    for step in gate.steps:
        run.trace(_trace_name(step), step.fidelity_trace, "t_over_tau")
    values = _budget_values(gate.budget)
    if not achieved_only:
        unitary = interaction_service.gate_unitary(report.phase)
        values["site_separation"] = schedule.site_separation
        values["gate_phases"] = " ".join(f"{p:.6f}" for p in unitary.phases())
        for step in gate.steps:
            values[f"F_{_step_key(step)}"] = step.achieved_fidelity
    run.summary("Gate budget", values)


def _budget(run: _Run) -> None:
    cfg = run.cfg
    if cfg.schedule.use_achieved_fidelity:
        _gate(run, achieved_only=True)
        return
    setup = config_service.build_setup(cfg)
    if cfg.interaction.use_computed_frequency:
        sim = config_service.build_simulation(cfg, settings)
        t_hold = _interaction(cfg, setup, sim).hold_time_s
    else:
        t_hold = interaction_service.hold_time(
            cfg.interaction.frequency_hz, cfg.schedule.phase
        )
    units = setup.units
    budget = budget_service.aggregate_budget(
        units.time_to_physical(config_service.ramp_time_tau(cfg, setup)),
        units.time_to_physical(config_service.transport_time_tau(cfg, setup)),
        t_hold,
        cfg.schedule.per_process_fidelity,
    )
    run.summary("Gate budget", _budget_values(budget))


def _capacity(run: _Run) -> None:
    params = config_service.build_params(run.cfg)
    capacity = budget_service.array_capacity(
        params.waist, params.lattice_wavelength, run.cfg.lattice.site_pitch_um * 1e-6
    )
    run.summary(
        "Array capacity",
        {
            "x_R_um": capacity.rayleigh_length * 1e6,
            "usable_um": capacity.usable_length * 1e6,
            "site_pitch_um": capacity.site_pitch * 1e6,
            "qubit_count": capacity.qubit_count,
        },
    )


_HANDLERS: dict[Subcommand, Callable[[_Run], None]] = {
    Subcommand.UNITS: _units,
    Subcommand.POTENTIAL: _potential,
    Subcommand.GROUNDSTATE: _groundstate,
    Subcommand.STEP1: lambda run: _step(run, StepId.STEP1),
    Subcommand.STEP2: lambda run: _step(run, StepId.STEP2),
    Subcommand.SPECTATOR: lambda run: _step(run, StepId.SPECTATOR),
    Subcommand.INTERACTION: _interaction_cmd,
    Subcommand.BUDGET: _budget,
    Subcommand.CAPACITY: _capacity,
    Subcommand.GATE: _gate,
}


def run_scenario(
    cfg: ScenarioConfig,
    subcommand: Subcommand,
    out: Path | None = None,
    jobs: int | None = None,
) -> RunManifest:
    """Execute one subcommand, write its outputs and manifest.json."""
    if subcommand == Subcommand.SWEEP:
        return sweep(cfg, out=out, jobs=jobs)
    run = _Run(cfg, subcommand, resolve_output_dir(cfg, out))
    run.out.mkdir(parents=True, exist_ok=True)
    _HANDLERS[subcommand](run)
    return run.finish()


def sweep(
    cfg: ScenarioConfig,
    parameter: SweepParameter | None = None,
    values: list[float] | None = None,
    out: Path | None = None,
    jobs: int | None = None,
) -> RunManifest:
    """Final fidelity for each value of one scalar, written in input order.

    Points are independent; with more than one job they run in worker
    processes and are collected in submission order.
    """
    parameter = parameter or cfg.sweep.parameter
    points = values if values is not None else cfg.sweep.resolved_values()
    if not points:
        raise InvalidParameterError("The sweep has no values")
    step = cfg.sweep.target_step()
    workers = jobs or cfg.sweep.jobs or settings.workers
    job_list = [(cfg, step, parameter, float(v)) for v in points]
    logger.info(
        f"Sweeping {parameter.value} over {len(points)} values "
        f"({step.value}, {workers} workers)"
    )
    if workers > 1 and len(points) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            fidelities = list(pool.map(_sweep_point, job_list))
    else:
        fidelities = [_sweep_point(job) for job in job_list]

    run = _Run(cfg, Subcommand.SWEEP, resolve_output_dir(cfg, out))
    run.out.mkdir(parents=True, exist_ok=True)
    rows = list(zip((float(v) for v in points), fidelities, strict=True))
    run.trace(f"sweep_{parameter.value}", rows, parameter.value)
    target = cfg.schedule.fidelity_target
    crossing = next((v for v, f in rows if f >= target), None)
    summary: dict[str, float | int | str] = {
        "parameter": parameter.value,
        "step": step.value,
        "points": len(rows),
        "max_fidelity": max(fidelities),
        "local_maxima": protocol_service.count_local_maxima(fidelities),
    }
    if crossing is not None:
        summary["first_value_reaching_target"] = crossing
    run.summary(f"Sweep of {parameter.value}", summary)
    return run.finish()


def convergence(
    cfg: ScenarioConfig, step: StepId = StepId.STEP1
) -> ConvergenceReport:
    """Change in final fidelity when the time step is halved."""
    def at(dt: float) -> float:
        refined = config_service.apply_overrides(cfg, **{"propagator.dt_tau": dt})
        return evaluate_step(refined, step).achieved_fidelity

    return dynamics_service.convergence_check(at, cfg.propagator.dt_tau)
