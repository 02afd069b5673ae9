"""
Core orchestrator for the solver workflows.
This module builds problems from a run configuration, dispatches the
solve, certify, compare and sweep workflows, writes their artifacts and
maps outcomes to exit codes.
"""

import importlib
import traceback
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Union

from tqdm import tqdm

from core.errors import (
    ConfigError,
    GloblinError,
    InsufficientDataError,
    InvalidSpecError,
    SingularOperatorError,
    UnsupportedOperationError,
)
from certify.certificate import certify_problem
from orchestrator.builders import build_run
from orchestrator.run_config import RunConfig
from solvers.base_solver import BaseSolver
from solvers.diagnostics import empirical_contraction
from utilities.exporters import ReportExporter
from utilities.logger import get_logger
from utilities.models import ExitCode, IterationReport, TerminationReason

logger = get_logger("orchestrator")

# Solver classes by method name, loaded on construction.
METHOD_REGISTRY = {
    "global": "solvers.global_linearization.GlobalLinearizationSolver",
    "newton": "solvers.newton.NewtonSolver",
    "picard": "solvers.picard.PicardSolver",
}

COMMANDS = ("solve", "certify", "compare", "sweep")

SOLVE_HEADER = ["n", "step_norm", "residual_norm", "ratio"]
CERTIFY_HEADER = [
    "p",
    "s",
    "ps",
    "inverse_bound",
    "q",
    "q_derivative",
    "Q",
    "R",
    "f_norm",
    "S_radius",
    "invertibility_holds",
    "contraction_holds",
]
COMPARE_HEADER = ["method", "iterations", "final_residual", "wall_time_ms", "termination"]
SWEEP_HEADER = ["param", "converged", "iterations", "Q_hat", "certified_Q"]

UiCallback = Callable[[Dict[str, Any]], None]


@dataclass
class WorkflowResult:
    """Outcome of one workflow; ``error`` is set when it stopped on an exception."""

    command: str
    exit_code: ExitCode
    payload: Dict[str, Any] = field(default_factory=dict)
    files: List[Path] = field(default_factory=list)
    error: Optional[str] = None


def solve_rows(report: IterationReport) -> List[List[Any]]:
    """One row per iterate: ``n``, the step into it, its residual and the step ratio."""
    ratios = report.ratios
    rows = []
    for n, residual in enumerate(report.residual_norms):
        step = report.step_norms[n - 1] if n >= 1 else None
        ratio = ratios[n - 2] if n >= 2 else None
        rows.append([n, step, residual, ratio])
    return rows


class Orchestrator:
    """Runs one command of the command-line tool against a run configuration."""

    def __init__(
        self,
        config: RunConfig,
        output_dir: Optional[Union[str, Path]] = None,
        seed: Optional[int] = None,
        show_progress: bool = True,
    ):
        self.config = config
        self.output_dir = Path(output_dir or config.output.directory)
        self.seed = seed if seed is not None else config.certificate.seed
        self.show_progress = show_progress
        self.methods = self._load_methods()
        self.history: List[Dict[str, Any]] = []

    def _load_methods(self) -> Dict[str, type]:
        """Dynamically loads solver classes from the METHOD_REGISTRY."""
        loaded = {}
        for name, path in METHOD_REGISTRY.items():
            try:
                module_path, class_name = path.rsplit(".", 1)
                module = importlib.import_module(module_path)
                solver_class = getattr(module, class_name)
            except (ImportError, AttributeError) as e:
                logger.error(f"Failed to load solver {path}: {e}")
                raise ImportError(f"Cannot load solver {path}: {e}")
            if not issubclass(solver_class, BaseSolver):
                raise ImportError(f"{path} is not a BaseSolver")
            loaded[name] = solver_class
            logger.debug(f"Loaded solver: {class_name}")
        return loaded

    def _log_state(self, command: str, state: Dict[str, Any]) -> None:
        """Keep a timestamped digest of each workflow for debugging."""
        entry = {"command": command, "at": datetime.now().isoformat(timespec="seconds")}
        entry.update(state)
        self.history.append(entry)
        logger.debug(f"{command} state: {state}")

    @property
    def exporter(self) -> ReportExporter:
        return ReportExporter(self.output_dir)

    # Dispatch -------------------------------------------------------------
    def run(self, command: str, ui_callback: Optional[UiCallback] = None) -> WorkflowResult:
        """Run ``command``; exceptions become a result with ``error`` set."""
        if command not in COMMANDS:
            message = f"unknown command {command!r}"
            return WorkflowResult(command, ExitCode.CONFIG_ERROR, error=message)
        start = datetime.now()
        logger.info(f"Running {command}")
        if ui_callback:
            ui_callback({"progress": 0.0, "status": f"Starting {command}..."})
        try:
            result = getattr(self, command)(ui_callback)
        except (ConfigError, InvalidSpecError) as e:
            result = self._failure(command, ExitCode.CONFIG_ERROR, e)
        except SingularOperatorError as e:
            result = self._failure(command, ExitCode.SINGULAR, e)
        except UnsupportedOperationError as e:
            result = self._failure(command, ExitCode.UNSUPPORTED, e)
        except GloblinError as e:
            logger.error(traceback.format_exc())
            result = self._failure(command, ExitCode.INTERNAL_ERROR, e)

        duration = (datetime.now() - start).total_seconds()
        logger.info(f"{command} finished with code {int(result.exit_code)} in {duration:.2f} s")
        if ui_callback:
            ui_callback({"progress": 1.0, "status": f"{command} complete", "result": result})
        return result

    def _failure(self, command: str, code: ExitCode, error: Exception) -> WorkflowResult:
        message = f"{command} failed: {error}"
        logger.error(message)
        self._log_state(command, {"error": message})
        return WorkflowResult(command, code, payload={"error": message}, error=message)

    def _solver(self, method: str, problem, ui_callback: Optional[UiCallback]) -> BaseSolver:
        options = self.config.iteration
        limit = options.max_iterations

        def on_iteration(n: int, report: IterationReport) -> None:
            if ui_callback:
                status = f"{method}: iteration {n}"
                ui_callback({"progress": min(n / limit, 1.0), "status": status})

        return self.methods[method](problem, options, on_iteration)

    # Workflows ------------------------------------------------------------
    def solve(self, ui_callback: Optional[UiCallback] = None) -> WorkflowResult:
        problem, f, u0 = build_run(self.config)
        report = self._solver("global", problem, ui_callback).run(f, u0)
        payload = {
            "command": "solve",
            "problem": problem.describe(),
            "report": report.to_dict(),
        }
        exporter = self.exporter
        files = [
            exporter.save_json(self.config.output.report, payload),
            exporter.save_csv(self.config.output.table, SOLVE_HEADER, solve_rows(report)),
        ]
        self._log_state("solve", report.summary())
        return WorkflowResult("solve", report.termination.exit_code, payload, files)

    def _certificate(self, problem, f, u0):
        cfg = self.config.certificate
        return certify_problem(
            problem,
            f,
            u0,
            cfg.radius,
            samples=cfg.samples,
            t_points=cfg.t_points,
            pairs=cfg.pairs,
            rule=self.config.iteration.rule,
            opts=self.config.iteration.solve,
            seed=self.seed,
        )

    def certify(self, ui_callback: Optional[UiCallback] = None) -> WorkflowResult:
        problem, f, u0 = build_run(self.config)
        certificate = self._certificate(problem, f, u0)
        data = certificate.to_dict()
        payload = {"command": "certify", "problem": problem.describe(), "certificate": data}
        exporter = self.exporter
        files = [
            exporter.save_json(self.config.output.report, payload),
            exporter.save_csv(
                self.config.output.table, CERTIFY_HEADER, [[data[key] for key in CERTIFY_HEADER]]
            ),
        ]
        self._log_state("certify", {"holds": certificate.holds})
        code = ExitCode.OK if certificate.holds else ExitCode.CERTIFICATE_FAILED
        return WorkflowResult("certify", code, payload, files)

    def compare(self, ui_callback: Optional[UiCallback] = None) -> WorkflowResult:
        problem, f, u0 = build_run(self.config)
        rows, reports = [], {}
        exit_code = ExitCode.OK
        for method in self.config.compare.methods:
            try:
                report = self._solver(method, problem, ui_callback).run(f, u0)
            except UnsupportedOperationError as e:
                logger.warning(f"{method} skipped: {e}")
                rows.append([method, None, None, None, "unsupported"])
                reports[method] = {"termination": "unsupported", "message": str(e)}
                continue
            reports[method] = report.to_dict(include_state=False)
            rows.append(
                [
                    method,
                    report.iterations,
                    report.final_residual,
                    round(report.wall_time_ms, 3),
                    report.termination.value,
                ]
            )
            if exit_code is ExitCode.OK and not report.converged:
                exit_code = report.termination.exit_code

        payload = {"command": "compare", "problem": problem.describe(), "reports": reports}
        exporter = self.exporter
        files = [
            exporter.save_json(self.config.output.report, payload),
            exporter.save_csv(self.config.output.table, COMPARE_HEADER, rows),
        ]
        self._log_state("compare", {"methods": list(reports)})
        return WorkflowResult("compare", exit_code, payload, files)

    def _variant(self, value: float) -> RunConfig:
        """Copy of the configuration with the sweep parameter set to ``value``."""
        name = self.config.sweep.parameter
        if name == "f_amplitude":
            rhs = self.config.rhs.model_copy(update={"amplitude": value})
            return self.config.model_copy(update={"rhs": rhs})
        parameters = dict(self.config.problem.parameters)
        if name not in parameters:
            raise ConfigError(
                f"sweep parameter {name!r} is neither f_amplitude nor a problem parameter",
                key="sweep.parameter",
            )
        parameters[name] = value
        problem = self.config.problem.model_copy(update={"parameters": parameters})
        return self.config.model_copy(update={"problem": problem})

    def _sweep_point(self, value: float) -> Dict[str, Any]:
        variant = self._variant(value)
        problem, f, u0 = build_run(variant)
        report = self.methods["global"](problem, variant.iteration).run(f, u0)
        try:
            q_hat: Optional[float] = empirical_contraction(report)
        except InsufficientDataError:
            q_hat = None
        point: Dict[str, Any] = {
            "param": value,
            "converged": report.converged,
            "iterations": report.iterations,
            "termination": report.termination.value,
            "Q_hat": q_hat,
            "certified_Q": None,
        }
        try:
            certificate = self._certificate(problem, f, u0)
            point["certified_Q"] = certificate.Q
            point["certificate_holds"] = certificate.holds
        except GloblinError as e:
            point["error"] = f"certificate failed: {e}"
        return point

    def sweep(self, ui_callback: Optional[UiCallback] = None) -> WorkflowResult:
        values = sorted(self.config.sweep.values)
        if not values:
            raise ConfigError("sweep grid is empty", key="sweep.values")
        self._variant(values[0])

        points = []
        progress = tqdm(values, desc="sweep", disable=not self.show_progress)
        for index, value in enumerate(progress):
            if ui_callback:
                ui_callback({"progress": index / len(values), "status": f"sweep value {value}"})
            try:
                point = self._sweep_point(value)
            except GloblinError as e:
                logger.warning(f"sweep value {value} failed: {e}")
                point = {
                    "param": value,
                    "converged": False,
                    "iterations": None,
                    "termination": TerminationReason.SINGULAR_L.value
                    if isinstance(e, SingularOperatorError)
                    else "error",
                    "Q_hat": None,
                    "certified_Q": None,
                    "error": str(e),
                }
            points.append(point)

        rows = [[p[key] for key in SWEEP_HEADER] for p in points]
        payload = {
            "command": "sweep",
            "parameter": self.config.sweep.parameter,
            "points": points,
        }
        exporter = self.exporter
        files = [
            exporter.save_json(self.config.output.report, payload),
            exporter.save_csv(self.config.output.table, SWEEP_HEADER, rows),
        ]
        self._log_state("sweep", {"points": len(points)})
        return WorkflowResult("sweep", ExitCode.OK, payload, files)

