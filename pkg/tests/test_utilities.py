"""
Tests for expression compilation, exporters, settings and logging.
"""

import logging
import math

import numpy as np
import pytest

from config.settings import Settings
from core.errors import ConfigError
from core.mesh import Mesh
from core.state import StateVector
from utilities.exporters import (
    ReportExporter,
    format_cell,
    from_jsonable,
    load_csv,
    load_json,
    parse_float,
    to_jsonable,
)
from utilities.expressions import compile_expression
from utilities.logger import configure_logging, get_logger
from utilities.models import ExitCode, IterationReport, TerminationReason


@pytest.mark.unit
class TestExpressions:
    def test_polynomial_with_parameter(self):
        expr = compile_expression("u^3 + a*u", ("u",), {"a": 2.0})
        np.testing.assert_allclose(expr(np.array([0.0, 1.0, 2.0])), [0.0, 3.0, 12.0])

    def test_derivative(self):
        expr = compile_expression("sin(u) + u^2", ("u",))
        derivative = expr.derivative("u")
        np.testing.assert_allclose(derivative(np.array([0.0, 1.0])), [1.0, np.cos(1.0) + 2.0])

    def test_constant_broadcasts(self):
        expr = compile_expression("2", ("x",))
        assert expr(np.zeros(4)).shape == (4,)
        np.testing.assert_allclose(expr(np.zeros(4)), 2.0)

    def test_constants_and_several_variables(self):
        expr = compile_expression("exp(-pi^2*t)*sin(pi*x)", ("x", "t"))
        assert expr(np.array([0.5]), np.array([0.0]))[0] == pytest.approx(1.0)
        assert compile_expression("E", ("x",))(np.zeros(1))[0] == pytest.approx(math.e)

    @pytest.mark.parametrize(
        "source", ["u +* 2", "z*u", "log(u)", "(u", "u == 1"], ids=str
    )
    def test_rejected_expressions(self, source):
        with pytest.raises(ConfigError):
            compile_expression(source, ("u",))

    def test_parameter_cannot_shadow_variable(self):
        with pytest.raises(ConfigError):
            compile_expression("u", ("u",), {"x": 1.0})

    def test_unsupported_variable(self):
        with pytest.raises(ConfigError):
            compile_expression("w", ("w",))


@pytest.mark.unit
class TestExporters:
    def test_non_finite_markers_round_trip(self):
        payload = {"bound": math.inf, "values": [1.5, -math.inf], "flag": np.bool_(True)}
        encoded = to_jsonable(payload)
        assert encoded == {"bound": "inf", "values": [1.5, "-inf"], "flag": True}
        decoded = from_jsonable(encoded)
        assert decoded == {"bound": math.inf, "values": [1.5, -math.inf], "flag": True}

    def test_enums_and_arrays(self):
        assert to_jsonable(TerminationReason.DIVERGED) == "diverged"
        assert to_jsonable(np.array([1, 2])) == [1, 2]
        assert to_jsonable(ExitCode.SINGULAR) == 4

    def test_format_cell(self):
        assert format_cell(None) == ""
        assert format_cell(True) == "true"
        assert format_cell(0.1) == "0.1"
        assert format_cell(TerminationReason.MAX_ITER) == "max-iter"
        assert parse_float("") is None
        assert parse_float("0.1") == 0.1

    def test_json_file(self, tmp_path):
        exporter = ReportExporter(tmp_path / "out")
        path = exporter.save_json("report.json", {"b": math.inf, "a": 1})
        text = path.read_text(encoding="utf-8")
        assert text.endswith("}\n")
        assert text.index('"a"') < text.index('"b"')
        assert load_json(path) == {"a": 1, "b": math.inf}

    def test_csv_file(self, tmp_path):
        exporter = ReportExporter(tmp_path)
        path = exporter.save_csv("table.csv", ["n", "value"], [[0, 0.25], [1, None]])
        assert path.read_bytes() == b"n,value\n0,0.25\n1,\n"
        header, rows = load_csv(path)
        assert header == ["n", "value"]
        assert rows == [["0", "0.25"], ["1", ""]]

    def test_report_summary_round_trip(self, tmp_path):
        mesh = Mesh.closed_interval(0.0, 1.0, 3)
        report = IterationReport(
            method="global",
            step_norms=[1.0, 0.1, 1e-3],
            residual_norms=[5.0, 0.5, 5e-3, 5e-6],
            iterate_norms=[0.0, 1.0, 1.1, 1.1],
            final_state=StateVector([0.1, 0.2, 0.3], mesh),
            termination=TerminationReason.CONVERGED_STEP,
        )
        path = ReportExporter(tmp_path).save_json("report.json", report.to_dict())
        loaded = load_json(path)
        assert IterationReport.summary_from_dict(loaded) == report.summary()
        assert loaded["final_state"] == [0.1, 0.2, 0.3]
        assert report.summary()["iterations"] == 3


@pytest.mark.unit
class TestSettingsAndLogging:
    def test_defaults(self):
        defaults = Settings(_env_file=None)
        assert defaults.quadrature_order == 8
        assert defaults.ratio_eps == 1e-7

    def test_environment_override(self, monkeypatch):
        monkeypatch.setenv("GLOBLIN_SEED", "5")
        monkeypatch.setenv("GLOBLIN_DENSE_LIMIT", "128")
        overridden = Settings(_env_file=None)
        assert overridden.seed == 5
        assert overridden.dense_limit == 128

    def test_log_file(self, tmp_path):
        log_file = tmp_path / "run.log"
        configure_logging("DEBUG", log_file=str(log_file), use_console=False)
        try:
            get_logger("tests").success("certificate written")
            for handler in logging.getLogger("globlin").handlers:
                handler.flush()
            text = log_file.read_text(encoding="utf-8")
            assert "globlin.tests" in text
            assert "certificate written" in text
        finally:
            configure_logging("WARNING", use_console=False)

    def test_child_logger_names(self):
        assert get_logger("linsolve").name == "globlin.linsolve"
        assert get_logger().name == "globlin"
