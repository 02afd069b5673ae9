"""
End-to-end tests of the command-line workflows, their artifacts and exit codes.
"""

from pathlib import Path

import pytest

from cli import main
from core.errors import ConfigError
from orchestrator.builders import build_run
from orchestrator.orchestrator import COMPARE_HEADER, SOLVE_HEADER, SWEEP_HEADER
from orchestrator.run_config import RunConfig
from utilities.exporters import load_csv, load_json, parse_float
from utilities.models import IterationReport

ELLIPTIC = {
    "problem": {
        "family": "elliptic",
        "g": "u + c*u^3",
        "split_a": 1.0,
        "n": 16,
        "parameters": {"c": 1.0},
    },
    "rhs": {"source": "manufactured", "expression": "0.1*sin(pi*x)"},
    "initial": {"source": "zero"},
    "certificate": {"radius": 0.2, "samples": 8, "pairs": 4, "seed": 7},
    "sweep": {"values": [0.1, 0.05]},
}

CUBIC = {
    "problem": {"family": "pointwise-cubic"},
    "rhs": {"source": "expression", "expression": "8"},
    "initial": {"source": "expression", "expression": "1"},
}


RANK_ONE = {
    "problem": {"family": "integral", "kernel": "1", "g": "u^3", "n_nodes": 3},
    "rhs": {"source": "expression", "expression": "1"},
    "initial": {"source": "zero"},
    "certificate": {"radius": 1.0, "samples": 8, "pairs": 10, "seed": 3},
    "sweep": {"values": [0.25, 0.5, 1.0, 3.0, 6.0]},
}


def _with(base, **sections):
    payload = {key: dict(value) for key, value in base.items()}
    for key, value in sections.items():
        payload[key] = {**payload.get(key, {}), **value}
    return payload


def _run(write_config, tmp_path, command, payload, out="out", extra=()):
    path = write_config(payload)
    args = [command, "--config", str(path), "--out", str(tmp_path / out), "--quiet"]
    code = main([*args, *extra])
    return code, tmp_path / out


@pytest.mark.integration
class TestSolve:
    def test_converges_and_writes_artifacts(self, write_config, tmp_path):
        code, out = _run(write_config, tmp_path, "solve", ELLIPTIC)
        assert code == 0
        header, rows = load_csv(out / "table.csv")
        assert header == SOLVE_HEADER
        report = load_json(out / "report.json")
        assert len(rows) == report["report"]["summary"]["iterations"] + 1
        assert rows[0][1] == "" and rows[0][3] == ""
        assert IterationReport.summary_from_dict(report["report"]) == report["report"]["summary"]
        assert report["problem"]["family"] == "elliptic"

    def test_table_is_deterministic(self, write_config, tmp_path):
        _, first = _run(write_config, tmp_path, "solve", ELLIPTIC, out="a")
        _, second = _run(write_config, tmp_path, "solve", ELLIPTIC, out="b")
        assert (first / "table.csv").read_bytes() == (second / "table.csv").read_bytes()

    def test_max_iterations_exit_code(self, write_config, tmp_path):
        payload = _with(ELLIPTIC, iteration={"max_iterations": 1})
        code, _ = _run(write_config, tmp_path, "solve", payload)
        assert code == 2

    def test_cubic_diverges(self, write_config, tmp_path):
        code, out = _run(write_config, tmp_path, "solve", CUBIC)
        assert code == 3
        assert load_json(out / "report.json")["report"]["termination"] == "diverged"

    def test_singular_linearization(self, write_config, tmp_path):
        payload = {
            "problem": {"family": "linear", "matrix": [[1, 0, 0], [0, 0, 0], [0, 0, 1]]},
            "rhs": {"expression": "1"},
        }
        code, _ = _run(write_config, tmp_path, "solve", payload)
        assert code == 4

    def test_parabolic_problem_data(self, write_config, tmp_path):
        payload = {
            "problem": {"family": "parabolic", "a": "1 + u^2/2", "n_x": 8, "n_t": 8},
            "rhs": {"source": "problem"},
        }
        code, out = _run(write_config, tmp_path, "solve", payload)
        assert code == 0
        assert load_json(out / "report.json")["problem"]["family"] == "parabolic"


@pytest.mark.integration
class TestCertify:
    def test_certificate_holds(self, write_config, tmp_path):
        code, out = _run(write_config, tmp_path, "certify", ELLIPTIC)
        assert code == 0
        certificate = load_json(out / "report.json")["certificate"]
        assert certificate["holds"] is True
        assert certificate["sample_count"] == 8 * 4 + 4

    def test_certificate_fails_on_large_ball(self, write_config, tmp_path):
        payload = _with(ELLIPTIC, certificate={"radius": 5.0})
        code, out = _run(write_config, tmp_path, "certify", payload)
        assert code == 1
        header, rows = load_csv(out / "table.csv")
        assert rows[0][header.index("invertibility_holds")] == "false"

    def test_singular_derivative_at_zero(self, write_config, tmp_path):
        code, _ = _run(write_config, tmp_path, "certify", CUBIC)
        assert code == 4

    def test_seed_override_is_deterministic(self, write_config, tmp_path):
        _, first = _run(write_config, tmp_path, "certify", ELLIPTIC, "a", ("--seed", "11"))
        _, second = _run(write_config, tmp_path, "certify", ELLIPTIC, "b", ("--seed", "11"))
        assert (first / "report.json").read_bytes() == (second / "report.json").read_bytes()


@pytest.mark.integration
class TestCompareAndSweep:
    def test_compare_marks_unsupported_method(self, write_config, tmp_path):
        code, out = _run(write_config, tmp_path, "compare", ELLIPTIC)
        assert code == 0
        header, rows = load_csv(out / "table.csv")
        assert header == COMPARE_HEADER
        by_method = {row[0]: row for row in rows}
        assert set(by_method) == {"global", "newton", "picard"}
        assert by_method["picard"][-1] == "unsupported"
        assert by_method["global"][-1].startswith("converged")

    def test_sweep_over_amplitude(self, write_config, tmp_path):
        code, out = _run(write_config, tmp_path, "sweep", ELLIPTIC)
        assert code == 0
        header, rows = load_csv(out / "table.csv")
        assert header == SWEEP_HEADER
        assert [parse_float(row[0]) for row in rows] == [0.05, 0.1]
        assert all(row[1] == "true" for row in rows)

    def test_sweep_over_problem_parameter(self, write_config, tmp_path):
        payload = _with(ELLIPTIC, sweep={"parameter": "c", "values": [1.0, 0.5]})
        code, out = _run(write_config, tmp_path, "sweep", payload)
        assert code == 0
        assert load_json(out / "report.json")["parameter"] == "c"

    def test_single_value_sweep_matches_solve(self, write_config, tmp_path):
        payload = _with(ELLIPTIC, sweep={"values": [1.0]})
        _, solved = _run(write_config, tmp_path, "solve", payload, out="solve")
        code, swept = _run(write_config, tmp_path, "sweep", payload, out="sweep")
        assert code == 0
        _, rows = load_csv(swept / "table.csv")
        summary = load_json(solved / "report.json")["report"]["summary"]
        assert len(rows) == 1
        assert rows[0][1] == "true"
        assert int(rows[0][2]) == summary["iterations"]

    def test_sweep_table_is_deterministic(self, write_config, tmp_path):
        _, first = _run(write_config, tmp_path, "sweep", ELLIPTIC, out="a")
        _, second = _run(write_config, tmp_path, "sweep", ELLIPTIC, out="b")
        assert (first / "table.csv").read_bytes() == (second / "table.csv").read_bytes()

    def test_empty_sweep_is_a_config_error(self, write_config, tmp_path):
        payload = _with(ELLIPTIC, sweep={"values": []})
        code, _ = _run(write_config, tmp_path, "sweep", payload)
        assert code == 64

    def test_unknown_sweep_parameter(self, write_config, tmp_path):
        payload = _with(ELLIPTIC, sweep={"parameter": "kappa"})
        code, _ = _run(write_config, tmp_path, "sweep", payload)
        assert code == 64

    def test_convergence_flips_near_certified_amplitude(self, write_config, tmp_path):
        # Constant kernel and constant f keep every iterate constant, so the
        # iteration is u -> F / (1 + u^2); it stops converging once F > 2.
        code, out = _run(write_config, tmp_path, "sweep", RANK_ONE)
        assert code == 0
        _, rows = load_csv(out / "table.csv")
        params = [parse_float(row[0]) for row in rows]
        converged = [row[1] == "true" for row in rows]
        assert converged == [True, True, True, False, False]

        certified = [parse_float(row[4]) for row in rows]
        threshold = params[0] / certified[0]
        for param, q_value in zip(params, certified):
            assert q_value == pytest.approx(param / threshold)

        last_converged, first_failed = params[2], params[3]
        assert first_failed >= threshold / 4.0
        assert last_converged <= 4.0 * threshold


INTEGRAL = {
    "problem": {
        "family": "integral",
        "kernel": "0.2*exp(-(x - y)^2)",
        "g": "sin(u)",
        "n_nodes": 9,
    },
    "rhs": {"source": "expression", "expression": "sin(pi*x)"},
}


@pytest.mark.integration
class TestRuntimeFailures:
    def test_conjugate_gradients_on_nonsymmetric_linearization(self, write_config, tmp_path):
        payload = _with(INTEGRAL, iteration={"solve": {"method": "conjugate-gradient"}})
        code, _ = _run(write_config, tmp_path, "solve", payload)
        assert code == 69

    def test_same_problem_with_gmres_converges(self, write_config, tmp_path):
        payload = _with(INTEGRAL, iteration={"solve": {"method": "gmres"}})
        code, _ = _run(write_config, tmp_path, "solve", payload)
        assert code == 0


@pytest.mark.unit
class TestConfigErrors:
    def test_unknown_key(self, write_config, tmp_path):
        code, _ = _run(write_config, tmp_path, "solve", {**ELLIPTIC, "bogus": 1})
        assert code == 64

    def test_bad_expression(self, write_config, tmp_path):
        payload = _with(ELLIPTIC, problem={"g": "u + log(u)"})
        code, _ = _run(write_config, tmp_path, "solve", payload)
        assert code == 64

    def test_reversed_interval_is_a_config_error(self, write_config, tmp_path):
        payload = _with(INTEGRAL, problem={"x_lo": 1.0, "x_hi": 0.0})
        code, out = _run(write_config, tmp_path, "solve", payload)
        assert code == 64
        assert not (out / "table.csv").exists()

    def test_missing_file(self, tmp_path):
        assert main(["solve", "--config", str(tmp_path / "missing.json"), "--quiet"]) == 64

    def test_invalid_seed(self, write_config):
        path = write_config(ELLIPTIC)
        with pytest.raises(SystemExit) as info:
            main(["solve", "--config", str(path), "--seed", "-1"])
        assert info.value.code == 64

    def test_error_names_the_key(self):
        with pytest.raises(ConfigError) as info:
            RunConfig.from_dict({"problem": {"family": "elliptic", "g": "u", "n": 1}})
        assert info.value.key == "problem.elliptic.n"

    def test_unknown_family(self):
        with pytest.raises(ConfigError):
            RunConfig.from_dict({"problem": {"family": "hyperbolic"}})

    def test_manufactured_rhs_needs_expression(self):
        with pytest.raises(ConfigError):
            RunConfig.from_dict({"problem": CUBIC["problem"], "rhs": {"source": "manufactured"}})


@pytest.mark.unit
@pytest.mark.parametrize(
    "path", sorted((Path(__file__).parent.parent / "configs").glob("*.json")), ids=lambda p: p.stem
)
def test_shipped_configs_parse(path):
    config = RunConfig.from_file(path)
    problem, f, u0 = build_run(config)
    assert problem.family == config.problem.family
    assert f.size == u0.size == problem.size
