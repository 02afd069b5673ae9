"""Turn validated run configurations into problems and states."""

from typing import Tuple

import numpy as np

from core.errors import ConfigError, DimensionError, InvalidArgumentError
from core.mesh import Mesh, MeshKind
from core.problem import ProblemDefinition
from core.state import StateVector
from problems import (
    EllipticProblemSpec,
    IntegralProblemSpec,
    LinearProblem,
    ParabolicProblemSpec,
    PointwiseCubicProblem,
    make_elliptic_problem,
    make_integral_problem,
    make_parabolic_problem,
    manufacture_rhs,
)
from orchestrator.run_config import (
    EllipticConfig,
    InitialConfig,
    IntegralConfig,
    LinearConfig,
    ParabolicConfig,
    PointwiseCubicConfig,
    ProblemConfig,
    RhsConfig,
    RunConfig,
)
from utilities.expressions import CompiledExpression, compile_expression
from utilities.logger import get_logger

logger = get_logger("builders")

GRID_VARIABLES = {
    MeshKind.INTERVAL: ("x",),
    MeshKind.RECTANGLE: ("x", "y"),
    MeshKind.SPACE_TIME_CYLINDER: ("x", "t"),
}


def _compile(source: str, variables, parameters, key: str) -> CompiledExpression:
    try:
        return compile_expression(source, variables, parameters)
    except ConfigError as exc:
        raise ConfigError(str(exc), key=key) from exc


def _compile_or_derive(source, base: CompiledExpression, variable: str, parameters, key: str):
    if source:
        return _compile(source, base.variables, parameters, key)
    return base.derivative(variable)


def _build_integral(cfg: IntegralConfig) -> ProblemDefinition:
    kernel = _compile(cfg.kernel, ("x", "y"), cfg.parameters, "problem.kernel")
    g = _compile(cfg.g, ("u",), cfg.parameters, "problem.g")
    g_prime = _compile_or_derive(cfg.g_prime, g, "u", cfg.parameters, "problem.g_prime")
    spec = IntegralProblemSpec(
        kernel=kernel,
        g=g,
        g_prime=g_prime,
        x_lo=cfg.x_lo,
        x_hi=cfg.x_hi,
        n_nodes=cfg.n_nodes,
        symmetric=cfg.symmetric,
    )
    return make_integral_problem(spec)


def _bind_coordinates(expression: CompiledExpression):
    def reaction(coords: np.ndarray, u: np.ndarray) -> np.ndarray:
        x = coords[:, 0]
        y = coords[:, 1] if coords.shape[1] > 1 else np.zeros_like(x)
        return expression(x, y, u)

    return reaction


def _build_elliptic(cfg: EllipticConfig) -> ProblemDefinition:
    g = _compile(cfg.g, ("x", "y", "u"), cfg.parameters, "problem.g")
    g_u = _compile_or_derive(cfg.g_u, g, "u", cfg.parameters, "problem.g_u")
    spec = EllipticProblemSpec(
        g=_bind_coordinates(g),
        g_u=_bind_coordinates(g_u),
        split_a=cfg.split_a,
        dimension=cfg.dimension,
        n=cfg.n,
        lo=cfg.lo,
        hi=cfg.hi,
    )
    return make_elliptic_problem(spec)


def _build_parabolic(cfg: ParabolicConfig) -> ProblemDefinition:
    a = _compile(cfg.a, ("u",), cfg.parameters, "problem.a")
    a_prime = _compile_or_derive(cfg.a_prime, a, "u", cfg.parameters, "problem.a_prime")
    a_second = _compile_or_derive(
        cfg.a_second, a_prime, "u", cfg.parameters, "problem.a_second"
    )
    gamma = _compile(cfg.gamma, ("u",), cfg.parameters, "problem.gamma") if cfg.gamma else None
    source = (
        _compile(cfg.source, ("x", "t"), cfg.parameters, "problem.source") if cfg.source else None
    )
    spec = ParabolicProblemSpec(
        a=a,
        a_prime=a_prime,
        a_second=a_second,
        gamma=gamma,
        u_initial=_compile(cfg.initial, ("x",), cfg.parameters, "problem.initial"),
        bounds=cfg.bounds,
        check_range=cfg.check_range,
        x_lo=cfg.x_lo,
        x_hi=cfg.x_hi,
        horizon=cfg.horizon,
        n_x=cfg.n_x,
        n_t=cfg.n_t,
        source=source,
    )
    return make_parabolic_problem(spec)


def _dispatch(cfg: ProblemConfig) -> ProblemDefinition:
    if isinstance(cfg, LinearConfig):
        mesh = Mesh.closed_interval(cfg.x_lo, cfg.x_hi, len(cfg.matrix))
        return LinearProblem(
            cfg.matrix, mesh, cfg.norm, cfg.identity_split, parameters=cfg.parameters
        )
    if isinstance(cfg, PointwiseCubicConfig):
        return PointwiseCubicProblem(Mesh.closed_interval(0.0, 1.0, cfg.n_nodes))
    if isinstance(cfg, IntegralConfig):
        return _build_integral(cfg)
    if isinstance(cfg, EllipticConfig):
        return _build_elliptic(cfg)
    if isinstance(cfg, ParabolicConfig):
        return _build_parabolic(cfg)
    raise ConfigError(f"unknown problem family {getattr(cfg, 'family', None)!r}", key="problem")


def build_problem(cfg: ProblemConfig) -> ProblemDefinition:
    """Instantiate the problem family named by ``cfg.family``.

    Raises:
        ConfigError: the family rejected its arguments (bounds, sizes, matrix shape).
    """
    try:
        return _dispatch(cfg)
    except (InvalidArgumentError, DimensionError) as exc:
        raise ConfigError(f"invalid problem: {exc}", key="problem") from exc


def _grid_state(problem: ProblemDefinition, source: str, parameters, key: str) -> StateVector:
    variables = GRID_VARIABLES[problem.mesh.kind]
    expression = _compile(source, variables, parameters, key)
    return StateVector.from_function(problem.mesh, expression, problem.norm_kind)


def build_rhs(cfg: RhsConfig, problem: ProblemDefinition, parameters) -> StateVector:
    """Right-hand side ``f`` scaled by ``cfg.amplitude``."""
    if cfg.source == "zero":
        return problem.zero_state()
    if cfg.source == "problem":
        if not hasattr(problem, "right_hand_side"):
            raise ConfigError(
                "rhs source 'problem' is only defined for parabolic problems", key="rhs.source"
            )
        base = problem.right_hand_side()
    elif cfg.source == "manufactured":
        exact = _grid_state(problem, cfg.expression, parameters, "rhs.expression")
        base = manufacture_rhs(problem, exact)
    else:
        base = _grid_state(problem, cfg.expression, parameters, "rhs.expression")
    return base * cfg.amplitude


def build_initial(
    cfg: InitialConfig, problem: ProblemDefinition, f: StateVector, parameters
) -> StateVector:
    if cfg.source == "zero":
        return problem.zero_state()
    if cfg.source == "expression":
        return _grid_state(problem, cfg.expression, parameters, "initial.expression")
    return f


def build_run(config: RunConfig) -> Tuple[ProblemDefinition, StateVector, StateVector]:
    """Problem, right-hand side and starting point of a run."""
    problem = build_problem(config.problem)
    parameters = config.problem.parameters
    f = build_rhs(config.rhs, problem, parameters)
    u0 = build_initial(config.initial, problem, f, parameters)
    logger.info(
        "built %s problem with %d unknowns (||f|| = %.4g)",
        problem.family,
        problem.size,
        f.norm(),
    )
    return problem, f, u0
