"""Control-affine policy evaluation: problems, value models, trajectory costs.

State dynamics are dx/dt = f(x) + g(x) u with running cost
q(x) + u' R u / 2 under a fixed feedback u = phi(x).  The value of the
policy from x0 is the integral of the running cost along the closed loop.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .network import ShallowReluNetwork

__all__ = [
    "TrajectoryDivergenceError",
    "ControlAffineProblem",
    "ValueModel",
    "logcosh",
    "tanh_scalar_example",
    "linear_benchmark",
    "pde_residual",
    "SimulationResult",
    "simulate_value",
    "joint_error",
    "ConsistencyRow",
    "consistency_report",
]


class TrajectoryDivergenceError(RuntimeError):
    """Closed-loop state became non-finite during integration."""


@dataclass(frozen=True)
class ControlAffineProblem:
    """dx/dt = f(x) + g(x) u, running cost q(x) + u' R u / 2.

    dynamics: (n,) -> (n,); input_map: (n,) -> (n, p); policy: (n,) -> (p,);
    state_cost: (n,) -> float >= 0; input_cost: (p, p) symmetric positive
    definite.
    """

    n: int
    p: int
    dynamics: Callable[[np.ndarray], np.ndarray]
    input_map: Callable[[np.ndarray], np.ndarray]
    policy: Callable[[np.ndarray], np.ndarray]
    state_cost: Callable[[np.ndarray], float]
    input_cost: np.ndarray

    def __post_init__(self) -> None:
        R = np.atleast_2d(np.asarray(self.input_cost, dtype=float))
        if R.shape != (self.p, self.p):
            raise ValueError(f"input cost must be ({self.p}, {self.p}), got {R.shape}")
        if not np.allclose(R, R.T):
            raise ValueError("input cost matrix must be symmetric")
        if np.any(np.linalg.eigvalsh(R) <= 0):
            raise ValueError("input cost matrix must be positive definite")
        R.setflags(write=False)
        object.__setattr__(self, "input_cost", R)


@dataclass(frozen=True)
class ValueModel:
    """Callable pair (value, gradient) with a provenance tag.

    Both callables accept states shaped (..., n): value returns shape
    (...), gradient returns shape (..., n).  provenance is one of
    "analytic", "network", "trajectory".
    """

    value: Callable
    gradient: Callable
    provenance: str


def logcosh(t):
    """log(cosh(t)), computed without overflow for large |t|."""
    t = np.abs(np.asarray(t, dtype=float))
    return t + np.log1p(np.exp(-2.0 * t)) - np.log(2.0)


def tanh_scalar_example() -> tuple[ControlAffineProblem, ValueModel]:
    """Scalar problem: zero drift, unit input map, policy -tanh(5x),
    state cost x^2/2, unit input cost, with the closed-form model
    V(x) = log(cosh(5x)) / 5 and V'(x) = tanh(5x).

    The closed form does not solve the value PDE of the stated cost (the
    residual is x^2/2 - tanh(5x)^2/2) and trajectory integration of that
    cost gives a different value near the origin.  Both quantities are
    reported by pde_residual and consistency_report; neither is hidden.
    """
    problem = ControlAffineProblem(
        n=1,
        p=1,
        dynamics=lambda x: np.zeros(1),
        input_map=lambda x: np.ones((1, 1)),
        policy=lambda x: -np.tanh(5.0 * x),
        state_cost=lambda x: 0.5 * float(x[0]) ** 2,
        input_cost=np.eye(1),
    )
    model = ValueModel(
        value=lambda x: logcosh(5.0 * np.asarray(x, dtype=float)[..., 0]) / 5.0,
        gradient=lambda x: np.tanh(5.0 * np.asarray(x, dtype=float)),
        provenance="analytic",
    )
    return problem, model


def linear_benchmark() -> tuple[ControlAffineProblem, ValueModel]:
    """Scalar benchmark with policy -x and exact value x^2/2.

    q + phi R phi / 2 + V' (f + g phi) = x^2/2 + x^2/2 - x^2 = 0, so the
    model solves its PDE exactly and the simulated value is x0^2/2.
    """
    problem = ControlAffineProblem(
        n=1,
        p=1,
        dynamics=lambda x: np.zeros(1),
        input_map=lambda x: np.ones((1, 1)),
        policy=lambda x: -x,
        state_cost=lambda x: 0.5 * float(x[0]) ** 2,
        input_cost=np.eye(1),
    )
    model = ValueModel(
        value=lambda x: 0.5 * np.asarray(x, dtype=float)[..., 0] ** 2,
        gradient=lambda x: np.asarray(x, dtype=float).copy(),
        provenance="analytic",
    )
    return problem, model


def _check_state(problem: ControlAffineProblem, x) -> np.ndarray:
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.shape != (problem.n,):
        raise ValueError(f"state has shape {x.shape}, expected ({problem.n},)")
    return x


def pde_residual(problem: ControlAffineProblem, model: ValueModel, x) -> float:
    """q(x) + phi'R phi / 2 + grad V . (f + g phi), zero iff V is the value."""
    x = _check_state(problem, x)
    u = np.atleast_1d(problem.policy(x))
    grad = np.atleast_1d(model.gradient(x))
    drift = np.atleast_1d(problem.dynamics(x)) + np.atleast_2d(problem.input_map(x)) @ u
    running = problem.state_cost(x) + 0.5 * float(u @ problem.input_cost @ u)
    return float(running + grad @ drift)


@dataclass(frozen=True)
class SimulationResult:
    """Accumulated cost plus the truncation diagnostic."""

    value: float
    truncated: bool
    elapsed: float
    final_state_norm: float


def simulate_value(
    problem: ControlAffineProblem,
    x0,
    step: float = 1e-4,
    horizon: float = 40.0,
    stop_radius: float = 1e-7,
) -> SimulationResult:
    """Classical 4th-order Runge-Kutta integration of state and running cost.

    Stops once ||x|| <= stop_radius or t reaches the horizon; truncated is
    True when the horizon ended the run before the state settled, in which
    case the returned value undercounts the tail.
    """
    if not step > 0:
        raise ValueError("step must be positive")
    if horizon <= 0:
        raise ValueError("horizon must be positive")
    if stop_radius < 0:
        raise ValueError("stop_radius must be nonnegative")
    x = _check_state(problem, x0).copy()
    dynamics, input_map, policy = problem.dynamics, problem.input_map, problem.policy
    state_cost, R = problem.state_cost, problem.input_cost

    def rates(x):
        u = np.atleast_1d(policy(x))
        dx = np.atleast_1d(dynamics(x)) + np.atleast_2d(input_map(x)) @ u
        dc = state_cost(x) + 0.5 * float(u @ R @ u)
        return dx, dc

    cost = 0.0
    t = 0.0
    n_steps = int(np.ceil(horizon / step))
    with np.errstate(over="ignore", invalid="ignore"):
        for i in range(n_steps):
            if float(np.linalg.norm(x)) <= stop_radius:
                break
            try:
                k1x, k1c = rates(x)
                k2x, k2c = rates(x + 0.5 * step * k1x)
                k3x, k3c = rates(x + 0.5 * step * k2x)
                k4x, k4c = rates(x + step * k3x)
            except OverflowError as exc:
                raise TrajectoryDivergenceError(
                    f"closed loop overflowed at t={t:.6g} from x0={x0}"
                ) from exc
            x = x + (step / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
            cost += (step / 6.0) * (k1c + 2.0 * k2c + 2.0 * k3c + k4c)
            t = (i + 1) * step
            if not (np.all(np.isfinite(x)) and np.isfinite(cost)):
                raise TrajectoryDivergenceError(
                    f"state or cost became non-finite at t={t:.6g} from x0={x0}"
                )
    final_norm = float(np.linalg.norm(x))
    return SimulationResult(
        value=cost,
        truncated=final_norm > stop_radius,
        elapsed=t,
        final_state_norm=final_norm,
    )


def joint_error(model_true: ValueModel, net: ShallowReluNetwork, grid) -> float:
    """Grid maximum of max(|V - net|, ||grad V - grad net||_2)."""
    grid = np.asarray(grid, dtype=float)
    if grid.ndim == 1:
        grid = grid[:, None]
    if grid.size == 0:
        raise ValueError("empty evaluation grid")
    dv = np.abs(np.asarray(model_true.value(grid)) - net.value_batch(grid))
    dg = np.asarray(model_true.gradient(grid)) - net.gradient_batch(grid)
    return float(max(np.max(dv), np.max(np.linalg.norm(dg, axis=1))))


@dataclass(frozen=True)
class ConsistencyRow:
    x0: float
    model_value: float
    simulated_value: float
    truncated: bool
    residual: float
    value_gap: float


def consistency_report(
    problem: ControlAffineProblem,
    model: ValueModel,
    x0_list,
    step: float = 1e-4,
    horizon: float = 60.0,
    stop_radius: float = 1e-7,
    tol: float = 1e-4,
) -> tuple[list[ConsistencyRow], bool]:
    """Compare the model against its own PDE and against trajectory costs.

    Returns the per-state rows and a single consistency flag that is True
    only when every residual and every model-vs-simulation gap is within
    tol.  A False flag means the model formula and the stated cost
    disagree; both quantities are still reported.
    """
    rows = []
    consistent = True
    for x0 in np.atleast_1d(np.asarray(x0_list, dtype=float)):
        state = np.full(problem.n, float(x0)) if problem.n == 1 else None
        if state is None:
            raise ValueError("consistency_report supports scalar problems only")
        sim = simulate_value(problem, state, step=step, horizon=horizon, stop_radius=stop_radius)
        model_value = float(np.asarray(model.value(state)))
        residual = pde_residual(problem, model, state)
        gap = model_value - sim.value
        rows.append(
            ConsistencyRow(
                x0=float(x0),
                model_value=model_value,
                simulated_value=sim.value,
                truncated=sim.truncated,
                residual=residual,
                value_gap=gap,
            )
        )
        if abs(residual) > tol or abs(gap) > tol:
            consistent = False
    return rows, consistent
