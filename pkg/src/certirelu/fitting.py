"""Least-squares output coefficients over fixed random features.

Input parameters (the sampled direction/offset pairs) are never trained;
only the affine part and the unit coefficients are solved for, through a
rank-revealing orthogonal factorization (economy SVD).  Rank-deficient
systems with ridge = 0 get the minimum-norm minimizer.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bounds import BoundReport
from .network import ShallowReluNetwork, relu, relu_step
from .sampling import DirectionOffsetSample, stack_samples

__all__ = [
    "FitProblem",
    "design_matrix",
    "gradient_design_matrix",
    "fit_least_squares",
    "training_objective",
    "CapsCheck",
    "coefficient_caps_check",
]


@dataclass
class FitProblem:
    """Targets and options for one least-squares solve.

    points are states inside the approximation ball; targets the function
    values there.  grad_targets (optional) enables a gradient-matching
    penalty weighted by grad_weight; ridge adds Tikhonov shrinkage on the
    full coefficient vector (b, a, c).
    """

    samples: Sequence[DirectionOffsetSample]
    points: np.ndarray
    targets: np.ndarray
    grad_targets: np.ndarray | None = None
    grad_weight: float = 0.0
    ridge: float = 0.0

    def __post_init__(self) -> None:
        self.points = _as_points(self.points)
        self.targets = np.asarray(self.targets, dtype=float).reshape(-1)
        if self.points.shape[0] == 0:
            raise ValueError("at least one fit point is required")
        if self.targets.shape[0] != self.points.shape[0]:
            raise ValueError("targets and points must have equal length")
        if not np.all(np.isfinite(self.targets)):
            raise ValueError("targets must be finite")
        if self.grad_targets is not None:
            self.grad_targets = np.asarray(self.grad_targets, dtype=float).reshape(
                self.points.shape
            )
            if not np.all(np.isfinite(self.grad_targets)):
                raise ValueError("gradient targets must be finite")
        if self.grad_weight < 0:
            raise ValueError("grad_weight must be nonnegative")
        if self.grad_weight > 0 and self.grad_targets is None:
            raise ValueError("grad_weight > 0 requires grad_targets")
        if self.ridge < 0:
            raise ValueError("ridge must be nonnegative")

    @property
    def n(self) -> int:
        return self.points.shape[1]

    @property
    def m(self) -> int:
        return len(self.samples)


def _as_points(points) -> np.ndarray:
    points = np.asarray(points, dtype=float)
    if points.ndim == 1:
        points = points[:, None]
    if points.ndim != 2:
        raise ValueError(f"points must be a (N, n) array, got shape {points.shape}")
    return points


def design_matrix(
    samples: Sequence[DirectionOffsetSample], points
) -> np.ndarray:
    """Rows (1, x, relu(alpha_i.x - t_i)); shape (N, m + n + 1)."""
    points = _as_points(points)
    N, n = points.shape
    if not samples:
        return np.hstack([np.ones((N, 1)), points])
    alphas, ts = stack_samples(samples)
    if alphas.shape[1] != n:
        raise ValueError(
            f"points have dimension {n}, samples have dimension {alphas.shape[1]}"
        )
    hidden = relu(points @ alphas.T - ts)
    return np.hstack([np.ones((N, 1)), points, hidden])


def gradient_design_matrix(
    samples: Sequence[DirectionOffsetSample], points
) -> np.ndarray:
    """Rows of d(prediction)/dx_k stacked point-major; shape (N * n, m + n + 1).

    Row (j, k) is (0, e_k, step(alpha_i.x_j - t_i) alpha_ik).
    """
    points = _as_points(points)
    N, n = points.shape
    m = len(samples)
    G = np.zeros((N, n, 1 + n + m))
    G[:, :, 1 : 1 + n] = np.eye(n)
    if samples:
        alphas, ts = stack_samples(samples)
        if alphas.shape[1] != n:
            raise ValueError(
                f"points have dimension {n}, samples have dimension {alphas.shape[1]}"
            )
        active = relu_step(points @ alphas.T - ts)           # (N, m)
        G[:, :, 1 + n :] = active[:, None, :] * alphas.T[None, :, :]
    return G.reshape(N * n, 1 + n + m)


def fit_least_squares(problem: FitProblem) -> ShallowReluNetwork:
    """Solve for (a, b, c) minimizing the fit objective.

    objective = sum_j (f(x_j) - y_j)^2
              + grad_weight * sum_j ||grad f(x_j) - g_j||_2^2
              + ridge * ||(b, a, c)||_2^2

    Solved through one economy SVD of the stacked data matrix.  ridge > 0
    applies the spectral filter s / (s^2 + ridge); ridge = 0 zeroes
    singular values below the machine-precision cutoff, which is exactly
    the minimum-norm least-squares solution.
    """
    A = design_matrix(problem.samples, problem.points)
    if problem.grad_weight > 0:
        sw = np.sqrt(problem.grad_weight)
        M = np.vstack([A, sw * gradient_design_matrix(problem.samples, problem.points)])
        y = np.concatenate([problem.targets, sw * problem.grad_targets.reshape(-1)])
    else:
        M, y = A, problem.targets
    U, s, Vt = np.linalg.svd(M, full_matrices=False)
    if problem.ridge > 0:
        filt = s / (s * s + problem.ridge)
    else:
        cutoff = np.finfo(float).eps * max(M.shape) * (s[0] if s.size else 0.0)
        filt = np.where(s > cutoff, 1.0 / np.where(s > cutoff, s, 1.0), 0.0)
    theta = Vt.T @ (filt * (U.T @ y))
    n = problem.n
    return ShallowReluNetwork.from_samples(
        problem.samples, a=theta[1 : 1 + n], b=float(theta[0]), coeffs=theta[1 + n :]
    )


def training_objective(problem: FitProblem, net: ShallowReluNetwork) -> float:
    """Objective value of fit_least_squares at a given network."""
    res = net.value_batch(problem.points) - problem.targets
    total = float(res @ res)
    if problem.grad_weight > 0:
        gres = net.gradient_batch(problem.points) - problem.grad_targets
        total += problem.grad_weight * float(np.sum(gres * gres))
    if problem.ridge > 0:
        theta = np.concatenate([[net.b], net.a, net.coeffs])
        total += problem.ridge * float(theta @ theta)
    return total


@dataclass(frozen=True)
class CapsCheck:
    """Diagnostic comparison of fitted coefficients against the derived caps.

    Least squares does not enforce the caps, so failed flags are
    informative, not errors.
    """

    a_ok: bool
    b_ok: bool
    c_ok: bool
    a_norm: float
    abs_b: float
    max_abs_c: float
    a_cap: float
    b_cap: float
    c_cap: float


def coefficient_caps_check(net: ShallowReluNetwork, report: BoundReport) -> CapsCheck:
    """Compare ||a||_2, |b| and max_i |c_i| against a_cap, b_cap, c_cap(m)."""
    a_norm = float(np.linalg.norm(net.a))
    abs_b = abs(net.b)
    max_abs_c = float(np.max(np.abs(net.coeffs))) if net.m else 0.0
    c_cap = report.c_cap(max(net.m, 1))
    return CapsCheck(
        a_ok=a_norm <= report.a_cap,
        b_ok=abs_b <= report.b_cap,
        c_ok=max_abs_c <= c_cap,
        a_norm=a_norm,
        abs_b=abs_b,
        max_abs_c=max_abs_c,
        a_cap=report.a_cap,
        b_cap=report.b_cap,
        c_cap=c_cap,
    )
