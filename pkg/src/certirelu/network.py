"""Shallow ReLU networks: evaluation, almost-everywhere gradient, stacked form.

A network is f(x) = a.x + b + sum_i c_i relu(alpha_i.x - t_i) with unit
directions alpha_i.  The gradient uses the step convention step(0) = 1, so
it is defined for every x and equals the true gradient away from the kink
set {x : alpha_i.x = t_i for some i}.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

from .sampling import UNIT_NORM_TOL, DirectionOffsetSample, stack_samples

__all__ = [
    "relu",
    "relu_step",
    "ShallowReluNetwork",
    "StackedParameters",
    "stack_parameters",
    "feature_vector",
    "save_network",
    "load_network",
]


def relu(t):
    """max(t, 0), elementwise."""
    return np.maximum(t, 0.0)


def relu_step(t):
    """Unit step with value 1 at 0: the a.e. derivative of relu."""
    return np.where(np.asarray(t, dtype=float) >= 0.0, 1.0, 0.0)


@dataclass(frozen=True)
class ShallowReluNetwork:
    """Immutable network with affine part (a, b) and m sampled units."""

    a: np.ndarray       # (n,)
    b: float
    alphas: np.ndarray  # (m, n), unit rows
    ts: np.ndarray      # (m,)
    coeffs: np.ndarray  # (m,)

    def __post_init__(self) -> None:
        a = np.array(self.a, dtype=float, copy=True).reshape(-1)
        if a.size == 0:
            raise ValueError("affine slope must be a nonempty vector")
        alphas = np.array(self.alphas, dtype=float, copy=True).reshape(-1, a.size)
        ts = np.array(self.ts, dtype=float, copy=True).reshape(-1)
        coeffs = np.array(self.coeffs, dtype=float, copy=True).reshape(-1)
        if not (alphas.shape[0] == ts.size == coeffs.size):
            raise ValueError("alphas, ts and coeffs must have one entry per unit")
        if alphas.shape[0] and np.any(
            np.abs(np.linalg.norm(alphas, axis=1) - 1.0) > UNIT_NORM_TOL
        ):
            raise ValueError("all unit directions must have unit 2-norm")
        for arr in (a, alphas, ts, coeffs):
            arr.setflags(write=False)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", float(self.b))
        object.__setattr__(self, "alphas", alphas)
        object.__setattr__(self, "ts", ts)
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def n(self) -> int:
        return self.a.shape[0]

    @property
    def m(self) -> int:
        return self.coeffs.shape[0]

    @classmethod
    def affine(cls, a, b: float) -> "ShallowReluNetwork":
        """Network with no hidden units."""
        a = np.atleast_1d(np.asarray(a, dtype=float))
        return cls(a=a, b=b, alphas=np.zeros((0, a.size)), ts=np.zeros(0), coeffs=np.zeros(0))

    @classmethod
    def from_units(cls, a, b: float, units: Iterable[tuple]) -> "ShallowReluNetwork":
        """Build from an iterable of (alpha, t, c) triples."""
        a = np.atleast_1d(np.asarray(a, dtype=float))
        units = list(units)
        if not units:
            return cls.affine(a, b)
        alphas = np.stack([np.atleast_1d(np.asarray(u[0], dtype=float)) for u in units])
        ts = np.array([u[1] for u in units], dtype=float)
        coeffs = np.array([u[2] for u in units], dtype=float)
        return cls(a=a, b=b, alphas=alphas, ts=ts, coeffs=coeffs)

    @classmethod
    def from_samples(
        cls, samples: Sequence[DirectionOffsetSample], a, b: float, coeffs
    ) -> "ShallowReluNetwork":
        """Attach fitted coefficients to a fixed sample sequence."""
        a = np.atleast_1d(np.asarray(a, dtype=float))
        if not samples:
            return cls.affine(a, b)
        alphas, ts = stack_samples(samples)
        return cls(a=a, b=b, alphas=alphas, ts=ts, coeffs=np.asarray(coeffs, dtype=float))

    def units(self) -> Iterator[tuple[np.ndarray, float, float]]:
        for i in range(self.m):
            yield self.alphas[i], float(self.ts[i]), float(self.coeffs[i])

    def _check_point(self, x) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if x.shape != (self.n,):
            raise ValueError(f"point has shape {x.shape}, expected ({self.n},)")
        return x

    def _check_batch(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X[:, None]
        if X.ndim != 2 or X.shape[1] != self.n:
            raise ValueError(f"batch has shape {X.shape}, expected (N, {self.n})")
        return X

    def value(self, x) -> float:
        x = self._check_point(x)
        out = float(self.a @ x) + self.b
        if self.m:
            out += float(self.coeffs @ relu(self.alphas @ x - self.ts))
        return out

    def gradient(self, x) -> np.ndarray:
        x = self._check_point(x)
        g = self.a.copy()
        if self.m:
            active = relu_step(self.alphas @ x - self.ts)
            g += (self.coeffs * active) @ self.alphas
        return g

    def value_batch(self, X) -> np.ndarray:
        X = self._check_batch(X)
        out = X @ self.a + self.b
        if self.m:
            out += relu(X @ self.alphas.T - self.ts) @ self.coeffs
        return out

    def gradient_batch(self, X) -> np.ndarray:
        X = self._check_batch(X)
        out = np.broadcast_to(self.a, X.shape).copy()
        if self.m:
            active = relu_step(X @ self.alphas.T - self.ts)
            out += (active * self.coeffs) @ self.alphas
        return out

    def min_kink_distance(self, x) -> float:
        """Distance min_i |alpha_i.x - t_i| to the nearest gradient kink."""
        x = self._check_point(x)
        if self.m == 0:
            return np.inf
        return float(np.min(np.abs(self.alphas @ x - self.ts)))

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "a": self.a.tolist(),
            "b": self.b,
            "units": [
                {"alpha": alpha.tolist(), "t": t, "c": c} for alpha, t, c in self.units()
            ],
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "ShallowReluNetwork":
        net = cls.from_units(
            np.asarray(doc["a"], dtype=float),
            float(doc["b"]),
            [(u["alpha"], u["t"], u["c"]) for u in doc["units"]],
        )
        if net.n != int(doc["n"]):
            raise ValueError("dimension field does not match the slope vector")
        return net


@dataclass(frozen=True)
class StackedParameters:
    """Single-matrix form: predict(x) = theta . phi(W x + b_vec).

    phi applies the identity to the leading 1 + n entries (the constant
    and linear features) and relu to the remaining m entries.  Row 0 of W
    is zero, rows 1..n are the identity, the rest are the unit directions;
    b_vec = (1, 0_n, -t_1, ..., -t_m); theta = (b, a, c_1, ..., c_m).
    """

    W: np.ndarray      # (1 + n + m, n)
    b_vec: np.ndarray  # (1 + n + m,)
    theta: np.ndarray  # (1 + n + m,)

    @property
    def n(self) -> int:
        return self.W.shape[1]

    def features(self, x) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if x.shape != (self.n,):
            raise ValueError(f"point has shape {x.shape}, expected ({self.n},)")
        z = self.W @ x + self.b_vec
        head = z[: 1 + self.n]
        return np.concatenate([head, relu(z[1 + self.n :])])

    def predict(self, x) -> float:
        return float(self.theta @ self.features(x))


def stack_parameters(net: ShallowReluNetwork) -> StackedParameters:
    """Stack a network into its (W, b_vec, theta) single-matrix form."""
    n = net.n
    W = np.vstack([np.zeros((1, n)), np.eye(n), net.alphas])
    b_vec = np.concatenate([[1.0], np.zeros(n), -net.ts])
    theta = np.concatenate([[net.b], net.a, net.coeffs])
    return StackedParameters(W=W, b_vec=b_vec, theta=theta)


def feature_vector(samples: Sequence[DirectionOffsetSample], x) -> np.ndarray:
    """Feature vector (1, x_1..x_n, relu(alpha_i.x - t_i)_i) at one point."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if not samples:
        return np.concatenate([[1.0], x])
    alphas, ts = stack_samples(samples)
    if alphas.shape[1] != x.shape[0]:
        raise ValueError(
            f"point has dimension {x.shape[0]}, samples have dimension {alphas.shape[1]}"
        )
    return np.concatenate([[1.0], x, relu(alphas @ x - ts)])


def save_network(net: ShallowReluNetwork, path) -> None:
    """Write the JSON document {n, a, b, units}; exact for binary64 values."""
    Path(path).write_text(json.dumps(net.to_json_dict(), indent=2) + "\n", encoding="utf-8")


def load_network(path) -> ShallowReluNetwork:
    return ShallowReluNetwork.from_json_dict(json.loads(Path(path).read_text(encoding="utf-8")))
