"""Sweep engine: fit networks over a grid of widths, measure sup-norm errors,
compare against the certified bounds, and emit CSV / JSON / SVG reports."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .bounds import SmoothnessCertificate, derived_constants
from .fitting import FitProblem, fit_least_squares
from .fourier import FourierProfile, RhoEstimate, estimate_rho, make_profile, multiplier
from .network import ShallowReluNetwork
from .policy_eval import ValueModel, logcosh
from .sampling import derived_rng, sample_pairs, uniform_density
from .svgplot import loglog_svg

__all__ = [
    "SWEEP_CSV_HEADER",
    "Target",
    "resolve_target",
    "sup_error",
    "SweepConfig",
    "SweepRow",
    "run_sweep",
    "emit_report",
    "RhoCertification",
    "certify_rho",
    "localized_value_table",
]

SWEEP_CSV_HEADER = "m,seed,err_f,err_g2,err_ginf,rhs_f,rhs_g2,rhs_ginf,c_max,fit_rmse,wall_ms"

# forward-transform defaults for rho certification; the x step must resolve
# the largest requested frequency (step <= 1/(8 max|omega|))
RHO_OMEGA_MAX = 60.0
RHO_OMEGA_STEP = 0.01
RHO_QUAD_STEP = 1.0 / 512.0


@dataclass(frozen=True)
class Target:
    """A sweep/certification target: value model plus its certificate.

    localized=True means the certificate was obtained for the target
    multiplied by the plateau bump; the two agree on [-1, 1], so sweep
    errors are measured against the plain model there.
    """

    name: str
    model: ValueModel
    certificate: SmoothnessCertificate
    transform_support: tuple[float, float]
    localized: bool = False

    def certification_sampler(self):
        """Vectorized sampler of the function whose transform is certified."""
        value = self.model.value
        if self.localized:
            return lambda x: np.asarray(value(np.asarray(x, dtype=float)[:, None])) * multiplier(x)
        return lambda x: np.asarray(value(np.asarray(x, dtype=float)[:, None]))


def _logcosh_model() -> ValueModel:
    return ValueModel(
        value=lambda x: logcosh(5.0 * np.asarray(x, dtype=float)[..., 0]) / 5.0,
        gradient=lambda x: np.tanh(5.0 * np.asarray(x, dtype=float)),
        provenance="analytic",
    )


def _gaussian_model() -> ValueModel:
    def value(x):
        x = np.asarray(x, dtype=float)[..., 0]
        return np.exp(-np.pi * x**2)

    def gradient(x):
        x = np.asarray(x, dtype=float)
        return -2.0 * np.pi * x * np.exp(-np.pi * x[..., :1] ** 2)

    return ValueModel(value=value, gradient=gradient, provenance="analytic")


def _custom_target(sample_file) -> Target:
    doc = json.loads(Path(sample_file).read_text(encoding="utf-8"))
    xs = np.asarray(doc["x"], dtype=float)
    fs = np.asarray(doc["f"], dtype=float)
    if xs.ndim != 1 or xs.shape != fs.shape or xs.size < 2:
        raise ValueError("sample file needs matching 1-D 'x' and 'f' arrays")
    order = np.argsort(xs)
    xs, fs = xs[order], fs[order]
    gs = (
        np.asarray(doc["grad"], dtype=float)[order]
        if "grad" in doc
        else np.gradient(fs, xs)
    )
    cert = SmoothnessCertificate(**doc["certificate"])

    def value(x):
        return np.interp(np.asarray(x, dtype=float)[..., 0], xs, fs)

    def gradient(x):
        return np.interp(np.asarray(x, dtype=float)[..., 0], xs, gs)[..., None]

    model = ValueModel(value=value, gradient=gradient, provenance="analytic")
    return Target(
        name=str(doc.get("name", "custom")),
        model=model,
        certificate=cert,
        transform_support=(float(xs[0]), float(xs[-1])),
    )


def resolve_target(name: str, R: float = 1.0, sample_file=None) -> Target:
    """Look up a sweep/certification target by id.

    "paper_vmod": the log-cosh value target; its certificate (rho = 2,
    k = 4) holds for the localized version, which coincides with the
    target on the unit interval, so R must not exceed 1.
    "gaussian": exp(-pi x^2) with its certificate rho = 1, k = 4.
    "custom": interpolated samples plus a declared certificate from a file.
    """
    if name == "paper_vmod":
        if R > 1.0:
            raise ValueError("the log-cosh certificate only covers radii R <= 1")
        cert = SmoothnessCertificate(n=1, k=4, rho=2.0, R=R, p_min=1.0 / (4.0 * R))
        return Target(
            name=name,
            model=_logcosh_model(),
            certificate=cert,
            transform_support=(-2.5, 2.5),
            localized=True,
        )
    if name == "gaussian":
        cert = SmoothnessCertificate(n=1, k=4, rho=1.0, R=R, p_min=1.0 / (4.0 * R))
        return Target(
            name=name,
            model=_gaussian_model(),
            certificate=cert,
            transform_support=(-8.0, 8.0),
        )
    if name == "custom":
        if sample_file is None:
            raise ValueError("target 'custom' requires a sample file")
        return _custom_target(sample_file)
    raise ValueError(f"unknown target {name!r}; expected paper_vmod, gaussian or custom")


def sup_error(net: ShallowReluNetwork, model: ValueModel, grid, mode: str) -> float:
    """Grid maximum of the requested error: value gap, gradient 2-norm gap,
    or gradient max-norm gap."""
    grid = np.asarray(grid, dtype=float)
    if grid.ndim == 1:
        grid = grid[:, None]
    if grid.size == 0:
        raise ValueError("empty evaluation grid")
    if mode == "value":
        return float(np.max(np.abs(np.asarray(model.value(grid)) - net.value_batch(grid))))
    dg = np.asarray(model.gradient(grid)) - net.gradient_batch(grid)
    if mode == "grad2":
        return float(np.max(np.linalg.norm(dg, axis=1)))
    if mode == "gradinf":
        return float(np.max(np.max(np.abs(dg), axis=1)))
    raise ValueError(f"mode must be 'value', 'grad2' or 'gradinf', got {mode!r}")


@dataclass(frozen=True)
class SweepConfig:
    """Full description of one sweep; identical configs give identical output."""

    target: str = "paper_vmod"
    n: int = 1
    R: float = 1.0
    m_list: tuple[int, ...] = (16, 32, 64, 128, 256, 512, 1024, 2048, 4096)
    seeds: tuple[int, ...] = tuple(range(10))
    delta: float = 0.1
    fit_grid: int = 2001
    eval_grid: int = 4001
    # tiny default ridge keeps the solve stable where the unit count crosses
    # the fit-grid size; it is echoed into the emitted config.json
    ridge: float = 1e-10
    grad_weight: float = 0.0
    out_dir: str = "results"
    sample_file: str | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "m_list", tuple(int(m) for m in self.m_list))
        object.__setattr__(self, "seeds", tuple(int(s) for s in self.seeds))
        if self.n < 1:
            raise ValueError("dimension must be >= 1")
        if not self.R > 0:
            raise ValueError("R must be positive")
        if not self.m_list or any(m < self.n + 1 for m in self.m_list):
            raise ValueError(f"every m must be >= n + 1 = {self.n + 1}")
        if not self.seeds:
            raise ValueError("at least one seed is required")
        if not 0.0 < self.delta < 1.0:
            raise ValueError("delta must lie in (0, 1)")
        if self.fit_grid < 2 or self.eval_grid < 2:
            raise ValueError("grids need at least 2 points")
        if self.ridge < 0 or self.grad_weight < 0:
            raise ValueError("ridge and grad_weight must be nonnegative")

    @classmethod
    def from_json_dict(cls, doc: dict) -> "SweepConfig":
        known = {f: doc[f] for f in cls.__dataclass_fields__ if f in doc}
        unknown = set(doc) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown sweep config fields: {sorted(unknown)}")
        return cls(**known)

    @classmethod
    def load(cls, path) -> "SweepConfig":
        return cls.from_json_dict(json.loads(Path(path).read_text(encoding="utf-8")))

    def to_json_dict(self) -> dict:
        return {
            "target": self.target,
            "n": self.n,
            "R": self.R,
            "m_list": list(self.m_list),
            "seeds": list(self.seeds),
            "delta": self.delta,
            "fit_grid": self.fit_grid,
            "eval_grid": self.eval_grid,
            "ridge": self.ridge,
            "grad_weight": self.grad_weight,
            "out_dir": self.out_dir,
            "sample_file": self.sample_file,
        }


@dataclass
class SweepRow:
    m: int
    seed: int
    err_f: float
    err_g2: float
    err_ginf: float
    rhs_f: float
    rhs_g2: float
    rhs_ginf: float
    c_max: float
    fit_rmse: float
    wall_ms: float
    failed: bool = False


def _uniform_grid(R: float, num: int) -> np.ndarray:
    return np.linspace(-R, R, num)[:, None]


def run_sweep(config: SweepConfig) -> list[SweepRow]:
    """Run every (m, seed) cell of the sweep, in deterministic order.

    Each cell draws its own sample stream (seed and m are both mixed into
    the stream), fits by least squares on the fit grid, and measures
    sup-norm errors on the denser eval grid.  A failed fit marks the row
    and the sweep continues.
    """
    if config.n != 1:
        raise NotImplementedError("the sweep reference implementation is 1-D")
    target = resolve_target(config.target, R=config.R, sample_file=config.sample_file)
    report = derived_constants(target.certificate)
    density = uniform_density(config.n, config.R)
    fit_x = _uniform_grid(config.R, config.fit_grid)
    eval_x = _uniform_grid(config.R, config.eval_grid)
    fit_targets = np.asarray(target.model.value(fit_x), dtype=float)
    fit_grads = np.asarray(target.model.gradient(fit_x), dtype=float)
    rows: list[SweepRow] = []
    for m in config.m_list:
        rhs_f = report.rhs_function(m, config.delta)
        rhs_g2 = report.rhs_grad(m, config.delta, "two")
        rhs_ginf = report.rhs_grad(m, config.delta, "inf")
        for seed in config.seeds:
            t0 = time.perf_counter()
            try:
                rng = derived_rng(seed, m)
                samples = sample_pairs(density, m, rng)
                problem = FitProblem(
                    samples=samples,
                    points=fit_x,
                    targets=fit_targets,
                    grad_targets=fit_grads if config.grad_weight > 0 else None,
                    grad_weight=config.grad_weight,
                    ridge=config.ridge,
                )
                net = fit_least_squares(problem)
                err_f = sup_error(net, target.model, eval_x, "value")
                err_g2 = sup_error(net, target.model, eval_x, "grad2")
                err_ginf = sup_error(net, target.model, eval_x, "gradinf")
                c_max = float(np.max(np.abs(net.coeffs))) if net.m else 0.0
                resid = net.value_batch(fit_x) - fit_targets
                fit_rmse = float(np.sqrt(np.mean(resid**2)))
                wall_ms = (time.perf_counter() - t0) * 1e3
                rows.append(
                    SweepRow(m, seed, err_f, err_g2, err_ginf, rhs_f, rhs_g2, rhs_ginf,
                             c_max, fit_rmse, wall_ms)
                )
            except (np.linalg.LinAlgError, ValueError):
                wall_ms = (time.perf_counter() - t0) * 1e3
                nan = float("nan")
                rows.append(
                    SweepRow(m, seed, nan, nan, nan, rhs_f, rhs_g2, rhs_ginf,
                             nan, nan, wall_ms, failed=True)
                )
    return rows


def _fmt(v: float) -> str:
    return repr(float(v))


def _median_by_m(rows: Sequence[SweepRow], attr: str) -> tuple[list[int], list[float]]:
    ms = sorted({r.m for r in rows if not r.failed})
    meds = [
        float(np.median([getattr(r, attr) for r in rows if r.m == m and not r.failed]))
        for m in ms
    ]
    return ms, meds


def localized_value_table(
    x_lo: float = -3.0, x_hi: float = 3.0, num: int = 601
) -> np.ndarray:
    """Columns (x, v, v * r): the log-cosh value and its localized version."""
    x = np.linspace(x_lo, x_hi, num)
    v = logcosh(5.0 * x) / 5.0
    return np.column_stack([x, v, v * multiplier(x)])


def emit_report(rows: Sequence[SweepRow], out_dir, config: SweepConfig) -> dict[str, Path]:
    """Write sweep.csv, bounds.json, vmod.csv, timing.csv and the SVG plots.

    sweep.csv is byte-identical across runs of the same config; wall-clock
    measurements are therefore kept out of it (its wall_ms column is a
    fixed 0 placeholder) and written to timing.csv instead.
    """
    if not rows:
        raise ValueError("no sweep rows to report")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths: dict[str, Path] = {}

    lines = [SWEEP_CSV_HEADER]
    for r in rows:
        lines.append(
            ",".join(
                [
                    str(r.m),
                    str(r.seed),
                    _fmt(r.err_f),
                    _fmt(r.err_g2),
                    _fmt(r.err_ginf),
                    _fmt(r.rhs_f),
                    _fmt(r.rhs_g2),
                    _fmt(r.rhs_ginf),
                    _fmt(r.c_max),
                    _fmt(r.fit_rmse),
                    "0",
                ]
            )
        )
    paths["sweep"] = out / "sweep.csv"
    paths["sweep"].write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")

    timing = ["m,seed,wall_ms"] + [f"{r.m},{r.seed},{_fmt(r.wall_ms)}" for r in rows]
    paths["timing"] = out / "timing.csv"
    paths["timing"].write_text("\n".join(timing) + "\n", encoding="utf-8", newline="\n")

    paths["config"] = out / "config.json"
    paths["config"].write_text(
        json.dumps(config.to_json_dict(), indent=2) + "\n", encoding="utf-8", newline="\n"
    )

    target = resolve_target(config.target, R=config.R, sample_file=config.sample_file)
    report = derived_constants(target.certificate)
    payload = report.to_json_dict()
    payload["target"] = target.name
    payload["delta"] = config.delta
    payload["table"] = [
        {
            "m": m,
            "c_cap": report.c_cap(m),
            "rhs_function": report.rhs_function(m, config.delta),
            "rhs_grad_two": report.rhs_grad(m, config.delta, "two"),
            "rhs_grad_inf": report.rhs_grad(m, config.delta, "inf"),
            "rhs_policy_eval": report.rhs_policy_eval(m, config.delta),
        }
        for m in config.m_list
    ]
    paths["bounds"] = out / "bounds.json"
    paths["bounds"].write_text(
        json.dumps(payload, indent=2) + "\n", encoding="utf-8", newline="\n"
    )

    ms, med_f = _median_by_m(rows, "err_f")
    if ms:
        _, med_g2 = _median_by_m(rows, "err_g2")
        rhs_f = [next(r.rhs_f for r in rows if r.m == m) for m in ms]
        rhs_g2 = [next(r.rhs_g2 for r in rows if r.m == m) for m in ms]
        paths["plot_function"] = out / "errors_function.svg"
        paths["plot_function"].write_text(
            loglog_svg(
                ms,
                [("median error", med_f), ("bound", rhs_f)],
                title="Function error vs width",
                xlabel="m",
                ylabel="sup error",
            ),
            encoding="utf-8",
            newline="\n",
        )
        paths["plot_gradient"] = out / "errors_gradient.svg"
        paths["plot_gradient"].write_text(
            loglog_svg(
                ms,
                [("median error", med_g2), ("bound", rhs_g2)],
                title="Gradient error vs width",
                xlabel="m",
                ylabel="sup error (2-norm)",
            ),
            encoding="utf-8",
            newline="\n",
        )

    table = localized_value_table()
    vmod_lines = ["x,v_phi,v_mod"] + [
        f"{_fmt(row[0])},{_fmt(row[1])},{_fmt(row[2])}" for row in table
    ]
    paths["vmod"] = out / "vmod.csv"
    paths["vmod"].write_text("\n".join(vmod_lines) + "\n", encoding="utf-8", newline="\n")
    return paths


@dataclass(frozen=True)
class RhoCertification:
    """Result bundle of one smoothness-coefficient certification run."""

    target: str
    k: int
    estimate: RhoEstimate
    profile: FourierProfile
    omega_max: float
    omega_step: float
    quad_step: float

    def to_json_dict(self) -> dict:
        return {
            "target": self.target,
            "k": self.k,
            "rho_hat": self.estimate.rho_hat,
            "edge_ratio": self.estimate.edge_ratio,
            "omega_at_max": self.estimate.omega_at_max,
            "omega_max": self.omega_max,
            "omega_step": self.omega_step,
            "quad_step": self.quad_step,
        }


def certify_rho(
    target_name: str,
    k: int = 4,
    omega_max: float = RHO_OMEGA_MAX,
    omega_step: float = RHO_OMEGA_STEP,
    quad_step: float = RHO_QUAD_STEP,
    R: float = 1.0,
    sample_file=None,
) -> RhoCertification:
    """Numerically certify the decay coefficient rho for a target at order k.

    The forward transform integrates the (localized, where applicable)
    target over its support; estimate_rho then scans the decay-weighted
    magnitude over [-omega_max, omega_max] and guards against a too-narrow
    scan window.
    """
    target = resolve_target(target_name, R=R, sample_file=sample_file)
    omega = np.linspace(
        -omega_max, omega_max, 2 * int(round(omega_max / omega_step)) + 1
    )
    profile = make_profile(
        target.certification_sampler(),
        target.transform_support,
        omega,
        quad_step,
        k,
    )
    estimate = estimate_rho(profile)
    return RhoCertification(
        target=target.name,
        k=k,
        estimate=estimate,
        profile=profile,
        omega_max=omega_max,
        omega_step=omega_step,
        quad_step=quad_step,
    )
