"""Derived constants and probabilistic sup-norm error certificates.

Everything here is a pure function of a :class:`SmoothnessCertificate`
(dimension n, decay order k, decay coefficient rho, ball radius R, sampling
density floor p_min).  The certificate says that the target's Fourier
transform satisfies sup_w |fhat(w)| (1 + |w|^k) <= rho; the bound evaluators
turn that into high-probability sup-norm guarantees for a width-m random
ReLU network over the ball of radius R.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "sphere_area",
    "SmoothnessCertificate",
    "BoundReport",
    "derived_constants",
]


def sphere_area(n: int) -> float:
    """Surface area of the unit sphere in R^n: 2 pi^(n/2) / Gamma(n/2).

    For n = 1 the sphere is the two-point set {-1, +1} and the formula
    gives its counting measure, 2.  The area peaks at n = 7 and decays
    geometrically afterwards.
    """
    if n < 1:
        raise ValueError(f"dimension must be a positive integer, got {n}")
    return 2.0 * math.pi ** (0.5 * n) / math.gamma(0.5 * n)


def _check_delta(delta: float) -> float:
    delta = float(delta)
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    return delta


@dataclass(frozen=True)
class SmoothnessCertificate:
    """Inputs for every constant and bound: (n, k, rho, R, p_min).

    rho bounds sup_w |fhat(w)| (1 + |w|^k) for the target function, with
    k >= n + 3 so that the certified Fourier decay controls the function
    and its gradient simultaneously.  p_min is the positive floor of the
    density used to draw the network's direction/offset pairs.
    """

    n: int
    k: int
    rho: float
    R: float
    p_min: float

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"dimension must be >= 1, got {self.n}")
        if self.k < self.n + 3:
            raise ValueError(
                f"decay order k must be at least n + 3 = {self.n + 3}, got {self.k}"
            )
        if not self.rho > 0:
            raise ValueError(f"rho must be positive, got {self.rho}")
        if not self.R > 0:
            raise ValueError(f"ball radius must be positive, got {self.R}")
        if not self.p_min > 0:
            raise ValueError(f"density floor must be positive, got {self.p_min}")


@dataclass(frozen=True)
class BoundReport:
    """Derived constants for one certificate, plus the bound evaluators.

    beta is the sub-Gaussian scale of one sampled feature's contribution,
    L the Lipschitz constant used by the covering argument, kappa1/kappa2
    the tail and covering coefficients of the function bound, and
    zeta0/zeta1 the growth and tail coefficients of the gradient bound.
    a_cap, b_cap and c_cap(m) bound the affine part and unit coefficients
    of the integral-representation network whose existence the theory
    guarantees; fitted coefficients need not respect them.
    """

    certificate: SmoothnessCertificate
    A: float
    beta: float
    L: float
    kappa1: float
    kappa2: float
    zeta0: float
    zeta1: float
    a_cap: float
    b_cap: float

    def c_cap(self, m: int) -> float:
        """Per-unit coefficient cap 8 pi^2 rho / (m p_min)."""
        if m < 1:
            raise ValueError(f"m must be >= 1, got {m}")
        cert = self.certificate
        return 8.0 * math.pi**2 * cert.rho / (m * cert.p_min)

    def rhs_function(
        self, m: int, delta: float, covering_term_scaled: bool = True
    ) -> float:
        """Sup-norm bound on the function error, valid with probability 1 - delta.

        Default form (covering term scaled by 1/sqrt(m)):

            (1/sqrt(m)) * (1 + kappa1 sqrt(log(2/delta))
                             + kappa2 sqrt(log(2 (1 + 2 R L sqrt(m)))))

        With ``covering_term_scaled=False`` the kappa2 term is added outside
        the 1/sqrt(m) factor.  That alternative grouping does not vanish as
        m grows; it is exposed only so both readings can be audited.
        """
        if m < 1:
            raise ValueError(f"m must be >= 1, got {m}")
        delta = _check_delta(delta)
        cert = self.certificate
        root_m = math.sqrt(m)
        tail = self.kappa1 * math.sqrt(math.log(2.0 / delta))
        covering = self.kappa2 * math.sqrt(
            math.log(2.0 * (1.0 + 2.0 * cert.R * self.L * root_m))
        )
        if covering_term_scaled:
            return (1.0 + tail + covering) / root_m
        return (1.0 + tail) / root_m + covering

    def rhs_grad(self, m: int, delta: float, norm: str = "two") -> float:
        """Sup-norm bound on the gradient error, valid with probability 1 - delta.

        norm="two" bounds the pointwise Euclidean norm of the gradient gap:

            (1/sqrt(m)) * (zeta0 sqrt(log(m+1)) + zeta1 sqrt(log(2n/delta)))

        norm="inf" bounds the pointwise max-norm instead:

            (1/sqrt(m)) * (8 pi^2 rho / p_min)
                        * (8 sqrt((n+1) log(m+1)) + sqrt(2 log(n/delta)))

        Both require m >= n + 1 (the growth term comes from a cell count
        that is only valid in that range).
        """
        cert = self.certificate
        if m < cert.n + 1:
            raise ValueError(f"gradient bound needs m >= n + 1 = {cert.n + 1}, got {m}")
        delta = _check_delta(delta)
        root_m = math.sqrt(m)
        log_growth = math.log(m + 1.0)
        if norm == "two":
            return (
                self.zeta0 * math.sqrt(log_growth)
                + self.zeta1 * math.sqrt(math.log(2.0 * cert.n / delta))
            ) / root_m
        if norm == "inf":
            scale = 8.0 * math.pi**2 * cert.rho / cert.p_min
            return (
                scale
                * (
                    8.0 * math.sqrt((cert.n + 1.0) * log_growth)
                    + math.sqrt(2.0 * math.log(cert.n / delta))
                )
                / root_m
            )
        raise ValueError(f"norm must be 'two' or 'inf', got {norm!r}")

    def rhs_policy_eval(self, m: int, delta: float) -> float:
        """Joint value/gradient bound: the max of the two one-sided bounds.

        This is the computable right-hand side for the criterion
        sup_x max(|V - net|, ||grad V - grad net||_2) <= eps.
        """
        return max(self.rhs_function(m, delta), self.rhs_grad(m, delta, "two"))

    def to_json_dict(self) -> dict:
        cert = self.certificate
        return {
            "certificate": {
                "n": cert.n,
                "k": cert.k,
                "rho": cert.rho,
                "R": cert.R,
                "p_min": cert.p_min,
            },
            "sphere_area": self.A,
            "beta": self.beta,
            "L": self.L,
            "kappa1": self.kappa1,
            "kappa2": self.kappa2,
            "zeta0": self.zeta0,
            "zeta1": self.zeta1,
            "a_cap": self.a_cap,
            "b_cap": self.b_cap,
        }


def derived_constants(cert: SmoothnessCertificate) -> BoundReport:
    """Evaluate every derived constant for a certificate.

    beta  = 16 pi^2 rho R / p_min + (4 + 8 pi R) A rho
    L     = 8 pi^2 rho / p_min + 8 pi A rho
    kappa1 = 4 beta,  kappa2 = beta sqrt(2 n)
    zeta0 = 64 pi^2 (n + 1) rho / p_min
    zeta1 = 8 sqrt(2 n) pi^2 rho / p_min
    a_cap = 4 pi A rho,  b_cap = (2 + 4 pi R) A rho

    where A is the sphere area for dimension n.
    """
    pi = math.pi
    n, rho, R, p_min = cert.n, cert.rho, cert.R, cert.p_min
    A = sphere_area(n)
    beta = 16.0 * pi**2 * rho * R / p_min + (4.0 + 8.0 * pi * R) * A * rho
    L = 8.0 * pi**2 * rho / p_min + 8.0 * pi * A * rho
    report = BoundReport(
        certificate=cert,
        A=A,
        beta=beta,
        L=L,
        kappa1=4.0 * beta,
        kappa2=beta * math.sqrt(2.0 * n),
        zeta0=64.0 * pi**2 * (n + 1.0) * rho / p_min,
        zeta1=8.0 * math.sqrt(2.0 * n) * pi**2 * rho / p_min,
        a_cap=4.0 * pi * A * rho,
        b_cap=(2.0 + 4.0 * pi * R) * A * rho,
    )
    for name in ("A", "beta", "L", "kappa1", "kappa2", "zeta0", "zeta1", "a_cap", "b_cap"):
        if not getattr(report, name) > 0:
            raise ValueError(f"derived constant {name} is not positive")
    return report
