from decimal import Decimal, getcontext

import numpy as np
import pytest

from certirelu.bounds import (
    BoundReport,
    SmoothnessCertificate,
    derived_constants,
    sphere_area,
)

# independent extended-precision oracle for every printed constant formula
PI50 = Decimal("3.14159265358979323846264338327950288419716939937511")


def decimal_constants_n1(rho: str, R: str, p_min: str) -> dict:
    getcontext().prec = 50
    rho, R, p_min = Decimal(rho), Decimal(R), Decimal(p_min)
    A = Decimal(2)  # two-point counting measure in dimension 1
    beta = 16 * PI50**2 * rho * R / p_min + (4 + 8 * PI50 * R) * A * rho
    return {
        "A": A,
        "beta": beta,
        "L": 8 * PI50**2 * rho / p_min + 8 * PI50 * A * rho,
        "kappa1": 4 * beta,
        "kappa2": beta * Decimal(2).sqrt(),
        "zeta0": 64 * PI50**2 * 2 * rho / p_min,
        "zeta1": 8 * Decimal(2).sqrt() * PI50**2 * rho / p_min,
        "a_cap": 4 * PI50 * A * rho,
        "b_cap": (2 + 4 * PI50 * R) * A * rho,
        "c_cap_100": 8 * PI50**2 * rho / (100 * p_min),
    }


def sig12(value: float, expected: Decimal) -> bool:
    return abs(Decimal(repr(value)) - expected) <= abs(expected) * Decimal("1e-12")


REFERENCE_CERT = SmoothnessCertificate(n=1, k=4, rho=2.0, R=1.0, p_min=0.25)


def test_sphere_area_small_dimensions():
    assert sphere_area(1) == pytest.approx(2.0, abs=1e-15)
    assert sphere_area(2) == pytest.approx(2.0 * np.pi, rel=1e-15)


def test_sphere_area_peaks_at_seven():
    areas = {n: sphere_area(n) for n in range(1, 21)}
    assert areas[7] == pytest.approx(33.07336179231981, rel=1e-12)
    assert max(areas, key=areas.get) == 7


def test_sphere_area_rejects_zero():
    with pytest.raises(ValueError):
        sphere_area(0)


def test_certificate_validation():
    with pytest.raises(ValueError):
        SmoothnessCertificate(n=1, k=3, rho=1.0, R=1.0, p_min=0.25)
    with pytest.raises(ValueError):
        SmoothnessCertificate(n=1, k=4, rho=-1.0, R=1.0, p_min=0.25)
    with pytest.raises(ValueError):
        SmoothnessCertificate(n=1, k=4, rho=1.0, R=1.0, p_min=0.0)
    with pytest.raises(ValueError):
        SmoothnessCertificate(n=2, k=4, rho=1.0, R=1.0, p_min=0.25)  # k < n + 3


def test_constants_match_extended_precision_oracle():
    report = derived_constants(REFERENCE_CERT)
    oracle = decimal_constants_n1("2", "1", "0.25")
    for name in ("beta", "L", "kappa1", "kappa2", "zeta0", "zeta1", "a_cap", "b_cap"):
        assert sig12(getattr(report, name), oracle[name]), name
    assert sig12(report.c_cap(100), oracle["c_cap_100"])
    assert sig12(report.A, oracle["A"])


def test_constants_spot_values():
    report = derived_constants(REFERENCE_CERT)
    assert report.beta == pytest.approx(1379.8403282543113, rel=1e-12)
    assert report.L == pytest.approx(732.1856465845923, rel=1e-12)
    assert report.zeta0 == pytest.approx(10106.474906715503, rel=1e-12)
    assert report.zeta1 == pytest.approx(893.2946175537766, rel=1e-12)
    assert report.c_cap(100) == pytest.approx(6.316546816697189, rel=1e-12)
    assert report.kappa1 == 4.0 * report.beta
    assert report.kappa2 == pytest.approx(report.beta * np.sqrt(2.0), rel=1e-15)


def test_rhs_function_degenerate_coefficients_isolate_leading_term():
    report = BoundReport(
        certificate=REFERENCE_CERT, A=2.0, beta=1.0, L=1.0,
        kappa1=0.0, kappa2=0.0, zeta0=1.0, zeta1=1.0, a_cap=1.0, b_cap=1.0,
    )
    for m in (1, 7, 100):
        assert report.rhs_function(m, 0.3) == pytest.approx(1.0 / np.sqrt(m), rel=1e-15)


def test_rhs_function_decreases_in_m():
    report = derived_constants(REFERENCE_CERT)
    values = [report.rhs_function(2**p, 0.1) for p in range(2, 21)]
    assert all(a > b for a, b in zip(values, values[1:]))
    assert report.rhs_function(4096, 0.1) < report.rhs_function(64, 0.1)
    assert values[-1] < 1e-1 * values[0]  # vanishes as m grows


def test_rhs_grad_decreases_in_m():
    report = derived_constants(REFERENCE_CERT)
    ms = list(range(2, 50)) + [2**p for p in range(6, 21)]
    for norm in ("two", "inf"):
        values = [report.rhs_grad(m, 0.1, norm) for m in ms]
        assert all(a > b for a, b in zip(values, values[1:])), norm


def test_rhs_increase_as_delta_shrinks():
    report = derived_constants(REFERENCE_CERT)
    deltas = [0.5, 0.1, 0.01, 0.001]
    f_vals = [report.rhs_function(100, d) for d in deltas]
    g_vals = [report.rhs_grad(100, d) for d in deltas]
    assert all(a < b for a, b in zip(f_vals, f_vals[1:]))
    assert all(a < b for a, b in zip(g_vals, g_vals[1:]))


def test_constants_monotone_in_rho_and_p_min():
    lo = derived_constants(SmoothnessCertificate(n=1, k=4, rho=1.0, R=1.0, p_min=0.25))
    hi_rho = derived_constants(SmoothnessCertificate(n=1, k=4, rho=3.0, R=1.0, p_min=0.25))
    hi_floor = derived_constants(SmoothnessCertificate(n=1, k=4, rho=1.0, R=1.0, p_min=0.5))
    for name in ("beta", "L", "kappa1", "kappa2", "zeta0", "zeta1", "a_cap", "b_cap"):
        assert getattr(hi_rho, name) > getattr(lo, name), name
    for name in ("beta", "L", "kappa1", "kappa2", "zeta0", "zeta1"):
        assert getattr(hi_floor, name) < getattr(lo, name), name
    # the coefficient caps do not involve p_min
    assert hi_floor.a_cap == lo.a_cap
    assert hi_floor.b_cap == lo.b_cap


def test_rhs_grad_requires_enough_units():
    report = derived_constants(SmoothnessCertificate(n=2, k=5, rho=1.0, R=1.0, p_min=0.1))
    with pytest.raises(ValueError):
        report.rhs_grad(2, 0.1)
    assert report.rhs_grad(3, 0.1) > 0.0


def test_delta_domain_errors():
    report = derived_constants(REFERENCE_CERT)
    for bad in (0.0, 1.0, -0.1, 1.5):
        with pytest.raises(ValueError):
            report.rhs_function(10, bad)
        with pytest.raises(ValueError):
            report.rhs_grad(10, bad)


def test_rhs_policy_eval_is_max_of_both():
    report = derived_constants(REFERENCE_CERT)
    for m in (2, 64, 512, 4096):
        expected = max(report.rhs_function(m, 0.1), report.rhs_grad(m, 0.1))
        assert report.rhs_policy_eval(m, 0.1) == expected
    # the gradient side dominates for this certificate
    assert report.rhs_policy_eval(512, 0.1) == report.rhs_grad(512, 0.1)
    values = [report.rhs_policy_eval(m, 0.1) for m in (2, 4, 8, 16, 64, 256, 1024, 4096)]
    assert all(a > b for a, b in zip(values, values[1:]))


def test_alternative_covering_grouping_does_not_vanish():
    report = derived_constants(REFERENCE_CERT)
    scaled = report.rhs_function(10**6, 0.1)
    unscaled = report.rhs_function(10**6, 0.1, covering_term_scaled=False)
    assert unscaled > scaled
    assert unscaled > 1e3  # the unscaled covering term stays order kappa2
    assert scaled < 50.0


def test_rhs_positive_and_grad_norms_ordered_sensibly():
    report = derived_constants(REFERENCE_CERT)
    for m in (16, 256, 4096):
        two = report.rhs_grad(m, 0.1, "two")
        inf = report.rhs_grad(m, 0.1, "inf")
        assert two > 0.0 and inf > 0.0
    with pytest.raises(ValueError):
        report.rhs_grad(16, 0.1, norm="one")
