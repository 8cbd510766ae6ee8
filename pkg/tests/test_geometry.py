import mpmath as mp
import numpy as np
import pytest
import scipy.linalg as sla

from geofid import ensembles as ens
from geofid.errors import SingularInputError
from geofid.fidelity import matsumoto_fidelity
from geofid.geomean import geometric_mean
from geofid.geometry import (
    QubitCoords,
    TangentVector,
    alpha_q,
    coords_from_qubit,
    equal_purity_fgm,
    fgm_asymptotic,
    geodesic_point,
    hyperbolic_geodesic_r,
    least_squares_objective,
    metric_inner,
    midpoint_radius,
    path_length,
    qubit_from_coords,
    spd_distance,
    unit_trace_qubit,
)

SQRT2 = np.sqrt(2)


def rand_pd(n, rng):
    return ens.random_density(n, seed=rng) + 0.05 * np.eye(n)


def rand_invertible(n, rng):
    return ens.ginibre(n, n, rng) + 2 * np.eye(n)


def hyperboloid(R, psi):
    return np.array([np.cosh(R), np.sinh(R) * np.cos(psi), np.sinh(R) * np.sin(psi)])


def minkowski(u, v):
    return -u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def qubit_mean_2x2(A, B):
    # closed form for 2x2: A # B = sqrt(ab) (bA + aB) / sqrt(det(bA + aB)), a^2 = det A, b^2 = det B
    a = np.sqrt(np.linalg.det(A).real)
    b = np.sqrt(np.linalg.det(B).real)
    S = b * A + a * B
    return np.sqrt(a * b) * S / np.sqrt(np.linalg.det(S).real)


# --- metric and distance -----------------------------------------------------


def test_metric_examples(rng):
    I2 = np.eye(2)
    assert metric_inner(I2, I2, I2) == pytest.approx(2.0)
    assert metric_inner(2 * I2, I2, I2) == pytest.approx(0.5)
    for _ in range(20):
        M = rand_pd(3, rng)
        H1 = ens.ginibre(3, 3, rng)
        H1 = H1 + H1.conj().T
        H2 = ens.ginibre(3, 3, rng)
        H2 = H2 + H2.conj().T
        X = rand_invertible(3, rng)
        C = lambda Y: X @ Y @ X.conj().T  # noqa: E731
        assert metric_inner(C(M), C(H1), C(H2)) == pytest.approx(metric_inner(M, H1, H2), rel=1e-9)
        assert metric_inner(M, H1, H2) == pytest.approx(metric_inner(M, H2, H1), rel=1e-12)
        assert metric_inner(M, H1, H1) > 0
    with pytest.raises(SingularInputError):
        metric_inner(np.diag([1.0, 0.0]), I2, I2)


def test_tangent_vector():
    v = TangentVector(np.eye(2), np.diag([1.0, -1.0]))
    assert v.norm() == pytest.approx(SQRT2)
    with pytest.raises(ValueError):
        TangentVector(np.eye(2), np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_distance_examples(rng):
    A = rand_pd(3, rng)
    assert spd_distance(A, A) == pytest.approx(0.0, abs=1e-12)
    assert spd_distance(np.eye(2), 4 * np.eye(2)) == pytest.approx(np.log(4) * SQRT2, abs=1e-13)
    for _ in range(30):
        A, B = rand_pd(4, rng), rand_pd(4, rng)
        Aih = np.linalg.inv(sla.sqrtm(A))
        ref = np.linalg.norm(sla.logm(Aih @ B @ Aih), "fro")
        assert spd_distance(A, B) == pytest.approx(ref, abs=1e-10)
        assert spd_distance(B, A) == pytest.approx(spd_distance(A, B), abs=1e-10)
        X = rand_invertible(4, rng)
        d = spd_distance(X @ A @ X.conj().T, X @ B @ X.conj().T)
        assert d == pytest.approx(spd_distance(A, B), abs=1e-8)


# --- geodesics -----------------------------------------------------------------------------


def test_geodesic_point(rng):
    A, B = rand_pd(3, rng), rand_pd(3, rng)
    np.testing.assert_allclose(geodesic_point(A, B, 0.0), A, atol=1e-13)
    np.testing.assert_allclose(geodesic_point(A, B, 1.0), B, atol=1e-12)
    np.testing.assert_allclose(geodesic_point(A, B, 0.5), geometric_mean(A, B), atol=1e-12)
    np.testing.assert_allclose(geodesic_point(np.diag([1.0, 4.0]), np.diag([4.0, 1.0]), 0.5), 2 * np.eye(2), atol=1e-14)
    for t in (0.1, 0.3, 0.8):
        P = geodesic_point(A, B, t)
        assert spd_distance(A, P) == pytest.approx(t * spd_distance(A, B), abs=1e-9)


def test_midpoint_trace_and_equidistance(rng):
    for _ in range(50):
        rho = ens.random_density(3, seed=rng)
        sigma = ens.random_density(3, seed=rng)
        M = geodesic_point(rho, sigma, 0.5)
        assert np.trace(M).real == pytest.approx(matsumoto_fidelity(rho, sigma), abs=1e-8)
        assert spd_distance(rho, M) == pytest.approx(spd_distance(M, sigma), abs=1e-8)


def test_path_length_of_geodesic(rng):
    A, B = rand_pd(3, rng), rand_pd(3, rng)
    L = path_length(lambda t: geodesic_point(A, B, t))
    assert L == pytest.approx(spd_distance(A, B), rel=1e-6)


def test_least_squares_center(rng):
    rho, sigma = rand_pd(2, rng), rand_pd(2, rng)
    m = geometric_mean(rho, sigma)
    base = least_squares_objective(rho, sigma, m)
    for _ in range(40):
        H = ens.ginibre(2, 2, rng)
        H = (H + H.conj().T) / 2
        H *= 1e-2 * np.linalg.eigvalsh(m)[0] / np.abs(np.linalg.eigvalsh(H)).max()
        assert least_squares_objective(rho, sigma, m + H) >= base - 1e-12


# --- qubit chart -----------------------------------------------------------------------------


def test_chart_examples():
    np.testing.assert_allclose(qubit_from_coords(QubitCoords(0.0, 0.0, 0.4, 1.1)), np.eye(2), atol=1e-15)
    for a, r in [(0.3, 0.7), (-1.0, 2.0), (2.0, 5.0)]:
        M = qubit_from_coords(QubitCoords(a, r, 0.2, 0.9))
        assert np.trace(M).real == pytest.approx(2 * np.exp(-a / SQRT2) * np.cosh(r / SQRT2), rel=1e-13)
    for r in (0.0, 1.0, 5.0, 10.0):
        assert np.trace(unit_trace_qubit(r, 0.3, 0.7)).real == pytest.approx(1.0, abs=1e-12)
    assert alpha_q(0.0) == pytest.approx(SQRT2 * np.log(2), abs=1e-15)
    assert alpha_q(0.0) == pytest.approx(0.9803, abs=1e-4)
    # unit trace forces alpha to grow with r
    assert np.all(np.diff([alpha_q(r) for r in np.linspace(0.01, 10, 50)]) > 0)
    with pytest.raises(ValueError):
        QubitCoords(0.0, -1.0, 0.0, 0.0)


def test_round_trip(rng):
    c = coords_from_qubit(qubit_from_coords(QubitCoords(1.0, 1.0, 0.3, 0.7)))
    np.testing.assert_allclose([c.alpha, c.r, c.theta, c.phi], [1.0, 1.0, 0.3, 0.7], atol=1e-9)
    assert not c.degenerate
    for _ in range(200):
        c0 = QubitCoords(rng.uniform(-2, 2), rng.uniform(0.01, 6), rng.uniform(0.01, np.pi / 2 - 0.01), rng.uniform(0, np.pi))
        c1 = coords_from_qubit(qubit_from_coords(c0))
        np.testing.assert_allclose([c1.alpha, c1.r, c1.theta, c1.phi], [c0.alpha, c0.r, c0.theta, c0.phi], atol=1e-9)
    # every PD qubit is reproduced from its coordinates
    for _ in range(100):
        rho = ens.random_density(2, seed=rng)
        np.testing.assert_allclose(qubit_from_coords(coords_from_qubit(rho)), rho, atol=1e-9)


def test_degenerate_axis():
    c = coords_from_qubit(np.eye(2) / 2)
    assert c.degenerate
    assert (c.r, c.theta, c.phi) == (0.0, 0.0, 0.0)
    assert c.alpha == pytest.approx(SQRT2 * np.log(2))
    # on the chart poles phi does not move the matrix
    np.testing.assert_allclose(
        qubit_from_coords(QubitCoords(0.2, 1.0, np.pi / 2, 0.0)),
        qubit_from_coords(QubitCoords(0.2, 1.0, np.pi / 2, 1.3)),
        atol=1e-15,
    )


def test_qubit_metric_on_chart_equator(rng):
    # at theta = pi/4 the slice is ds^2 = dr^2 + 2 sinh^2(r/sqrt2) (2 dphi)^2
    for _ in range(5):
        a, r0, dr, p0, dp = rng.uniform(-1, 1), rng.uniform(0.3, 2), rng.uniform(-0.2, 0.5), rng.uniform(0, 3), rng.uniform(-0.5, 0.5)
        curve = lambda t: qubit_from_coords(QubitCoords(a, r0 + dr * t, np.pi / 4, p0 + dp * t))  # noqa: E731
        t = np.linspace(0, 1, 20001)
        r = r0 + dr * t
        ref = np.trapezoid(np.sqrt(dr**2 + 8 * np.sinh(r / SQRT2) ** 2 * dp**2), t)
        assert path_length(curve) == pytest.approx(ref, abs=1e-5)
    # along theta at fixed r the speed is 2 sqrt2 sinh(r/sqrt2)
    r = 1.3
    arc = lambda t: qubit_from_coords(QubitCoords(0.4, r, 0.2 + 0.5 * t, 0.7))  # noqa: E731
    assert path_length(arc) == pytest.approx(np.sqrt(8) * np.sinh(r / SQRT2) * 0.5, rel=1e-8)
    # alpha is a unit-speed flat direction
    line = lambda t: qubit_from_coords(QubitCoords(t, 0.8, 0.5, 0.2))  # noqa: E731
    assert path_length(line, 0.0, 0.7) == pytest.approx(0.7, abs=1e-7)


# --- hyperbolic slice ------------------------------------------------------------------


def test_geodesic_r_endpoints_and_symmetry():
    for r0, dphi in [(10.0, 0.1), (1.0, 1.0), (3.0, 2.5)]:
        assert hyperbolic_geodesic_r(0.0, r0, dphi) == pytest.approx(r0, abs=1e-12)
        assert hyperbolic_geodesic_r(dphi, r0, dphi) == pytest.approx(r0, abs=1e-9)
        phi = np.linspace(0, dphi, 11)
        np.testing.assert_allclose(hyperbolic_geodesic_r(phi, r0, dphi), hyperbolic_geodesic_r(dphi - phi, r0, dphi), atol=1e-9)


def test_geodesic_r_lies_on_hyperbolic_geodesic():
    # geodesics of the hyperboloid are its intersections with planes through the origin
    for r0, dphi in [(1.0, 1.0), (2.0, 0.3), (0.5, 2.0)]:
        n = np.cross(hyperboloid(r0, 0.0), hyperboloid(r0, dphi))
        n /= np.linalg.norm(n)
        for phi in np.linspace(0, dphi, 9):
            assert np.dot(n, hyperboloid(hyperbolic_geodesic_r(phi, r0, dphi), phi)) == pytest.approx(0, abs=1e-10)


def test_midpoint_radius():
    assert midpoint_radius(2.0, 0.0) == pytest.approx(2.0, abs=1e-12)
    with mp.workdps(40):
        ref = float(mp.atanh(mp.tanh(10) * mp.cos(mp.mpf("0.05"))))
    assert midpoint_radius(10.0, 0.1) == pytest.approx(ref, rel=1e-12)
    assert midpoint_radius(10.0, 0.1) == pytest.approx(3.6886, abs=1e-3)
    # midpoint from the hyperboloid model: normalized sum of the endpoints
    for r0, dphi in [(1.0, 1.0), (4.0, 0.2)]:
        s = hyperboloid(r0, 0.0) + hyperboloid(r0, dphi)
        mid = s / np.sqrt(-minkowski(s, s))
        assert midpoint_radius(r0, dphi) == pytest.approx(np.arccosh(mid[0]), rel=1e-10)
    phi = np.linspace(0, 0.1, 100001)
    assert hyperbolic_geodesic_r(phi, 10.0, 0.1).min() == pytest.approx(midpoint_radius(10.0, 0.1), abs=1e-6)


def test_midpoint_large_r0_limit():
    dphi = 0.3
    lim = np.arctanh(np.cos(dphi / 2))
    rem = [abs(midpoint_radius(r0, dphi) - lim) * np.exp(2 * r0) for r0 in (6.0, 8.0, 10.0, 12.0)]
    # bounded ratio, i.e. the remainder is O(exp(-2 r0))
    assert max(rem) / min(rem) < 1.01


def test_domain_errors():
    with pytest.raises(ValueError):
        hyperbolic_geodesic_r(0.0, 0.0, 0.1)
    with pytest.raises(ValueError):
        hyperbolic_geodesic_r(-2.0, 1.0, 0.5)  # outside [0, dphi], D(phi) < 0
    with pytest.raises(ValueError):
        midpoint_radius(-1.0, 0.1)
    with pytest.raises(ValueError):
        fgm_asymptotic(1.0, 0.0)


def test_equal_purity_fgm_matches_mean():
    for r0, dphi in [(1.0, 0.2), (4.0, 0.5), (12.0, 0.5), (3.0, 1.2)]:
        A = unit_trace_qubit(r0, np.pi / 4, 0.0)
        B = unit_trace_qubit(r0, np.pi / 4, dphi)
        exact = equal_purity_fgm(r0, dphi)
        assert exact == pytest.approx(matsumoto_fidelity(A, B), rel=1e-9)
        assert exact == pytest.approx(np.trace(qubit_mean_2x2(A, B)).real, rel=1e-9)


def test_fgm_asymptotic():
    for dphi in (0.2, 0.5, 1.0):
        ratios = [fgm_asymptotic(r0, dphi) / equal_purity_fgm(r0, dphi) for r0 in (10.0, 20.0, 30.0)]
        assert abs(ratios[-1] - 1) < abs(ratios[0] - 1) + 1e-15
        assert ratios[-1] == pytest.approx(1.0, abs=1e-6)
    assert fgm_asymptotic(12.0, 0.5) == pytest.approx(equal_purity_fgm(12.0, 0.5), rel=0.1)
    assert fgm_asymptotic(200.0, 0.5) < 1e-60
    f = [fgm_asymptotic(12.0, d) for d in np.arange(0.1, 1.01, 0.1)]
    assert np.all(np.diff(f) < 0)
