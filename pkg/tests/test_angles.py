import math

import numpy as np
import pytest

from sectorflow import angles as A
from sectorflow.integrate import integrate
from sectorflow.oracles import fourier_kernel_H

Q = math.pi / 8


def random_profile(rng, m=4, pieces=3):
    p = 2 * math.pi / m
    cuts = np.sort(rng.uniform(0, p, 2 * pieces))
    return A.AngularProfile(m, tuple((cuts[2 * i], cuts[2 * i + 1], rng.uniform(-2, 2))
                                     for i in range(pieces)))


def random_config(rng, m, n):
    w = rng.dirichlet(np.ones(2 * n)) * 2 * math.pi / m
    return A.SectorConfiguration.from_angles(m, w[:n], w[n:2 * n - 1], rng.uniform(-1, 1))


# --- configuration types --------------------------------------------------

def test_gaps_close_the_fundamental_domain(rng):
    cfg = random_config(rng, 5, 3)
    assert math.isclose(cfg.zetas.sum() + cfg.gaps.sum(), 2 * math.pi / 5, rel_tol=0, abs_tol=1e-15)


def test_overlapping_sectors_are_rejected():
    with pytest.raises(ValueError):
        A.SectorConfiguration(4, (A.Sector(0.0, 0.5), A.Sector(0.3, 0.2)))


def test_fold_below_three_is_rejected():
    with pytest.raises(ValueError):
        A.SectorConfiguration.from_angles(2, [0.5], [])


def test_configuration_json_round_trip(rng):
    cfg = random_config(rng, 4, 2)
    assert A.SectorConfiguration.from_dict(cfg.to_dict()) == cfg


def test_constants_validate_signs():
    with pytest.raises(ValueError):
        A.NormalizationConstants(c=0.0)
    with pytest.raises(ValueError):
        A.NormalizationConstants(c_double_prime=-1.0)


def test_overlapping_profile_pieces_are_rejected():
    with pytest.raises(ValueError):
        A.AngularProfile(4, ((0.0, 0.3, 1.0), (0.2, 0.4, 1.0)))


# --- kernel ---------------------------------------------------------------

@pytest.mark.parametrize("m", [3, 4, 5])
def test_constant_profile_gives_quarter_exactly(m):
    th = np.linspace(-3, 3, 41)
    assert np.all(A.kernel_H(A.AngularProfile.constant(m), th) == 0.25)
    assert np.all(A.kernel_H(A.AngularProfile.constant(m, 2.0), th) == 0.5)


@pytest.mark.parametrize("theta0", [0.1, Q, 0.3, math.pi / 4 - 0.01])
def test_sector_edge_value(theta0):
    prof = A.AngularProfile(4, ((-theta0, theta0, 1.0),))
    assert abs(2 * A.kernel_H(prof, theta0) - 0.25 * (1 - math.cos(4 * theta0))) < 1e-12


@pytest.mark.parametrize("m", [3, 4, 5, 7])
def test_kernel_matches_fourier_solve(rng, m):
    prof = random_profile(rng, m)
    th = rng.uniform(-math.pi, math.pi, 7)
    assert np.max(np.abs(A.kernel_H(prof, th) - fourier_kernel_H(prof, th))) < 1e-8


def test_kernel_solves_the_ode_away_from_jumps(rng):
    prof = random_profile(rng)
    th = np.linspace(0.01, math.pi / 2 - 0.01, 200)
    th = th[np.all(np.abs(th[:, None] - np.array([p[:2] for p in prof.pieces]).ravel()[None]) > 1e-3, axis=1)]
    h = 1e-4
    H = lambda x: A.kernel_H(prof, x)
    second = (H(th + h) - 2 * H(th) + H(th - h)) / h ** 2
    assert np.max(np.abs(4 * H(th) + second - prof(th))) < 1e-5


def test_kernel_is_linear(rng):
    p1, p2 = random_profile(rng), random_profile(rng, pieces=1)
    th = rng.uniform(-1, 1, 9)
    combo = A.kernel_H(p1.scaled(2.5), th) + A.kernel_H(p2.scaled(-0.5), th)
    assert np.allclose(combo, 2.5 * A.kernel_H(p1, th) - 0.5 * A.kernel_H(p2, th), atol=1e-14)


def test_corner_speed_rotation_invariant(rng):
    prof = random_profile(rng)
    th = rng.uniform(-1, 1, 9)
    alpha = 0.37
    assert np.allclose(A.corner_angular_speed(prof.shifted(alpha), th + alpha),
                       A.corner_angular_speed(prof, th), atol=1e-14)


def test_corner_speed_examples():
    assert A.corner_angular_speed(A.AngularProfile.constant(4), 0.2) == pytest.approx(0.5, abs=1e-15)
    assert A.corner_angular_speed(A.AngularProfile(4, ((-Q, Q, 1.0),)), Q) == pytest.approx(0.25, abs=1e-15)
    full = A.AngularProfile(4, ((-math.pi / 4, math.pi / 4, 1.0),))
    assert A.corner_angular_speed(full, math.pi / 4) == pytest.approx(0.5, abs=1e-15)


def test_green_function_m4_closed_form():
    s = np.linspace(-1, 1, 11)
    assert np.allclose(A.green(4, s), np.abs(np.sin(2 * s)) / 4, atol=1e-15)


# --- right-hand sides -----------------------------------------------------

@pytest.mark.parametrize("m", [3, 4, 6])
def test_single_sector_is_stationary(m):
    cfg = A.SectorConfiguration.from_angles(m, [0.4], [], 0.1)
    d = A.rhs_general(cfg)
    assert d[1] == 0.0


def test_eightfold_state_is_stationary():
    cfg = A.SectorConfiguration.from_angles(4, [Q, Q], [Q], 0.0)
    assert np.max(np.abs(A.rhs_general(cfg)[1:])) < 1e-16


@pytest.mark.parametrize("m,n", [(3, 2), (4, 3), (5, 4), (8, 2)])
def test_total_opening_is_conserved(rng, m, n):
    for _ in range(50):
        d = A.rhs_general(random_config(rng, m, n))
        assert abs(d[1:1 + n].sum()) < 1e-14


def test_weighted_form_reduces_to_general(rng):
    for _ in range(50):
        cfg = random_config(rng, 4, 3)
        assert np.allclose(A.rhs_m4_weighted(cfg)[1:], A.rhs_general(cfg)[1:], atol=1e-15)


def test_weighted_openings_frozen_on_closure_line(rng):
    z1, z2 = 0.5, 0.3
    g = (math.pi / 2 - z1 - z2) / 2
    for a1, a2 in rng.uniform(-2, 2, (5, 2)):
        cfg = A.SectorConfiguration(4, (A.Sector(0.0, z1, a1), A.Sector(z1 + g, z2, a2)))
        assert np.max(np.abs(A.rhs_m4_weighted(cfg)[1:3])) < 1e-15


def test_zero_strengths_give_zero_derivative(rng):
    cfg = random_config(rng, 4, 3)
    cfg = A.SectorConfiguration(4, tuple(A.Sector(s.beta, s.zeta, 0.0) for s in cfg.sectors))
    assert np.all(A.rhs_m4_weighted(cfg) == 0.0)


def test_rhs_general_rejects_weights():
    cfg = A.SectorConfiguration(4, (A.Sector(0.0, 0.3, 2.0),))
    with pytest.raises(ValueError):
        A.rhs_general(cfg)


def test_rhs_weighted_rejects_other_folds():
    with pytest.raises(ValueError):
        A.rhs_m4_weighted(A.SectorConfiguration.from_angles(5, [0.3], []))


def test_m4_opening_rates_match_kernel(rng):
    """For m = 4 the ODE opening rates are the exact boundary-ray speed differences."""
    for _ in range(10):
        cfg = random_config(rng, 4, 3)
        start, end = A.sector_boundary_rates(cfg)
        assert np.allclose(A.rhs_general(cfg)[1:4], end - start, atol=1e-14)


# --- integrator -----------------------------------------------------------

def test_integrate_zero_rhs_is_constant():
    tr = integrate(lambda t, y: np.zeros_like(y), [1.0, 2.0], (0, 3), dt=0.1)
    assert np.all(tr.y == [1.0, 2.0])


def test_integrate_exponential_decay():
    tr = integrate(lambda t, y: -y, [1.0], (0, 1), dt=1e-3)
    assert abs(tr.final[0] - math.exp(-1)) < 1e-8


def test_integrate_adaptive_reaches_tolerance():
    tr = integrate(lambda t, y: -y, [1.0], (0, 1), dt=0.5, adaptive=True, tol=1e-12, t_eval=[0, 1])
    assert abs(tr.final[0] - math.exp(-1)) < 1e-10


def test_integrate_rejects_bad_inputs():
    with pytest.raises(ValueError):
        integrate(lambda t, y: y, [1.0], (0, 1), dt=0)
    with pytest.raises(ValueError):
        integrate(lambda t, y: y, [1.0], (1, 0))


def test_integrate_reports_boundary(rng):
    con = A.AngleConstraint(1.0, [0])
    tr = integrate(lambda t, y: np.array([-1.0]), [0.505], (0, 2), dt=0.01, constraint=con)
    assert tr.status == "boundary reached"
    assert tr.t_end < 1.0


def test_closure_preserved_along_general_flow(rng):
    m, n = 5, 3
    cfg = random_config(rng, m, n)
    con = A.general_constraint(m, n)
    tr = integrate(A.general_system(m), cfg.state(), (0, 5), dt=1e-2, constraint=con,
                   t_eval=np.linspace(0, 5, 11))
    for y in tr.y:
        c = A.SectorConfiguration.from_state(m, y)
        assert abs(c.zetas.sum() + c.gaps.sum() - 2 * math.pi / m) < 1e-12


def test_zero_angle_is_clamped_and_frozen():
    con = A.general_constraint(4, 2)
    y = con.project(np.array([0.0, 5e-13, 0.6, 0.1]))
    assert y[1] == 0.0
    tr = integrate(A.general_system(4), y, (0, 2), dt=1e-2, constraint=con)
    assert np.all(tr.y[:, 1] == 0.0)


def test_reduced_flow_conserves_opening_sum():
    cfg = A.SectorConfiguration.from_angles(4, [Q + 0.1, Q - 0.1], [Q])
    tr = integrate(A.general_system(4), cfg.state(), (0, 20), dt=1e-2, t_eval=np.linspace(0, 20, 21))
    s = tr.y[:, 1] + tr.y[:, 2]
    assert np.max(np.abs(s - s[0])) < 1e-12
