import math

import numpy as np
import pytest

from sectorflow import equilibria as E
from sectorflow.angles import AngularProfile, Sector, SectorConfiguration

Q = math.pi / 8


def two_sector(z1, z2, g, a1=1.0, a2=1.0):
    return SectorConfiguration(4, (Sector(0.0, z1, a1), Sector(z1 + g, z2, a2)))


def test_closure_line_with_balanced_strengths_is_stationary():
    z1, z2 = 0.5, 0.2
    g = (math.pi / 2 - z1 - z2) / 2
    a2 = 1.0
    a1 = a2 * math.sin(z2) * math.cos(g + z2) / (math.sin(z1) * math.cos(g + z1))
    assert np.max(np.abs(E.stationarity_residual(two_sector(z1, z2, g, a1, a2)))) < 1e-15


def test_eightfold_residual_vanishes():
    assert np.max(np.abs(E.stationarity_residual(two_sector(Q, Q, Q)))) < 1e-16


def test_unbalanced_pair_on_closure_line_moves_only_its_gap():
    # 2 gamma + zeta1 + zeta2 = pi/2 here, so only the gap equation is violated
    r = E.stationarity_residual(two_sector(math.pi / 6, math.pi / 12, Q))
    assert np.max(np.abs(r[:2])) < 1e-15
    assert abs(r[2]) > 1e-2


def test_off_closure_residual_is_nonzero():
    r = E.stationarity_residual(two_sector(math.pi / 6, math.pi / 12, 0.3))
    assert abs(r[0]) > 1e-3 and abs(r[1]) > 1e-3


def test_residual_rejects_wrong_shape():
    with pytest.raises(ValueError):
        E.stationarity_residual(SectorConfiguration.from_angles(4, [0.3], []))


def test_family_endpoints():
    c0 = E.rotating_family(0.0)
    assert np.allclose(c0.zetas, [Q, Q])
    assert np.allclose(c0.strengths, math.sin(Q) * math.cos(2 * Q))
    c1 = E.rotating_family(Q)
    assert c1.zetas[1] == pytest.approx(0.0, abs=1e-16)
    assert c1.strengths[0] == pytest.approx(0.0, abs=1e-16)


@pytest.mark.parametrize("xi", np.linspace(0, Q, 100))
def test_family_is_stationary(xi):
    assert np.max(np.abs(E.stationarity_residual(E.rotating_family(xi)))) <= 1e-14


def test_family_rejects_out_of_range():
    with pytest.raises(ValueError):
        E.rotating_family(-0.01)
    with pytest.raises(ValueError):
        E.rotating_family(Q + 0.01)


def test_single_interval_rotates_rigidly(rng):
    for _ in range(20):
        b, a = np.sort(rng.uniform(-Q, Q, 2))
        assert E.rigid_rotation_residual(AngularProfile(4, ((b, a, 1.0),))) <= E.ROTATING_TOL


def test_straddling_pair_rotates():
    assert E.rigid_rotation_residual(E.straddling_pair(0.05)) <= 1e-12


def test_separated_pair_does_not_rotate():
    prof = AngularProfile(4, ((-0.3, -0.1, 1.0), (0.05, 0.25, 1.0)))
    assert E.rigid_rotation_residual(prof) > 1e-3


def test_residual_zero_set_scale_and_rotation_invariant():
    rot = E.straddling_pair(0.05)
    nonrot = AngularProfile(4, ((-0.3, -0.1, 1.0), (0.05, 0.25, 1.0)))
    for alpha, s in [(0.3, 2.0), (-1.1, 0.25)]:
        assert E.rigid_rotation_residual(rot.shifted(alpha).scaled(s)) <= 1e-12
        assert E.rigid_rotation_residual(nonrot.shifted(alpha).scaled(s)) > 1e-4


def test_residual_scales_linearly():
    prof = AngularProfile(4, ((-0.3, -0.1, 1.0), (0.05, 0.25, 1.0)))
    assert E.rigid_rotation_residual(prof.scaled(3.0)) == pytest.approx(3 * E.rigid_rotation_residual(prof))


def test_residual_rejects_empty_profile():
    with pytest.raises(ValueError):
        E.rigid_rotation_residual(AngularProfile(4, ()))


@pytest.mark.parametrize("divisions", [16, 32, 64])
def test_sweep_minimum_positive(divisions):
    rep = E.sweep_two_interval(math.pi / 4 / divisions)
    assert rep.min_residual > 0
    assert rep.single_interval_max <= 1e-12


def test_sweep_minimiser_moves_to_the_ends():
    outer = [max(abs(e) for e in (E.sweep_two_interval(math.pi / 4 / d).argmin[0],
                                  E.sweep_two_interval(math.pi / 4 / d).argmin[3])) for d in (16, 64)]
    assert outer[1] >= outer[0] - 1e-12
    assert outer[1] > Q - math.pi / 4 / 16


def test_sweep_rejects_bad_step():
    with pytest.raises(ValueError):
        E.sweep_two_interval(0.1)


def test_profile_mean():
    assert E.profile_mean(AngularProfile(4, ())) == 0.0
    assert E.profile_mean(E.family_profile(math.pi / 16)) > 0
    signed = AngularProfile(4, ((0.0, 0.2, 1.0), (0.3, 0.7, -0.5)))
    assert abs(E.profile_mean(signed)) < 1e-15


def test_zero_mean_rotating_state():
    prof, speed = E.zero_mean_rotating(math.pi / 16)
    assert abs(E.profile_mean(prof)) < 1e-14
    assert E.rigid_rotation_residual(prof) < 1e-12
