import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_equal

from nash_sandbox.contraction import (CurvatureBounds, ContractionReport,
                                      build_gamma, norm_inf, norm_2,
                                      spectral_radius, check_assumptions,
                                      estimate_curvature, preflight)
from nash_sandbox.game import BoxSet, GameSpec, PlayerSpec
from nash_sandbox.utils import ConvergenceError, PreflightError


def _random_bounds(rng, n):
    zeta_min = rng.uniform(0.5, 3., n)
    off = rng.uniform(0., 1., (n, n))
    off[np.diag_indices(n)] = 0.
    return CurvatureBounds(zeta_min, off)


def test_bounds_args():
    """Test curvature bound checks"""
    pytest.raises(ValueError, CurvatureBounds, [-1.], [[0.]])
    pytest.raises(ValueError, CurvatureBounds, [1., 1.], [[0.]])
    pytest.raises(ValueError, CurvatureBounds, [1., 1.], [[1., 0.], [0., 0.]])
    pytest.raises(ValueError, build_gamma, CurvatureBounds([1.], [[0.]]), 0.)
    pytest.raises(ValueError, norm_inf, np.ones((2, 3)))
    pytest.raises(ValueError, norm_2, -np.eye(2))


def test_build_gamma():
    """Test the contraction matrix entries"""
    assert_allclose(build_gamma(CurvatureBounds([1.], [[0.]]), 1.), [[0.5]])
    # capacity game: zeta_min = eta + 2 b = 2.25, zeta_off = b = 0.5
    bounds = CurvatureBounds.uniform(np.full(5, 2.25), 0.5)
    gamma = build_gamma(bounds, 1.)
    assert_allclose(np.diag(gamma), 1. / 3.25)
    assert_allclose(gamma[0, 1:], 0.5 / 3.25)
    assert_allclose(norm_inf(gamma), 3. / 3.25)
    # portfolio game, first player with mu = 2
    zeta = 2 * (3 + 1. / 6) * 0.09 + 2 * 0.15
    assert_allclose(zeta, 0.87)
    gamma = build_gamma(CurvatureBounds.uniform(np.full(6, zeta), 0.15), 2.)
    assert_allclose(gamma[0, 0], 2. / 2.87)
    assert_allclose(gamma[0, 1], 0.15 / 2.87)


def test_norms():
    """Test norms and spectral radius against closed forms"""
    for func in (norm_inf, norm_2, spectral_radius):
        assert_allclose(func(np.eye(3)), 1., rtol=1e-12)
    sym = np.array([[0.5, 0.2], [0.2, 0.5]])
    assert_allclose(spectral_radius(sym), 0.7, rtol=1e-10)
    assert_allclose(norm_2(sym), 0.7, rtol=1e-10)
    assert_allclose(norm_inf(sym), 0.7)
    assert_allclose(spectral_radius([[0., 1.], [1., 0.]]), 1., rtol=1e-10)
    pytest.raises(ConvergenceError, norm_2, [[0.5, 0.1], [0.2, 0.4]],
                  tol=0., max_iter=3)


def test_norm_properties():
    """Test rho <= norms and agreement with dense linear algebra"""
    rng = np.random.RandomState(123)
    for _ in range(50):
        n = rng.randint(1, 7)
        bounds = _random_bounds(rng, n)
        gamma = build_gamma(bounds, rng.uniform(0.1, 5.))
        a2, a_inf, rho = norm_2(gamma), norm_inf(gamma), spectral_radius(gamma)
        assert rho <= a2 + 1e-10
        assert rho <= a_inf + 1e-10
        assert_allclose(a2, np.linalg.norm(gamma, 2), rtol=1e-7)
        assert_allclose(rho, np.abs(np.linalg.eigvals(gamma)).max(),
                        rtol=1e-7)
        flags = check_assumptions(a2, a_inf, bounds)
        if bounds.diag_dominant:
            assert flags['ok_infnorm']


def test_gamma_monotone_in_mu():
    """Test the diagonal grows and the off-diagonal ratio shrinks with mu"""
    rng = np.random.RandomState(123)
    bounds = _random_bounds(rng, 4)
    mus = np.logspace(-2, 4, 25)
    gammas = [build_gamma(bounds, mu) for mu in mus]
    diags = np.array([np.diag(g) for g in gammas])
    assert np.all(np.diff(diags, axis=0) > 0)
    ratios = np.array([g / np.diag(g)[:, np.newaxis] for g in gammas])
    assert np.all(np.diff(ratios, axis=0) <= 1e-15)
    assert_allclose(diags[-1], 1., atol=1e-3)


def test_check_assumptions():
    """Test the assumption flags"""
    report = ContractionReport(CurvatureBounds.uniform([1., 1.], 0.6), 1.)
    assert report.ok_diag_dom
    report = ContractionReport(CurvatureBounds.uniform([1., 1.], 1.2), 1.)
    assert not report.ok_diag_dom
    assert not report.ok_infnorm
    for mu, zeta in ((0.1, 0.3), (1., 1.), (100., 2.)):
        report = ContractionReport(CurvatureBounds([zeta], [[0.]]), mu)
        assert report.ok_2norm and report.ok_infnorm and report.ok_diag_dom
    # portfolio condition 0.87 > 5 * 0.15
    report = ContractionReport(CurvatureBounds.uniform(np.full(6, 0.87),
                                                       0.15), 2.)
    assert report.ok_diag_dom and report.ok_2norm
    flags = check_assumptions(1. - 1e-13, 0.5, CurvatureBounds([1.], [[0.]]))
    assert not flags['ok_2norm']
    assert_equal(flags['near_unity'], ['a2'])
    d = report.to_dict()
    assert_equal(sorted(['gamma', 'a2', 'a_inf', 'rho', 'ok_2norm',
                         'ok_infnorm', 'ok_diag_dom']),
                 sorted(set(d) & set(['gamma', 'a2', 'a_inf', 'rho',
                                      'ok_2norm', 'ok_infnorm',
                                      'ok_diag_dom'])))


def _quadratic_game(mu=1.):
    """Two coupled scalar quadratics with Hessian [[2, 0.5], [0.3, 1]]"""
    def grad0(x, p):
        return 2 * x + 0.5 * p.block(1)

    def grad1(x, p):
        return x + 0.3 * p.block(0)

    players = [PlayerSpec(0, BoxSet([0.], [1.]), grad0),
               PlayerSpec(1, BoxSet([-1.], [1.]), grad1)]
    return GameSpec(players, mu=mu)


def test_estimate_curvature():
    """Test the finite-difference curvature estimate on a quadratic game"""
    bounds = estimate_curvature(_quadratic_game(), n_points=5,
                                random_state=0)
    assert_allclose(bounds.zeta_min, [2., 1.], atol=1e-6)
    assert_allclose(bounds.zeta_offmax, [[0., 0.5], [0.3, 0.]], atol=1e-6)


def test_preflight():
    """Test preflight certification and forcing"""
    game = _quadratic_game()
    with pytest.warns(RuntimeWarning, match='finite-difference'):
        report = preflight(game, 'asynchronous')
    assert report.ok_diag_dom
    bad = GameSpec(game.players, mu=1.,
                   curvature=CurvatureBounds.uniform([0.1, 0.1], 2.))
    with pytest.raises(PreflightError) as err:
        preflight(bad, 'synchronous')
    assert not err.value.report.ok_2norm
    with pytest.warns(RuntimeWarning, match='force'):
        preflight(bad, 'cyclic', force=True)
    pytest.raises(ValueError, preflight, bad, 'bogus', force=True)
