import numpy as np
import pytest
from numpy.testing import assert_allclose

from nash_sandbox.contraction import CurvatureBounds
from nash_sandbox.game import BoxSet, GameSpec, PlayerSpec, Profile
from nash_sandbox.metrics import (reference_equilibrium, proximal_response,
                                  best_response_map)
from nash_sandbox.recourse import CapacityRecourse
from nash_sandbox.utils import PreflightError


def _decoupled_game(targets, curvature=None):
    def make(i):
        c = np.array(targets[i], dtype=float)
        return PlayerSpec(i, BoxSet(np.zeros(c.size), np.ones(c.size)),
                          lambda x_i, profile: x_i - c, lipschitz=1.)
    return GameSpec([make(i) for i in range(len(targets))], mu=1.,
                    curvature=curvature)


def _cournot_game(n_players=2, eta=1., a=2., b=0.5, cap=1.):
    """First-stage capacity game with linear inverse demand"""
    def make(i):
        def det_grad(x_i, profile):
            total = profile.vector.sum() - profile.block(i)[0] + x_i[0]
            return eta * x_i - a + b * total + b * x_i
        return PlayerSpec(i, BoxSet([0.], [cap]), det_grad,
                          lipschitz=eta + 2 * b)
    bounds = CurvatureBounds.uniform(np.full(n_players, eta + 2 * b), b)
    return GameSpec([make(i) for i in range(n_players)], mu=1.,
                    curvature=bounds)


def test_decoupled_equilibrium():
    """Test the equilibrium of a decoupled game"""
    targets = [[0.2, 0.9], [0.5], [0.3, 0.3, 0.7]]
    ref = reference_equilibrium(_decoupled_game(targets), verbose=False)
    assert_allclose(ref.x_star.vector, np.concatenate(targets), atol=1e-10)
    assert ref.residual <= 1e-10
    assert ref.agreement <= 1e-8
    assert ref.method == 'jacobi'
    assert ref.to_dict()['dims'] == [2, 1, 3]
    # targets outside the box project onto it
    ref = reference_equilibrium(_decoupled_game([[1.5], [-0.5]]),
                                verbose=False)
    assert_allclose(ref.x_star.vector, [1., 0.], atol=1e-10)


def test_cournot_equilibrium():
    """Test the symmetric Cournot equilibrium 2.5 x = 2"""
    ref = reference_equilibrium(_cournot_game(), verbose=False)
    assert_allclose(ref.x_star.vector, [0.8, 0.8], atol=1e-10)
    assert ref.residual <= 1e-10
    # the fixed point of the proximal map is the equilibrium
    response = best_response_map(_cournot_game(), ref.x_star)
    assert_allclose(response.vector, [0.8, 0.8], atol=1e-10)
    five = reference_equilibrium(_cournot_game(5, eta=1.25),
                                 x0=np.full(5, 0.5), verbose=False)
    # 1.25 x - 2 + 0.5 * 5 x + 0.5 x = 0
    assert_allclose(five.x_star.vector, np.full(5, 2. / 4.25), atol=1e-10)
    assert five.agreement <= 1e-8


def test_recourse_equilibrium():
    """Test the equilibrium of a single firm with capacity recourse"""
    def det_grad(x, profile):
        return 2.25 * x - 1.

    player = PlayerSpec(0, BoxSet([0.], [0.5]), det_grad, lipschitz=2.25,
                        recourse=CapacityRecourse())
    game = GameSpec([player], mu=1.,
                    curvature=CurvatureBounds([2.25], [[0.]]))
    ref = reference_equilibrium(game, verbose=False)
    # below d / h the expected recourse gradient is E[d] - E[h] x
    assert_allclose(ref.x_star.vector, [0.65 / 1.75], atol=1e-9)
    assert ref.residual <= 1e-10


def test_proximal_response():
    """Test the exact proximal response against its closed form"""
    game = _cournot_game()
    anchor = Profile([0.2, 0.6], [1, 1])
    # 2 z - 1.7 + (z - 0.2) = 0
    assert_allclose(proximal_response(game, 0, anchor), [1.9 / 3.],
                    atol=1e-10)


def test_noncontractive_refused():
    """Test that a non-contractive game is refused unless forced"""
    bounds = CurvatureBounds.uniform([0.1, 0.1], 5.)
    game = _decoupled_game([[0.4], [0.6]], curvature=bounds)
    pytest.raises(PreflightError, reference_equilibrium, game,
                  verbose=False)
    with pytest.warns(RuntimeWarning, match='force=True'):
        ref = reference_equilibrium(game, force=True, cross_check=False,
                                    verbose=False)
    assert_allclose(ref.x_star.vector, [0.4, 0.6], atol=1e-10)
    assert ref.agreement is None
