import numpy as np

from nash_sandbox.contraction import CurvatureBounds, ContractionReport
from nash_sandbox.game import BoxSet, GameSpec, PlayerSpec
from nash_sandbox.metrics import (reference_equilibrium, RunMetrics,
                                  BoundInputs, theoretical_bounds,
                                  synchronous_recursion,
                                  bound_dominance_report)
from nash_sandbox.sa import InnerSchedule, accuracy_for, game_q_constants
from nash_sandbox.schemes import (SchemeConfig, run_synchronous,
                                  run_trajectories)


def _noisy_game(n_players=3):
    """Coupled quadratics whose coupling weight is U[-0.2, 0.4]"""
    def make(i):
        def det_grad(x_i, profile):
            return x_i - 0.8 + 0.1 * (profile.vector.sum() - x_i)

        def stoch_grad(x_i, profile, noise):
            return x_i - 0.8 + noise[0] * (profile.vector.sum() - x_i)

        def draw_noise(rng, size):
            return rng.uniform(-0.2, 0.4, (size, 1))

        return PlayerSpec(i, BoxSet([0.], [1.]), det_grad, stoch_grad,
                          draw_noise, grad_bound=2., lipschitz=1.)
    bounds = CurvatureBounds.uniform(np.ones(n_players), 0.1)
    return GameSpec([make(i) for i in range(n_players)], mu=1.,
                    curvature=bounds)


def test_synchronous_dominance():
    """Test that synchronous runs respect the recursion and envelope"""
    game = _noisy_game()
    report = ContractionReport(game.curvature, game.mu)
    np.testing.assert_allclose(report.a2, 0.6)
    ref = reference_equilibrium(game, verbose=False)
    np.testing.assert_allclose(ref.x_star.vector, np.full(3, 0.8 / 1.2),
                               atol=1e-10)
    q_const = game_q_constants(game)
    schedule = InnerSchedule('synchronous', eta=0.7, q_const=q_const)
    config = SchemeConfig('synchronous', max_iter=6, n_trajectories=20,
                          seed=3)
    records = run_trajectories(run_synchronous, game, config, schedule,
                               verbose=False)
    metrics = RunMetrics(records, ref.x_star)
    assert metrics.n_failed == 0
    alphas = [accuracy_for(schedule, 0, k) for k in range(6)]
    rhs = synchronous_recursion(metrics.u_k, report.a2, alphas, 3)
    assert np.all(metrics.u_k[1:] - 3 * metrics.u_se[1:] <= rhs)
    inputs = BoundInputs.from_report(report, 0.7, 1., q_const=q_const)
    bounds = theoretical_bounds(inputs, 'synchronous', n_iter=6)
    dominance = bound_dominance_report(metrics.u_k, bounds['envelope'],
                                       se=metrics.u_se)
    assert dominance['dominated']
    assert metrics.u_k[-1] < metrics.u_k[0] / 10.
