import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal, assert_equal

from nash_sandbox.game import (BoxSet, PlayerSpec, GameSpec, Profile,
                               SampleStream, RUN, UPDATE_SETS)
from nash_sandbox.sa import InnerSchedule
from nash_sandbox.schemes import (SchemeConfig, TrajectoryRecord,
                                  generate_update_sets,
                                  run_synchronous, run_randomized,
                                  run_asynchronous, run_cyclic,
                                  run_sg_baseline, run_trajectories)


def _decoupled_game(targets=(0.3, 0.7), mu=1.):
    """f_i = (x_i - c_i) ** 2 / 2 on [0, 1], equilibrium at c"""
    def make(i):
        c = targets[i]
        return PlayerSpec(i, BoxSet([0.], [1.]),
                          lambda x_i, profile: x_i - c, grad_bound=1.,
                          lipschitz=1.)
    return GameSpec([make(i) for i in range(len(targets))], mu=mu)


def _coupled_game(n_players=3):
    """Coupled quadratics with uniform noise on the coupling weight"""
    def make(i):
        def det_grad(x_i, profile):
            return x_i - 0.8 + 0.1 * (profile.vector.sum() - x_i)

        def stoch_grad(x_i, profile, noise):
            return x_i - 0.8 + noise[0] * (profile.vector.sum() - x_i)

        def draw_noise(rng, size):
            return rng.uniform(-0.2, 0.4, (size, 1))

        return PlayerSpec(i, BoxSet([0.], [1.]), det_grad, stoch_grad,
                          draw_noise, grad_bound=2., lipschitz=1.)
    return GameSpec([make(i) for i in range(n_players)], mu=1.)


def test_scheme_config():
    """Test scheme configuration checks"""
    pytest.raises(ValueError, SchemeConfig, 'threaded')
    pytest.raises(ValueError, SchemeConfig, 'randomized')
    pytest.raises(ValueError, SchemeConfig, 'randomized', p=[0.5, 0.])
    pytest.raises(ValueError, SchemeConfig, 'randomized', p=1.5)
    pytest.raises(ValueError, SchemeConfig, 'poisson', rates=[1., -1.])
    pytest.raises(ValueError, SchemeConfig, 'asynchronous', b1=0)
    pytest.raises(ValueError, SchemeConfig, 'asynchronous', delay='random')
    pytest.raises(TypeError, SchemeConfig, max_iter=2.5)
    pytest.raises(ValueError, SchemeConfig, n_trajectories=RUN + 1)
    config = SchemeConfig('poisson', rates=[1., 1., 2.])
    assert_allclose(config.probabilities(3), [0.25, 0.25, 0.5])
    config = SchemeConfig('randomized', p=0.3, max_iter=7)
    assert_allclose(config.probabilities(4), [0.3] * 4)
    assert config.to_dict()['max_iter'] == 7
    assert 'randomized' in repr(config)


def test_empty_run():
    """Test that no iterations record only the initial profile"""
    game = _decoupled_game()
    schedule = InnerSchedule('fixed', count=3)
    for kind, runner in (('synchronous', run_synchronous),
                         ('asynchronous', run_asynchronous),
                         ('cyclic', run_cyclic)):
        record = runner(game, SchemeConfig(kind, max_iter=0), schedule,
                        SampleStream(0, (0,)))
        assert record.n_iter == 0
        assert_equal(record.iterates, [[0., 0.]])
        assert record.completed
    record = run_sg_baseline(game, SchemeConfig('sg', max_iter=0, mu_sg=1.),
                             SampleStream(0, (0,)))
    assert record.n_iter == 0


def test_decoupled_synchronous():
    """Test geometric convergence on a decoupled game"""
    targets = np.array([0.3, 0.7])
    game = _decoupled_game(targets)
    # two SA steps solve the proximal problem exactly when mu = 1
    schedule = InnerSchedule('fixed', count=2)
    record = run_synchronous(game, SchemeConfig(max_iter=12), schedule,
                             SampleStream(0, (0,)))
    err = np.abs(record.iterates - targets)
    expected = targets * 0.5 ** np.arange(13)[:, np.newaxis]
    assert_allclose(err, expected, rtol=1e-10, atol=1e-15)
    assert_equal(record.sg_counts[-1], [24, 24])
    assert_equal(record.comm_rounds, np.arange(13))
    assert_equal(record.beta[-1], [12, 12])
    assert_allclose(record.errors(Profile(targets, [1, 1]))[-1],
                    targets * 0.5 ** 12, rtol=1e-10)


def test_collapse_to_synchronous():
    """Test that p = 1 and full update sets reproduce the synchronous run"""
    game = _coupled_game()
    stream = SampleStream(3, (0,))
    sync = run_synchronous(game, SchemeConfig(max_iter=4),
                           InnerSchedule('synchronous', eta=0.7), stream)
    rand = run_randomized(game, SchemeConfig('randomized', p=1., max_iter=4),
                          InnerSchedule('randomized', eta=0.7), stream)
    config = SchemeConfig('asynchronous', max_iter=4, b2=0,
                          update_sets=[[0, 1, 2]] * 4)
    asyn = run_asynchronous(game, config,
                            InnerSchedule('asynchronous', eta=0.7), stream)
    assert_allclose(rand.iterates, sync.iterates, rtol=0, atol=1e-12)
    assert_allclose(asyn.iterates, sync.iterates, rtol=0, atol=1e-12)
    assert_array_equal(rand.sg_counts, sync.sg_counts)
    assert_array_equal(asyn.sg_counts, sync.sg_counts)
    # the run is actually stochastic
    other = run_synchronous(game, SchemeConfig(max_iter=4),
                            InnerSchedule('synchronous', eta=0.7),
                            SampleStream(4, (0,)))
    assert not np.allclose(other.iterates[1:], sync.iterates[1:])


def test_activation_frequencies():
    """Test Bernoulli and Poisson-clock activation frequencies"""
    n_iter = 10000
    schedule = InnerSchedule('fixed', count=1)
    game = _decoupled_game()
    config = SchemeConfig('randomized', p=0.5, max_iter=n_iter)
    record = run_randomized(game, config, schedule, SampleStream(1, (0,)))
    sigma = np.sqrt(0.25 / n_iter)
    assert np.all(np.abs(record.beta[-1] / n_iter - 0.5) < 4 * sigma)
    # idle players keep their strategy and spend no SG steps
    active = np.zeros((n_iter, 2), bool)
    for k, s in enumerate(record.active_sets):
        active[k, s] = True
    assert_array_equal(np.diff(record.sg_counts, axis=0), active.astype(int))

    game = _decoupled_game((0.2, 0.4, 0.6))
    config = SchemeConfig('poisson', rates=[1., 1., 2.], max_iter=n_iter)
    record = run_randomized(game, config, schedule, SampleStream(1, (0,)))
    assert all(len(s) == 1 for s in record.active_sets)
    freq = record.beta[-1] / float(n_iter)
    expected = np.array([0.25, 0.25, 0.5])
    sigma = np.sqrt(expected * (1 - expected) / n_iter)
    assert np.all(np.abs(freq - expected) < 4 * sigma)
    pytest.raises(ValueError, run_randomized, game,
                  SchemeConfig(max_iter=1), schedule, SampleStream(0))
    pytest.raises(ValueError, run_randomized, game,
                  SchemeConfig('randomized', p=[0.5, 0.5]), schedule,
                  SampleStream(0))


def test_cyclic_counters():
    """Test update counters of the cyclic scheme"""
    n_players, n_iter = 3, 12
    game = _coupled_game(n_players)
    config = SchemeConfig('cyclic', max_iter=n_iter, b2=1)
    schedule = InnerSchedule('cyclic', eta=0.8, n_players=n_players)
    record = run_cyclic(game, config, schedule, SampleStream(0, (0,)))
    beta = record.beta
    for k in range(n_iter):
        i = k % n_players
        assert record.active_sets[k] == [i]
        assert beta[k + 1, i] == np.ceil((k + 1.) / n_players)
    assert_equal(beta[0], np.zeros(n_players))
    assert np.all(np.diff(record.sg_counts, axis=0) >= 0)


def test_asynchronous_run():
    """Test asynchronous runs with delays and generated update sets"""
    game = _coupled_game()
    schedule = InnerSchedule('asynchronous', eta=0.8)
    config = SchemeConfig('asynchronous', max_iter=15, b1=3, b2=2,
                          update_prob=0.3)
    record = run_asynchronous(game, config, schedule, SampleStream(0, (0,)))
    assert record.completed
    for start in range(0, 15, 3):
        seen = set().union(*record.active_sets[start:start + 3])
        assert seen == {0, 1, 2}
    for k in range(record.n_iter + 1):
        assert game.is_feasible(record.profile(k))
    # update sets are shared by all trajectories of a run
    other = run_asynchronous(game, config, schedule, SampleStream(0, (1,)))
    assert other.active_sets == record.active_sets
    # drawn from the run-level stream, not from any trajectory stream
    shared = SampleStream(0, (RUN, UPDATE_SETS)).generator
    assert record.active_sets == generate_update_sets(3, 15, 3, shared, 0.3)
    third = run_asynchronous(game, config, schedule,
                             SampleStream(0, (UPDATE_SETS,)))
    assert third.trajectory == UPDATE_SETS
    assert third.active_sets == record.active_sets
    fixed = SchemeConfig('asynchronous', max_iter=15, b1=3, b2=2,
                         delay='fixed', update_prob=0.3)
    record_fixed = run_asynchronous(game, fixed, schedule,
                                    SampleStream(0, (0,)))
    assert record_fixed.active_sets == record.active_sets
    # explicit update sets must cover every window
    bad = SchemeConfig('asynchronous', max_iter=4, b1=2,
                       update_sets=[[0], [1], [0, 1], [1]])
    pytest.raises(ValueError, run_asynchronous, game, bad, schedule,
                  SampleStream(0, (0,)))
    short = SchemeConfig('asynchronous', max_iter=4, update_sets=[[0, 1, 2]])
    pytest.raises(ValueError, run_asynchronous, game, short, schedule,
                  SampleStream(0, (0,)))


def test_step_ceiling_abort():
    """Test that a step ceiling stops the trajectory with a partial record"""
    game = _coupled_game()
    schedule = InnerSchedule('synchronous', eta=0.5, step_ceiling=100)
    with pytest.warns(RuntimeWarning, match='stopped'):
        record = run_synchronous(game, SchemeConfig(max_iter=10), schedule,
                                 SampleStream(0, (0,)))
    # 4 ** (k + 1) exceeds 100 at k = 3
    assert not record.completed
    assert record.n_iter == 3
    assert 'more than 100' in record.error
    assert record.to_dict()['error'] == record.error


def test_sg_baseline():
    """Test the projected stochastic gradient baseline"""
    targets = np.array([0.3, 0.7])
    game = _decoupled_game(targets)
    config = SchemeConfig('sg', max_iter=5, mu_sg=1.)
    record = run_sg_baseline(game, config, SampleStream(0, (0,)))
    # the first step has length one and lands on the minimizer
    assert_allclose(record.iterates[1:], np.tile(targets, (5, 1)),
                    atol=1e-15)
    assert_equal(record.sg_counts[-1], [5, 5])
    assert_equal(record.comm_rounds[-1], 5)
    noisy = _coupled_game()
    record = run_sg_baseline(noisy, SchemeConfig('sg', max_iter=30),
                             SampleStream(0, (0,)))
    for k in range(record.n_iter + 1):
        assert noisy.is_feasible(record.profile(k))


def test_trajectories_reproducible():
    """Test that trajectories are reproducible and independent"""
    game = _coupled_game()
    schedule = InnerSchedule('synchronous', eta=0.7)
    config = SchemeConfig(max_iter=3, n_trajectories=3, seed=11)
    first = run_trajectories(run_synchronous, game, config, schedule,
                             verbose=False)
    second = run_trajectories(run_synchronous, game, config, schedule,
                              verbose=False)
    assert len(first) == 3
    for a, b in zip(first, second):
        assert_array_equal(a.iterates, b.iterates)
        assert_array_equal(a.sg_counts, b.sg_counts)
    assert [r.trajectory for r in first] == [0, 1, 2]
    assert not np.allclose(first[0].iterates[1:], first[1].iterates[1:])
    records = run_trajectories(run_sg_baseline, game,
                               SchemeConfig('sg', max_iter=3,
                                            n_trajectories=2),
                               verbose=False)
    assert len(records) == 2


def test_record_frame():
    """Test the row stream of a trajectory record"""
    x0 = Profile.from_blocks([[0., 0.], [1.]])
    record = TrajectoryRecord(x0, 'synchronous', trajectory=4)
    record.append(Profile.from_blocks([[3., 4.], [1.]]), [0], [7, 0])
    pytest.raises(ValueError, record.append, x0, [0], [-1, 0])
    frame = record.to_frame(Profile.from_blocks([[0., 0.], [1.]]))
    assert_equal(len(frame), 2)
    assert_equal(frame['trajectory'].values, [4, 4])
    assert_allclose(frame['err_0'].values, [0., 5.])
    assert_allclose(frame['err_1'].values, [0., 0.])
    assert_allclose(frame['err_2'].values, [0., 5.])
    assert_equal(frame['sg_0'].values, [0, 7])
    assert_equal(frame['beta_1'].values, [0, 0])
    assert 'err_0' not in record.to_frame().columns
    assert record.to_dict()['final'] == [3., 4., 1.]
