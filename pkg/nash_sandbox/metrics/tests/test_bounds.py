import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from nash_sandbox.contraction import CurvatureBounds, ContractionReport
from nash_sandbox.metrics import (domination_constant, randomized_constants,
                                  BoundInputs, theoretical_bounds,
                                  synchronous_recursion,
                                  randomized_recursion,
                                  bound_dominance_report)


def test_domination_constant():
    """Test the constant bounding z c^z by D q^z"""
    assert_allclose(domination_constant(0.5, 0.6),
                    1. / (math.e * math.log(1.2)))
    assert_allclose(domination_constant(0.5, 0.6), 2.0177, atol=1e-4)
    z = np.linspace(0., 200., 20001)
    rng = np.random.default_rng(0)
    for _ in range(100):
        c, q = np.sort(rng.uniform(0.05, 0.99, 2))
        if q - c < 1e-3:
            continue
        D = domination_constant(c, q)
        assert np.all(z * c ** z <= D * q ** z * (1 + 1e-12))
        # the bound is attained at z = 1 / ln(q / c)
        z_max = 1. / math.log(q / c)
        assert_allclose(z_max * (c / q) ** z_max, D)
    pytest.raises(ValueError, domination_constant, 0.6, 0.5)
    pytest.raises(ValueError, domination_constant, 0.5, 0.5)
    pytest.raises(ValueError, domination_constant, 0., 0.5)


def test_randomized_constants():
    """Test the randomized bases and the ratio of the exponents"""
    cons = randomized_constants([1., 1.], 0.6, 0.8)
    assert_allclose([cons['a_tilde'], cons['eta_tilde'],
                     cons['eta_tilde0'], cons['ratio']], [0.6, 0.8, 0.8, 1.])
    cons = randomized_constants(0.5, 0.6, 0.8)
    assert_allclose(cons['eta_tilde'] ** 2, 1 - 0.5 * 0.36)
    assert_allclose(cons['eta_tilde0'] ** 2, 1. / 1.28125)
    # partial participation always costs in the exponent
    for eta in (0.3, 0.7, 0.95):
        for p in (0.1, 0.5, 0.9):
            assert randomized_constants(p, 0.5, eta)['ratio'] > 1.
        assert_allclose(randomized_constants(1., 0.5, eta)['ratio'], 1.)
    pytest.raises(ValueError, randomized_constants, [0.5, 0.], 0.6, 0.8)
    pytest.raises(ValueError, randomized_constants, 1.2, 0.6, 0.8)


def test_synchronous_bounds():
    """Test the synchronous envelope, complexity and eta-rate bound"""
    inputs = BoundInputs(0.8, 4, 1., a=0.5, q_const=[2., 3., 2., 1.])
    out = theoretical_bounds(inputs, 'synchronous', eps=1e-2, n_iter=10)
    cons = out['constants']
    assert_allclose([cons['c'], cons['q']], [0.8, 0.9])
    D = domination_constant(0.8, 0.9)
    assert_allclose(cons['D'], D)
    scale = 2. * (1. + D)
    assert_allclose(out['envelope'], scale * 0.9 ** np.arange(11))
    exponent = math.log(1. / 0.64) / math.log(1. / 0.9)
    assert_allclose(out['exponent'], exponent)
    lead = 2. / (0.8 ** 4 * math.log(1. / 0.64))
    expected = lead * (scale / 1e-2) ** exponent + \
        math.ceil(math.log(scale / 1e-2) / math.log(1. / 0.9))
    assert_allclose(out['complexity'][0], expected)
    assert_allclose(out['complexity'][3] - out['complexity'][0],
                    -lead / 2. * (scale / 1e-2) ** exponent)
    assert out['norm'] == 'u_k' and out['kind'] == 'synchronous'
    # eta > a gives the eta-rate bound with exponent 2 and rate eta
    scale_cor = 2. * (1. + 0.8 / 0.3)
    cor = lead * (scale_cor / 1e-2) ** 2 + \
        math.ceil(math.log(scale_cor / 1e-2) / math.log(1. / 0.8))
    assert_allclose(out['complexity_eta'][0], cor)
    below = theoretical_bounds(BoundInputs(0.4, 4, 1., a=0.5),
                               'synchronous', eps=1e-2)
    assert 'complexity_eta' not in below
    assert 'complexity' not in theoretical_bounds(inputs, 'synchronous')


def test_high_probability():
    """Test that the confidence bound is the bound at eps * confidence"""
    inputs = BoundInputs(0.8, 3, 1., a=0.6, p=0.5)
    for kind in ('synchronous', 'randomized'):
        out = theoretical_bounds(inputs, kind, eps=1e-2, confidence=0.1)
        tight = theoretical_bounds(inputs, kind, eps=1e-3)
        assert_allclose(out['high_probability'], tight['complexity'])
        assert np.all(np.array(out['high_probability']) >
                      np.array(out['complexity']))
    pytest.raises(ValueError, theoretical_bounds, inputs, 'synchronous',
                  1e-2, 40, 1.5)


def test_delta_recipes():
    """Test exponents and constants of the delta recipes"""
    log_inv = math.log(1. / 0.8)
    for delta in (0.1, 0.5, 2.):
        # synchronous, eta = a
        out = theoretical_bounds(BoundInputs(0.8, 5, 1., a=0.8, delta=delta),
                                 'synchronous', eps=1e-2)
        assert_allclose(out['exponent'], 2. + delta)
        assert_allclose(out['constants']['D'],
                        (1. + 2. / delta) / (math.e * log_inv))
        # randomized, eta = a
        inputs = BoundInputs(0.8, 5, 1., a=0.8, p=[0.3, 0.5, 0.5, 1., 1.],
                             delta=delta)
        out = theoretical_bounds(inputs, 'randomized', eps=1e-2)
        cons = randomized_constants(inputs.p, 0.8, 0.8)
        ratio = math.log(1. / cons['eta_tilde0']) / \
            math.log(1. / cons['eta_tilde'])
        assert_allclose(out['exponent'], 2. * ratio + delta)
        assert_allclose(out['constants']['D'],
                        (2. * ratio + delta) /
                        (math.e * delta * math.log(1. / cons['eta_tilde'])))
        # asynchronous, eta = a_inf
        for b1, b2, n_prime in ((1, 0, 1), (2, 3, 6), (3, 3, 6)):
            inputs = BoundInputs(0.8, 5, 1., a_inf=0.8, b1=b1, b2=b2,
                                 delta=delta)
            out = theoretical_bounds(inputs, 'asynchronous', eps=1e-2)
            assert out['constants']['n_prime'] == n_prime
            assert_allclose(out['exponent'], 2. * n_prime + delta)
            assert_allclose(out['constants']['D'],
                            (n_prime + 2. * n_prime ** 2 / delta) /
                            (math.e * log_inv))
        # cyclic, eta = a_inf
        for n, b2 in ((5, 0), (5, 7), (2, 4)):
            inputs = BoundInputs(0.8, n, 1., a_inf=0.8, b2=b2, delta=delta)
            out = theoretical_bounds(inputs, 'cyclic', eps=1e-2)
            n0 = int(math.ceil(b2 / float(n)))
            assert out['constants']['n0'] == n0
            assert_allclose(out['exponent'], 2. * (n0 + 1) + delta)
            assert_allclose(out['constants']['D'],
                            n * (1 + n0) * (1. + 2. * (1 + n0) / delta) /
                            (math.e * log_inv))


def test_delta_sweep():
    """Test that the complexity is minimized by an interior delta"""
    deltas = [0.01, 0.05, 0.1, 0.2, 0.5, 1., 2.]
    values = [theoretical_bounds(BoundInputs(0.8, 6, 1., a=0.8, delta=d),
                                 'synchronous', eps=1e-3)['complexity'][0]
              for d in deltas]
    best = int(np.argmin(values))
    assert 0 < best < len(deltas) - 1


def test_randomized_collapse():
    """Test that p = 1 reproduces the synchronous bounds"""
    sync = theoretical_bounds(BoundInputs(0.8, 4, 1.5, a=0.6, q_const=3.),
                              'synchronous', eps=1e-2)
    rand = theoretical_bounds(BoundInputs(0.8, 4, 1.5, a=0.6, q_const=3.,
                                          p=1.), 'randomized', eps=1e-2)
    assert_allclose(rand['envelope'], sync['envelope'])
    assert_allclose(rand['envelope_p'], sync['envelope'])
    assert_allclose(rand['exponent'], sync['exponent'])
    assert_allclose(rand['complexity'], sync['complexity'])
    # partial participation raises the exponent
    half = theoretical_bounds(BoundInputs(0.8, 4, 1.5, a=0.6, q_const=3.,
                                          p=0.5), 'poisson', eps=1e-2)
    assert half['kind'] == 'randomized'
    assert half['exponent'] > sync['exponent']


def test_delayed_degenerate():
    """Test that B1 = 1, B2 = 0 gives the undelayed infinity-norm bound"""
    inputs = BoundInputs(0.7, 3, 1., a=0.6, a_inf=0.6, b1=1, b2=0)
    out = theoretical_bounds(inputs, 'asynchronous', eps=1e-2, n_iter=5)
    sync = theoretical_bounds(inputs, 'synchronous', eps=1e-2, n_iter=5)
    cons = out['constants']
    assert cons['n0'] == 0
    assert_allclose([cons['rho'], cons['c']], [0.7, 0.7])
    assert_allclose(cons['q'], sync['constants']['q'])
    ks = np.arange(6)
    assert_allclose(out['envelope'], (1. + cons['D']) * cons['q'] ** ks)
    assert_allclose(out['envelope_window'], (1. + ks) * 0.7 ** ks)
    assert_allclose(out['exponent'], sync['exponent'])
    assert out['norm'] == 'inf'
    # larger delays slow the window contraction
    slow = theoretical_bounds(BoundInputs(0.7, 3, 1., a_inf=0.6, b1=2,
                                          b2=4), 'asynchronous')
    assert slow['constants']['n0'] == 2
    assert_allclose(slow['constants']['rho'], 0.7 ** (1. / 3))
    assert slow['constants']['q'] > cons['q']


def test_bound_hypotheses():
    """Test that violated hypotheses are rejected"""
    pytest.raises(ValueError, theoretical_bounds, BoundInputs(0.8, 2, 1.),
                  'synchronous')
    pytest.raises(ValueError, theoretical_bounds,
                  BoundInputs(0.8, 2, 1., a=1.2), 'synchronous')
    pytest.raises(ValueError, theoretical_bounds,
                  BoundInputs(0.8, 2, 1., a=0.5), 'randomized')
    pytest.raises(ValueError, theoretical_bounds,
                  BoundInputs(0.8, 2, 1., a=0.5), 'asynchronous')
    pytest.raises(ValueError, theoretical_bounds,
                  BoundInputs(0.8, 2, 1., a=0.5), 'threaded')
    with pytest.raises(ValueError, match='eta = a'):
        theoretical_bounds(BoundInputs(0.8, 2, 1., a=0.5, delta=0.1),
                           'synchronous')
    with pytest.raises(ValueError, match='a_inf'):
        theoretical_bounds(BoundInputs(0.8, 2, 1., a_inf=0.5, delta=0.1),
                           'cyclic')
    with pytest.raises(ValueError, match='in \\(c, 1\\)'):
        theoretical_bounds(BoundInputs(0.8, 2, 1., a=0.5, q=0.7),
                           'synchronous')
    pytest.raises(ValueError, BoundInputs, 1., 2, 1.)
    pytest.raises(ValueError, BoundInputs, 0.8, 2, 1., q_const=[1., 2., 3.])
    pytest.raises(ValueError, BoundInputs, 0.8, 2, 1., q_const=0.)
    pytest.raises(TypeError, BoundInputs, 0.8, 2.5, 1.)


def test_inputs_from_report():
    """Test bound inputs taken from a contraction report"""
    report = ContractionReport(CurvatureBounds.uniform([2., 2.], 0.5), 1.)
    inputs = BoundInputs.from_report(report, 0.9, 1., p=0.5)
    assert inputs.n_players == 2
    assert_allclose([inputs.a, inputs.a_inf], [report.a2, report.a_inf])
    assert_allclose(inputs.p, [0.5, 0.5])
    info = inputs.to_dict()
    assert info['mu'] == 1. and info['q_const'] == [1., 1.]


def test_recursions():
    """Test the right-hand sides of the one-step recursions"""
    assert_allclose(synchronous_recursion([1., 0.5, 0.2], 0.5, [0.1, 0.2], 4),
                    [0.7, 0.65])
    alphas = [[0.1, 0.05], [0.1, 0.2]]
    assert_allclose(synchronous_recursion([1., 0.5, 0.2], 0.5, alphas, 4),
                    [0.7, 0.65])
    assert_allclose(randomized_recursion([1., 1., 1.], 0.5, 0.8, 0.9, 4),
                    [2.1, 1.94])


def test_dominance_report():
    """Test the empirical-versus-envelope table"""
    report = bound_dominance_report([1., 0.5, 0.3], [1., 0.6, 0.2])
    assert report['violations'] == [2]
    assert not report['dominated']
    assert [row['ok'] for row in report['rows']] == [True, True, False]
    report = bound_dominance_report([1., 0.5, 0.3], [1., 0.6, 0.2],
                                    se=[0., 0., 0.05])
    assert report['dominated']
    report = bound_dominance_report([1., 0.5, 0.3], [1., 0.6, 0.2, 0.1],
                                    ks=[0, 2])
    assert [row['k'] for row in report['rows']] == [0, 2]
    assert_allclose(report['rows'][1]['theoretical'], 0.2)
    pytest.raises(ValueError, bound_dominance_report, [1., 0.5], [1.])
