import os.path as op

import numpy as np
import pandas as pd
import pytest

from nash_sandbox.bench import (ExperimentConfig, run_experiment,
                                dominance_table, delay_sweep)


@pytest.mark.slow
def test_portfolio_linear_rate(tmp_path):
    """Test the synchronous portfolio run decays linearly under its bound"""
    cfg = ExperimentConfig.from_yaml('portfolio').copy(out=str(tmp_path))
    summary = run_experiment(cfg)
    assert summary['n_failed'] == 0
    assert summary['log_linear']['r2'] >= 0.9
    assert summary['log_linear']['rate'] < 1
    assert summary['dominated']


@pytest.mark.slow
def test_portfolio_target_steps(tmp_path):
    """Test mu=2, kappa=3.2 reaches 2.5e-3 within 3 x 1769 SG steps"""
    cfg = ExperimentConfig.from_yaml('portfolio').copy(
        out=str(tmp_path), game_params=dict(mu=2.),
        schedule=dict(kappa=3.2), scheme=dict(max_iter=45),
        experiment=dict(target=2.5e-3))
    summary = run_experiment(cfg, verbose=False)
    assert summary['n_failed'] == 0
    assert summary['target_steps'] is not None
    assert summary['target_steps'] <= 3 * 1769


@pytest.mark.slow
def test_portfolio_complexity_shape(tmp_path):
    """Test K(eps) grows like 1 / eps ** 2 and j = k ** 2 costs more"""
    cfg = ExperimentConfig.from_yaml('portfolio').copy(
        out=str(tmp_path / 'geometric'))
    summary = run_experiment(cfg, verbose=False)
    assert summary['fit']['n_points'] >= 3
    assert summary['fit']['r2'] >= 0.9
    poly = cfg.copy(out=str(tmp_path / 'polynomial'),
                    scheme=dict(n_trajectories=20),
                    schedule=dict(variant='polynomial', exponent=2))
    run_experiment(poly, verbose=False)
    # both runs start at x0, so they share the accuracy grid
    tables = [pd.read_csv(op.join(str(tmp_path), name, 'k_of_eps.csv'))
              for name in ('geometric', 'polynomial')]
    both = tables[0].merge(tables[1], on='eps',
                           suffixes=('_geometric', '_polynomial'))
    both = both.dropna(subset=['sg_steps_geometric', 'sg_steps_polynomial'])
    assert len(both) > 0
    smallest = both.loc[both['eps'].idxmin()]
    assert smallest['sg_steps_polynomial'] > smallest['sg_steps_geometric']


@pytest.mark.slow
def test_delay_degradation(tmp_path):
    """Test longer delays never make K(eps) better, up to one inversion"""
    cfg = ExperimentConfig.from_yaml('portfolio_async').copy(
        out=str(tmp_path))
    assert cfg.scheme['n_trajectories'] == 50
    # an accuracy the undelayed run reaches
    reached = delay_sweep(cfg, b2s=[0], verbose=False)['u_final'][0]
    cfg = cfg.copy(experiment=dict(target=3. * reached))
    table = delay_sweep(cfg, b2s=[0, 4, 8, 12], verbose=False)
    assert list(table['b2']) == [0, 4, 8, 12]
    steps = table['sg_steps'].fillna(np.inf).values
    assert np.isfinite(steps[0])
    assert np.sum(steps[1:] < steps[:-1]) <= 1
    assert all(d is True for d in table['dominated'].tolist())


@pytest.mark.slow
def test_dominance_grid(tmp_path):
    """Test the empirical error at k=40 is under the envelope in all cells"""
    cfg = ExperimentConfig.from_yaml('portfolio_dominance').copy(
        out=str(tmp_path), scheme=dict(n_trajectories=5))
    table = dominance_table(cfg, mus=[1., 2., 5.],
                            exponents=[0.5, 0.75, 1.], k=40, verbose=False)
    assert len(table) == 9
    assert table['ok'].all()
    assert np.all(table['eta'] < 1)
    # the envelope is conservative
    assert np.all(table['empirical'] < table['theoretical'])


@pytest.mark.slow
def test_capacity_two_stage(tmp_path):
    """Test the two-stage capacity run decays linearly with K ~ 1 / eps^2"""
    cfg = ExperimentConfig.from_yaml('capacity').copy(out=str(tmp_path))
    summary = run_experiment(cfg, verbose=False)
    assert summary['n_failed'] == 0
    assert summary['log_linear']['r2'] >= 0.9
    assert summary['log_linear']['rate'] < 1
    assert summary['fit']['r2'] >= 0.9


@pytest.mark.slow
def test_portfolio_randomized(tmp_path):
    """Test the randomized portfolio run stays under its envelope"""
    cfg = ExperimentConfig.from_yaml('portfolio_randomized').copy(
        out=str(tmp_path), scheme=dict(n_trajectories=20))
    summary = run_experiment(cfg)
    assert summary['n_failed'] == 0
    assert summary['log_linear']['rate'] < 1
    assert summary['dominated']
