"""The two example games of the numerical study

Competitive portfolio selection, where investors trade off return against
risk and share a market-impact cost, and a two-stage capacity game, where
firms compete in Cournot on capacity and then produce under random
prices and costs.
"""

# License: BSD (3-clause)

import numpy as np

from mne.utils import logger, verbose, warn

from ..contraction import CurvatureBounds
from ..defaults import _handle_default
from ..game import BoxSet, GameSpec, PlayerSpec
from ..recourse import CapacityRecourse
from ..utils import _check_int, _check_positive


def _per_player(value, n, name):
    value = np.atleast_1d(np.asarray(value, dtype=float))
    if value.size == 1:
        value = np.full(n, value[0])
    if value.shape != (n,) or not np.all(np.isfinite(value)):
        raise ValueError('%s must be a scalar or hold %d finite values, '
                         'got %s' % (name, n, value))
    return value


class PortfolioConfig(object):
    """Parameters of the competitive portfolio game

    Keyword arguments override ``DEFAULTS['portfolio']``: ``n_players``,
    the expected returns ``nu``, the diagonal ``risk`` of the covariance
    matrix R, the support ``[phi_low, phi_high]`` of the diagonal of the
    price-impact matrix, ``rho_base`` (risk aversion
    ``rho_i = rho_base + i / N`` for i = 1, ..., N) or an explicit
    ``rho``, the position limit ``cap``, the initial holdings ``x0`` and
    the proximal weight ``mu``.
    """

    def __init__(self, **params):
        params = _handle_default('portfolio', params)
        self.n_players = _check_int(params['n_players'], 'n_players', 1)
        self.nu = np.atleast_1d(np.asarray(params['nu'], dtype=float))
        n_assets = self.nu.size
        self.risk = _per_player(params['risk'], n_assets, 'risk')
        if np.any(self.risk <= 0):
            raise ValueError('risk must be positive, got %s' % self.risk)
        self.phi_low = _check_positive(params['phi_low'], 'phi_low')
        self.phi_high = _check_positive(params['phi_high'], 'phi_high')
        if not self.phi_low <= self.phi_high:
            raise ValueError('need phi_low <= phi_high, got [%s, %s]'
                             % (self.phi_low, self.phi_high))
        self.rho_base = _check_positive(params['rho_base'], 'rho_base',
                                        strict=False)
        if params['rho'] is None:
            self.rho = self.rho_base + np.arange(1, self.n_players + 1) / \
                float(self.n_players)
        else:
            self.rho = _per_player(params['rho'], self.n_players, 'rho')
        self.cap = _per_player(params['cap'], n_assets, 'cap')
        self.x0 = _per_player(params['x0'], n_assets, 'x0')
        if np.any(self.cap <= 0) or np.any(self.x0 < 0) or \
                np.any(self.x0 > self.cap):
            raise ValueError('need 0 <= x0 <= cap and cap > 0')
        self.mu = _check_positive(params['mu'], 'mu')

    @property
    def n_assets(self):
        return self.nu.size

    @property
    def phi_mean(self):
        """Diagonal of the expected price-impact matrix"""
        return (self.phi_low + self.phi_high) / 2.

    @property
    def zeta_min(self):
        return 2. * self.rho * self.risk.min() + 2. * self.phi_mean

    @property
    def zeta_off(self):
        return self.phi_mean

    def condition_margin(self):
        """``min_i lambda_min(2 rho_i R + 2 Phi) - (N - 1) ||Phi||``

        Positive when the infinity-norm contraction condition holds.
        """
        return float(self.zeta_min.min() -
                     (self.n_players - 1) * self.zeta_off)

    def to_dict(self):
        return dict(n_players=self.n_players, nu=self.nu.tolist(),
                    risk=self.risk.tolist(), phi_low=self.phi_low,
                    phi_high=self.phi_high, rho_base=self.rho_base,
                    rho=self.rho.tolist(), cap=self.cap.tolist(),
                    x0=self.x0.tolist(), mu=self.mu)


class CapacityConfig(object):
    """Parameters of the two-stage capacity game

    Keyword arguments override ``DEFAULTS['capacity']``: ``n_players``,
    ``mu``, the inverse demand ``P(x) = a - b sum_i x_i``, capacity limits
    ``caps`` (``cap_base + cap_scale sqrt(i)`` when None), cost curvature
    ``eta`` (``(N - 2.5) b`` when None), the supports of the second-stage
    price ``d`` and cost ``h``, and ``recourse`` to attach the second
    stage.
    """

    def __init__(self, **params):
        params = _handle_default('capacity', params)
        self.n_players = _check_int(params['n_players'], 'n_players', 1)
        n = self.n_players
        self.mu = _check_positive(params['mu'], 'mu')
        self.a = _check_positive(params['a'], 'a')
        self.b = _check_positive(params['b'], 'b', strict=False)
        self.cap_base = float(params['cap_base'])
        self.cap_scale = float(params['cap_scale'])
        if params['caps'] is None:
            self.caps = self.cap_base + self.cap_scale * \
                np.sqrt(np.arange(1, n + 1))
        else:
            self.caps = _per_player(params['caps'], n, 'caps')
        if np.any(self.caps <= 0):
            raise ValueError('caps must be positive, got %s' % self.caps)
        eta = (n - 2.5) * self.b if params['eta'] is None else params['eta']
        self.eta = _per_player(eta, n, 'eta')
        if np.any(self.eta <= 0):
            raise ValueError('cost curvature eta must be positive, got %s'
                             % self.eta)
        self.d_low, self.d_high = float(params['d_low']), \
            float(params['d_high'])
        self.h_low, self.h_high = float(params['h_low']), \
            float(params['h_high'])
        self.recourse = bool(params['recourse'])

    @property
    def zeta_min(self):
        return self.eta + 2. * self.b

    @property
    def zeta_off(self):
        return self.b

    def condition_margin(self):
        """``min_i eta_i - (N - 3) b``, positive when the proximal
        best-response map is an infinity-norm contraction"""
        return float(self.eta.min() - (self.n_players - 3) * self.b)

    def to_dict(self):
        return dict(n_players=self.n_players, mu=self.mu, a=self.a,
                    b=self.b, cap_base=self.cap_base,
                    cap_scale=self.cap_scale, caps=self.caps.tolist(),
                    eta=self.eta.tolist(), d_low=self.d_low,
                    d_high=self.d_high, h_low=self.h_low,
                    h_high=self.h_high, recourse=self.recourse)


def _portfolio_player(cfg, i):
    rho, risk, nu, x0 = cfg.rho[i], cfg.risk, cfg.nu, cfg.x0
    n_players, n_assets = cfg.n_players, cfg.n_assets

    def trades(x_i, profile):
        # sum_j (x_j - x0) with the own block replaced by x_i
        blocks = profile.vector.reshape(n_players, n_assets)
        return blocks.sum(axis=0) - blocks[i] + x_i - n_players * x0

    def det_grad(x_i, profile):
        return (2. * rho * risk * x_i - nu +
                cfg.phi_mean * (trades(x_i, profile) + x_i - x0))

    def stoch_grad(x_i, profile, noise):
        return (2. * rho * risk * x_i - nu +
                noise * (trades(x_i, profile) + x_i - x0))

    def draw_noise(rng, size):
        return rng.uniform(cfg.phi_low, cfg.phi_high, (size, n_assets))

    # |x_j - x0| <= max(cap - x0, x0) coordinatewise
    spread = np.linalg.norm(np.maximum(cfg.cap - x0, x0))
    grad_bound = (np.linalg.norm(nu) + 2. * rho * risk.max() *
                  np.linalg.norm(cfg.cap) +
                  cfg.phi_high * (n_players + 1) * spread)
    return PlayerSpec(i, BoxSet(np.zeros(n_assets), cfg.cap), det_grad,
                      stoch_grad, draw_noise, grad_bound=grad_bound,
                      lipschitz=2. * rho * risk.max() + 2. * cfg.phi_mean,
                      params=dict(rho=float(rho)))


@verbose
def build_portfolio(cfg=None, verbose=None):
    """Build the competitive portfolio game

    Investor i minimizes ``rho_i x_i'R x_i - nu'x_i`` plus the expected
    transaction cost ``(x_i - x0)' phi sum_j (x_j - x0)``, where ``phi``
    is diagonal with entries uniform on ``[phi_low, phi_high]``.

    Parameters
    ----------
    cfg : instance of PortfolioConfig | dict | None
        The parameters, the defaults when None.
    verbose : bool, str, int, or None
        If not None, override default verbose level (see mne.verbose).

    Returns
    -------
    game : instance of GameSpec
        The game with curvature bounds ``zeta_min_i = 2 rho_i min(R) +
        2 phi_mean`` and ``zeta_ij = phi_mean``.
    """
    if cfg is None:
        cfg = PortfolioConfig()
    elif isinstance(cfg, dict):
        cfg = PortfolioConfig(**cfg)
    margin = cfg.condition_margin()
    logger.info('Building the portfolio game with %d investors and %d '
                'assets (condition margin %0.4f)'
                % (cfg.n_players, cfg.n_assets, margin))
    if not margin > 0:
        warn('Portfolio parameters violate the contraction condition '
             'lambda_min(2 rho_i R + 2 Phi) > (N - 1) ||Phi|| '
             '(margin %0.4f)' % margin)
    bounds = CurvatureBounds.uniform(cfg.zeta_min, cfg.zeta_off)
    players = [_portfolio_player(cfg, i) for i in range(cfg.n_players)]
    return GameSpec(players, cfg.mu, curvature=bounds, name='portfolio')


def _capacity_player(cfg, i, problem):
    eta, a, b, cap = cfg.eta[i], cfg.a, cfg.b, cfg.caps[i]

    def det_grad(x_i, profile):
        total = profile.vector.sum() - profile.block(i)[0] + x_i[0]
        return eta * x_i - a + b * total + b * x_i

    grad_bound = a + (eta + b) * cap + b * cfg.caps.sum()
    return PlayerSpec(i, BoxSet([0.], [cap]), det_grad,
                      grad_bound=grad_bound, lipschitz=eta + 2. * b,
                      recourse=problem, cost_bound=eta * cap,
                      params=dict(eta=float(eta), cap=float(cap)))


@verbose
def build_capacity(cfg=None, verbose=None):
    """Build the two-stage capacity game

    Firm i chooses capacity ``0 <= x_i <= cap_i`` at cost
    ``eta_i x_i^2 / 2 - P(x) x_i`` and then produces
    ``q <= x_i`` with second-stage value ``max d q - h q^2 / 2``.

    Parameters
    ----------
    cfg : instance of CapacityConfig | dict | None
        The parameters, the defaults when None.
    verbose : bool, str, int, or None
        If not None, override default verbose level (see mne.verbose).

    Returns
    -------
    game : instance of GameSpec
        The game with ``zeta_min_i = eta_i + 2 b`` and ``zeta_ij = b``;
        each player carries a :class:`CapacityRecourse` when
        ``cfg.recourse`` is True.
    """
    if cfg is None:
        cfg = CapacityConfig()
    elif isinstance(cfg, dict):
        cfg = CapacityConfig(**cfg)
    margin = cfg.condition_margin()
    logger.info('Building the capacity game with %d firms%s (condition '
                'margin %0.4f)' % (cfg.n_players,
                                   ' and recourse' if cfg.recourse else '',
                                   margin))
    if not margin > 0:
        warn('Capacity parameters violate min_i eta_i > (N - 3) b '
             '(margin %0.4f)' % margin)
    bounds = CurvatureBounds.uniform(cfg.zeta_min, cfg.zeta_off)
    players = list()
    for i in range(cfg.n_players):
        problem = None
        if cfg.recourse:
            problem = CapacityRecourse(cfg.d_low, cfg.d_high, cfg.h_low,
                                       cfg.h_high)
        players.append(_capacity_player(cfg, i, problem))
    return GameSpec(players, cfg.mu, curvature=bounds, name='capacity')


GAMES = dict(portfolio=(PortfolioConfig, build_portfolio),
             capacity=(CapacityConfig, build_capacity))
