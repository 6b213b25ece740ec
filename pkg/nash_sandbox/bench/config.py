"""Experiment configuration files"""

# License: BSD (3-clause)

import os
import os.path as op
from copy import deepcopy

import numpy as np

from ..defaults import _handle_default
from ..sa import InnerSchedule, VARIANTS, game_q_constants
from ..schemes import SchemeConfig
from .games import GAMES

CONFIG_DIR = op.join(op.dirname(__file__), 'configs')
_SECTIONS = ('scheme', 'schedule', 'experiment')
_KEYS = ('name', 'game', 'game_params', 'out') + _SECTIONS
_SCHEME_EXTRA = ('x0', 'mu_sg')
# game parameters recomputed from others when left unset
_DERIVED = dict(portfolio=dict(rho=('rho_base', 'n_players')),
                capacity=dict(caps=('n_players', 'cap_base', 'cap_scale'),
                              eta=('n_players', 'b')))


def _plain(value):
    """Numpy scalars and arrays as YAML-friendly builtins"""
    if isinstance(value, dict):
        return dict((k, _plain(v)) for k, v in value.items())
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, np.generic):
        return value.item()
    return value


class ExperimentConfig(object):
    """A complete, validated description of one experiment

    Parameters
    ----------
    game : str
        ``'portfolio'`` or ``'capacity'``.
    game_params : dict | None
        Overrides of ``DEFAULTS[game]``.
    scheme : dict | None
        Overrides of ``DEFAULTS['scheme']`` plus ``x0`` and ``mu_sg``.
    schedule : dict | None
        Overrides of ``DEFAULTS['schedule']``. When ``eta`` is None it is
        ``a ** (kappa / 2)`` with ``a = ||Gamma||_2``, or ``||Gamma||_inf``
        for the asynchronous and cyclic schemes (``kappa = 2`` gives
        ``eta = a``). ``unit_q`` replaces the per-player Q constants by 1.
    experiment : dict | None
        Overrides of ``DEFAULTS['experiment']``.
    name : str | None
        Label of the experiment, the game name when None.
    out : str
        Output directory.

    Notes
    -----
    Unknown keys raise ``ValueError`` at every level, and
    ``ExperimentConfig.from_dict(cfg.to_dict())`` reproduces ``cfg``.
    """

    def __init__(self, game='portfolio', game_params=None, scheme=None,
                 schedule=None, experiment=None, name=None, out='results'):
        if game not in GAMES:
            raise ValueError('game must be one of %s, got %r'
                             % (sorted(GAMES), game))
        self.game = game
        # validates the game parameters
        game_cls = GAMES[game][0]
        self.game_params = game_cls(**dict(game_params or {})).to_dict()
        scheme = dict(scheme or {})
        extra = dict((key, scheme.pop(key, None)) for key in _SCHEME_EXTRA)
        self.scheme = _handle_default('scheme', scheme)
        self.scheme.update(extra)
        self.scheme_config()
        self.schedule = _handle_default('schedule', schedule)
        if self.schedule['variant'] not in VARIANTS:
            raise ValueError('schedule variant must be one of %s, got %r'
                             % (VARIANTS, self.schedule['variant']))
        self.experiment = _handle_default('experiment', experiment)
        self.name = game if name is None else str(name)
        self.out = str(out)

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict):
            raise ValueError('an experiment configuration must be a mapping, '
                             'got %s' % type(data).__name__)
        unknown = set(data) - set(_KEYS)
        if len(unknown) > 0:
            raise ValueError('Unknown configuration keys: %s'
                             % sorted(unknown))
        return cls(**data)

    @classmethod
    def from_yaml(cls, fname):
        """Load a configuration file, a path or a shipped config name"""
        import yaml
        if not op.isfile(fname):
            shipped = op.join(CONFIG_DIR, '%s.yaml' % fname)
            if not op.isfile(shipped):
                raise ValueError('No configuration file %s and no shipped '
                                 'config of that name (available: %s)'
                                 % (fname, ', '.join(shipped_configs())))
            fname = shipped
        with open(fname, 'r') as fid:
            data = yaml.safe_load(fid)
        return cls.from_dict(data or {})

    def to_dict(self):
        return _plain(dict(name=self.name, game=self.game,
                           game_params=deepcopy(self.game_params),
                           scheme=deepcopy(self.scheme),
                           schedule=deepcopy(self.schedule),
                           experiment=deepcopy(self.experiment),
                           out=self.out))

    def to_yaml(self, fname=None):
        """Dump the resolved configuration, returned as text if no file"""
        import yaml
        text = yaml.safe_dump(self.to_dict(), default_flow_style=False,
                              sort_keys=True)
        if fname is None:
            return text
        with open(fname, 'w') as fid:
            fid.write(text)
        return fname

    def copy(self, **sections):
        """Copy with updated sections, e.g. ``scheme=dict(seed=3)``"""
        data = self.to_dict()
        for key, value in sections.items():
            if key not in _KEYS:
                raise ValueError('Unknown configuration key: %s' % key)
            if isinstance(value, dict) and isinstance(data.get(key), dict):
                data[key].update(value)
            else:
                data[key] = value
        # derived game parameters must follow their inputs again
        if 'game_params' in sections:
            data['game_params'] = self._free_params(sections['game_params'])
        return ExperimentConfig.from_dict(data)

    def _free_params(self, updates):
        params = dict(self.game_params)
        for key, inputs in _DERIVED[self.game].items():
            if key not in updates and any(k in updates for k in inputs):
                params[key] = None
        params.update(updates)
        return params

    @property
    def force(self):
        return bool(self.experiment['force'])

    def game_config(self):
        return GAMES[self.game][0](**self.game_params)

    def build_game(self, verbose=None):
        return GAMES[self.game][1](self.game_config(), verbose=verbose)

    def scheme_config(self):
        return SchemeConfig(**self.scheme)

    def build_schedule(self, game, report):
        """The inner schedule, with eta resolved from the report"""
        params = self.schedule
        eta = params['eta']
        if eta is None and params['variant'] not in ('fixed', 'polynomial'):
            if self.scheme['kind'] in ('asynchronous', 'cyclic'):
                base = report.a_inf
            else:
                base = report.a2
            eta = base ** (params['kappa'] / 2.)
        q_const = 1. if params['unit_q'] else game_q_constants(game)
        return InnerSchedule(params['variant'], eta=eta, q_const=q_const,
                             n_players=game.n_players,
                             exponent=params['exponent'],
                             count=params['count'], rate=params['rate'])

    def __repr__(self):
        return '<ExperimentConfig | %s, %s game, %s scheme>' % (
            self.name, self.game, self.scheme['kind'])


def shipped_configs():
    """Names of the configurations shipped with the package"""
    return sorted(op.splitext(f)[0] for f in os.listdir(CONFIG_DIR)
                  if f.endswith('.yaml'))
