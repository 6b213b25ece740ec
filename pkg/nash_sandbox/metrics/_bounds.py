"""Closed-form error envelopes and complexity bounds of the schemes"""

# License: BSD (3-clause)

import math

import numpy as np

from ..utils import _check_int, _check_positive, _check_unit_open

KINDS = ('synchronous', 'randomized', 'asynchronous', 'cyclic')


def domination_constant(c, q):
    """Constant D with ``z c ** z <= D q ** z`` for every ``z >= 0``

    Parameters
    ----------
    c : float
        Base in (0, 1).
    q : float
        Base in (c, 1).

    Returns
    -------
    D : float
        ``1 / (e ln(q / c))``, attained at ``z = 1 / ln(q / c)``.
    """
    c = _check_unit_open(c, 'c')
    q = _check_unit_open(q, 'q')
    if not c < q:
        raise ValueError('need c < q, got c=%s and q=%s' % (c, q))
    return 1. / (math.e * math.log(q / c))


def randomized_constants(p, a, eta):
    """Contraction and inexactness bases of the randomized scheme

    Parameters
    ----------
    p : array-like, shape (n_players,)
        Update probabilities in (0, 1].
    a : float
        ``||Gamma||_2``.
    eta : float
        Geometric base of the inexactness sequence.

    Returns
    -------
    constants : dict
        ``a_tilde = sqrt(1 - p_min (1 - a^2))``,
        ``eta_tilde = sqrt(1 - p_min (1 - eta^2))``,
        ``eta_tilde0 = (p_max (eta^-2 - 1) + 1) ** -1/2``, their ``ratio``
        ``(eta_tilde / eta_tilde0) ** 2 >= 1``, ``p_min`` and ``p_max``.
    """
    p = np.atleast_1d(np.asarray(p, dtype=float))
    if np.any(~((p > 0) & (p <= 1))):
        raise ValueError('p must be in (0, 1], got %s' % p)
    p_min, p_max = float(p.min()), float(p.max())
    a_tilde = math.sqrt(1. - p_min * (1. - a ** 2))
    eta_tilde = math.sqrt(1. - p_min * (1. - eta ** 2))
    eta_tilde0 = 1. / math.sqrt(p_max * (eta ** -2 - 1.) + 1.)
    return dict(a_tilde=a_tilde, eta_tilde=eta_tilde, eta_tilde0=eta_tilde0,
                ratio=(eta_tilde / eta_tilde0) ** 2, p_min=p_min,
                p_max=p_max)


class BoundInputs(object):
    """Quantities the theoretical bounds are evaluated with

    Parameters
    ----------
    eta : float
        Geometric base of the inexactness sequence, in (0, 1).
    n_players : int
        Number of players N.
    C : float
        Bound on the initial expected blockwise error.
    a : float | None
        ``||Gamma||_2``, needed by the synchronous and randomized bounds.
    a_inf : float | None
        ``||Gamma||_inf``, needed by the asynchronous and cyclic bounds.
    q_const : array-like | float
        Per-player SA constants Q_i.
    p : array-like | None
        Update probabilities of the randomized scheme.
    b1 : int
        Update window.
    b2 : int
        Delay bound.
    delta : float | None
        Exponent slack; when set, q follows the recipe that makes the
        complexity exponent equal to the optimal one plus ``delta``.
    q : float | None
        Explicit rate in (c, 1); the midpoint ``(c + 1) / 2`` when None.
    mu : float | None
        Proximal weight, kept for the audit trail.
    """

    def __init__(self, eta, n_players, C, a=None, a_inf=None, q_const=1.,
                 p=None, b1=1, b2=0, delta=None, q=None, mu=None):
        self.eta = _check_unit_open(eta, 'eta')
        self.n_players = _check_int(n_players, 'n_players', 1)
        self.C = _check_positive(C, 'C', strict=False)
        self.a = None if a is None else _check_positive(a, 'a')
        self.a_inf = None if a_inf is None else _check_positive(a_inf,
                                                                'a_inf')
        q_const = np.atleast_1d(np.asarray(q_const, dtype=float))
        if q_const.size == 1:
            q_const = np.full(self.n_players, q_const[0])
        if q_const.shape != (self.n_players,) or np.any(~(q_const > 0)):
            raise ValueError('q_const must hold %d positive values, got %s'
                             % (self.n_players, q_const))
        self.q_const = q_const
        self.p = None
        if p is not None:
            p = np.atleast_1d(np.asarray(p, dtype=float))
            if p.size == 1:
                p = np.full(self.n_players, p[0])
            self.p = p
        self.b1 = _check_int(b1, 'b1', 1)
        self.b2 = _check_int(b2, 'b2')
        self.delta = None if delta is None else _check_positive(delta,
                                                                'delta')
        self.q = None if q is None else _check_unit_open(q, 'q')
        self.mu = mu

    @classmethod
    def from_report(cls, report, eta, C, q_const=1., **kwargs):
        """Inputs with a and a_inf taken from a ContractionReport"""
        return cls(eta, report.bounds.n_players, C, a=report.a2,
                   a_inf=report.a_inf, q_const=q_const, mu=report.mu,
                   **kwargs)

    def to_dict(self):
        return dict(eta=self.eta, n_players=self.n_players, C=self.C,
                    a=self.a, a_inf=self.a_inf,
                    q_const=self.q_const.tolist(),
                    p=None if self.p is None else self.p.tolist(),
                    b1=self.b1, b2=self.b2, delta=self.delta, q=self.q,
                    mu=self.mu)


def _require(value, name, hypothesis):
    if value is None:
        raise ValueError('%s is required: %s' % (name, hypothesis))
    if not 0 < value < 1:
        raise ValueError('%s = %s violates %s' % (name, value, hypothesis))
    return value


def _pick_q(inputs, c):
    q = (c + 1.) / 2. if inputs.q is None else inputs.q
    if not c < q < 1:
        raise ValueError('q = %s must lie in (c, 1) with c = %s' % (q, c))
    return q


def _check_eta_equals(inputs, value, name):
    if abs(inputs.eta - value) > 1e-12:
        raise ValueError('the delta recipe needs eta = %s, got eta = %s '
                         'and %s = %s' % (name, inputs.eta, name, value))


def _complexity(lead, eps_bar, exponent, q):
    """Step bound ``lead eps_bar ** -exponent + ceil(ln eps_bar / ln q)``"""
    log_inv = math.log(1. / eps_bar)
    tail = max(0, int(math.ceil(log_inv / math.log(1. / q))))
    power = exponent * log_inv
    if power > 700:
        return math.inf
    return lead * math.exp(power) + tail


def _synchronous(inputs, eps, ks, confidence):
    a = _require(inputs.a, 'a', 'the two-norm condition ||Gamma||_2 < 1')
    eta, n = inputs.eta, inputs.n_players
    c = max(a, eta)
    if inputs.delta is not None:
        _check_eta_equals(inputs, a, 'a')
        delta = inputs.delta
        delta0 = delta * math.log(1. / a) / (1. + delta / 2.)
        q = c * math.exp(delta0 / 2.)
    else:
        q = _pick_q(inputs, c)
    D = domination_constant(c, q)
    scale = math.sqrt(n) * (inputs.C + D)
    exponent = math.log(1. / eta ** 2) / math.log(1. / q)
    out = dict(constants=dict(c=c, q=q, D=D, scale=scale),
               exponent=exponent, norm='u_k',
               envelope=(scale * q ** ks).tolist())
    lead = inputs.q_const / (eta ** 4 * math.log(1. / eta ** 2))
    if eps is not None:
        out['complexity'] = [_complexity(l_i, eps / scale, exponent, q)
                             for l_i in lead]
        if confidence is not None:
            out['high_probability'] = [
                _complexity(l_i, eps * confidence / scale, exponent, q)
                for l_i in lead]
        if eta > a:
            # geometric rate eta and exponent 2 when eta is above a
            scale_cor = math.sqrt(n) * (inputs.C + eta / (eta - a))
            out['complexity_eta'] = [
                _complexity(l_i, eps / scale_cor, 2., eta) for l_i in lead]
    return out


def _randomized(inputs, eps, ks, confidence):
    a = _require(inputs.a, 'a', 'the two-norm condition ||Gamma||_2 < 1')
    if inputs.p is None:
        raise ValueError('the randomized bounds need update probabilities p')
    eta, n, p = inputs.eta, inputs.n_players, inputs.p
    cons = randomized_constants(p, a, eta)
    a_t, eta_t, eta_t0 = cons['a_tilde'], cons['eta_tilde'], \
        cons['eta_tilde0']
    c = max(a_t, eta_t)
    if inputs.delta is not None:
        _check_eta_equals(inputs, a, 'a')
        delta = inputs.delta
        ratio = math.log(1. / eta_t0) / math.log(1. / eta_t)
        delta0 = delta * math.log(1. / eta_t) / (ratio + delta / 2.)
        q = eta_t * math.exp(delta0 / 2.)
    else:
        q = _pick_q(inputs, c)
    D = domination_constant(c, q)
    C_t = inputs.C * math.sqrt(np.sum(1. / (n * p)))
    D_t = D * eta / eta_t
    scale_p = math.sqrt(n) * (C_t + D_t)
    scale_u = math.sqrt(n * cons['p_max']) * (C_t + D_t)
    exponent = math.log(1. / eta_t0 ** 2) / math.log(1. / q)
    cons.update(c=c, q=q, D=D, C_tilde=C_t, D_tilde=D_t, scale=scale_u,
                scale_p=scale_p)
    out = dict(constants=cons, exponent=exponent, norm='u_k',
               envelope=(scale_u * q ** ks).tolist(),
               envelope_p=(scale_p * q ** ks).tolist())
    if eps is not None:
        lead = p * inputs.q_const / (eta ** 2 * eta_t0 ** 2 *
                                     math.log(1. / eta_t0 ** 2))
        out['complexity'] = [_complexity(l_i, eps / scale_u, exponent, q)
                             for l_i in lead]
        if confidence is not None:
            out['high_probability'] = [
                _complexity(l_i, eps * confidence / scale_u, exponent, q)
                for l_i in lead]
    return out


def _delayed(inputs, eps, ks, cyclic):
    a_inf = _require(inputs.a_inf, 'a_inf',
                     'the infinity-norm condition ||Gamma||_inf < 1')
    eta, n = inputs.eta, inputs.n_players
    b1 = n if cyclic else inputs.b1
    n0 = int(math.ceil(inputs.b2 / float(b1)))
    rho = max(a_inf, eta) ** (1. / (n0 + 1))
    c = rho ** (1. / b1)
    if inputs.delta is not None:
        _check_eta_equals(inputs, a_inf, 'a_inf')
        delta = inputs.delta
        if cyclic:
            delta0 = delta * math.log(1. / eta) / (1. + n0 + delta / 2.)
            q = c * math.exp(delta0 / (2. * n * (1 + n0)))
        else:
            n_prime = b1 * (1 + n0)
            delta0 = delta * math.log(1. / eta) / (n_prime + delta / 2.)
            q = c * math.exp(delta0 / (2. * n_prime))
    else:
        q = _pick_q(inputs, c)
    D = domination_constant(c, q)
    lift = rho ** (-(b1 - 1.) / b1)
    constants = dict(n0=n0, rho=rho, c=c, q=q, D=D, b1=b1,
                     scale=lift * (inputs.C + D))
    if not cyclic:
        constants['n_prime'] = b1 * (1 + n0)
    out = dict(constants=constants, norm='inf',
               envelope=(lift * (inputs.C + D) * q ** ks).tolist(),
               envelope_window=((inputs.C + ks) *
                                rho ** np.floor(ks / float(b1))).tolist())
    eps_hat = None if eps is None else eps / (lift * (inputs.C + D))
    if cyclic:
        eta_t = eta ** (1. / n)
        out['exponent'] = math.log(1. / eta_t ** 2) / math.log(1. / q)
        lead = inputs.q_const / (eta_t ** 2 * eta ** 2 *
                                 math.log(1. / eta_t ** 2))
    else:
        out['exponent'] = math.log(1. / eta ** 2) / math.log(1. / q)
        lead = inputs.q_const / (eta ** 4 * math.log(1. / eta ** 2))
    if eps is not None:
        out['complexity'] = [_complexity(l_i, eps_hat, out['exponent'], q)
                             for l_i in lead]
    return out


def theoretical_bounds(inputs, kind, eps=None, n_iter=40, confidence=None):
    """Evaluate the error envelope and complexity bound of a scheme

    Parameters
    ----------
    inputs : instance of BoundInputs
        The constants.
    kind : str
        ``'synchronous'``, ``'randomized'``, ``'asynchronous'`` or
        ``'cyclic'``.
    eps : float | None
        Target accuracy of the complexity bound; skipped when None.
    n_iter : int
        The envelope is evaluated for ``k = 0, ..., n_iter``.
    confidence : float | None
        For the synchronous and randomized schemes, also evaluate the
        bound reaching accuracy ``eps`` with probability at least
        ``1 - confidence``, which is the bound at ``eps * confidence``.

    Returns
    -------
    bounds : dict
        ``constants`` (c, q, D and the scheme-specific ones), ``exponent``
        of ``1 / eps`` in the complexity bound, ``norm`` of the envelope
        (``'u_k'`` or ``'inf'`` for the max over players), ``envelope``,
        and per-player ``complexity`` when ``eps`` is given. Synchronous
        runs with ``eta > a`` add ``complexity_eta``; randomized runs add
        ``envelope_p`` in the weighted norm; delayed runs add
        ``envelope_window``, the ``(C + k) rho ** floor(k / B1)`` bound.

    Raises
    ------
    ValueError
        When an input violates the hypothesis of the bound.
    """
    if kind == 'poisson':
        kind = 'randomized'
    if kind not in KINDS:
        raise ValueError('kind must be one of %s, got %r' % (KINDS, kind))
    if eps is not None:
        eps = _check_positive(eps, 'eps')
    if confidence is not None:
        confidence = _check_unit_open(confidence, 'confidence')
    ks = np.arange(_check_int(n_iter, 'n_iter') + 1, dtype=float)
    if kind == 'synchronous':
        out = _synchronous(inputs, eps, ks, confidence)
    elif kind == 'randomized':
        out = _randomized(inputs, eps, ks, confidence)
    else:
        out = _delayed(inputs, eps, ks, kind == 'cyclic')
    out.update(kind=kind, eps=eps, inputs=inputs.to_dict())
    return out


def synchronous_recursion(u, a, alphas, n_players):
    """Right-hand side of ``u_{k+1} <= a u_k + sqrt(N) alpha_max_k``

    Parameters
    ----------
    u : array, shape (n_iter + 1,)
        Mean stacked errors.
    a : float
        ``||Gamma||_2``.
    alphas : array, shape (n_iter,) or (n_iter, n_players)
        Inexactness levels, reduced by max over players when 2-D.
    n_players : int
        Number of players.

    Returns
    -------
    rhs : array, shape (n_iter,)
        The bound on ``u[1:]``.
    """
    u = np.asarray(u, dtype=float)
    alphas = np.asarray(alphas, dtype=float)
    if alphas.ndim == 2:
        alphas = alphas.max(axis=1)
    return a * u[:-1] + math.sqrt(n_players) * alphas[:len(u) - 1]


def randomized_recursion(w, a_tilde, eta, eta_tilde, n_players):
    """Right-hand side of the weighted-norm recursion

    ``E||x_{k+1} - x*||_P <= a_tilde E||x_k - x*||_P
    + sqrt(N) eta eta_tilde ** k``.
    """
    w = np.asarray(w, dtype=float)
    ks = np.arange(len(w) - 1)
    return a_tilde * w[:-1] + math.sqrt(n_players) * eta * eta_tilde ** ks


def bound_dominance_report(empirical, envelope, ks=None, se=None,
                           n_sigma=3.):
    """Compare an empirical error series with a theoretical envelope

    Parameters
    ----------
    empirical : array, shape (n_iter + 1,)
        Empirical means, e.g. u_k.
    envelope : array
        Theoretical values, at least as long as ``empirical``.
    ks : list of int | None
        Iterations to report, all when None.
    se : array | None
        Standard errors of ``empirical``; the comparison then allows
        ``n_sigma`` of them.
    n_sigma : float
        Monte-Carlo allowance.

    Returns
    -------
    report : dict
        ``rows`` of ``(k, empirical, theoretical, ok)``, ``violations``
        (the flagged k) and ``dominated``.
    """
    empirical = np.asarray(empirical, dtype=float)
    envelope = np.asarray(envelope, dtype=float)
    if len(envelope) < len(empirical):
        raise ValueError('envelope has %d values for %d iterations'
                         % (len(envelope), len(empirical)))
    allowance = np.zeros(len(empirical)) if se is None else \
        n_sigma * np.asarray(se, dtype=float)
    ks = range(len(empirical)) if ks is None else ks
    rows, violations = list(), list()
    for k in ks:
        ok = bool(empirical[k] - allowance[k] <= envelope[k])
        rows.append(dict(k=int(k), empirical=float(empirical[k]),
                         theoretical=float(envelope[k]), ok=ok))
        if not ok:
            violations.append(int(k))
    return dict(rows=rows, violations=violations,
                dominated=len(violations) == 0)
