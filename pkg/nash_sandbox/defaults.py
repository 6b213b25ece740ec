# License: BSD (3-clause)

from copy import deepcopy

DEFAULTS = dict(
    sa=dict(
        step_ceiling=10 ** 7,
        noise_chunk=4096,
    ),
    simplex=dict(
        tol=1e-9,
        max_pivots=10 ** 5,
    ),
    qp=dict(
        tol=1e-8,
        max_changes=10 ** 4,
    ),
    power=dict(
        tol=1e-12,
        max_iter=10 ** 5,
    ),
    equilibrium=dict(
        tol=1e-12,
        max_iter=10 ** 5,
        inner_max_iter=10 ** 5,
        agreement_tol=1e-8,
        n_nodes=64,
    ),
    portfolio=dict(
        n_players=6,
        nu=[0.5, 0.35, 0.4, 0.3],
        risk=[0.16, 0.1, 0.12, 0.09],
        phi_low=0.12,
        phi_high=0.18,
        rho_base=3.,
        rho=None,
        cap=0.5,
        x0=0.,
        mu=2.,
    ),
    capacity=dict(
        n_players=5,
        mu=1.,
        a=2.,
        b=0.5,
        cap_base=0.3,
        cap_scale=0.1,
        caps=None,
        eta=None,
        d_low=0.3,
        d_high=0.4,
        h_low=0.45,
        h_high=0.55,
        recourse=True,
    ),
    scheme=dict(
        kind='synchronous',
        max_iter=40,
        n_trajectories=50,
        seed=0,
        p=None,
        rates=None,
        b1=1,
        b2=0,
        delay='uniform',
        update_prob=0.5,
        update_sets=None,
    ),
    schedule=dict(
        variant='synchronous',
        eta=None,
        kappa=2.,
        rate=2.,
        exponent=2,
        count=None,
        unit_q=False,
    ),
    experiment=dict(
        target=2.5e-3,
        n_eps=12,
        audit=True,
        force=False,
        bound_k=40,
        delta=None,
        confidence=None,
        eps=None,
        sg_rounds=2000,
    ),
)


def _handle_default(k, v=None):
    """Helper to avoid dicts as default keyword arguments

    Use this function instead to resolve default dict values. Example usage::

        sa_params = _handle_default('sa', sa_params)

    """
    this_mapping = deepcopy(DEFAULTS[k])
    if v is not None:
        if isinstance(v, dict):
            unknown = set(v) - set(this_mapping)
            if len(unknown) > 0:
                raise ValueError('Unknown %s parameters: %s'
                                 % (k, sorted(unknown)))
            this_mapping.update(v)
        else:
            for key in this_mapping.keys():
                this_mapping[key] = v
    return this_mapping
