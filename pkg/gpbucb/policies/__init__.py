from . import (
    _general,
    ucb,
    bucb,
    )
from ._general import (PolicyState,
                       ucb_scores,
                       confidence_interval)
from .ucb import (select_gp_ucb,
                  select_nrb,
                  select_ntb)
from .bucb import (select_gp_bucb,
                   select_gp_bucb_lazy,
                   select_uncertainty,
                   select_two_stage,
                   uncertainty_sampling_init,
                   t_init_size)


POLICIES = {
    'gp-ucb': select_gp_ucb,
    'gp-bucb': select_gp_bucb,
    'gp-bucb-lazy': select_gp_bucb_lazy,
    'nrb-ucb': select_nrb,
    'ntb-ucb': select_ntb,
    'gp-bucb-init': select_two_stage,
    }
