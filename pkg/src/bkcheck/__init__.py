"""Exact checks of BK-type inequalities on {0,1}^n."""

__version__ = "0.1.0"

from .box import box, box_general, box_increasing  # noqa: E402
from .cube import (  # noqa: E402
    Config,
    Event,
    IndexSet,
    bar_event,
    cylinder_subset,
    enumerate_monotone_events,
    flip,
    is_increasing,
    minimal_elements,
    up_closure,
)
from .measures import (  # noqa: E402
    Measure,
    MixingVariable,
    Permutation,
    hat_measure,
    hat_measure_perm,
    k_out_of_n_measure,
    measure_of,
    mixture_measure,
    product_measure,
    project,
    sample_weighted_k,
    tensor,
    weighted_k_out_of_n_measure,
)
