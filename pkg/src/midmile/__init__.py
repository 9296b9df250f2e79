"""Channel allocation and LBT coexistence simulation for TV-white-space
middle-mile networks.

The public surface re-exports the pieces most users need; submodules hold
the rest (propagation, conflict, fcca, macsim, experiment, fileio, cli).
"""

from .conflict import build_interference_matrix, neighbor_set

# NB: the fcca() entry point itself stays namespaced (midmile.fcca.fcca) so
# the attribute `midmile.fcca` keeps pointing at the submodule.
from .fcca import FccaConfig, FccaOutcome, jfi, mdca, odrs_ca
from .kernel import HAVE_EXT, active_kernel_name
from .macsim import (
    MacConfig,
    analytic_clique_share,
    baseline_full_lbt,
    baseline_no_coexistence,
    evaluate,
)
from .model import (
    Allocation,
    ChannelPlan,
    InterferenceMatrix,
    RadioParams,
    SubAlgorithm,
    ThroughputReport,
    Topology,
    validate_topology,
)
from .propagation import (
    coverage_radius,
    hata_suburban_pl,
    hata_urban_pl,
    link_rate_bps,
    received_power,
    sinr_db,
)

__version__ = "0.1.0"

__all__ = [
    "Allocation",
    "ChannelPlan",
    "FccaConfig",
    "FccaOutcome",
    "HAVE_EXT",
    "InterferenceMatrix",
    "MacConfig",
    "RadioParams",
    "SubAlgorithm",
    "ThroughputReport",
    "Topology",
    "active_kernel_name",
    "analytic_clique_share",
    "baseline_full_lbt",
    "baseline_no_coexistence",
    "build_interference_matrix",
    "coverage_radius",
    "evaluate",
    "hata_suburban_pl",
    "hata_urban_pl",
    "jfi",
    "link_rate_bps",
    "mdca",
    "neighbor_set",
    "odrs_ca",
    "received_power",
    "sinr_db",
    "validate_topology",
    "__version__",
]
