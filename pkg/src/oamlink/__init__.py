"""Link-level simulator for misaligned multi-mode OAM broadband links
between uniform circular arrays, with analog and digital receive-side
beam steering."""

__version__ = "0.1.0"

from .geometry import LinkPose, ObliqueFactors, UcaConfig, oblique_factors
from .channel import (
    ChannelMatrix,
    ChannelParams,
    OfdmGrid,
    SPEED_OF_LIGHT,
    approx_channel_at,
    build_channel_approx,
    build_channel_exact,
    exact_channel_at,
    exact_channel_tensor,
    freespace_coefficient,
)
from .oam import ModeSet, OamChannel, default_mode_set, effective_oam_channel, make_fourier
from .steering import (
    SteeringWeights,
    abs_weights,
    dbs_weights,
    dbs_weights_at,
    default_anchor,
    steered_oam_channel,
)
from .metrics import (
    GainImi,
    MonteCarloSpec,
    PowerAllocation,
    channel_gain_and_imi,
    monte_carlo_link,
    sinr,
    sir_large_n,
    spectral_efficiency,
)
from .experiments import (
    ResultSet,
    Scenario,
    run_fig3,
    run_fig4,
    run_fig5,
    run_fig6,
    run_sweep,
    run_table2,
    run_table3,
    table1_scenario,
)

__all__ = [
    "__version__",
    "LinkPose",
    "ObliqueFactors",
    "UcaConfig",
    "oblique_factors",
    "ChannelMatrix",
    "ChannelParams",
    "OfdmGrid",
    "SPEED_OF_LIGHT",
    "approx_channel_at",
    "build_channel_approx",
    "build_channel_exact",
    "exact_channel_at",
    "exact_channel_tensor",
    "freespace_coefficient",
    "ModeSet",
    "OamChannel",
    "default_mode_set",
    "effective_oam_channel",
    "make_fourier",
    "SteeringWeights",
    "abs_weights",
    "dbs_weights",
    "dbs_weights_at",
    "default_anchor",
    "steered_oam_channel",
    "GainImi",
    "MonteCarloSpec",
    "PowerAllocation",
    "channel_gain_and_imi",
    "monte_carlo_link",
    "sinr",
    "sir_large_n",
    "spectral_efficiency",
    "ResultSet",
    "Scenario",
    "run_fig3",
    "run_fig4",
    "run_fig5",
    "run_fig6",
    "run_sweep",
    "run_table2",
    "run_table3",
    "table1_scenario",
]
