"""Revival structure of hydrogenic Stark wave packets.

Simulation of coherent superpositions of first-order Stark levels: the four
characteristic time scales, commensurability arithmetic, autocorrelation
interferograms, and the fractional-revival decomposition into subsidiary
waves.
"""

from .core import (
    StarkLevel,
    TimeScales,
    classical_ratio,
    energy,
    enumerate_manifold,
    ionization_threshold,
    rationalize,
    revival_ratio,
    solve_field_for_classical_ratio,
    solve_field_for_revival_ratio,
    time_scales,
)
from .dynamics import (
    Interferogram,
    PeakReport,
    PhaseModel,
    autocorrelation,
    detect_peaks,
    exact_model,
    interferogram,
    node_analysis,
    taylor2_model,
)
from .errors import (
    AboveThresholdError,
    ConfigurationError,
    ConstructionError,
    DomainError,
    PeriodSearchError,
    StarkRevError,
)
from .packet import PacketSpec, WavePacket, build_packet, coefficient_histogram
from .revivals import (
    FractionalTime,
    RevivalDecomposition,
    SplitPacket,
    expansion_coefficients,
    fractional_time,
    half_revival_autocorrelation,
    minimal_periods,
    reconstruct_at_fraction,
    split_odd_even,
    theta_even,
    theta_odd,
)
from .units import (
    field_from_volts_per_cm,
    field_to_volts_per_cm,
    time_from_ps,
    time_to_ps,
)

__version__ = "0.1.0"
