"""ris-sizer: scenario-aware sizing simulator for reconfigurable panels."""

__version__ = "0.1.0"

from .catalog import (  # noqa: F401
    ScenarioRealization,
    UseCase,
    builtin_usecases,
    enumerate_realizations,
    get_usecase,
    load_usecase,
)
from .engine import (  # noqa: F401
    Criterion,
    Histogram,
    KpiPool,
    SizingResult,
    estimate_pdf,
    evaluate_realization,
    mean_power_db,
    mean_snr_db,
    min_ris_size,
    outage_probability,
    run_sweep,
)
from .geometry import (  # noqa: F401
    ElementGrid,
    NodeLayout,
    ScenarioGeometryInput,
    Vec3,
    element_positions,
    is_illuminated,
    path_metrics,
    place_nodes,
)
from .link import NoiseParams, SnrSample, noise_power, snr  # noqa: F401
from .scattering import (  # noqa: F401
    CONTINUOUS,
    ElementResponse,
    NarrowbandReport,
    PhasePlan,
    RadioParams,
    RisPanel,
    continuous_phase_plan,
    element_response,
    narrowband_validity,
    quantize_phases,
    received_power,
)
