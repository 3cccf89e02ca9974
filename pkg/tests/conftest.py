import numpy as np
import pytest

from ris_sizer.catalog import UseCase
from ris_sizer.geometry import ScenarioGeometryInput


@pytest.fixture
def outdoor_template() -> ScenarioGeometryInput:
    """Reference macro scene: elevated BS 1.2 km out, panel at 80 m, street UE."""
    return ScenarioGeometryInput(
        h_bs=122.0, h_ris=80.0, h_ue=2.0, d_bs_ris=1200.0, d_ris_ue=200.0
    )


def singleton_usecase(
    h_bs=122.0,
    h_ris=80.0,
    h_ue=2.0,
    d_bs_ris=1200.0,
    d_ris_ue=200.0,
    p_t_dbm=43.0,
    f_c_mhz=3500.0,
    b_ue_khz=15.0,
    bearings=(0.0,),
    uc_id=100,
    **overrides,
):
    """One-realization-per-bearing use case for pipeline-equality tests."""
    return UseCase(
        id=uc_id,
        name="probe",
        p_t_dbm=p_t_dbm,
        f_c_mhz=f_c_mhz,
        b_ue_khz=b_ue_khz,
        h_bs_set=(h_bs,),
        h_ris_set=(h_ris,),
        h_ue_set=(h_ue,),
        d_bs_ris_set=(d_bs_ris,),
        d_ris_ue_set=(d_ris_ue,),
        bearings_deg=None if bearings is None else tuple(float(b) for b in bearings),
        **overrides,
    )


def random_scene(rng: np.random.Generator):
    """Random illuminated bistatic scene for property tests."""
    return ScenarioGeometryInput(
        h_bs=float(rng.uniform(2.0, 80.0)),
        h_ris=float(rng.uniform(1.0, 60.0)),
        h_ue=float(rng.uniform(0.5, 20.0)),
        d_bs_ris=float(rng.uniform(5.0, 600.0)),
        d_ris_ue=float(rng.uniform(3.0, 300.0)),
        bearing_bs_deg=float(rng.uniform(-75.0, 75.0)),
        bearing_ue_deg=float(rng.uniform(-75.0, 75.0)),
    )
