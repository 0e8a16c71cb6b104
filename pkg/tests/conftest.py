import pytest

from wsnplan import (
    EconomicParams,
    Location,
    RadioModel,
    Scenario,
    lifetime_function_from_power,
)
from wsnplan.document import bundled_document_path
from wsnplan.scenario import RELAY, SENSOR, SINK

# gas-monitoring defaults used throughout: $10 nodes, 20 u$/J energy,
# $1000 labor per visit, 10% interest, 10-year horizon
DEFAULT_ECON_KWARGS = dict(
    node_cost=10.0,
    energy_cost_per_joule=2e-5,
    labor_cost_per_visit=1000.0,
    interest_rate=0.1,
    operational_lifetime_years=10.0,
    repair_cost=1000.0,
    failure_rate_per_hour=7.5e-7,
    max_visits=30,
)


def make_econ(**overrides) -> EconomicParams:
    kwargs = dict(DEFAULT_ECON_KWARGS)
    kwargs.update(overrides)
    return EconomicParams.create(**kwargs)


def make_lifetime_function(econ=None, power_watts=6.2, node_count=150):
    return lifetime_function_from_power(econ or make_econ(), power_watts, node_count)


# radio with a wide current range so multi-hop routes can beat long direct
# links; the realistic table's currents are too flat for that. Six levels
# keep the maximum range near 73 m so random test graphs stay sparse.
STEEP_TX_TABLE = tuple(
    (1e-5 * 4.0**i, 0.001 * 3.0**i) for i in range(6)
)


def make_steep_radio() -> RadioModel:
    return RadioModel(
        supply_voltage_v=3.0,
        bitrate_bps=250_000.0,
        rx_current_a=0.002,
        tx_power_table=STEEP_TX_TABLE,
        rx_sensitivity_w=7.943282347242822e-14,
        antenna_gain=1.5,
        wavelength_m=0.125,
        path_loss_exponent=4.0,
        near_field_distance_m=1.0,
    )


def make_iris_radio(tx_table=None) -> RadioModel:
    from wsnplan import default_tx_power_table

    return RadioModel(
        supply_voltage_v=3.0,
        bitrate_bps=250_000.0,
        rx_current_a=0.0155,
        tx_power_table=tx_table or default_tx_power_table(),
        rx_sensitivity_w=7.943282347242822e-14,
        antenna_gain=1.5,
        wavelength_m=0.125,
        path_loss_exponent=4.0,
        near_field_distance_m=1.0,
    )


def make_line_scenario(econ=None, radio=None) -> Scenario:
    """sensor -- relay -- sink in a line, direct link feasible but expensive."""
    return Scenario(
        locations=(
            Location(id="sink", kind=SINK, position=(0.0, 0.0)),
            Location(
                id="s0",
                kind=SENSOR,
                position=(40.0, 0.0),
                data_rate_bps=1.0,
                sense_energy_j_per_bit=0.1,
            ),
            Location(id="r0", kind=RELAY, position=(20.0, 0.0)),
        ),
        radio=radio or make_steep_radio(),
        econ=econ or make_econ(),
    )


@pytest.fixture
def default_econ() -> EconomicParams:
    return make_econ()


@pytest.fixture
def default_lf():
    return make_lifetime_function()


@pytest.fixture
def steep_radio() -> RadioModel:
    return make_steep_radio()


@pytest.fixture
def iris_radio() -> RadioModel:
    return make_iris_radio()


@pytest.fixture
def line_scenario() -> Scenario:
    return make_line_scenario()


@pytest.fixture
def default_document_path():
    return bundled_document_path("default_scenario.json")


@pytest.fixture
def demo_document_path():
    return bundled_document_path("topology_demo.json")
