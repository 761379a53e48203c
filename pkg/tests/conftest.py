import math

import pytest

from foliation.growth import GrowthOracle, OracleKind, parse_oracle
from foliation.leaf_service import ConstructionParams, build_e2_leaf, build_h2_leaf

DELTA = 0.1


@pytest.fixture(scope="session")
def tower():
    return parse_oracle("tower")


@pytest.fixture(scope="session")
def default_params():
    return ConstructionParams()


@pytest.fixture(scope="session")
def h2_leaf(default_params, tower):
    """Default H² leaf: δ = ε = 0.1, tower oracle, n_max = 2."""
    return build_h2_leaf(default_params, tower)


@pytest.fixture(scope="session")
def horocycle_leaf():
    """No spikes: the leaf is the horocycle y = 1 through i."""
    oracle = GrowthOracle(OracleKind.TABLE, table=(-math.log(math.sin(DELTA)),))
    return build_h2_leaf(ConstructionParams(delta=DELTA, n_max=0), oracle)


@pytest.fixture(scope="session")
def e2_params():
    return ConstructionParams(delta=0.05, epsilon=0.1, K=10.0, n_max=3)


@pytest.fixture(scope="session")
def e2_leaf(e2_params, tower):
    return build_e2_leaf(e2_params, tower)
