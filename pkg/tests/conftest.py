import numpy as np
import pytest

from mixcomm import (
    ChannelMatrix,
    FeasibleBox,
    GaussianNoise,
    IdentityArray,
    RngStream,
    SystemDescription,
    default_system,
)


@pytest.fixture(scope="session")
def table1_sin():
    """Default two-sensor setup with additive Gaussian noise everywhere."""
    return default_system("SIN")


@pytest.fixture(scope="session")
def table1_sdcn():
    """Default setup with sqrt-scaled channel noise."""
    return default_system("SDCN")


@pytest.fixture
def rng():
    return RngStream(0xC0FFEE, 0)


def make_identity_system(s=2, tx_cov=0.0, ch_cov=0.0, rx_cov=0.0, h=None, box_hi=10.0):
    """Transparent-sensor system with scalar-times-I covariances."""
    eye = np.eye(s)
    return SystemDescription(
        s=s,
        r=s,
        channel=ChannelMatrix(np.full(s, 1.0 if h is None else h)),
        tx_noise=GaussianNoise(np.zeros(s), tx_cov * eye),
        ch_noise=GaussianNoise(np.zeros(s), ch_cov * eye),
        rx_noise=GaussianNoise(np.zeros(s), rx_cov * eye),
        sensor=IdentityArray(),
        feasible=FeasibleBox(np.zeros(s), np.full(s, box_hi)),
    )
