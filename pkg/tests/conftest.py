import math

import numpy as np
import pytest

from rabicav import PhysicalParams

# Reference microwave-cavity parameter set used across the suite (angular
# units; q chosen so T_Rabi = pi/q_ph ~ 21.3 us).
Q_PH = 47e3 * math.pi
OMEGA = 2.0 * math.pi * 51.099e9
GAMMA = 83.912
GAMMA3_STRONG = 0.07 * Q_PH
GAMMA3_WEAK = 10.0


@pytest.fixture
def cavity_params():
    return PhysicalParams(omega=OMEGA, q_ph=Q_PH, gamma1_ph=GAMMA,
                          gamma2_ph=GAMMA, gamma3=GAMMA3_STRONG,
                          n_oscillators=100_000, varsigma=400.0)


@pytest.fixture
def weak_loss_params():
    return PhysicalParams(omega=OMEGA, q_ph=Q_PH, gamma1_ph=GAMMA,
                          gamma2_ph=GAMMA, gamma3=GAMMA3_WEAK,
                          n_oscillators=100_000, varsigma=400.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)


def rabi_grid(params, periods=4.0, points=2048):
    return np.linspace(0.0, periods * params.rabi_period, points)
