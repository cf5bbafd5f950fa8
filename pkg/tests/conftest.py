"""Shared fixtures: seeded generators, constellations and random detection problems."""

from dataclasses import dataclass

import numpy as np
import pytest

from src.channel import draw_channel, draw_noise, noise_variance, transmit
from src.constellation import draw_indices, make_qam
from src.detectors import DetectionProblem
from src.linalg import OpCounters


@dataclass
class Instance:
    problem: DetectionProblem
    H: np.ndarray
    y: np.ndarray
    x_indices: tuple
    variance: float


def make_instance(t: int, order: int, snr_db: float, seed: int, r: int = None) -> Instance:
    """Random channel, symbol vector and noise; the rotation is charged to a throwaway counter"""
    r = r or t
    rng = np.random.default_rng(seed)
    constellation = make_qam(order)
    channel = draw_channel(rng, t, r)
    x_indices = draw_indices(constellation, rng, t)
    variance = noise_variance(snr_db, t, constellation.energy)
    y = transmit(channel, constellation.points[x_indices], draw_noise(rng, r, variance))
    problem = DetectionProblem.from_channel(channel.H, y, constellation, OpCounters())
    return Instance(problem, channel.H, y, tuple(int(v) for v in x_indices), variance)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def qpsk():
    return make_qam(4)


@pytest.fixture
def qam16():
    return make_qam(16)


@pytest.fixture
def instance_factory():
    return make_instance
