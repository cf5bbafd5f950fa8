"""
Flat Rayleigh block-fading MIMO channel: y = Hx + z.

Fading coefficients are CN(0, 1); noise entries are CN(0, phi^2) with
phi^2 = t * E_s * 10^(-SNR/10), which also makes phi^2 the per-entry noise
variance used by the improved QRD-MLD threshold.
"""

from dataclasses import dataclass, replace

import numpy as np

from ..exceptions import DimensionMismatch
from ..linalg import ComplexMatrix, ComplexVector, as_complex_vector, qr_decompose

DEFAULT_BLOCK_LENGTH = 100


@dataclass(frozen=True, eq=False)
class ChannelInstance:
    """Channel matrix with its QR factors, valid for block_remaining more signals"""
    H: ComplexMatrix
    Q: ComplexMatrix
    R: ComplexMatrix
    block_remaining: int = DEFAULT_BLOCK_LENGTH

    @property
    def t(self) -> int:
        return int(self.H.shape[1])

    @property
    def r(self) -> int:
        return int(self.H.shape[0])

    def consume(self) -> "ChannelInstance":
        """The same channel with one signal fewer left in the block"""
        return replace(self, block_remaining=max(self.block_remaining - 1, 0))


@dataclass(frozen=True)
class NoiseModel:
    """Noise variance phi^2 derived from SNR, transmit antennas and symbol energy"""
    variance: float
    snr_db: float
    t: int
    Es: float

    @classmethod
    def from_snr(cls, snr_db: float, t: int, Es: float) -> "NoiseModel":
        return cls(variance=noise_variance(snr_db, t, Es), snr_db=float(snr_db), t=int(t), Es=float(Es))


def complex_gaussian(rng: np.random.Generator, shape, variance: float = 1.0) -> np.ndarray:
    """Circularly symmetric CN(0, variance) samples"""
    scale = np.sqrt(variance / 2.0)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def draw_channel(rng: np.random.Generator, t: int, r: int, block_length: int = DEFAULT_BLOCK_LENGTH) -> ChannelInstance:
    """
    Draw an r x t CN(0, 1) channel and factorise it.

    Raises:
        DimensionMismatch: if r < t
        RankDeficient: if the draw is numerically singular; callers redraw
    """
    if t < 1 or r < t:
        raise DimensionMismatch(f"Need r >= t >= 1, got t={t}, r={r}")
    H = complex_gaussian(rng, (r, t))
    Q, R = qr_decompose(H)
    return ChannelInstance(H=H, Q=Q, R=R, block_remaining=int(block_length))


def noise_variance(snr_db: float, t: int, Es: float) -> float:
    """phi^2 = t * E_s * 10^(-SNR/10)"""
    if Es <= 0 or t < 1:
        raise ValueError(f"Need Es > 0 and t >= 1, got Es={Es}, t={t}")
    return t * Es * 10.0 ** (-snr_db / 10.0)


def draw_noise(rng: np.random.Generator, r: int, variance: float) -> ComplexVector:
    """Length-r AWGN vector with per-entry variance phi^2"""
    if variance <= 0:
        raise ValueError(f"Noise variance must be positive, got {variance}")
    return complex_gaussian(rng, (int(r),), variance)


def transmit(channel, x, z) -> ComplexVector:
    """y = Hx + z; channel simulation is not metered"""
    H = channel.H if isinstance(channel, ChannelInstance) else np.asarray(channel, dtype=np.complex128)
    x = as_complex_vector(x)
    z = as_complex_vector(z)
    if H.shape[1] != x.shape[0] or H.shape[0] != z.shape[0]:
        raise DimensionMismatch(f"H is {H.shape[0]}x{H.shape[1]}, x has {x.shape[0]} entries, z has {z.shape[0]}")
    return H @ x + z


def measure_snr_db(received_signal: np.ndarray, noise: np.ndarray) -> float:
    """Receive-side SNR: mean |Hx|^2 per receive entry over mean |z|^2"""
    signal_power = float(np.mean(np.abs(received_signal) ** 2))
    noise_power = float(np.mean(np.abs(noise) ** 2))
    return 10.0 * np.log10(signal_power / noise_power)
