from .model import (
    DEFAULT_BLOCK_LENGTH,
    ChannelInstance,
    NoiseModel,
    complex_gaussian,
    draw_channel,
    draw_noise,
    measure_snr_db,
    noise_variance,
    transmit,
)

__all__ = [
    "DEFAULT_BLOCK_LENGTH",
    "ChannelInstance",
    "NoiseModel",
    "complex_gaussian",
    "draw_channel",
    "draw_noise",
    "measure_snr_db",
    "noise_variance",
    "transmit",
]
