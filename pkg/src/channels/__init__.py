"""Quantum channels and their noise coefficients"""
from .analysis import contraction_estimate, haar_twirl, noise_coefficients
from .channel import Channel, ChannelError, NoiseCoefficients, apply, apply_adjoint, tensor, tensor_power
from .library import (
    LindbladSpec,
    amplitude_damping,
    depolarizing,
    identity_channel,
    lindblad_channel,
    pauli_channel,
    unitary_channel,
)

__all__ = [
    'Channel',
    'ChannelError',
    'NoiseCoefficients',
    'LindbladSpec',
    'apply',
    'apply_adjoint',
    'tensor',
    'tensor_power',
    'amplitude_damping',
    'depolarizing',
    'identity_channel',
    'lindblad_channel',
    'pauli_channel',
    'unitary_channel',
    'noise_coefficients',
    'haar_twirl',
    'contraction_estimate',
]
