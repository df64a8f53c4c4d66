"""Instantaneous link quality and secrecy metrics.

Every function accepts scalars or numpy arrays and broadcasts.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class NonpositiveNoise(ValueError):
    pass


@dataclass(frozen=True)
class SecrecySample:
    gamma_rx: float
    gamma_eve: float
    c_s: float

    @classmethod
    def from_snrs(cls, gamma_rx: float, gamma_eve: float) -> "SecrecySample":
        return cls(float(gamma_rx), float(gamma_eve), float(secrecy_rate(gamma_rx, gamma_eve)))


def _check_noise(noise) -> None:
    if np.any(~(np.asarray(noise) > 0)):
        raise NonpositiveNoise(f"noise power must be positive, got {noise!r}")


def snr(h_eff, p_tx, noise):
    _check_noise(noise)
    return p_tx * np.abs(h_eff) ** 2 / noise


def sinr(h_sig, p_sig, h_jam, p_jam, noise):
    """Signal to interference-plus-noise ratio with a single jammer."""
    _check_noise(noise)
    return p_sig * np.abs(h_sig) ** 2 / (p_jam * np.abs(h_jam) ** 2 + noise)


def secrecy_rate(gamma_rx, gamma_eve):
    """``max(0, log2(1 + gamma_rx) - log2(1 + gamma_eve))`` in bits/s/Hz."""
    return np.maximum(0.0, np.log2(1.0 + np.asarray(gamma_rx)) - np.log2(1.0 + np.asarray(gamma_eve)))


def outage_indicator(c_s, r_th):
    """1 when the secrecy rate falls strictly below the target, else 0."""
    return (np.asarray(c_s) < r_th).astype(np.int64)
