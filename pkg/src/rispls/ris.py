"""RIS reflection-phase profiles.

All phases live in (-pi, pi]. A b-bit profile uses the grid
``k * 2*pi / 2**b`` with the half turn represented as +pi.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .channel import PURPOSE_PHASES, LengthMismatch, RngStream, ZeroElements

log = logging.getLogger(__name__)

MAX_BITS = 8


class InvalidBitDepth(ValueError):
    pass


@dataclass(frozen=True)
class RisPhaseProfile:
    phases: NDArray[np.float64]
    quantization_bits: int | None = None

    @property
    def n_elements(self) -> int:
        return self.phases.shape[-1]

    def reflection(self) -> NDArray[np.complex128]:
        """Unit-amplitude reflection coefficients."""
        return np.exp(1j * self.phases)


def wrap_phase(x):
    """Map angles into (-pi, pi]."""
    return np.pi - np.mod(np.pi - np.asarray(x, dtype=float), 2 * np.pi)


def optimal_phase_array(h, g_rx) -> NDArray[np.float64]:
    """``-arg(h_i g_i)`` elementwise; zero products get phase 0."""
    h = np.asarray(h)
    g_rx = np.asarray(g_rx)
    if h.shape != g_rx.shape:
        raise LengthMismatch(f"h and g_rx differ in shape: {h.shape} vs {g_rx.shape}")
    prod = h * g_rx
    phases = wrap_phase(-np.angle(prod))
    zero = prod == 0
    if np.any(zero):
        log.warning("%d zero cascade products; their phases are set to 0", int(np.count_nonzero(zero)))
        phases = np.where(zero, 0.0, phases)
    return phases


def optimal_phases(h, g_rx) -> RisPhaseProfile:
    """Phases that co-phase every reflected path at the legitimate receiver."""
    return RisPhaseProfile(optimal_phase_array(h, g_rx))


def check_bits(b: int) -> None:
    if isinstance(b, bool) or not isinstance(b, (int, np.integer)) or not 1 <= b <= MAX_BITS:
        raise InvalidBitDepth(f"quantization bits must be an integer in [1, {MAX_BITS}], got {b!r}")


def quantize_phase_array(phases, b: int) -> NDArray[np.float64]:
    """Snap each phase to the nearest b-bit grid point (circular distance).

    Exact midpoints go to the grid point with the smaller value in (-pi, pi].
    """
    check_bits(b)
    levels = 1 << b
    half = levels // 2
    step = 2 * np.pi / levels
    r = np.asarray(phases, dtype=float) / step
    lo = np.floor(r)
    frac = r - lo
    k_lo = half - np.mod(half - lo, levels)
    k_hi = half - np.mod(half - (lo + 1), levels)
    pick_hi = (frac > 0.5) | ((frac == 0.5) & (k_hi < k_lo))
    k = np.where(pick_hi, k_hi, k_lo)
    return k * step


def quantize_phases(p: RisPhaseProfile, b: int) -> RisPhaseProfile:
    return RisPhaseProfile(quantize_phase_array(p.phases, b), quantization_bits=int(b))


def random_phases(stream: RngStream, n: int) -> RisPhaseProfile:
    """I.i.d. uniform phases on (-pi, pi]; a baseline with no CSI."""
    if n < 1:
        raise ZeroElements(f"number of RIS elements must be >= 1, got {n}")
    u = stream.generator(PURPOSE_PHASES).uniform(0.0, 2 * np.pi, size=n)
    return RisPhaseProfile(np.pi - u)
