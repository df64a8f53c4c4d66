"""Large-scale path loss, Rayleigh small-scale fading and channel composition.

Fading coefficients are unit-variance CN(0, 1); path loss is applied as an
amplitude factor when channels are composed, so one realization can be
reused across path-loss settings.

Randomness is counter based: every trial owns a Philox stream keyed by
``(seed, trial_index)``, so a trial's draws never depend on which other
trials ran, or in what order.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

U64_MASK = (1 << 64) - 1

# Stream purposes, stored in the top word of the Philox counter so that the
# sub-streams of one trial can never overlap.
PURPOSE_FADING = 0
PURPOSE_PHASES = 1


class NonpositiveDistance(ValueError):
    pass


class ZeroElements(ValueError):
    pass


class LengthMismatch(ValueError):
    pass


class InvalidLinkBudget(ValueError):
    pass


@dataclass(frozen=True)
class LinkBudget:
    p_tx_dbm: float = 20.0
    noise_dbm: float = -100.0
    c0_db: float = 30.0  # attenuation at d0, i.e. linear gain 10**(-c0_db/10)
    d0_m: float = 1.0
    alpha: float = 2.5
    blockage_db: float = 50.0

    def __post_init__(self) -> None:
        if not self.d0_m > 0:
            raise InvalidLinkBudget(f"d0_m must be positive, got {self.d0_m!r}")
        if not self.alpha > 0:
            raise InvalidLinkBudget(f"alpha must be positive, got {self.alpha!r}")
        if not self.c0_db >= 0:
            raise InvalidLinkBudget(f"c0_db must be nonnegative, got {self.c0_db!r}")
        if not self.blockage_db >= 0:
            raise InvalidLinkBudget(f"blockage_db must be nonnegative, got {self.blockage_db!r}")

    @property
    def p_tx_w(self) -> float:
        return dbm_to_watts(self.p_tx_dbm)

    @property
    def noise_w(self) -> float:
        return dbm_to_watts(self.noise_dbm)


@dataclass(frozen=True)
class RngStream:
    seed: int
    trial_index: int

    def generator(self, purpose: int = PURPOSE_FADING) -> np.random.Generator:
        return np.random.Generator(_philox(self.seed, self.trial_index, purpose))


@dataclass(frozen=True)
class ChannelRealization:
    """Small-scale coefficients of every link.

    Arrays may carry leading batch dimensions; the element axis is last.
    """

    h: NDArray[np.complex128]  # Tx -> RIS
    g_rx: NDArray[np.complex128]  # RIS -> Rx
    g_eve: NDArray[np.complex128]  # RIS -> eavesdropper
    f_rx: NDArray[np.complex128]  # direct Tx -> Rx
    f_eve: NDArray[np.complex128]  # direct Tx -> eavesdropper

    @property
    def n_elements(self) -> int:
        return self.h.shape[-1]


def _philox(seed: int, trial_index: int, purpose: int) -> np.random.Philox:
    key = np.array([seed & U64_MASK, trial_index & U64_MASK], dtype=np.uint64)
    counter = np.array([0, 0, 0, purpose], dtype=np.uint64)
    return np.random.Philox(key=key, counter=counter)


def dbm_to_watts(x: float) -> float:
    return 10.0 ** ((x - 30.0) / 10.0)


def path_loss_linear(d, b: LinkBudget):
    """Linear power gain ``10**(-c0_db/10) * (d/d0)**(-alpha)``."""
    d_arr = np.asarray(d, dtype=float)
    if np.any(~(d_arr > 0)):
        raise NonpositiveDistance(f"distance must be positive, got {d!r}")
    gain = 10.0 ** (-b.c0_db / 10.0) * (d_arr / b.d0_m) ** (-b.alpha)
    return float(gain) if gain.ndim == 0 else gain


def _n_normals(n: int) -> int:
    # h, g_rx, g_eve (n each) plus f_rx, f_eve; two normals per coefficient
    return 2 * (3 * n + 2)


def _unpack(z: NDArray[np.float64], n: int) -> ChannelRealization:
    # z[..., 2k] is the real part and z[..., 2k+1] the imaginary part of
    # coefficient k; coefficients are ordered h, g_rx, g_eve, f_rx, f_eve.
    c = (z[..., 0::2] + 1j * z[..., 1::2]) / np.sqrt(2.0)
    return ChannelRealization(
        h=c[..., :n],
        g_rx=c[..., n : 2 * n],
        g_eve=c[..., 2 * n : 3 * n],
        f_rx=c[..., 3 * n],
        f_eve=c[..., 3 * n + 1],
    )


def sample_small_scale(stream: RngStream, n: int) -> ChannelRealization:
    """Draw one trial's fading coefficients, deterministic in the stream."""
    if n < 1:
        raise ZeroElements(f"number of RIS elements must be >= 1, got {n}")
    z = stream.generator(PURPOSE_FADING).standard_normal(_n_normals(n))
    return _unpack(z, n)


def sample_batch(seed: int, start: int, stop: int, n: int) -> ChannelRealization:
    """Realizations for trials ``start .. stop-1`` stacked along axis 0.

    Row ``t - start`` is bit-identical to
    ``sample_small_scale(RngStream(seed, t), n)``.
    """
    if n < 1:
        raise ZeroElements(f"number of RIS elements must be >= 1, got {n}")
    z = np.empty((stop - start, _n_normals(n)))
    # Re-keying one bit generator is much cheaper than building one per trial.
    bg = np.random.Philox(key=0)
    gen = np.random.Generator(bg)
    state = bg.state
    key = np.array([seed & U64_MASK, 0], dtype=np.uint64)
    counter = np.array([0, 0, 0, PURPOSE_FADING], dtype=np.uint64)
    state["state"] = {"counter": counter, "key": key}
    state["buffer_pos"] = 4
    state["has_uint32"] = 0
    for row, t in enumerate(range(start, stop)):
        key[1] = t & U64_MASK
        bg.state = state
        gen.standard_normal(out=z[row])
    return _unpack(z, n)


def cascaded_channel(h, g, phases, pl_hop1, pl_hop2):
    """``sqrt(pl_hop1 * pl_hop2) * sum_i h_i exp(j phi_i) g_i`` over the last axis."""
    h = np.asarray(h)
    g = np.asarray(g)
    phases = np.asarray(phases)
    if not (h.shape[-1:] == g.shape[-1:] == phases.shape[-1:]):
        raise LengthMismatch(
            f"h, g and phases must share the element axis, got {h.shape}, {g.shape}, {phases.shape}"
        )
    return np.sqrt(pl_hop1 * pl_hop2) * reflected_sum(h * np.exp(1j * phases), g)


def reflected_sum(h_reflected, g):
    """``sum_i h_i exp(j phi_i) g_i`` given the already reflected ``h_i exp(j phi_i)``."""
    return np.sum(h_reflected * g, axis=-1)


def direct_channel(f, pl, blockage_db: float):
    """Direct-link coefficient ``f * sqrt(pl * 10**(-blockage_db/10))``."""
    return f * np.sqrt(pl * 10.0 ** (-blockage_db / 10.0))
