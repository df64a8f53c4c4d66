"""Planar node placement: Tx at the origin, Rx and eavesdropper on the x-axis,
RIS lifted off the axis by an elevation angle."""
from __future__ import annotations

import math
from dataclasses import dataclass


class InvalidTopology(ValueError):
    """Raised when a topology violates its placement constraints."""


@dataclass(frozen=True)
class Topology:
    """Placement parameters.

    ``d_tr`` is the RIS *horizontal* offset from the Tx; the RIS sits at
    ``(d_tr, d_tr * tan(theta))``, so the true Tx-RIS distance is
    ``d_tr / cos(theta)``.
    """

    d_tr: float
    d_te: float
    d_tl: float
    theta: float  # radians

    def __post_init__(self) -> None:
        self.validate()

    def validate(self) -> None:
        for name in ("d_tr", "d_te", "d_tl"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise InvalidTopology(f"{name} must be a positive finite distance, got {value!r}")
        if not (0.0 <= self.theta < math.pi / 2):
            raise InvalidTopology(f"theta must lie in [0, pi/2), got {self.theta!r}")


@dataclass(frozen=True)
class NodePositions:
    tx: tuple[float, float]
    ris: tuple[float, float]
    rx: tuple[float, float]
    eve: tuple[float, float]


@dataclass(frozen=True)
class LinkDistances:
    d_tx_ris: float
    d_ris_rx: float
    d_ris_eve: float
    d_tx_rx: float
    d_tx_eve: float


def node_positions(t: Topology) -> NodePositions:
    t.validate()
    return NodePositions(
        tx=(0.0, 0.0),
        ris=(t.d_tr, t.d_tr * math.tan(t.theta)),
        rx=(t.d_tl, 0.0),
        eve=(t.d_te, 0.0),
    )


def _dist(a: tuple[float, float], b: tuple[float, float]) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def link_distances(t: Topology) -> LinkDistances:
    """Euclidean distance of every link used by the simulator."""
    p = node_positions(t)
    return LinkDistances(
        d_tx_ris=_dist(p.tx, p.ris),
        d_ris_rx=_dist(p.ris, p.rx),
        d_ris_eve=_dist(p.ris, p.eve),
        d_tx_rx=_dist(p.tx, p.rx),
        d_tx_eve=_dist(p.tx, p.eve),
    )
