import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rispls.geometry import InvalidTopology, Topology, link_distances, node_positions

# tan(10 deg) * 20 and the resulting RIS -> Rx distance, evaluated once by hand
RIS_Y_10DEG = 3.5265396141692995
D_RIS_RX_10DEG = 20.3085322377149

distances = st.floats(min_value=0.1, max_value=1e4)
angles = st.floats(min_value=0.0, max_value=math.radians(89))


def test_flat_ris():
    p = node_positions(Topology(20, 50, 40, 0.0))
    assert p.tx == (0.0, 0.0)
    assert p.ris == (20.0, 0.0)


def test_ris_at_45_degrees():
    p = node_positions(Topology(20, 50, 40, math.pi / 4))
    assert p.ris == pytest.approx((20.0, 20.0))
    assert link_distances(Topology(20, 50, 40, math.pi / 4)).d_tx_ris == pytest.approx(28.2843, abs=1e-4)


def test_ris_at_10_degrees():
    t = Topology(20, 50, 40, math.radians(10))
    p = node_positions(t)
    assert p.ris[0] == 20.0
    assert p.ris[1] == pytest.approx(RIS_Y_10DEG, rel=1e-12)
    assert p.eve == (50.0, 0.0)
    assert p.rx == (40.0, 0.0)
    assert link_distances(t).d_ris_rx == pytest.approx(D_RIS_RX_10DEG, rel=1e-12)


def test_collinear_distances():
    d = link_distances(Topology(20, 50, 40, 0.0))
    assert d.d_tx_ris == 20.0
    assert d.d_ris_rx == 20.0
    assert d.d_ris_eve == 30.0
    assert d.d_tx_rx == 40.0
    assert d.d_tx_eve == 50.0


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(d_tr=0, d_te=50, d_tl=40, theta=0.1),
        dict(d_tr=20, d_te=-1, d_tl=40, theta=0.1),
        dict(d_tr=20, d_te=50, d_tl=float("nan"), theta=0.1),
        dict(d_tr=20, d_te=50, d_tl=40, theta=-0.01),
        dict(d_tr=20, d_te=50, d_tl=40, theta=math.pi / 2),
    ],
)
def test_invalid_topology(kwargs):
    with pytest.raises(InvalidTopology):
        Topology(**kwargs)


def test_eavesdropper_beyond_receiver_is_allowed():
    d = link_distances(Topology(20, 60, 40, 0.2))
    assert d.d_tx_eve == 60.0


@given(distances, distances, distances, angles)
def test_distances_match_positions(d_tr, d_te, d_tl, theta):
    t = Topology(d_tr, d_te, d_tl, theta)
    d = link_distances(t)
    assert d.d_tx_rx == d_tl
    assert d.d_tx_eve == d_te
    assert d.d_tx_ris == pytest.approx(d_tr / math.cos(theta), rel=1e-9)
    assert d.d_tx_ris >= d_tr


@given(distances, angles, angles)
def test_tx_ris_distance_increases_with_theta(d_tr, a, b):
    lo, hi = sorted((a, b))
    d_lo = link_distances(Topology(d_tr, 1.0, 1.0, lo)).d_tx_ris
    d_hi = link_distances(Topology(d_tr, 1.0, 1.0, hi)).d_tx_ris
    if hi > lo:
        assert d_hi > d_lo or math.isclose(d_hi, d_lo, rel_tol=1e-15)
    if lo == 0.0:
        assert d_lo == d_tr
    elif lo > 1e-6:
        assert d_lo > d_tr
