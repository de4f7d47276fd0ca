import itertools
import math
from collections import Counter
from math import comb

import numpy as np
import pytest

from coxtk.connection import grassmannian_k, m_from_k, stokes_sectors
from coxtk.polytope import (
    VacuumDiagram,
    WPlaneMismatch,
    compare_w_plane,
    explicit_weights,
    project_weights,
    quantum_multiplication_matrix,
    segments,
    soliton_graph,
    sym_weights,
    w_plane,
    wedge_derivation,
    wedge_weights,
)


def test_wedge_weights_order_and_count():
    ws = wedge_weights(3, 2)
    assert [ws.label(a) for a in range(len(ws.weights))] == ["0+1", "0+2", "0+3", "1+2", "1+3", "2+3"]
    assert len(wedge_weights(5, 3).weights) == comb(6, 3)
    with pytest.raises(ValueError):
        wedge_weights(3, 0)
    with pytest.raises(ValueError):
        wedge_weights(3, 4)


def test_exact_merging_wedge2_a3():
    vd = project_weights(wedge_weights(3, 2))
    assert len(vd.points) == 5
    origin = [p for p in vd.points if abs(p.z) < 1e-12]
    assert len(origin) == 1
    assert {vd.ws.label(a) for a in origin[0].weights} == {"0+2", "1+3"}


def test_merging_bookkeeping():
    for n in range(1, 7):
        for k in range(1, n + 1):
            vd = project_weights(wedge_weights(n, k))
            assert sum(len(p.weights) for p in vd.points) == comb(n + 1, k)
            # merged points are genuinely distinct, merged weights genuinely equal
            zs = [p.z for p in vd.points]
            for a, b in itertools.combinations(zs, 2):
                assert abs(a - b) > 1e-9
            for p in vd.points:
                for a in p.weights:
                    assert abs(vd.position(a) - p.z) < 1e-12


def test_wedge2_a3_solitons():
    vd = soliton_graph(wedge_weights(3, 2))
    masses = Counter(round(s.mass, 9) for s in vd.solitons)
    assert masses == {round(math.sqrt(2), 9): 8, 2.0: 4}
    pairs = {frozenset((vd.ws.label(a), vd.ws.label(b))) for a, b in (s.pair for s in vd.solitons)}
    for a, b in [("0+2", "1+3"), ("0+1", "2+3"), ("0+3", "1+2")]:
        assert frozenset((a, b)) not in pairs
    segs = segments(vd)
    assert Counter(round(g.mass, 9) for g in segs) == {round(math.sqrt(2), 9): 4, 2.0: 4}


def test_wedge1_complete_graph():
    vd = soliton_graph(wedge_weights(3, 1))
    assert len(vd.solitons) == 6


def test_soliton_count_brute_force():
    for n in range(1, 7):
        for k in range(1, n + 1):
            ws = wedge_weights(n, k)
            vd = soliton_graph(ws)
            expected = sum(
                1
                for a, b in itertools.combinations(ws.weights, 2)
                if sum(x & y for x, y in zip(a, b)) == k - 1
            )
            assert len(vd.solitons) == expected


def test_complement_duality():
    n = 5
    for k in range(1, n + 1):
        a = Counter(round(s.mass, 9) for s in soliton_graph(wedge_weights(n, k)).solitons)
        b = Counter(round(s.mass, 9) for s in soliton_graph(wedge_weights(n, n + 1 - k)).solitons)
        assert a == b


def test_masses_are_particle_masses():
    n = 6
    allowed = {round(2 * math.sin(i * math.pi / (n + 1)), 9) for i in range(1, (n + 1) // 2 + 1)}
    for k in range(1, n + 1):
        for s in soliton_graph(wedge_weights(n, k)).solitons:
            assert round(s.mass, 9) in allowed


def test_multiplicities_from_stokes():
    m = m_from_k(grassmannian_k(3))
    vd = soliton_graph(wedge_weights(3, 2), spectrum=stokes_sectors(3, m))
    assert {s.multiplicity for s in vd.solitons} <= {4.0, 6.0}
    assert all(s.multiplicity is not None for s in vd.solitons)


def test_sym_weights_n1():
    ws = sym_weights(3)
    vd = soliton_graph(ws)
    assert len(vd.points) == 4
    assert len(vd.solitons) == 3
    with pytest.raises(ValueError):
        explicit_weights(3, [(1, 0)])


@pytest.mark.parametrize("n,k,z", [(3, 1, 1), (3, 2, 1), (4, 2, 2), (5, 3, 1 + 1j)])
def test_w_plane_proportional(n, k, z):
    wp = w_plane(n, k, z)
    c, resid = compare_w_plane(wp, project_weights(wedge_weights(n, k)))
    assert resid < 1e-10
    assert abs(c - (n + 1) / (n + 2) * complex(z) ** ((n + 2) / (n + 1))) < 1e-10


def test_w_plane_coincident_values():
    wp = w_plane(3, 2, 1)
    zeros = [v for v in wp.critical_values if abs(v) < 1e-12]
    assert len(zeros) == 2


def test_w_plane_scaling():
    c1, _ = compare_w_plane(w_plane(4, 2, 1), project_weights(wedge_weights(4, 2)))
    c2, _ = compare_w_plane(w_plane(4, 2, 2), project_weights(wedge_weights(4, 2)))
    assert math.isclose(abs(c2) / abs(c1), 2 ** (6 / 5), rel_tol=1e-12)


def test_w_plane_mismatch_raises():
    wp = w_plane(3, 1, 1)
    vd = project_weights(wedge_weights(3, 1))
    # swapping two vacua breaks proportionality
    swapped = VacuumDiagram(vd.ws, vd.points, (1, 0, 2, 3))
    with pytest.raises(WPlaneMismatch):
        compare_w_plane(wp, swapped)
    with pytest.raises(ValueError):
        compare_w_plane(wp, project_weights(wedge_weights(3, 2)))


def test_quantum_multiplication_spectrum():
    for n in range(1, 6):
        for k in range(1, n + 1):
            wp = w_plane(n, k, 1.5)
            ev = np.linalg.eigvals(quantum_multiplication_matrix(n, k, 1.5))
            sums = np.array([sum(p) for p in wp.critical_points])
            assert np.abs(ev[:, None] - sums[None, :]).min(axis=0).max() < 1e-8


def test_wedge_derivation_is_lie_homomorphism():
    rng = np.random.default_rng(0)
    a, b = rng.normal(size=(2, 5, 5))
    for k in (1, 2, 3):
        da, db = wedge_derivation(a, k), wedge_derivation(b, k)
        assert np.allclose(da @ db - db @ da, wedge_derivation(a @ b - b @ a, k))
