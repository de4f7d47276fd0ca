import cmath
import math

import numpy as np
import pytest

from coxtk.coxplane import (
    RaySelectionError,
    fundamental_domain,
    ith_plane_spin,
    masses,
    plane_general,
    plane_type_a,
    positive_ray_selection,
    tiles_by_coxeter,
)
from coxtk.liealg import VALID_TYPES, build_root_system, coxeter_element

FIG1_RAYS = [-math.pi / 4, -math.pi / 2, -3 * math.pi / 4, -math.pi]


def labels(diagram, idx):
    return {diagram.rs.roots[k].label_str() for k in idx}


def test_a3_points_and_rays():
    d = plane_type_a(3)
    assert len(d.points) == 8
    assert len(d.rays) == 8
    for a in d.rays:
        q = a / (math.pi / 4)
        assert abs(q - round(q)) < 1e-12
    assert sum(len(p.labels) for p in d.points) == 12


def test_a3_orbit_listing():
    d = plane_type_a(3)
    orbits = [labels(d, o) for o in d.orbits]
    assert {"01", "30", "23", "12"} in orbits
    assert {"02", "31", "20", "13"} in orbits
    ms = sorted({round(v, 12) for v in masses(d).values()})
    assert np.allclose(ms, [math.sqrt(2), 2.0], atol=1e-12)


def test_points_match_omega_differences():
    n = 5
    d = plane_type_a(n)
    w = cmath.exp(2j * math.pi / (n + 1))
    for k, r in enumerate(d.rs.roots):
        i, j = r.label
        assert abs(d.root_z[k] - (w**j - w**i)) < 1e-12


def test_a4_wheels_and_rotation():
    d = plane_type_a(4)
    radii = sorted(masses(d).values())
    expected = sorted([2 * math.sin(math.pi / 5)] * 2 + [2 * math.sin(2 * math.pi / 5)] * 2)
    assert np.allclose(radii, expected, atol=1e-12)
    rot = cmath.exp(-2j * math.pi / 5)
    for k in range(len(d.rs.roots)):
        assert abs(d.root_z[d.ce.root_perm[k]] - rot * d.root_z[k]) < 1e-12


def test_a3_reference_domain_and_simple_roots():
    d = plane_type_a(3)
    assert labels(d, fundamental_domain(d, FIG1_RAYS)) == {"10", "23", "13"}
    _, simple = positive_ray_selection(d, FIG1_RAYS)
    assert labels(d, simple) == {"23", "02", "10"}


def test_ray_choice_validation():
    d = plane_type_a(3)
    with pytest.raises(RaySelectionError):
        fundamental_domain(d, [0.0, math.pi / 4, math.pi, math.pi / 2])
    with pytest.raises(RaySelectionError):
        fundamental_domain(d, 99)
    with pytest.raises(RaySelectionError):
        d.ray_index(0.1)


@pytest.mark.parametrize("fam,rank", [t for t in VALID_TYPES if t[0] != "A"])
def test_general_plane_domain_every_choice(fam, rank):
    rs = build_root_system(fam, rank)
    d = plane_general(rs)
    masses(d)
    for choice in range(len(d.rays)):
        dom = fundamental_domain(d, choice)
        assert len(dom) == rs.rank
        assert tiles_by_coxeter(d, dom)


def test_general_plane_agrees_with_type_a_up_to_scale():
    for n in (2, 3, 5):
        exact = np.array(sorted(masses(plane_type_a(n)).values()))
        rs = build_root_system("A", n)
        gen = np.array(sorted(masses(plane_general(rs, coxeter_element(rs))).values()))
        assert np.allclose(exact / exact[-1], gen / gen[-1], atol=1e-9)


def test_a1_line():
    d = plane_type_a(1)
    assert len(d.rays) == 4
    assert len(d.occupied_rays()) == 2
    assert masses(d) == {0: 2.0}


def test_ith_plane_spin():
    assert ith_plane_spin(3, 2, (0, 2)) == 0.0
    assert math.isclose(ith_plane_spin(3, 1, (0, 2)), 2.0)
    assert math.isclose(ith_plane_spin(4, 2, (1, 2)), 2 * math.sin(2 * math.pi / 5))
    with pytest.raises(ValueError):
        ith_plane_spin(3, 0, (0, 1))
