import math
from math import comb

import numpy as np
import pytest

from coxtk.connection import (
    AsymptoticData,
    StokesConsistencyError,
    UVData,
    build_omega_hat,
    character_crosscheck,
    conjugated_root_vector,
    grassmannian_k,
    k_from_m,
    m_from_k,
    minimal_model_k,
    stokes_factor_support,
    stokes_numbers,
    stokes_numbers_complex,
    stokes_sectors,
    t_from_z,
    vandermonde_frame,
)


@pytest.mark.parametrize("n", range(1, 11))
def test_minimal_and_grassmannian(n):
    assert np.allclose(stokes_numbers(m_from_k(minimal_model_k(n))), 1.0, atol=1e-12)
    s = stokes_numbers(m_from_k(grassmannian_k(n)))
    assert np.allclose(s, [comb(n + 1, i) for i in range(1, n + 1)], atol=1e-12)


def test_n1_closed_form():
    for m0 in np.linspace(-0.5, 0.5, 11):
        (s1,) = stokes_numbers((m0, -m0))
        assert math.isclose(s1, -2 * math.sin(math.pi * m0), abs_tol=1e-12)


def test_character_crosscheck_matches_complex_formula():
    rng = np.random.default_rng(3)
    for n in range(1, 8):
        m = rng.normal(size=n + 1)
        m -= m.mean()
        assert np.allclose(character_crosscheck(m), stokes_numbers_complex(m), atol=1e-10)


def test_non_symmetric_m_rejected():
    with pytest.raises(StokesConsistencyError):
        stokes_numbers((0.3, -0.1, -0.2))


def test_trace_free_required():
    with pytest.raises(ValueError):
        AsymptoticData((0.1, 0.2))


def test_m_k_round_trip():
    k = (1.0, 0.5, -1.0, 2.0)
    m = m_from_k(k)
    N = 4 + sum(k)
    assert np.allclose(k_from_m(m.m, N), k, atol=1e-12)
    assert np.all(m.gaps() >= -1 - 1e-12)


def test_symmetric_k_gives_antisymmetric_m():
    assert m_from_k((2.0, 1.0, 0.5, 1.0)).is_symmetric()
    assert not m_from_k((2.0, 1.0, 0.0, 0.5)).is_symmetric()


def test_sector_geometry():
    sp = stokes_sectors(3)
    assert math.isclose(sp.sector_width, 5 * math.pi / 4)
    assert len(sp.sector_boundary_angles) == 8
    sp1 = stokes_sectors(1)
    assert math.isclose(sp1.sector_width, 3 * math.pi / 2)
    assert np.allclose(sp1.sector_boundary_angles, [0.0, math.pi])
    for lo, hi in sp.sectors():
        assert math.isclose(hi - lo, sp.sector_width)


def test_factor_supports_a3():
    assert set(stokes_factor_support(3, -math.pi / 4)) == {(1, 0), (2, 3)}
    assert set(stokes_factor_support(3, -math.pi)) == {(0, 2)}
    with pytest.raises(ValueError):
        stokes_factor_support(3, 0.1)
    sp = stokes_sectors(3)
    total = sum(len(v) for v in sp.factor_supports.values())
    assert total == 12


def test_omega_hat_structure():
    uv = UVData.from_k((1.0, 0.0, 0.0), z=2.0, c=(1.0, 2.0, 3.0))
    oh = build_omega_hat(uv)
    assert oh.eta[0, 2] == 2.0
    assert oh.eta[1, 0] == 2.0
    assert oh.eta[2, 1] == 3.0
    assert np.count_nonzero(oh.eta) == 3
    lam = 0.3 + 0.1j
    assert np.allclose(oh.coefficient(lam), oh.leading / lam**2 + oh.residue / lam)
    assert math.isclose(oh.N, 4.0)


def test_uvdata_validation():
    with pytest.raises(ValueError):
        UVData.from_k((-2.0, 0.0))
    with pytest.raises(ValueError):
        UVData.from_k((0.0, 0.0), c=(1.0, -1.0))
    with pytest.raises(ValueError):
        UVData.from_k((0.0, 0.0), z=0)


def test_t_from_z_homogeneity():
    uv = UVData.from_k((1.0, 0.0), z=2.0)
    t1 = t_from_z(uv)
    assert math.isclose(abs(t1), (2 / 3) * 2 ** 1.5)


@pytest.mark.parametrize("n", range(1, 9))
def test_vandermonde_and_root_vectors(n):
    fr = vandermonde_frame(n)
    assert fr.diagonalization_error() < 1e-12
    for i in range(n + 1):
        for j in range(n + 1):
            if i != j:
                conjugated_root_vector(n, i, j)


def test_root_vector_n1():
    assert np.allclose(conjugated_root_vector(1, 0, 1), [[0.5, -0.5], [0.5, -0.5]])
