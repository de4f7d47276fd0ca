"""Randomized invariants."""

import math

import numpy as np
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from coxtk.connection import (
    AsymptoticData,
    character_crosscheck,
    k_from_m,
    m_from_k,
    stokes_numbers,
    stokes_numbers_complex,
)
from coxtk.coxplane import fundamental_domain, plane_type_a, tiles_by_coxeter
from coxtk.liealg import VALID_TYPES, build_root_system, coxeter_element, coxeter_orbits
from coxtk.polytope import _exact_key, project_weights, soliton_graph, wedge_weights
from coxtk.toda import TodaProblem, residual

finite = st.floats(-1.5, 1.5, allow_nan=False, allow_infinity=False)


@st.composite
def trace_free(draw, min_n=1, max_n=10):
    n = draw(st.integers(min_n, max_n))
    vals = np.array(draw(st.lists(finite, min_size=n + 1, max_size=n + 1)))
    return n, vals - vals.mean()


@st.composite
def antisymmetric(draw, min_n=1, max_n=10):
    n = draw(st.integers(min_n, max_n))
    half = draw(st.lists(finite, min_size=(n + 1) // 2, max_size=(n + 1) // 2))
    m = np.zeros(n + 1)
    for i, v in enumerate(half):
        m[i], m[n - i] = v, -v
    return n, m


@settings(max_examples=200, deadline=None)
@given(trace_free())
def test_esf_equals_character(data):
    _, m = data
    assert np.allclose(stokes_numbers_complex(m), character_crosscheck(m), atol=1e-10)


@settings(max_examples=200, deadline=None)
@given(antisymmetric())
def test_stokes_real_and_palindromic(data):
    n, m = data
    s = np.array(stokes_numbers(m))
    assert np.allclose(s, s[::-1], atol=1e-10)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 8), st.data())
def test_m_k_inverse(n, data):
    k = data.draw(st.lists(st.floats(-1, 3, allow_nan=False), min_size=n + 1, max_size=n + 1))
    N = n + 1 + sum(k)
    assume(N > 1e-6)
    m = m_from_k(k)
    assert np.all(m.gaps() >= -1 - 1e-9)
    assert np.allclose(k_from_m(m.m, N), k, atol=1e-9)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(VALID_TYPES), st.randoms(use_true_random=False))
def test_orbits_any_ordering(typ, rnd):
    rs = build_root_system(*typ)
    order = list(range(rs.rank))
    rnd.shuffle(order)
    orbits = coxeter_orbits(coxeter_element(rs, order), rs)
    assert len(orbits) == rs.rank
    assert all(len(o) == rs.coxeter_number for o in orbits)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 8), st.data())
def test_domains_tile(n, data):
    d = plane_type_a(n)
    choice = data.draw(st.integers(0, len(d.rays) - 1))
    dom = fundamental_domain(d, choice)
    assert len(dom) == n
    assert tiles_by_coxeter(d, dom)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 9), st.data())
def test_exact_key_matches_numeric_coincidence(n, data):
    a = data.draw(st.lists(st.integers(-3, 3), min_size=n + 1, max_size=n + 1))
    b = data.draw(st.lists(st.integers(-3, 3), min_size=n + 1, max_size=n + 1))
    w = np.exp(2j * math.pi * np.arange(n + 1) / (n + 1))
    close = abs(np.dot(a, w) - np.dot(b, w)) < 1e-9
    assert close == (_exact_key(a) == _exact_key(b))


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 6), st.data())
def test_soliton_relation_symmetric_irreflexive(n, data):
    k = data.draw(st.integers(1, n))
    vd = soliton_graph(wedge_weights(n, k))
    pairs = {s.pair for s in vd.solitons}
    assert all(a < b for a, b in pairs)
    assert sum(len(p.weights) for p in project_weights(vd.ws).points) == math.comb(n + 1, k)


@settings(max_examples=50, deadline=None)
@given(trace_free(max_n=5), st.integers(0, 2**32 - 1))
def test_residual_trace_free(data, seed):
    n, m = data
    m = np.clip(m, -0.3, 0.3)
    m -= m.mean()
    prob = TodaProblem(AsymptoticData(tuple(m)), nodes=120)
    w = np.random.default_rng(seed).normal(scale=0.4, size=(120, n + 1))
    w -= w.mean(axis=1, keepdims=True)
    r = residual(prob, w)
    assert np.abs(r.sum(axis=1)).max() <= 1e-9 * max(1.0, np.abs(r).max())
