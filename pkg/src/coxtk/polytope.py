"""Polytopic soliton diagrams for sl(n+1) and the Grassmannian W-plane.

Weights are integer vectors in the coordinates x_0..x_n.  A weight w is drawn
at -sum_i w_i omega**i in the Coxeter Plane.  Coincidences are decided
exactly: two weights project to the same point iff the difference of their
coefficient polynomials is divisible by the cyclotomic polynomial
Phi_{n+1}.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .connection import StokesSpectrum, UVData, build_omega_hat, grassmannian_k
from .coxplane import CoxeterPlaneDiagram, plane_type_a, positive_ray_selection
from .liealg import RootSystem, build_root_system

__all__ = [
    "WeightSet",
    "VacuumPoint",
    "Soliton",
    "Segment",
    "VacuumDiagram",
    "WPlane",
    "wedge_weights",
    "sym_weights",
    "explicit_weights",
    "project_weights",
    "soliton_graph",
    "segments",
    "w_plane",
    "compare_w_plane",
    "wedge_derivation",
    "quantum_multiplication_matrix",
    "WPlaneMismatch",
]

MERGE_TOL = 1e-9
FIT_TOL = 1e-8


class WPlaneMismatch(ArithmeticError):
    pass


@dataclass(frozen=True)
class WeightSet:
    n: int
    rep: str
    weights: tuple[tuple[int, ...], ...]

    def label(self, a: int) -> str:
        w = self.weights[a]
        if self.rep.startswith("wedge"):
            return "+".join(str(i) for i, c in enumerate(w) if c)
        return "(" + ",".join(str(c) for c in w) + ")"


def wedge_weights(n: int, k: int) -> WeightSet:
    """Weights x_{i_1} + ... + x_{i_k} of wedge^k, k-subsets in lexicographic order."""
    if not 1 <= k <= n:
        raise ValueError(f"k must satisfy 1 <= k <= n, got k={k}, n={n}")
    ws = []
    for sub in itertools.combinations(range(n + 1), k):
        ws.append(tuple(1 if i in sub else 0 for i in range(n + 1)))
    return WeightSet(n, f"wedge:{k}", tuple(ws))


def sym_weights(k: int) -> WeightSet:
    """Weights (k-j) x_0 + j x_1 of the (k+1)-dimensional irrep of sl(2)."""
    if k < 1:
        raise ValueError("k must be positive")
    return WeightSet(1, f"sym:{k}", tuple((k - j, j) for j in range(k + 1)))


def explicit_weights(n: int, weights: Sequence[Sequence[int]]) -> WeightSet:
    ws = tuple(tuple(int(c) for c in w) for w in weights)
    if not ws or any(len(w) != n + 1 for w in ws):
        raise ValueError(f"each weight needs n+1 = {n + 1} integer coordinates")
    return WeightSet(n, "explicit", ws)


@lru_cache(maxsize=None)
def _cyclotomic(m: int) -> tuple[int, ...]:
    """Coefficients of Phi_m, lowest degree first."""
    num = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            num = _polydiv(num, list(_cyclotomic(d)))[0]
    return tuple(num)


def _polydiv(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    """Division by a monic integer polynomial (lowest degree first)."""
    num = list(num)
    dd = len(den) - 1
    if len(num) - 1 < dd:
        return [0], num
    q = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c:
            q[i - dd] = c
            for j, dc in enumerate(den):
                num[i - dd + j] -= c * dc
    rem = num[:dd] if dd else [0]
    return q, rem


def _exact_key(weight: Sequence[int]) -> tuple[int, ...]:
    phi = list(_cyclotomic(len(weight)))
    _, rem = _polydiv(list(weight), phi)
    return tuple(rem)


@dataclass(frozen=True)
class VacuumPoint:
    z: complex
    weights: tuple[int, ...]


@dataclass(frozen=True)
class Soliton:
    pair: tuple[int, int]
    root: tuple[int, int]
    orbit_id: int
    antiparticle_orbit: int
    mass: float
    multiplicity: float | None = None


@dataclass(frozen=True)
class Segment:
    ends: tuple[int, int]
    mass: float
    pairs: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class VacuumDiagram:
    ws: WeightSet
    points: tuple[VacuumPoint, ...]
    weight_point: tuple[int, ...] = field(repr=False)
    solitons: tuple[Soliton, ...] = ()

    def position(self, a: int) -> complex:
        return self.points[self.weight_point[a]].z

    def positions(self) -> np.ndarray:
        return np.array([self.position(a) for a in range(len(self.ws.weights))])


def project_weights(ws: WeightSet) -> VacuumDiagram:
    """Place each weight at -sum_i w_i omega**i and merge coincident ones exactly."""
    s = ws.n + 1
    w = cmath.exp(2j * math.pi / s)
    groups: dict[tuple[int, ...], list[int]] = {}
    for a, wt in enumerate(ws.weights):
        groups.setdefault(_exact_key(wt), []).append(a)
    points = []
    weight_point = [0] * len(ws.weights)
    for p, members in enumerate(sorted(groups.values(), key=lambda g: g[0])):
        z = -sum(c * w**i for i, c in enumerate(ws.weights[members[0]]))
        for a in members:
            weight_point[a] = p
        points.append(VacuumPoint(complex(z), tuple(members)))
    return VacuumDiagram(ws, tuple(points), tuple(weight_point))


def _root_difference(a: Sequence[int], b: Sequence[int]) -> tuple[int, int] | None:
    """(i, j) if a - b = x_i - x_j on the trace-free Cartan, else None."""
    s = len(a)
    d = [x - y for x, y in zip(a, b)]
    tot = sum(d)
    scaled = [s * v - tot for v in d]
    plus = [i for i, v in enumerate(scaled) if v == s]
    minus = [i for i, v in enumerate(scaled) if v == -s]
    if len(plus) == 1 and len(minus) == 1 and all(v == 0 for i, v in enumerate(scaled) if i not in plus + minus):
        return plus[0], minus[0]
    return None


def soliton_graph(
    ws: WeightSet,
    rs: RootSystem | None = None,
    diagram: CoxeterPlaneDiagram | None = None,
    spectrum: StokesSpectrum | None = None,
) -> VacuumDiagram:
    """Connect two vacua whenever their weights differ by a single root.

    Each soliton is labelled by whichever of +-(lambda_a - lambda_b) is
    positive for the first ray selection of the diagram, its Coxeter orbit,
    the orbit of the opposite root and the mass.  With a Stokes spectrum the
    multiplicity s_d of its wheel is attached as well.
    """
    n = ws.n
    rs = build_root_system("A", n) if rs is None else rs
    diagram = plane_type_a(n) if diagram is None else diagram
    if rs.datum.family != "A" or rs.rank != n:
        raise ValueError("soliton graphs need the A_n root system")
    base = project_weights(ws)
    positive = set(positive_ray_selection(diagram, 0)[0])
    svals = None if spectrum is None or spectrum.s is None else spectrum.s
    sol = []
    for a, b in itertools.combinations(range(len(ws.weights)), 2):
        ij = _root_difference(ws.weights[a], ws.weights[b])
        if ij is None:
            continue
        i, j = ij
        if rs.label_index(i, j) not in positive:
            i, j = j, i
        ridx = rs.label_index(i, j)
        oid = diagram.orbit_of(ridx)
        anti = diagram.orbit_of(rs.label_index(j, i))
        mass = diagram.orbit_projections[oid].radius
        d = (j - i) % (n + 1)
        mult = None if svals is None else float(svals[d - 1])
        sol.append(Soliton((a, b), (i, j), oid, anti, mass, mult))
    return VacuumDiagram(ws, base.points, base.weight_point, tuple(sol))


def segments(vd: VacuumDiagram) -> tuple[Segment, ...]:
    """Solitons grouped by the unordered pair of points they join."""
    by_ends: dict[tuple[int, int], list[Soliton]] = {}
    for sol in vd.solitons:
        pa, pb = vd.weight_point[sol.pair[0]], vd.weight_point[sol.pair[1]]
        by_ends.setdefault((min(pa, pb), max(pa, pb)), []).append(sol)
    out = []
    for ends in sorted(by_ends):
        group = by_ends[ends]
        out.append(Segment(ends, group[0].mass, tuple(s.pair for s in group)))
    return tuple(out)


@dataclass(frozen=True)
class WPlane:
    n: int
    k: int
    z: complex
    critical_points: tuple[tuple[complex, ...], ...] = field(repr=False)
    critical_values: tuple[complex, ...]
    matched_scalar: complex


def _superpotential(u: np.ndarray, n: int, z: complex) -> complex:
    return complex(np.sum(u ** (n + 2)) / (n + 2) - z * np.sum(u))


def w_plane(n: int, k: int, z: complex = 1.0) -> WPlane:
    """Critical values of W(u) = sum u_j**(n+2)/(n+2) - z sum u_j, evaluated directly.

    Critical points are k-subsets of the (n+1)-th roots of z, listed in the
    same lexicographic order as :func:`wedge_weights`.
    """
    z = complex(z)
    if z == 0:
        raise ValueError("z must be nonzero")
    if not 1 <= k <= n:
        raise ValueError(f"k must satisfy 1 <= k <= n, got k={k}, n={n}")
    s = n + 1
    base = z ** (1.0 / s)
    roots = np.array([base * cmath.exp(2j * math.pi * i / s) for i in range(s)])
    pts, vals = [], []
    for sub in itertools.combinations(range(s), k):
        u = roots[list(sub)]
        grad = u ** (n + 1) - z
        if np.max(np.abs(grad)) > 1e-9 * max(1.0, abs(z)):
            raise ArithmeticError("critical point equations not satisfied")
        pts.append(tuple(complex(v) for v in u))
        vals.append(_superpotential(u, n, z))
    pos = project_weights(wedge_weights(n, k)).positions()
    c, _ = _fit_scalar(np.array(vals), pos)
    return WPlane(n, k, z, tuple(pts), tuple(vals), c)


def _fit_scalar(values: np.ndarray, positions: np.ndarray) -> tuple[complex, float]:
    den = float(np.sum(np.abs(positions) ** 2))
    c = complex(np.sum(np.conj(positions) * values) / den)
    resid = float(np.sqrt(np.sum(np.abs(values - c * positions) ** 2)))
    return c, resid


def compare_w_plane(wp: WPlane, vd: VacuumDiagram, tol: float = FIT_TOL) -> tuple[complex, float]:
    """Best complex scalar c with critical values ≈ c * projected weights."""
    if vd.ws.n != wp.n or vd.ws.rep != f"wedge:{wp.k}":
        raise ValueError("W-plane and vacuum diagram were built for different (n, k)")
    c, resid = _fit_scalar(np.array(wp.critical_values), vd.positions())
    if resid >= tol:
        raise WPlaneMismatch(f"critical values are not proportional to the weights (residual {resid:.3e})")
    return c, resid


def wedge_derivation(a: np.ndarray, k: int) -> np.ndarray:
    """Action of the matrix ``a`` (as a Lie algebra element) on wedge^k."""
    s = a.shape[0]
    basis = list(itertools.combinations(range(s), k))
    index = {b: p for p, b in enumerate(basis)}
    out = np.zeros((len(basis), len(basis)), dtype=complex)
    for col, sub in enumerate(basis):
        for pos, src in enumerate(sub):
            for tgt in range(s):
                coef = a[tgt, src]
                if coef == 0 or (tgt != src and tgt in sub):
                    continue
                new = list(sub)
                new[pos] = tgt
                order = sorted(range(k), key=lambda q: new[q])
                sign = _perm_sign(order)
                out[index[tuple(sorted(new))], col] += sign * coef
    return out


def _perm_sign(order: list[int]) -> int:
    sign = 1
    seen = [False] * len(order)
    for i in range(len(order)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = order[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def quantum_multiplication_matrix(n: int, k: int, z: complex = 1.0) -> np.ndarray:
    """wedge^k (z eta) for the Grassmannian data k_0 = 0, k_i = -1."""
    oh = build_omega_hat(UVData.from_k(grassmannian_k(n), z=z))
    return wedge_derivation(complex(z) * oh.eta, k)
