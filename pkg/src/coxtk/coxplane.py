"""Coxeter Plane diagrams: projected roots, rays, orbit wheels and masses.

Two constructions are provided.  :func:`plane_type_a` uses the closed form
for sl(n+1), where the root labelled (i, j) sits at w**j - w**i with
w = exp(2 pi i/(n+1)); all incidences (rays, coincident points, wheels) are
decided with integer arithmetic.  :func:`plane_general` projects the roots of
any simple type orthogonally onto the real eigenplane of the Coxeter element
for the eigenvalue exp(2 pi i/s).

Rays are indexed by an integer key ``K`` modulo ``4 s``; the ray has angle
``K * pi / (2 s)``.  The 2s rays of a diagram all share the parity of ``K``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .liealg import (
    CoxeterElement,
    InvalidTypeError,
    Root,
    RootSystem,
    build_root_system,
    coxeter_element,
    coxeter_orbits,
)

__all__ = [
    "PlanePoint",
    "OrbitProjection",
    "CoxeterPlaneDiagram",
    "plane_type_a",
    "plane_general",
    "masses",
    "fundamental_domain",
    "positive_ray_selection",
    "ith_plane_spin",
    "RaySelectionError",
]

MERGE_TOL = 1e-9
RAY_TOL = 1e-8


class RaySelectionError(ValueError):
    """The requested rays are not s consecutive rays of the diagram."""


@dataclass(frozen=True)
class PlanePoint:
    z: complex
    labels: tuple[int, ...]
    orbit_ids: tuple[int, ...]


@dataclass(frozen=True)
class OrbitProjection:
    radius: float
    points: tuple[int, ...]


@dataclass(frozen=True)
class CoxeterPlaneDiagram:
    rs: RootSystem
    ce: CoxeterElement
    points: tuple[PlanePoint, ...]
    rays: tuple[float, ...]
    orbit_projections: dict[int, OrbitProjection]
    orbits: tuple[tuple[int, ...], ...] = field(repr=False)
    root_z: tuple[complex, ...] = field(repr=False)
    root_ray: tuple[int, ...] = field(repr=False)
    root_point: tuple[int, ...] = field(repr=False)
    ray_keys: tuple[int, ...] = field(repr=False)
    exact: bool = False

    @property
    def s(self) -> int:
        return self.rs.coxeter_number

    def roots_on_ray(self, ray: int) -> tuple[int, ...]:
        return tuple(k for k, r in enumerate(self.root_ray) if r == ray)

    def occupied_rays(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.root_ray)))

    def orbit_of(self, root_index: int) -> int:
        for oid, orb in enumerate(self.orbits):
            if root_index in orb:
                return oid
        raise KeyError(root_index)

    def ray_index(self, angle: float) -> int:
        """Index of the ray at ``angle`` (radians, any representative)."""
        a = angle % (2 * math.pi)
        for k, r in enumerate(self.rays):
            d = abs(a - r)
            if min(d, 2 * math.pi - d) < MERGE_TOL:
                return k
        raise RaySelectionError(f"angle {angle!r} is not a ray of this diagram")


def _ray_key_from_angle(angle: float, s: int) -> int:
    q = angle * 2 * s / math.pi
    k = round(q)
    if abs(q - k) > RAY_TOL * 2 * s / math.pi:
        raise ArithmeticError(f"projected root at angle {angle} is off the ray lattice")
    return k % (4 * s)


def _assemble(rs, ce, root_z, root_keys, point_groups, exact) -> CoxeterPlaneDiagram:
    s = rs.coxeter_number
    orbits = coxeter_orbits(ce, rs)
    parity = root_keys[0] % 2
    keys = tuple(sorted(parity + 2 * k for k in range(2 * s)))
    rays = tuple(k * math.pi / (2 * s) for k in keys)
    key_pos = {k: p for p, k in enumerate(keys)}
    root_ray = tuple(key_pos[k] for k in root_keys)

    orbit_of = {}
    for oid, orb in enumerate(orbits):
        for k in orb:
            orbit_of[k] = oid

    groups = sorted((tuple(sorted(g)) for g in point_groups), key=lambda g: g[0])
    root_point = [0] * len(rs.roots)
    points = []
    for p, g in enumerate(groups):
        for k in g:
            root_point[k] = p
        points.append(PlanePoint(root_z[g[0]], g, tuple(sorted({orbit_of[k] for k in g}))))

    proj = {}
    for oid, orb in enumerate(orbits):
        radius = float(np.mean([abs(root_z[k]) for k in orb]))
        proj[oid] = OrbitProjection(radius, tuple(sorted({root_point[k] for k in orb})))

    return CoxeterPlaneDiagram(
        rs=rs,
        ce=ce,
        points=tuple(points),
        rays=rays,
        orbit_projections=proj,
        orbits=tuple(orbits),
        root_z=tuple(root_z),
        root_ray=root_ray,
        root_point=tuple(root_point),
        ray_keys=keys,
        exact=exact,
    )


def plane_type_a(n: int, ordering: Sequence[int] | None = None) -> CoxeterPlaneDiagram:
    """Coxeter Plane of sl(n+1) from the apposition formula.

    The root (i, j) is placed at w**j - w**i.  Writing d = (j - i) mod (n+1),
    this point has radius 2 sin(pi d/(n+1)) and angle pi/2 + pi (d + 2i)/(n+1),
    which is how rays and coincidences are decided exactly.  The Coxeter
    element acts as rotation by -2 pi/(n+1) for the default ordering.
    """
    if int(n) < 1:
        raise InvalidTypeError("n must be at least 1")
    n = int(n)
    s = n + 1
    rs = build_root_system("A", n)
    ce = coxeter_element(rs, ordering)
    w = cmath.exp(2j * math.pi / s)

    root_z, root_keys, exact_keys = [], [], []
    for root in rs.roots:
        i, j = root.label
        d = (j - i) % s
        r = (d + 2 * i) % (2 * s)
        root_z.append(w ** j - w ** i)
        root_keys.append((s + 2 * r) % (4 * s))
        exact_keys.append(((s + 2 * r) % (4 * s), min(d, s - d)))

    groups: dict[tuple[int, int], list[int]] = {}
    for k, key in enumerate(exact_keys):
        groups.setdefault(key, []).append(k)
    return _assemble(rs, ce, root_z, root_keys, list(groups.values()), exact=True)


def _eigenplane_projection(rs: RootSystem, ce: CoxeterElement) -> np.ndarray:
    s = rs.coxeter_number
    g = np.asarray(rs.gram, dtype=float)
    vals, vecs = np.linalg.eig(ce.matrix.astype(float))
    target = cmath.exp(2j * math.pi / s)
    k = int(np.argmin(np.abs(vals - target)))
    if abs(vals[k] - target) > 1e-8:
        raise ArithmeticError("Coxeter matrix has no eigenvalue exp(2 pi i/s)")
    v = vecs[:, k]
    norm = math.sqrt(float(np.real(np.conj(v) @ g @ v)))
    coords = rs.coords_array().astype(float)
    if s == 2:
        # rank one: the eigenvector is real and the "plane" is a line
        v = np.real(v * np.exp(-1j * np.angle(v[np.argmax(np.abs(v))])))
        return coords @ g @ v / math.sqrt(float(v @ g @ v)) + 0j
    return math.sqrt(2.0) * (coords @ g @ v) / norm


def plane_general(rs: RootSystem, ce: CoxeterElement | None = None) -> CoxeterPlaneDiagram:
    """Orthogonal projection of all roots onto the Coxeter eigenplane.

    The frame is orthonormal for the Gram inner product and is rotated so the
    lexicographically smallest root coordinate vector lands on the positive
    real axis.
    """
    ce = coxeter_element(rs) if ce is None else ce
    s = rs.coxeter_number
    z = _eigenplane_projection(rs, ce)
    if np.min(np.abs(z)) < MERGE_TOL:
        raise ArithmeticError("degenerate eigenplane: a root projects to the origin")
    ref = min(range(len(rs.roots)), key=lambda k: rs.roots[k].coords)
    z = z * (abs(z[ref]) / z[ref])
    root_z = [complex(v) for v in z]
    root_keys = [_ray_key_from_angle(cmath.phase(v) % (2 * math.pi), s) for v in root_z]
    # snap to the exact ray direction to remove eigen-decomposition noise
    root_z = [abs(v) * cmath.exp(1j * key * math.pi / (2 * s)) for v, key in zip(root_z, root_keys)]

    groups: list[list[int]] = []
    for k, v in enumerate(root_z):
        for g in groups:
            if abs(root_z[g[0]] - v) < MERGE_TOL:
                g.append(k)
                break
        else:
            groups.append([k])
    return _assemble(rs, ce, root_z, root_keys, groups, exact=False)


def masses(diagram: CoxeterPlaneDiagram, tol: float | None = None) -> dict[int, float]:
    """Radius of each Coxeter orbit's projection (the particle mass)."""
    tol = (1e-10 if diagram.exact else 1e-8) if tol is None else tol
    out = {}
    for oid, orb in enumerate(diagram.orbits):
        radii = [abs(diagram.root_z[k]) for k in orb]
        if max(radii) - min(radii) > tol:
            raise ArithmeticError(f"orbit {oid} does not lie on a single wheel")
        out[oid] = diagram.orbit_projections[oid].radius
    return out


def _positive_rays(diagram: CoxeterPlaneDiagram, ray_choice) -> list[int]:
    """Resolve ``ray_choice`` into ray indices, first ray first.

    ``ray_choice`` is either the index of the first positive ray or a sequence
    of s ray angles.  Positive rays run clockwise from the first one.
    """
    s = diagram.s
    nrays = len(diagram.rays)
    if isinstance(ray_choice, (int, np.integer)):
        first = int(ray_choice)
        if not 0 <= first < nrays:
            raise RaySelectionError(f"ray index {first} out of range 0..{nrays - 1}")
        return [(first - k) % nrays for k in range(s)]
    idx = {diagram.ray_index(float(a)) for a in ray_choice}
    if len(idx) != s:
        raise RaySelectionError(f"need {s} distinct rays, got {len(idx)}")
    for first in idx:
        run = [(first - k) % nrays for k in range(s)]
        if set(run) == idx:
            return run
    raise RaySelectionError("rays are not consecutive")


def fundamental_domain(diagram: CoxeterPlaneDiagram, ray_choice) -> tuple[int, ...]:
    """Roots on the first two positive rays.

    The result is checked against Pi_2 ∪ γ(-Pi_1), with Pi_2 and Pi_1 the
    roots on the first and last positive rays, and against the tiling of all
    roots by its images under powers of the Coxeter element.
    """
    rays = _positive_rays(diagram, ray_choice)
    dom = tuple(sorted(diagram.roots_on_ray(rays[0]) + diagram.roots_on_ray(rays[1])))

    rs, perm = diagram.rs, diagram.ce.root_perm
    pi2 = diagram.roots_on_ray(rays[0])
    pi1 = diagram.roots_on_ray(rays[-1])
    neg = [rs.index(-rs.roots[k]) for k in pi1]
    alt = tuple(sorted(set(pi2) | {perm[k] for k in neg}))
    if alt != dom:
        raise ArithmeticError("fundamental domain differs from Pi_2 ∪ γ(-Pi_1)")
    if not tiles_by_coxeter(diagram, dom):
        raise ArithmeticError("fundamental domain does not tile the roots")
    return dom


def tiles_by_coxeter(diagram: CoxeterPlaneDiagram, domain: Sequence[int]) -> bool:
    """True if the images of ``domain`` under γ^0..γ^(s-1) cover each root once."""
    perm = diagram.ce.root_perm
    seen = []
    cur = list(domain)
    for _ in range(diagram.s):
        seen.extend(cur)
        cur = [perm[k] for k in cur]
    return sorted(seen) == list(range(len(diagram.rs.roots)))


def _nonneg_integer_combination(basis: np.ndarray, vec: np.ndarray) -> bool:
    c = np.linalg.solve(basis.T, vec)
    r = np.rint(c)
    return bool(np.all(np.abs(c - r) < 1e-9) and np.all(r >= 0))


def positive_ray_selection(diagram: CoxeterPlaneDiagram, ray_choice) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Positive roots on s consecutive rays, and the simple roots among them."""
    rays = _positive_rays(diagram, ray_choice)
    pos = tuple(sorted(k for r in rays for k in diagram.roots_on_ray(r)))
    simple = tuple(sorted(diagram.roots_on_ray(rays[0]) + diagram.roots_on_ray(rays[-1])))
    rs = diagram.rs
    if len(pos) != len(rs.roots) // 2 or len(simple) != rs.rank:
        raise ArithmeticError("ray selection does not give a system of positive roots")
    coords = rs.coords_array().astype(float)
    basis = coords[list(simple)]
    for k in pos:
        if not _nonneg_integer_combination(basis, coords[k]):
            raise ArithmeticError(f"root {rs.roots[k].label_str()} is not a nonnegative combination")
    return pos, simple


def ith_plane_spin(n: int, i: int, root) -> float:
    """Length of the projection of a type-A root (a, b) onto the i-th plane."""
    if isinstance(root, Root):
        if root.label is None:
            raise InvalidTypeError("i-th Coxeter planes are only available for type A")
        root = root.label
    a, b = (int(v) for v in root)
    if not (1 <= i <= n) or a == b or not (0 <= a <= n and 0 <= b <= n):
        raise ValueError(f"invalid arguments n={n}, i={i}, root={root}")
    # exact zero when i*(b-a) is a multiple of n+1
    if (i * (b - a)) % (n + 1) == 0:
        return 0.0
    return 2.0 * abs(math.sin(math.pi * i * (b - a) / (n + 1)))
