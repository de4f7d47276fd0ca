"""Root systems of the simple Lie algebras, Coxeter elements and their orbits.

Roots are stored as integer coefficient vectors in the basis of simple roots
(Bourbaki numbering), so every combinatorial statement is exact.  The only
floating point object is the Gram matrix of the simple roots, normalized so
that long roots have squared length 2.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "InvalidTypeError",
    "CartanDatum",
    "Root",
    "RootSystem",
    "CoxeterElement",
    "build_root_system",
    "coxeter_element",
    "coxeter_orbits",
    "inner_product",
    "blackwhite_decomposition",
    "VALID_TYPES",
]

EXPONENT_TOL = 1e-6


class InvalidTypeError(ValueError):
    """Raised for a (family, rank) pair that is not a simple Lie type."""


def _valid(family: str, rank: int) -> bool:
    if family == "A":
        return rank >= 1
    if family in ("B", "C"):
        return rank >= 2
    if family == "D":
        return rank >= 4
    if family == "E":
        return rank in (6, 7, 8)
    if family == "F":
        return rank == 4
    if family == "G":
        return rank == 2
    return False


def _all_types(max_rank: int = 8) -> tuple[tuple[str, int], ...]:
    out = []
    for fam in "ABCDEFG":
        for r in range(1, max_rank + 1):
            if _valid(fam, r):
                out.append((fam, r))
    return tuple(out)


VALID_TYPES = _all_types()


def _gram(family: str, l: int) -> np.ndarray:
    """Inner products of simple roots; long roots have (a, a) = 2."""
    g = np.zeros((l, l))

    def bond(i, j, val):
        g[i, j] = g[j, i] = val

    if family == "A":
        np.fill_diagonal(g, 2.0)
        for i in range(l - 1):
            bond(i, i + 1, -1.0)
    elif family == "B":
        np.fill_diagonal(g, 2.0)
        g[l - 1, l - 1] = 1.0
        for i in range(l - 1):
            bond(i, i + 1, -1.0)
    elif family == "C":
        np.fill_diagonal(g, 1.0)
        g[l - 1, l - 1] = 2.0
        for i in range(l - 2):
            bond(i, i + 1, -0.5)
        bond(l - 2, l - 1, -1.0)
    elif family == "D":
        np.fill_diagonal(g, 2.0)
        for i in range(l - 2):
            bond(i, i + 1, -1.0)
        bond(l - 3, l - 1, -1.0)
    elif family == "E":
        np.fill_diagonal(g, 2.0)
        # Bourbaki: 1-3-4-5-...-l with 2 attached to 4
        bond(0, 2, -1.0)
        bond(1, 3, -1.0)
        for i in range(2, l - 1):
            bond(i, i + 1, -1.0)
    elif family == "F":
        g[:] = np.diag([2.0, 2.0, 1.0, 1.0])
        bond(0, 1, -1.0)
        bond(1, 2, -1.0)
        bond(2, 3, -0.5)
    elif family == "G":
        g[:] = np.diag([2.0 / 3.0, 2.0])
        bond(0, 1, -1.0)
    return g


@dataclass(frozen=True)
class CartanDatum:
    family: str
    rank: int
    cartan_matrix: np.ndarray = field(repr=False)
    marks: tuple[int, ...]
    coxeter_number: int
    exponents: tuple[int, ...]

    @property
    def name(self) -> str:
        return f"{self.family}{self.rank}"


@dataclass(frozen=True)
class Root:
    """A root as integer coefficients over the simple roots.

    ``label`` is the pair (i, j) standing for x_i - x_j; it is only set for
    type A.
    """

    coords: tuple[int, ...]
    label: tuple[int, int] | None = None

    @property
    def height(self) -> int:
        return sum(self.coords)

    @property
    def is_positive(self) -> bool:
        return all(c >= 0 for c in self.coords)

    def __neg__(self) -> "Root":
        lab = None if self.label is None else (self.label[1], self.label[0])
        return Root(tuple(-c for c in self.coords), lab)

    def label_str(self) -> str:
        if self.label is not None:
            return f"{self.label[0]}{self.label[1]}"
        return "(" + ",".join(str(c) for c in self.coords) + ")"


@dataclass(frozen=True)
class RootSystem:
    datum: CartanDatum
    roots: tuple[Root, ...]
    simple_roots: tuple[Root, ...]
    highest_root: Root
    gram: np.ndarray = field(repr=False)
    _index: dict = field(repr=False, compare=False, default_factory=dict)

    @property
    def rank(self) -> int:
        return self.datum.rank

    @property
    def coxeter_number(self) -> int:
        return self.datum.coxeter_number

    def index(self, root: Root | Sequence[int]) -> int:
        """Position of ``root`` in :attr:`roots` (KeyError if not a root)."""
        coords = root.coords if isinstance(root, Root) else tuple(int(c) for c in root)
        return self._index[coords]

    def coords_array(self) -> np.ndarray:
        return np.array([r.coords for r in self.roots], dtype=np.int64)

    def label_index(self, i: int, j: int) -> int:
        """Index of the type-A root x_i - x_j."""
        if self.datum.family != "A":
            raise InvalidTypeError("labels (i, j) exist only for type A")
        return self.index(_type_a_coords(self.rank, i, j))


@dataclass(frozen=True)
class CoxeterElement:
    ordering: tuple[int, ...]
    matrix: np.ndarray = field(repr=False)
    root_perm: tuple[int, ...] = field(repr=False)

    def order(self) -> int:
        m = np.eye(self.matrix.shape[0], dtype=np.int64)
        for k in range(1, 10 * self.matrix.shape[0] + 10):
            m = self.matrix @ m
            if np.array_equal(m, np.eye(m.shape[0], dtype=np.int64)):
                return k
        raise RuntimeError("Coxeter element of unexpectedly large order")

    def power_perm(self, k: int) -> tuple[int, ...]:
        perm = tuple(range(len(self.root_perm)))
        for _ in range(k % self.order()):
            perm = tuple(self.root_perm[p] for p in perm)
        return perm


def _type_a_coords(n: int, i: int, j: int) -> tuple[int, ...]:
    if i == j or not (0 <= i <= n and 0 <= j <= n):
        raise ValueError(f"invalid type-A root label ({i}, {j}) for n={n}")
    lo, hi = min(i, j), max(i, j)
    sign = 1 if i < j else -1
    return tuple(sign if lo < k + 1 <= hi else 0 for k in range(n))


def _type_a_label(coords: tuple[int, ...]) -> tuple[int, int]:
    nz = [k for k, c in enumerate(coords) if c != 0]
    lo, hi = nz[0], nz[-1] + 1
    return (lo, hi) if coords[nz[0]] > 0 else (hi, lo)


def _reflection_matrices(cartan: np.ndarray) -> list[np.ndarray]:
    """r_i(b) = b - <b, a_i^v> a_i, as integer matrices on coordinates."""
    l = cartan.shape[0]
    mats = []
    for i in range(l):
        r = np.eye(l, dtype=np.int64)
        r[i, :] -= cartan[i, :]
        mats.append(r)
    return mats


def _closure(cartan: np.ndarray, order: Iterable[int]) -> set[tuple[int, ...]]:
    l = cartan.shape[0]
    order = list(order)
    refl = _reflection_matrices(cartan)
    simple = [tuple(int(v) for v in np.eye(l, dtype=np.int64)[i]) for i in order]
    seen = set(simple)
    queue = deque(simple)
    while queue:
        b = np.array(queue.popleft(), dtype=np.int64)
        for i in order:
            rb = tuple(int(v) for v in refl[i] @ b)
            if rb not in seen:
                seen.add(rb)
                queue.append(rb)
    return seen


def _coxeter_matrix(cartan: np.ndarray, ordering: Sequence[int]) -> np.ndarray:
    refl = _reflection_matrices(cartan)
    m = np.eye(cartan.shape[0], dtype=np.int64)
    # ordering lists reflections in order of application
    for i in ordering:
        m = refl[i] @ m
    return m


def _exponents(matrix: np.ndarray, s: int) -> tuple[int, ...]:
    eig = np.linalg.eigvals(matrix.astype(float))
    out = []
    for z in eig:
        k = np.angle(z) * s / (2 * np.pi)
        kr = round(k)
        if abs(k - kr) > EXPONENT_TOL or abs(abs(z) - 1) > EXPONENT_TOL:
            raise ArithmeticError(f"eigenvalue {z} is not an s-th root of unity")
        out.append(kr % s)
    return tuple(sorted(out))


def build_root_system(family: str, rank: int, *, closure_order: Sequence[int] | None = None) -> RootSystem:
    """Generate the root system of type ``family``/``rank`` by reflection closure.

    Roots are ordered deterministically: positive roots by height, ties broken
    so that earlier simple roots come first, followed by their negatives in
    the same order.
    """
    family = str(family).upper()
    try:
        rank = int(rank)
    except (TypeError, ValueError):
        raise InvalidTypeError(f"rank must be an integer, got {rank!r}") from None
    if not _valid(family, rank):
        raise InvalidTypeError(f"{family}{rank} is not a simple Lie type")

    gram = _gram(family, rank)
    cartan = np.rint(2 * gram / np.diag(gram)[:, None]).astype(np.int64)
    order = range(rank) if closure_order is None else closure_order
    found = _closure(cartan, order)

    pos = sorted((c for c in found if all(v >= 0 for v in c)), key=lambda c: (sum(c), tuple(-v for v in c)))
    coords = pos + [tuple(-v for v in c) for c in pos]
    if len(coords) != len(found):
        raise ArithmeticError("reflection closure produced a root that is neither positive nor negative")

    highest = pos[-1]
    marks = tuple(highest)
    s = 1 + sum(marks)
    exps = _exponents(_coxeter_matrix(cartan, range(rank)), s)

    is_a = family == "A"
    roots = tuple(Root(c, _type_a_label(c) if is_a else None) for c in coords)
    datum = CartanDatum(family, rank, cartan, marks, s, exps)
    cartan.setflags(write=False)
    gram.setflags(write=False)
    index = {r.coords: k for k, r in enumerate(roots)}
    return RootSystem(
        datum=datum,
        roots=roots,
        simple_roots=roots[:rank],
        highest_root=roots[len(pos) - 1],
        gram=gram,
        _index=index,
    )


def coxeter_element(rs: RootSystem, ordering: Sequence[int] | None = None) -> CoxeterElement:
    """Product of the simple reflections, applied in the order given.

    ``ordering`` holds 0-based simple-root indices; ``ordering[0]`` acts first.
    With the identity ordering in type A the induced permutation of labels is
    (i, j) -> (i-1, j-1) mod n+1.
    """
    l = rs.rank
    ordering = tuple(range(l)) if ordering is None else tuple(int(i) for i in ordering)
    if sorted(ordering) != list(range(l)):
        raise ValueError(f"ordering {ordering} is not a permutation of 0..{l - 1}")
    m = _coxeter_matrix(rs.datum.cartan_matrix, ordering)
    images = rs.coords_array() @ m.T
    perm = tuple(rs.index(tuple(row)) for row in images)
    m.setflags(write=False)
    return CoxeterElement(ordering, m, perm)


def coxeter_orbits(ce: CoxeterElement, rs: RootSystem) -> list[tuple[int, ...]]:
    """Orbits of ``ce`` on root indices, ordered by their smallest member."""
    if len(ce.root_perm) != len(rs.roots):
        raise ValueError("Coxeter element was not built from this root system")
    seen = [False] * len(rs.roots)
    orbits = []
    for start in range(len(rs.roots)):
        if seen[start]:
            continue
        orb = []
        k = start
        while not seen[k]:
            seen[k] = True
            orb.append(k)
            k = ce.root_perm[k]
        orbits.append(tuple(orb))
    return orbits


def inner_product(rs: RootSystem, a, b) -> float:
    ca = np.asarray(a.coords if isinstance(a, Root) else a, dtype=float)
    cb = np.asarray(b.coords if isinstance(b, Root) else b, dtype=float)
    return float(ca @ rs.gram @ cb)


def blackwhite_decomposition(rs: RootSystem) -> tuple[tuple[Root, ...], tuple[Root, ...]]:
    """Two-colouring of the Dynkin diagram, returned as (Pi_1, Pi_2).

    The first simple root is always placed in Pi_2.
    """
    a = rs.datum.cartan_matrix
    l = rs.rank
    colour = [-1] * l
    colour[0] = 2
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for j in range(l):
            if j != i and a[i, j] != 0 and colour[j] < 0:
                colour[j] = 3 - colour[i]
                queue.append(j)
    pi1 = tuple(rs.simple_roots[i] for i in range(l) if colour[i] == 1)
    pi2 = tuple(rs.simple_roots[i] for i in range(l) if colour[i] == 2)
    return pi1, pi2
