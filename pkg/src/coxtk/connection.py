"""The connection form omega-hat for sl(n+1) and its Stokes data at lambda = 0.

Stokes numbers are evaluated from the closed elementary-symmetric formula;
:func:`character_crosscheck` recomputes them as characters of the exterior
powers by a different route (power sums and Newton's identities) and is
meant to be used as an oracle.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

__all__ = [
    "StokesConsistencyError",
    "UVData",
    "AsymptoticData",
    "OmegaHat",
    "StokesSpectrum",
    "VandermondeFrame",
    "m_from_k",
    "k_from_m",
    "build_omega_hat",
    "stokes_sectors",
    "stokes_factor_support",
    "stokes_numbers",
    "stokes_numbers_complex",
    "character_crosscheck",
    "t_from_z",
    "vandermonde_frame",
    "conjugated_root_vector",
    "minimal_model_k",
    "grassmannian_k",
]

ANGLE_TOL = 1e-9
IMAG_TOL = 1e-10


class StokesConsistencyError(ArithmeticError):
    """Stokes numbers failed an internal consistency check."""


@dataclass(frozen=True)
class UVData:
    n: int
    c: tuple[float, ...]
    k: tuple[float, ...]
    z: complex = 1.0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if len(self.c) != self.n + 1 or len(self.k) != self.n + 1:
            raise ValueError(f"c and k must have n+1 = {self.n + 1} entries")
        if any(ci <= 0 for ci in self.c):
            raise ValueError("all c_i must be positive")
        if self.z == 0:
            raise ValueError("z must be nonzero")
        if self.N <= 0:
            raise ValueError(f"N = n+1+sum(k) must be positive, got {self.N}")

    @classmethod
    def from_k(cls, k: Sequence[float], z: complex = 1.0, c: Sequence[float] | None = None) -> "UVData":
        n = len(k) - 1
        c = (1.0,) * (n + 1) if c is None else tuple(float(v) for v in c)
        return cls(n, c, tuple(float(v) for v in k), complex(z))

    @property
    def N(self) -> float:
        return self.n + 1 + sum(self.k)


@dataclass(frozen=True)
class AsymptoticData:
    m: tuple[float, ...]

    def __post_init__(self):
        if abs(sum(self.m)) > 1e-12 * max(1.0, max(abs(v) for v in self.m)):
            raise ValueError(f"m must be trace-free, sum = {sum(self.m)}")

    @property
    def n(self) -> int:
        return len(self.m) - 1

    def gaps(self) -> np.ndarray:
        """m_{i-1} - m_i for i = 0..n, cyclically (m_{-1} = m_n)."""
        m = np.asarray(self.m)
        return np.roll(m, 1) - m

    def is_symmetric(self, tol: float = 1e-12) -> bool:
        m = np.asarray(self.m)
        return bool(np.max(np.abs(m + m[::-1])) <= tol)


def m_from_k(k: Sequence[float]) -> AsymptoticData:
    """Solve m_{i-1} - m_i = (n+1)/N (k_i + 1) - 1, i = 1..n, with sum(m) = 0."""
    k = np.asarray(k, dtype=float)
    n = len(k) - 1
    N = n + 1 + k.sum()
    if N <= 0:
        raise ValueError(f"N = n+1+sum(k) must be positive, got {N}")
    gaps = (n + 1) / N * (k[1:] + 1) - 1
    rel = np.concatenate([[0.0], -np.cumsum(gaps)])
    m = rel - rel.mean()
    return AsymptoticData(tuple(float(v) for v in m))


def k_from_m(m: Sequence[float], N: float) -> tuple[float, ...]:
    """Inverse of :func:`m_from_k` for a chosen N (cyclic gaps, i = 0..n)."""
    gaps = AsymptoticData(tuple(m)).gaps()
    n = len(gaps) - 1
    return tuple(float(v) for v in N / (n + 1) * (gaps + 1) - 1)


def minimal_model_k(n: int) -> tuple[float, ...]:
    return (1.0,) + (0.0,) * n


def grassmannian_k(n: int) -> tuple[float, ...]:
    return (0.0,) + (-1.0,) * n


@dataclass(frozen=True)
class OmegaHat:
    uv: UVData
    eta: np.ndarray = field(repr=False)
    m: AsymptoticData
    N: float

    @property
    def leading(self) -> np.ndarray:
        """Coefficient of lambda**-2: -(s z/N) eta."""
        s = self.uv.n + 1
        return -(s * self.uv.z / self.N) * self.eta

    @property
    def residue(self) -> np.ndarray:
        return np.diag(np.asarray(self.m.m, dtype=complex))

    def coefficient(self, lam: complex) -> np.ndarray:
        """omega-hat / d lambda at ``lam``."""
        return self.leading / lam**2 + self.residue / lam


def build_omega_hat(uv: UVData) -> OmegaHat:
    """eta = sum c_i z**k_i e_{-alpha_i} and m for the given UV data.

    e_{-alpha_i} = E_{i,i-1} for i >= 1 and e_{-alpha_0} = E_{0,n}.
    """
    n = uv.n
    eta = np.zeros((n + 1, n + 1), dtype=complex)
    for i in range(n + 1):
        eta[i, (i - 1) % (n + 1)] = uv.c[i] * complex(uv.z) ** uv.k[i]
    return OmegaHat(uv, eta, m_from_k(uv.k), uv.N)


@dataclass(frozen=True)
class StokesSpectrum:
    n: int
    sector_boundary_angles: tuple[float, ...]
    sector_width: float
    factor_supports: dict[float, tuple[tuple[int, int], ...]] = field(default_factory=dict)
    s: tuple[float, ...] | None = None

    def sectors(self) -> list[tuple[float, float]]:
        """Open sectors (theta' - pi/2, theta'' + pi/2), theta'' = theta' + pi/(n+1)."""
        step = self.sector_width - math.pi
        return [(t - math.pi / 2, t + step + math.pi / 2) for t in self.sector_boundary_angles]


def _canon(angle: float) -> float:
    a = angle % (2 * math.pi)
    return 0.0 if abs(a - 2 * math.pi) < ANGLE_TOL else a


def _apposition_angle_key(n: int, i: int, j: int) -> int:
    """arg(w**j - w**i) = key * pi / (2(n+1)), key taken mod 4(n+1)."""
    s = n + 1
    d = (j - i) % s
    return (s + 2 * (d + 2 * i)) % (4 * s)


def stokes_sectors(n: int, m: AsymptoticData | None = None) -> StokesSpectrum:
    """Boundary angles arg(w**j - w**i) and the common sector width.

    Consecutive rays of the Coxeter Plane are pi/(n+1) apart, so the sector
    (theta' - pi/2, theta'' + pi/2) has width pi + pi/(n+1).  For n = 1 only
    two of the four rays carry points; the width is still taken on the ray
    lattice.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    s = n + 1
    keys = sorted({_apposition_angle_key(n, i, j) for i in range(s) for j in range(s) if i != j})
    angles = tuple(_canon(k * math.pi / (2 * s)) for k in keys)
    angles = tuple(sorted(angles))
    supports = {a: stokes_factor_support(n, a) for a in angles}
    svals = None if m is None else tuple(stokes_numbers(m))
    return StokesSpectrum(n, angles, math.pi + math.pi / s, supports, svals)


def stokes_factor_support(n: int, ray_angle: float) -> tuple[tuple[int, int], ...]:
    """Apposition roots (i, j) whose point w**j - w**i lies on ``ray_angle``."""
    s = n + 1
    q = (ray_angle % (2 * math.pi)) * 2 * s / math.pi
    key = round(q)
    if abs(q - key) > ANGLE_TOL * 2 * s / math.pi:
        raise ValueError(f"angle {ray_angle} is not a Stokes ray for n={n}")
    key %= 4 * s
    out = tuple(
        (i, j) for i in range(s) for j in range(s) if i != j and _apposition_angle_key(n, i, j) == key
    )
    if not out:
        raise ValueError(f"angle {ray_angle} is not a Stokes ray for n={n}")
    return out


def _esf_arguments(m: Sequence[float]) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    n = len(m) - 1
    j = np.arange(n + 1)
    return np.exp((2 * m + n - 2 * j) * math.pi * 1j / (n + 1))


def _elementary_symmetric(values: np.ndarray) -> np.ndarray:
    """sigma_0..sigma_len of ``values`` via prod (1 + v t)."""
    coeffs = np.zeros(len(values) + 1, dtype=complex)
    coeffs[0] = 1.0
    for v in values:
        coeffs[1:] = coeffs[1:] + v * coeffs[:-1]
    return coeffs


def _as_m(m) -> tuple[float, ...]:
    if isinstance(m, AsymptoticData):
        return m.m
    return AsymptoticData(tuple(float(v) for v in m)).m


def stokes_numbers_complex(m) -> np.ndarray:
    """sigma_1..sigma_n of the closed-formula arguments, without reality check."""
    sig = _elementary_symmetric(_esf_arguments(_as_m(m)))
    return sig[1:-1]


def stokes_numbers(m) -> list[float]:
    """Stokes numbers s_1..s_n; real whenever m_i = -m_{n-i}.

    Raises :class:`StokesConsistencyError` if the imaginary parts do not
    vanish to 1e-10 (m outside the symmetric class).
    """
    sig = stokes_numbers_complex(m)
    if sig.size and np.max(np.abs(sig.imag)) >= IMAG_TOL:
        raise StokesConsistencyError(
            f"Stokes numbers have imaginary part {np.max(np.abs(sig.imag)):.3e}; m is not antisymmetric"
        )
    return [float(v) for v in sig.real]


def character_crosscheck(m) -> np.ndarray:
    """chi_i(M) = tr(wedge^i M) for M = exp(2 pi i (m + x_0)/(n+1)).

    Computed from power traces tr(M^p) with Newton's identities, independently
    of :func:`stokes_numbers`.  Returns complex values chi_1..chi_n.
    """
    m = np.asarray(_as_m(m), dtype=float)
    n = len(m) - 1
    x0 = np.array([n / 2 - j for j in range(n + 1)])
    big_m = np.diag(np.exp(2j * math.pi * (m + x0) / (n + 1)))
    power = np.eye(n + 1, dtype=complex)
    p = []
    for _ in range(n + 1):
        power = power @ big_m
        p.append(np.trace(power))
    e = [1.0 + 0j]
    for k in range(1, n + 2):
        acc = sum((-1) ** (i - 1) * e[k - i] * p[i - 1] for i in range(1, k + 1))
        e.append(acc / k)
    return np.array(e[1:-1])


def t_from_z(uv: UVData, c_agg: float = 1.0) -> complex:
    """t = (s/N) c**(1/s) z**(N/s), principal branches."""
    if uv.z == 0:
        raise ValueError("z must be nonzero")
    if c_agg <= 0:
        raise ValueError("c_agg must be positive")
    s = uv.n + 1
    return (s / uv.N) * c_agg ** (1.0 / s) * complex(uv.z) ** (uv.N / s)


@dataclass(frozen=True)
class VandermondeFrame:
    n: int
    omega_matrix: np.ndarray = field(repr=False)
    d: np.ndarray = field(repr=False)

    @property
    def e_plus(self) -> np.ndarray:
        """E_+ = sum_i E_{i,i+1} + E_{n,0}."""
        s = self.n + 1
        return np.roll(np.eye(s), 1, axis=1)

    @property
    def e_minus(self) -> np.ndarray:
        return self.e_plus.T

    def diagonalization_error(self) -> float:
        lhs = np.linalg.solve(self.omega_matrix, self.e_plus @ self.omega_matrix)
        return float(np.max(np.abs(lhs - self.d)))


def vandermonde_frame(n: int) -> VandermondeFrame:
    s = n + 1
    w = np.exp(2j * math.pi / s)
    jk = np.outer(np.arange(s), np.arange(s))
    return VandermondeFrame(n, w ** jk, np.diag(w ** np.arange(s)))


def conjugated_root_vector(n: int, i: int, j: int, *, verify: bool = True) -> np.ndarray:
    """(1/(n+1)) d**i J d**-j, the root vector Omega E_ij Omega^-1 of the root ij."""
    s = n + 1
    if i == j or not (0 <= i <= n and 0 <= j <= n):
        raise ValueError(f"invalid root ({i}, {j}) for n={n}")
    w = cmath.exp(2j * math.pi / s)
    d = np.arange(s)
    out = np.outer(w ** (i * d), w ** (-j * d)) / s
    if verify:
        fr = vandermonde_frame(n)
        e = np.zeros((s, s))
        e[i, j] = 1.0
        direct = fr.omega_matrix @ e @ np.linalg.inv(fr.omega_matrix)
        err = float(np.max(np.abs(direct - out)))
        if err > 1e-12:
            raise ArithmeticError(f"root vector identity violated by {err:.3e}")
    return out
