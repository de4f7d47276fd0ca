"""Radial tt*-Toda connection problem for sl(n+1).

The radial system solved here is

    w_i'' + w_i'/x = 2 (e^{-2(w_{i-1} - w_i)} - e^{-2(w_i - w_{i+1})}),   i mod n+1,

with w_i ~ -m_i log x at 0 and w -> 0 at infinity.  It is discretized with
central differences on a grid uniform in log x and solved by damped Newton
iteration with a banded direct solve.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.linalg import solve_banded
from scipy.special import k0e

from . import kernels
from .connection import AsymptoticData, m_from_k, stokes_numbers

__all__ = [
    "TodaProblem",
    "TodaSolution",
    "UVFit",
    "IRFit",
    "residual",
    "residual_ode",
    "solve_connection",
    "extract_uv",
    "extract_ir",
    "verify_correspondence",
    "ir_profile",
    "CorrespondenceError",
]

log = logging.getLogger(__name__)

STEP_H = 0.0025
TAIL_FLOOR = 1e-5
F_FLOOR = 1e-14
DEGENERATE_XMIN = 1e-12


class CorrespondenceError(RuntimeError):
    def __init__(self, stage: str, message: str):
        super().__init__(f"{stage}: {message}")
        self.stage = stage


def _mass(n: int, k: int) -> float:
    return 2.0 * math.sin(k * math.pi / (n + 1))


@dataclass(frozen=True)
class TodaProblem:
    """Data of one solve.

    ``x_min``, ``x_max`` and ``nodes`` default to values derived from m:
    x_min is pushed down until x_min**p <= 1e-5 for the smallest exponent
    p_i = 2 + 2(m_{i-1} - m_i) (to 1e-12 when some p_i = 0),
    x_max = max(10/L_1, 10), and the node count keeps the log-step near
    0.0025 (never below 2000).
    """

    m: AsymptoticData
    x_min: float | None = None
    x_max: float | None = None
    nodes: int | None = None
    tol: float = 1e-10
    max_iter: int = 60
    damping: float = 1.0 / 64
    bc: str = "corrected"

    def __post_init__(self):
        if not isinstance(self.m, AsymptoticData):
            object.__setattr__(self, "m", AsymptoticData(tuple(self.m)))
        gaps = self.m.gaps()
        if np.any(gaps < -1 - 1e-12):
            raise ValueError(f"m violates the global-solution condition m_(i-1) - m_i >= -1: gaps {gaps}")
        if self.bc not in ("robin", "corrected"):
            raise ValueError("bc must be 'robin' or 'corrected'")
        xmin, xmax, nodes = self.grid()
        if not (xmin > 0 and xmax > xmin):
            raise ValueError("grid needs 0 < x_min < x_max")
        if nodes < 100:
            raise ValueError("node count must be at least 100")

    @property
    def n(self) -> int:
        return self.m.n

    @property
    def exponents(self) -> np.ndarray:
        return 2.0 + 2.0 * self.m.gaps()

    @property
    def degenerate(self) -> bool:
        return bool(np.any(np.abs(self.m.gaps() + 1.0) < 1e-12))

    @property
    def effective_tol(self) -> float:
        return self.tol * (10.0 if self.degenerate else 1.0)

    def grid(self) -> tuple[float, float, int]:
        if self.x_min is not None:
            xmin = float(self.x_min)
        else:
            p = float(np.min(self.exponents))
            # at p = 0 the corrections are only logarithmic, so go far down
            xmin = DEGENERATE_XMIN if p <= 1e-9 else min(1e-3, TAIL_FLOOR ** (1.0 / p))
            xmin = max(xmin, 1e-30)
        if self.x_max is not None:
            xmax = float(self.x_max)
        else:
            xmax = max(10.0 / _mass(self.n, 1), 10.0)
        if self.nodes is not None:
            nodes = int(self.nodes)
        else:
            span = math.log(xmax) - math.log(xmin) if xmax > xmin > 0 else 0.0
            nodes = max(2000, int(math.ceil(span / STEP_H)) + 1)
        return xmin, xmax, nodes

    def x(self) -> np.ndarray:
        xmin, xmax, nodes = self.grid()
        return np.exp(np.linspace(math.log(xmin), math.log(xmax), nodes))

    def step(self) -> float:
        xmin, xmax, nodes = self.grid()
        return (math.log(xmax) - math.log(xmin)) / (nodes - 1)

    def inv_p(self) -> np.ndarray:
        p = self.exponents
        if self.bc == "robin":
            return np.zeros_like(p)
        return np.where(p > 1e-9, 1.0 / np.where(p > 1e-9, p, 1.0), 0.0)


@dataclass(frozen=True)
class TodaSolution:
    problem: TodaProblem
    x: np.ndarray = field(repr=False)
    w: np.ndarray = field(repr=False)
    residual_norm: float
    converged: bool
    iterations: int
    flags: tuple[str, ...] = ()

    @property
    def n(self) -> int:
        return self.problem.n


def _scaled(problem: TodaProblem, w: np.ndarray, x: np.ndarray) -> np.ndarray:
    m = np.asarray(problem.m.m, dtype=float)
    return kernels.residual(np.ascontiguousarray(w), x * x, problem.step(), m, problem.inv_p())


def residual(problem: TodaProblem, w_samples: np.ndarray) -> np.ndarray:
    """Discretized residual on the problem grid, per node, in the x**2-scaled form."""
    w = np.asarray(w_samples, dtype=float)
    return _scaled(problem, w, problem.x())


def residual_ode(x: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Central-difference residual w'' + w'/x - 2(...) at interior nodes of any grid in log x.

    ``x`` must be log-uniform; returns rows for x[1:-1].
    """
    x = np.asarray(x, dtype=float)
    w = np.asarray(w, dtype=float)
    h = math.log(x[1] / x[0])
    wss = (w[2:] - 2 * w[1:-1] + w[:-2]) / (h * h)
    a = np.roll(w, 1, axis=1) - w
    em = np.expm1(-2.0 * a)
    nl = 2.0 * (em - np.roll(em, -1, axis=1))
    return wss / (x[1:-1, None] ** 2) - nl[1:-1]


def _initial_guess(problem: TodaProblem, x: np.ndarray, scale: float = 1.0) -> np.ndarray:
    m = np.asarray(problem.m.m) * scale
    cut = np.where(x < 1.0, 1.0 - 3.0 * x**2 + 2.0 * x**3, 0.0)
    return -np.log(x)[:, None] * cut[:, None] * m[None, :]


def roundoff_floor(problem: TodaProblem, m: np.ndarray | None = None) -> float:
    """Smallest residual the discrete equations can reach in double precision."""
    m = np.asarray(problem.m.m if m is None else m, dtype=float)
    wmax = 1.0 + float(np.max(np.abs(m))) * abs(math.log(problem.grid()[0]))
    return 64.0 * np.finfo(float).eps * wmax / problem.step() ** 2


def _newton(problem: TodaProblem, x: np.ndarray, w: np.ndarray, m: np.ndarray, max_iter: int, tol: float):
    h = problem.step()
    x2 = x * x
    ip = problem.inv_p()
    s = problem.n + 1

    def res(v):
        return kernels.residual(v, x2, h, m, ip)

    r = res(w)
    norm = float(np.max(np.abs(r)))
    it = 0
    while it < max_iter and norm >= tol:
        it += 1
        ab = kernels.jacobian_banded(w, x2, h, m, ip)
        try:
            d = solve_banded((s, s), ab, -r.ravel(), check_finite=False).reshape(w.shape)
        except (np.linalg.LinAlgError, ValueError) as exc:
            log.debug("banded solve failed: %s", exc)
            break
        lam = 1.0
        accepted = False
        while lam >= problem.damping:
            trial = w + lam * d
            trial -= trial.mean(axis=1, keepdims=True)
            with np.errstate(over="ignore", invalid="ignore"):
                rt = res(trial)
            nt = float(np.max(np.abs(rt)))
            if np.isfinite(nt) and (nt < norm * (1.0 - 1e-4 * lam) or nt < tol):
                accepted = True
                break
            lam *= 0.5
        if not accepted:
            log.debug("line search stalled at iteration %d (norm %.3e)", it, norm)
            return w, norm, it, False
        w, r, norm = trial, rt, nt
        log.debug("newton %d: |R|=%.3e step=%.4g", it, norm, lam)
    return w, norm, it, norm < tol


def solve_connection(problem: TodaProblem) -> TodaSolution:
    """Damped Newton solve; falls back to continuation in m from 0 if the direct attempt stalls."""
    x = problem.x()
    m = np.asarray(problem.m.m, dtype=float)
    flags = []
    if problem.degenerate:
        flags.append("degenerate")
    if not np.any(m):
        w = np.zeros((x.size, problem.n + 1))
        norm = float(np.max(np.abs(_scaled(problem, w, x))))
        return TodaSolution(problem, x, w, norm, norm < problem.effective_tol, 1, tuple(flags))

    # the second difference cannot resolve below eps * |w| / h**2
    tol = max(problem.effective_tol, roundoff_floor(problem))
    w, norm, it, ok = _newton(problem, x, _initial_guess(problem, x), m, problem.max_iter, tol)
    total = it
    if not ok:
        flags.append("continuation")
        w = np.zeros((x.size, problem.n + 1))
        for t in np.linspace(0.0, 1.0, 9)[1:]:
            w, norm, it, ok = _newton(problem, x, w, m * t, problem.max_iter, tol)
            total += it
            if not ok:
                break
    if ok:
        # a couple of extra steps push the error well below the stopping test
        w, norm, it, _ = _newton(problem, x, w, m, 2, 0.0)
        total += it
    return TodaSolution(problem, x, w, norm, bool(ok), total, tuple(flags))


@dataclass(frozen=True)
class UVFit:
    m_hat: tuple[float, ...]
    fit_error: tuple[float, ...]
    window: tuple[float, float]
    flagged: bool


def extract_uv(sol: TodaSolution, threshold: float = 1e-3) -> UVFit:
    """Slope of w_i against -log x over the smallest decade of the grid."""
    x = sol.x
    sel = x <= 10.0 * x[0]
    if np.count_nonzero(sel) < 3:
        sel = np.arange(x.size) < 3
    t = -np.log(x[sel])
    A = np.column_stack([t, np.ones_like(t)])
    coef, *_ = np.linalg.lstsq(A, sol.w[sel], rcond=None)
    fitted = A @ coef
    err = np.sqrt(np.mean((sol.w[sel] - fitted) ** 2, axis=0))
    return UVFit(
        tuple(float(v) for v in coef[0]),
        tuple(float(v) for v in err),
        (float(x[sel][0]), float(x[sel][-1])),
        bool(np.any(err > threshold)),
    )


def ir_profile(y: np.ndarray, profile: str = "bessel") -> np.ndarray:
    """F(y) = (1/2)(pi y)^(-1/2) e^(-2y), or its exact linear counterpart K_0(2y)/pi."""
    y = np.asarray(y, dtype=float)
    if profile == "asymptotic":
        return 0.5 / np.sqrt(np.pi * y) * np.exp(-2.0 * y)
    if profile == "bessel":
        return k0e(2.0 * y) * np.exp(-2.0 * y) / np.pi
    raise ValueError(f"unknown IR profile {profile!r}")


@dataclass(frozen=True)
class IRFit:
    s_hat: tuple[float, ...]
    windows: tuple[tuple[float, float], ...]
    rel_error: tuple[float, ...]
    profile: str
    flagged: bool


def c_modes(sol: TodaSolution) -> np.ndarray:
    """c_k(x) for k = 1..floor((n+1)/2), shape (K, len(x))."""
    n = sol.n
    half = (n - 1) // 2 + 1
    K = (n + 1) // 2
    out = np.empty((K, sol.x.size))
    for k in range(1, K + 1):
        coef = np.array([math.sin((2 * p + 1) * k * math.pi / (n + 1)) for p in range(half)])
        out[k - 1] = -(4.0 / (n + 1)) * (sol.w[:, :half] @ coef)
    return out


def extract_ir(sol: TodaSolution, profile: str = "bessel", window: tuple[float, float] = (0.6, 0.9)) -> IRFit:
    """Fit c_k(x) ~ s_k F(L_k x) on the tail window."""
    n = sol.n
    x = sol.x
    xmax = x[-1]
    if xmax < 8.0 / _mass(n, 1) - 1e-12:
        raise ValueError("extract_ir needs x_max >= 8/L_1")
    cs = c_modes(sol)
    s_hat, wins, errs = [], [], []
    flagged = False
    for k in range(1, cs.shape[0] + 1):
        F = ir_profile(_mass(n, k) * x, profile)
        sel = (x >= window[0] * xmax) & (x <= window[1] * xmax) & (F > F_FLOOR)
        if np.count_nonzero(sel) < 3:
            flagged = True
            s_hat.append(float("nan"))
            wins.append((float("nan"), float("nan")))
            errs.append(float("inf"))
            continue
        ratio = cs[k - 1, sel] / F[sel]
        est = float(np.mean(ratio))
        spread = float(np.std(ratio))
        rel = spread / abs(est) if est != 0 else spread
        s_hat.append(est)
        wins.append((float(x[sel][0]), float(x[sel][-1])))
        errs.append(rel)
    return IRFit(tuple(s_hat), tuple(wins), tuple(errs), profile, flagged)


def verify_correspondence(
    k_data: Sequence[float],
    N: float | None = None,
    *,
    rtol_ir: float = 0.05,
    rtol_uv: float = 0.02,
    problem_kwargs: dict | None = None,
) -> dict:
    """k -> m -> solve -> (m_hat, s_hat) compared against m and the esf Stokes numbers."""
    k = tuple(float(v) for v in k_data)
    n = len(k) - 1
    if n < 1:
        raise CorrespondenceError("input", "need at least two k values")
    if any(v < -1 - 1e-12 for v in k):
        raise CorrespondenceError("input", "all k_i must be >= -1")
    total = n + 1 + sum(k)
    if N is not None and abs(N - total) > 1e-12:
        raise CorrespondenceError("input", f"N={N} disagrees with n+1+sum(k)={total}")
    if total <= 0:
        raise CorrespondenceError("input", "N must be positive")
    try:
        m = m_from_k(k)
        predicted = stokes_numbers(m.m)
    except Exception as exc:
        raise CorrespondenceError("stokes", str(exc)) from exc
    try:
        sol = solve_connection(TodaProblem(m, **(problem_kwargs or {})))
    except Exception as exc:
        raise CorrespondenceError("solve", str(exc)) from exc
    if not sol.converged:
        raise CorrespondenceError("solve", f"Newton did not converge (residual {sol.residual_norm:.3e})")
    uv = extract_uv(sol)
    ir = extract_ir(sol)
    relax = 10.0 if sol.problem.degenerate else 1.0
    K = len(ir.s_hat)
    uv_ok = all(
        abs(a - b) <= rtol_uv * relax * max(abs(b), 1e-12) + 1e-8 for a, b in zip(uv.m_hat, m.m)
    )
    ir_ok = all(
        abs(ir.s_hat[j] - predicted[j]) <= rtol_ir * relax * max(abs(predicted[j]), 1e-12) + 1e-8
        for j in range(K)
    )
    return {
        "n": n,
        "k": list(k),
        "N": total,
        "m": list(m.m),
        "predicted_s": list(predicted),
        "converged": sol.converged,
        "iterations": sol.iterations,
        "residual_norm": sol.residual_norm,
        "flags": list(sol.flags),
        "m_hat": list(uv.m_hat),
        "s_hat": list(ir.s_hat),
        "ir_rel_error": list(ir.rel_error),
        "uv_pass": uv_ok,
        "ir_pass": ir_ok,
        "pass": bool(uv_ok and ir_ok),
    }
