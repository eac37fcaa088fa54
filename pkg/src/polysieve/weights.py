"""Product weights W(x) = prod psi(x_i / B) and their Fourier transforms.

The smooth profile is 1 on [-1, 1], 0 outside (-2, 2), and on (1, 2) equals
s(2-t) / (s(2-t) + s(t-1)) with s(x) = exp(-1/x).  Its transform is
sin(2 pi s)/(pi s) from the plateau plus twice a cosine integral over [1, 2],
evaluated by adaptive quadrature.
"""

from __future__ import annotations

import functools
import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import integrate
from scipy.special import expit

BUMPS = ("smooth", "indicator")


@dataclass(frozen=True)
class SmoothWeightSpec:
    B: float
    bump: str = "smooth"
    M: int = 6

    def __post_init__(self):
        if self.B <= 0:
            raise ValueError("B must be positive")
        if self.bump not in BUMPS:
            raise ValueError(f"unknown bump {self.bump!r}; choose from {BUMPS}")

    @property
    def support(self) -> int:
        """Largest integer coordinate with possibly nonzero weight."""
        return math.ceil(2 * self.B) - 1 if self.bump == "smooth" else math.floor(self.B)

    @property
    def mass(self) -> float:
        """Integral of the 1-D profile."""
        return 3.0 if self.bump == "smooth" else 2.0


def psi(t, bump: str = "smooth"):
    """The 1-D profile, vectorized."""
    arr = np.abs(np.asarray(t, dtype=float))
    flat = np.atleast_1d(arr)
    if bump == "indicator":
        out = (flat <= 1).astype(float)
    else:
        out = np.where(flat <= 1, 1.0, 0.0)
        mid = (flat > 1) & (flat < 2)
        tm = flat[mid]
        with np.errstate(divide="ignore", over="ignore"):
            out[mid] = expit(1.0 / (tm - 1.0) - 1.0 / (2.0 - tm))
    return out.reshape(arr.shape) if arr.ndim else float(out[0])


def weight_eval(w: SmoothWeightSpec, x: Sequence[float]) -> float:
    x = np.asarray(x, dtype=float)
    return float(np.prod(psi(x / w.B, w.bump)))


def weight_grid_1d(w: SmoothWeightSpec, coords: np.ndarray) -> np.ndarray:
    return psi(np.asarray(coords, dtype=float) / w.B, w.bump)


@functools.lru_cache(maxsize=1 << 16)
def psi_hat(s: float, bump: str = "smooth") -> tuple[float, float]:
    """(value, absolute error estimate) of the 1-D transform at frequency s."""
    s = abs(float(s))
    if s == 0.0:
        return (3.0, 1e-15) if bump == "smooth" else (2.0, 0.0)
    plateau = math.sin(2 * math.pi * s) / (math.pi * s)
    if bump == "indicator":
        return plateau, 4e-16 * (1 + abs(plateau))

    def edge(t):
        return float(expit(1.0 / (t - 1.0) - 1.0 / (2.0 - t))) if 1.0 < t < 2.0 else (1.0 if t <= 1 else 0.0)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, err = integrate.quad(edge, 1.0, 2.0, weight="cos", wvar=2 * math.pi * s,
                                  epsabs=1e-15, epsrel=1e-13, limit=500)
    return plateau + 2 * val, 2 * err + 4e-16 * (1 + abs(plateau))


def weight_fourier_1d(w: SmoothWeightSpec, t: float) -> tuple[float, float]:
    """w-hat(t) = B * psi-hat(B t) with its error estimate."""
    v, e = psi_hat(round(w.B * t, 14), w.bump)
    return w.B * v, w.B * e


def weight_fourier(w: SmoothWeightSpec, t: Sequence[float]) -> tuple[float, float]:
    """(W-hat(t), error estimate) for the product weight."""
    val, err = 1.0, 0.0
    for ti in t:
        v, e = weight_fourier_1d(w, ti)
        # |ab - a'b'| <= |a||b-b'| + |b'||a-a'|
        err = abs(val) * e + (abs(v) + e) * err
        val *= v
    return val, err


@functools.cache
def decay_constant(M: int, bump: str = "smooth", s_max: float = 60.0, step: float = 0.05,
                   safety: float = 2.0) -> float:
    """Measured sup of |psi-hat(s)| (1+s)^M over a grid, times a safety factor.

    This is the constant in |psi-hat(s)| <= C (1+|s|)^(-M); it is measured,
    not proven, and the tail bounds built on it inherit that status.
    """
    if bump == "indicator":
        raise ValueError("the indicator profile has no polynomial decay beyond order 1")
    grid = np.arange(0.0, s_max + step / 2, step)
    vals = []
    for s in grid:
        v, e = psi_hat(float(s), bump)
        vals.append((abs(v) + e) * (1 + s) ** M)
    best = max(vals)
    # the sup must be attained well inside the grid, otherwise it is not measured
    if max(vals[-len(vals) // 10:]) > 1e-2 * best:
        raise ValueError(f"decay order M={M} is not resolved on [0, {s_max}]")
    return safety * best


def fourier_tail_1d(w: SmoothWeightSpec, L: float, trunc: int) -> float:
    """Bound for sum over integers |u| > trunc of |w-hat(u/L)|."""
    M = w.M
    if M < 2:
        raise ValueError("tail bound needs M >= 2")
    C = decay_constant(M, w.bump)
    # sum_{u>T} B C (1 + B u/L)^-M <= B C int_T^inf (1 + B x/L)^-M dx
    one_side = C * L / (M - 1) * (1 + w.B * trunc / L) ** (1 - M)
    return 2 * one_side


def fourier_abs_sum(w: SmoothWeightSpec, L: float, radius: int) -> float:
    """Sum over u in [-radius, radius]^n is the n-th power of this 1-D sum."""
    return math.fsum(abs(weight_fourier_1d(w, u / L)[0]) for u in range(-radius, radius + 1))
