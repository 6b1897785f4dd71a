"""Lorentzian reconstruction of time delay and the resonance-counting
integral n_R = (1/pi) * integral of T(E) dE = N + Delta."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import SpuriousIncluded
from .numerics import Curve, integrate
from .poles import Pole, RESONANCE

__all__ = [
    "CountReport",
    "ReconstructionReport",
    "lorentzian_sum",
    "count_resonances",
    "gamma_from_peak",
    "reconstruction_report",
]

_E_GUARD = 1e-6
_INTEGER_SNAP = 1e-9


@dataclass(frozen=True)
class CountReport:
    """n_R = N + Delta over an energy window."""

    n_R: float
    N: int
    Delta: float
    E_range: tuple[float, float]
    quadrature_tol: float
    evaluations: int
    near_integer: bool = False

    def to_dict(self) -> dict:
        return {
            "n_R": self.n_R,
            "N": self.N,
            "Delta": self.Delta,
            "E_range": list(self.E_range),
            "quadrature_tol": self.quadrature_tol,
            "evaluations": self.evaluations,
            "near_integer": self.near_integer,
        }


@dataclass(frozen=True)
class ReconstructionReport:
    max_rel_error: float
    l2_rel_error: float
    E_range: tuple[float, float]
    poles_used: int

    def to_dict(self) -> dict:
        return {
            "max_rel_error": self.max_rel_error,
            "l2_rel_error": self.l2_rel_error,
            "E_range": list(self.E_range),
            "poles_used": self.poles_used,
        }


def lorentzian_sum(poles: Sequence[Pole], E: float) -> float:
    """Sum of Breit-Wigner profiles (hbar = 1) over resonance poles.

    Raises :class:`SpuriousIncluded` for poles not classified Resonance:
    spurious roots spoil the reconstruction and must be filtered upstream.
    """
    total = 0.0
    for p in poles:
        if p.classification != RESONANCE:
            raise SpuriousIncluded(f"pole at {p.energy} is {p.classification}")
        g = p.gamma
        total += (g / 2.0) / ((E - p.position) ** 2 + g * g / 4.0)
    return total


def count_resonances(
    delay: Callable[[float], float],
    E_lo: float,
    E_hi: float,
    tol: float = 1e-8,
) -> CountReport:
    """Resonance-counting integral n_R = (1/pi) * integral of the delay."""
    if not (0 <= E_lo < E_hi):
        raise ValueError("require 0 <= E_lo < E_hi")
    lo = max(E_lo, _E_GUARD)
    quad = integrate(delay, lo, E_hi, tol)
    n_r = quad.value / math.pi
    n_floor = math.floor(n_r)
    delta = n_r - n_floor
    near_int = min(delta, 1.0 - delta) < _INTEGER_SNAP
    return CountReport(
        n_R=n_r,
        N=int(n_floor),
        Delta=delta,
        E_range=(E_lo, E_hi),
        quadrature_tol=tol,
        evaluations=quad.evaluations,
        near_integer=near_int,
    )


def gamma_from_peak(peak_height: float) -> float:
    """Width from peak height: Gamma = 2*hbar / height (hbar = 1)."""
    if peak_height <= 0:
        raise ValueError("peak height must be positive")
    return 2.0 / peak_height


def reconstruction_report(exact: Curve, poles: Sequence[Pole]) -> ReconstructionReport:
    """Relative-error metrics of the Lorentzian sum against an exact curve.

    Samples where the exact value falls below 1% of the curve maximum are
    excluded: there the tails of omitted higher poles dominate the ratio.
    """
    if len(exact) == 0:
        raise ValueError("curve must be nonempty")
    approx = np.array([lorentzian_sum(poles, E) for E in exact.energies])
    cutoff = 0.01 * float(np.max(exact.values))
    mask = exact.values > cutoff
    if not np.any(mask):
        raise ValueError("no samples above the tail cutoff")
    rel = (approx[mask] - exact.values[mask]) / exact.values[mask]
    return ReconstructionReport(
        max_rel_error=float(np.max(np.abs(rel))),
        l2_rel_error=float(np.sqrt(np.mean(rel**2))),
        E_range=(float(exact.energies[0]), float(exact.energies[-1])),
        poles_used=len(poles),
    )
