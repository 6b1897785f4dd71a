"""Tabulated phase-shift analysis: ingest a CSV of elastic phase shifts
versus total c.m. energy, differentiate to a time-delay curve, and extract
resonance mass, width and the counting integral.

Input CSV format: UTF-8, '#' comment lines, header ``W_MeV,delta_deg`` with
an optional third column ``err_deg``, decimal point '.', no thousands
separators.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .counting import gamma_from_peak
from .errors import MonotonicityError, NoPeak, ParseError, TooFewRows
from .numerics import Curve, find_extrema

__all__ = [
    "PhaseTable",
    "ResonanceReport",
    "parse_phase_table",
    "load_bundled_p33",
    "delay_from_table",
    "extract_resonance",
    "synth_phase_table",
]

_MIN_ROWS = 5


@dataclass(frozen=True)
class PhaseTable:
    """Rows of (W [MeV], delta [deg], optional uncertainty [deg])."""

    W: np.ndarray
    delta_deg: np.ndarray
    err_deg: np.ndarray | None = None
    source: str = ""

    def __post_init__(self):
        if len(self.W) < _MIN_ROWS:
            raise TooFewRows(f"need at least {_MIN_ROWS} rows, got {len(self.W)}")
        if not np.all(np.diff(self.W) > 0):
            raise MonotonicityError("W must be strictly increasing")
        if np.any(np.abs(self.delta_deg) > 360):
            raise ParseError("|delta| exceeds 360 degrees")

    def __len__(self):
        return len(self.W)


@dataclass(frozen=True)
class ResonanceReport:
    M: float  # MeV, delay-peak position
    Gamma: float  # MeV, from 2/peak-height
    n_R: float
    W_range: tuple[float, float]

    def __post_init__(self):
        if not (self.W_range[0] <= self.M <= self.W_range[1]):
            raise ValueError("peak position outside the analysis window")
        if self.Gamma <= 0:
            raise ValueError("Gamma must be positive")

    def to_dict(self) -> dict:
        return {
            "M_MeV": self.M,
            "Gamma_MeV": self.Gamma,
            "n_R": self.n_R,
            "W_range": list(self.W_range),
        }


def parse_phase_table(text: str, source: str = "") -> PhaseTable:
    """Parse and validate a phase-shift CSV (see module docstring)."""
    header = None
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if header is None:
            cols = [c.strip() for c in line.split(",")]
            if cols[:2] != ["W_MeV", "delta_deg"] or (
                len(cols) == 3 and cols[2] != "err_deg"
            ) or len(cols) > 3:
                raise ParseError(f"bad header {line!r}", lineno)
            header = cols
            continue
        parts = [c.strip() for c in line.split(",")]
        if len(parts) != len(header):
            raise ParseError(
                f"expected {len(header)} fields, got {len(parts)}", lineno
            )
        try:
            vals = [float(p) for p in parts]
        except ValueError:
            raise ParseError(f"non-numeric field in {line!r}", lineno) from None
        rows.append((lineno, vals))
    if header is None:
        raise ParseError("missing header line")
    if len(rows) < _MIN_ROWS:
        raise TooFewRows(f"need at least {_MIN_ROWS} rows, got {len(rows)}")
    w = np.array([r[1][0] for r in rows])
    for i in range(1, len(w)):
        if w[i] <= w[i - 1]:
            raise MonotonicityError(
                f"W = {w[i]} does not increase past {w[i - 1]}", rows[i][0]
            )
    delta = np.array([r[1][1] for r in rows])
    err = np.array([r[1][2] for r in rows]) if len(header) == 3 else None
    return PhaseTable(W=w, delta_deg=delta, err_deg=err, source=source)


def load_bundled_p33() -> PhaseTable:
    """The pi+ p P33 phase-shift table shipped with the package."""
    text = (
        resources.files("resdelay").joinpath("data/p33_pip_p.csv").read_text("utf-8")
    )
    return parse_phase_table(text, source="bundled p33_pip_p.csv")


def _unwrap_half_turns(delta_rad: np.ndarray) -> np.ndarray:
    """Continuity-unwrap across +-180 degree jumps (phase defined mod pi)."""
    out = delta_rad.copy()
    offset = 0.0
    for i in range(1, len(out)):
        d = delta_rad[i] + offset - out[i - 1]
        while d > math.pi / 2:
            offset -= math.pi
            d -= math.pi
        while d < -math.pi / 2:
            offset += math.pi
            d += math.pi
        out[i] = delta_rad[i] + offset
    return out


def _moving_average(y: np.ndarray, window: int) -> np.ndarray:
    if window == 1:
        return y
    pad = window // 2
    padded = np.concatenate([np.repeat(y[0], pad), y, np.repeat(y[-1], pad)])
    kernel = np.full(window, 1.0 / window)
    return np.convolve(padded, kernel, mode="valid")


def delay_from_table(table: PhaseTable, smooth_window: int = 1) -> Curve:
    """Time delay d(delta)/dW in radians per MeV from a phase table.

    Degrees are converted to radians, +-180 degree jumps unwrapped, an
    optional centered moving average applied, then central differences taken
    on the (possibly nonuniform) grid.
    """
    if smooth_window < 1 or smooth_window % 2 == 0:
        raise ValueError("smooth_window must be an odd integer >= 1")
    delta = _unwrap_half_turns(np.radians(table.delta_deg))
    delta = _moving_average(delta, smooth_window)
    d = np.gradient(delta, table.W)
    return Curve(table.W, d, label="time_delay_per_MeV")


def extract_resonance(curve: Curve, W_lo: float, W_hi: float) -> ResonanceReport:
    """Resonance mass/width from the highest delay peak plus the counting
    integral (trapezoidal on the data grid) over [W_lo, W_hi]."""
    mask = (curve.energies >= W_lo) & (curve.energies <= W_hi)
    if int(np.sum(mask)) < 3:
        raise ValueError("window contains fewer than 3 samples")
    sub = Curve(curve.energies[mask], curve.values[mask], label=curve.label)
    maxima = [p for p in find_extrema(sub) if p.kind == "max"]
    if not maxima:
        raise NoPeak(f"no interior maximum in [{W_lo}, {W_hi}]")
    best = max(maxima, key=lambda p: p.height)
    n_r = float(np.trapezoid(sub.values, sub.energies)) / math.pi
    return ResonanceReport(
        M=best.position,
        Gamma=gamma_from_peak(best.height),
        n_R=n_r,
        W_range=(W_lo, W_hi),
    )


def synth_phase_table(
    M: float,
    Gamma: float,
    background_slope: float,
    W_lo: float,
    W_hi: float,
    n: int,
) -> PhaseTable:
    """Synthetic Breit-Wigner phase table (degrees) on a uniform grid.

    delta(W) = arctan((Gamma/2)/(M - W)) unwrapped to rise through 90 deg at
    W = M, plus a linear background (slope in rad/MeV).
    """
    if n < _MIN_ROWS:
        raise ValueError(f"need n >= {_MIN_ROWS}")
    if Gamma <= 0:
        raise ValueError("Gamma must be positive")
    w = np.linspace(W_lo, W_hi, n)
    delta = np.arctan2(Gamma / 2.0, M - w) + background_slope * (w - W_lo)
    return PhaseTable(
        W=w, delta_deg=np.degrees(delta), source="synthetic Breit-Wigner"
    )
