"""Uniform spatial grids and wavefunctions in oscillator units.

Positions are in units of a0 = sqrt(hbar/(m*omega0)); the grid spans
[-half_width, half_width) with periodic FFT conventions, so
dx * n_points = 2 * half_width exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractError, GridError


@dataclass(frozen=True)
class SpatialGrid:
    n_points: int
    half_width: float

    def __post_init__(self):
        n = self.n_points
        if n < 256 or (n & (n - 1)) != 0:
            raise GridError(f"n_points must be a power of two >= 256, got {n}")
        if not self.half_width > 0:
            raise GridError(f"half_width must be > 0, got {self.half_width!r}")

    @property
    def dx(self) -> float:
        return 2.0 * self.half_width / self.n_points

    @property
    def x(self) -> np.ndarray:
        return -self.half_width + self.dx * np.arange(self.n_points)

    @property
    def k(self) -> np.ndarray:
        """Conjugate momentum grid (FFT ordering)."""
        return 2.0 * np.pi * np.fft.fftfreq(self.n_points, d=self.dx)


@dataclass
class WaveFunction:
    amplitudes: np.ndarray
    grid: SpatialGrid

    def norm(self) -> float:
        return float(
            np.sqrt(np.sum(np.abs(self.amplitudes) ** 2) * self.grid.dx)
        )

    def normalized(self, tol: float = 1e-6) -> bool:
        return abs(self.norm() - 1.0) <= tol

    def copy(self) -> "WaveFunction":
        return WaveFunction(self.amplitudes.copy(), self.grid)


def overlap_fidelity(psi: WaveFunction, target: WaveFunction) -> float:
    """|<target|psi>| on the shared grid (global phase discarded)."""
    if psi.grid != target.grid:
        raise ContractError("wavefunctions live on different grids")
    return float(
        abs(np.sum(np.conj(target.amplitudes) * psi.amplitudes) * psi.grid.dx)
    )
