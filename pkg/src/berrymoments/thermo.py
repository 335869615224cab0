"""Free energy, ground-state field response and reduced susceptibility.

Units: ``k_B = 1`` and ``g mu_B = 1``, so temperatures and fields are in the
energy units of ``w``. The reduced susceptibility is
``chi = -d^2 F / dh^2`` at ``h -> 0``; the physical value is
``(g mu_B)^2 chi``. Tabulated low-temperature forms carry a factor
``(g J mu_B)^2``, hence compare against ``J^2`` times the table entry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .gauge import assign_phases
from .geometry import Coordination, build_geometry
from .halfint import as_half_integer
from .hamiltonian import build_tunneling
from .spectra import DEGENERACY_TOL, degeneracy_groups, eigenvalues, eigh

__all__ = [
    "GroundMultiplet",
    "LowTLimit",
    "ThermoCurve",
    "finite_difference_step",
    "free_energy",
    "free_energy_shift",
    "ground_multiplet",
    "ground_state_expansion",
    "linear_response_susceptibility",
    "low_T_limit",
    "susceptibility",
    "susceptibility_curve",
]

MOMENT_TOL = 1e-6


class _Model:
    """Tunnelling matrix plus site projections for one field direction."""

    def __init__(self, coordination, J, w, direction=None):
        self.coordination = Coordination.parse(coordination)
        self.geometry = build_geometry(self.coordination)
        self.J = as_half_integer(J)
        self.w = float(w)
        if direction is None:
            direction = self.coordination.reference_direction
        d = np.asarray(direction, dtype=float)
        norm = np.linalg.norm(d)
        if d.shape != (3,) or norm == 0:
            raise ValueError("field direction must be a non-zero 3-vector")
        self.direction = d / norm
        self.tunnel = build_tunneling(self.geometry, assign_phases(self.geometry, self.J), self.w)
        # magnetic moment operator: H_Z = -h * M
        self.moment = float(self.J) * (self.geometry.sites @ self.direction)

    @property
    def energy_scale(self) -> float:
        return abs(self.w) if self.w else 1.0

    def matrix(self, h: float) -> np.ndarray:
        return self.tunnel + np.diag(-h * self.moment)

    def levels(self, h: float) -> np.ndarray:
        return eigenvalues(self.matrix(h))


def free_energy(eigs, T: float) -> float:
    """``F = -T ln sum exp(-E/T)``, shifted by the lowest level against overflow."""
    if not T > 0:
        raise ValueError(f"temperature must be positive, got {T}")
    eigs = np.asarray(eigs, dtype=float)
    e0 = eigs.min()
    return float(e0 - T * math.log(np.sum(np.exp(-(eigs - e0) / T))))


def finite_difference_step(T: float, J, w: float) -> float:
    """Field step for the second difference of ``F``.

    Bounded by ``1e-3 |w|`` and by ``1e-2 T / max(J, 1)`` so that ``J h << T``.
    """
    scale = abs(w) if w else 1.0
    return min(1e-3 * scale, 1e-2 * T / max(float(as_half_integer(J)), 1.0))


def free_energy_shift(levels, reference, T: float) -> float:
    """``F(levels) - F(reference)`` without forming either free energy.

    Both arrays hold the same number of levels. Summing ``expm1`` of the level
    shifts avoids the cancellation of two large, nearly equal free energies.
    """
    levels = np.asarray(levels, dtype=float)
    reference = np.asarray(reference, dtype=float)
    weights = np.exp(-(reference - reference.min()) / T)
    ratio = np.sum(weights * np.expm1(-(levels - reference) / T)) / np.sum(weights)
    return float(-T * math.log1p(ratio))


def _susceptibility(model: _Model, T: float, step: float | None = None) -> float:
    if not T > 0:
        raise ValueError(f"temperature must be positive, got {T}")
    delta = step if step is not None else finite_difference_step(T, model.J, model.w)
    e0 = model.levels(0.0)
    dfp = free_energy_shift(model.levels(delta), e0, T)
    dfm = free_energy_shift(model.levels(-delta), e0, T)
    return -(dfp + dfm) / delta ** 2


def susceptibility(coordination, J, w: float, direction, T: float,
                   step: float | None = None) -> float:
    """Reduced susceptibility ``-(F(+d) - 2F(0) + F(-d)) / d^2`` at temperature ``T``."""
    return _susceptibility(_Model(coordination, J, w, direction), T, step)


def linear_response_susceptibility(coordination, J, w: float, direction, T: float,
                                   tol: float = DEGENERACY_TOL) -> float:
    """Susceptibility from the eigenbasis at zero field (Curie plus Van Vleck terms).

    ``chi = sum_{nm} |M_nm|^2 (p_n - p_m) / (E_m - E_n) - beta <M>^2``, where
    pairs inside a degenerate level contribute ``beta p_n |M_nm|^2``.
    """
    if not T > 0:
        raise ValueError(f"temperature must be positive, got {T}")
    model = _Model(coordination, J, w, direction)
    E, V = eigh(model.tunnel)
    M = V.conj().T @ np.diag(model.moment) @ V
    weights = np.exp(-(E - E.min()) / T)
    p = weights / weights.sum()
    beta = 1.0 / T
    chi = 0.0
    for n in range(len(E)):
        for m in range(len(E)):
            amp = abs(M[n, m]) ** 2
            gap = E[m] - E[n]
            if abs(gap) <= tol * max(1.0, abs(E[n])):
                chi += beta * p[n] * amp
            else:
                chi += amp * (p[n] - p[m]) / gap
    mean = float(np.real(np.sum(p * np.diag(M))))
    return chi - beta * mean ** 2


@dataclass
class ThermoCurve:
    temperatures: np.ndarray
    chi: np.ndarray
    metadata: dict = field(default_factory=dict)

    @property
    def beta(self) -> np.ndarray:
        return 1.0 / self.temperatures


def susceptibility_curve(coordination, J, w: float, temperatures, direction=None) -> ThermoCurve:
    """Reduced susceptibility on a positive ascending temperature grid."""
    temps = np.asarray(temperatures, dtype=float)
    if temps.ndim != 1 or temps.size == 0 or np.any(temps <= 0):
        raise ValueError("temperatures must be a non-empty 1-d array of positive values")
    if np.any(np.diff(temps) <= 0):
        raise ValueError("temperatures must be strictly ascending")
    model = _Model(coordination, J, w, direction)
    chi = np.array([_susceptibility(model, T) for T in temps])
    meta = {
        "coordination": model.coordination.value,
        "J": str(model.J),
        "w": model.w,
        "direction": model.direction.tolist(),
        "step": "min(1e-3|w|, 1e-2 T/max(J,1))",
    }
    return ThermoCurve(temps, chi, meta)


# -- ground multiplet --------------------------------------------------------

@dataclass(frozen=True)
class GroundMultiplet:
    """Zero-field ground level and the first/second-order response of its members.

    In a weak field member ``i`` has energy ``energy - moments[i] h - chis[i] h^2 / 2``.
    """

    energy: float
    degeneracy: int
    moments: tuple
    chis: tuple


def ground_multiplet(coordination, J, w: float = 1.0, direction=None,
                     step: float | None = None) -> GroundMultiplet:
    """Moments and curvatures of the ground multiplet from one-sided field differences.

    Levels are sampled at ``h = step`` and ``2 step`` and fitted to
    ``E0 + a h + b h^2`` member by member (sorted order is stable for small h).
    """
    model = _Model(coordination, J, w, direction)
    e_zero = model.levels(0.0)
    energy, g0 = degeneracy_groups(e_zero)[0]
    if step is None:
        step = 1e-4 * model.energy_scale / max(float(model.J), 1.0)
    e1 = model.levels(step)[:g0]
    e2 = model.levels(2 * step)[:g0]
    slope = (4 * e1 - e2 - 3 * energy) / (2 * step)
    curvature = (e2 - 2 * e1 + energy) / step ** 2
    scale = max(float(model.J), 1.0)
    moments = tuple(0.0 if abs(s) < MOMENT_TOL * scale else float(-s) for s in slope)
    chis = tuple(float(-c) for c in curvature)
    return GroundMultiplet(float(energy), int(g0), moments, chis)


@dataclass(frozen=True)
class LowTLimit:
    """Low-temperature susceptibility: a constant or a Curie law ``coefficient / T``."""

    kind: str
    coefficient: float

    def evaluate(self, T: float) -> float:
        if self.kind == "saturated":
            return self.coefficient
        return self.coefficient / T


def low_T_limit(multiplet: GroundMultiplet) -> LowTLimit:
    """Saturated value ``mean(chi_i)`` if the multiplet carries no moment, else
    the Curie coefficient ``mean(m_i^2)``."""
    g0 = multiplet.degeneracy
    if all(m == 0.0 for m in multiplet.moments):
        return LowTLimit("saturated", float(sum(multiplet.chis) / g0))
    return LowTLimit("curie", float(sum(m * m for m in multiplet.moments) / g0))


def ground_state_expansion(coordination, J, w: float = 1.0, direction=None,
                           samples: int = 9, h_max: float | None = None) -> tuple[float, float, float]:
    """Least-squares fit ``E_min(h) = E0 + c1 h + c2 h^2`` on ``[0, h_max]``.

    ``h_max`` defaults to ``1e-2 |w| / J``.
    """
    model = _Model(coordination, J, w, direction)
    if samples < 8:
        raise ValueError("need at least 8 field samples")
    if h_max is None:
        h_max = 1e-2 * model.energy_scale / max(float(model.J), 1.0)
    hs = np.linspace(0.0, h_max, samples)
    emin = np.array([model.levels(h)[0] for h in hs])
    c0, c1, c2 = np.polynomial.polynomial.polyfit(hs, emin, 2)
    return float(c0), float(c1), float(c2)
