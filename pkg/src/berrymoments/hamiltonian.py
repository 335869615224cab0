"""Tunnelling and Zeeman matrices in the basis of localized well states.

Energies are in the units of the tunnelling amplitude ``w``; the field enters
as ``h = g mu_B H``. The effective model is only meaningful while
``g J mu_B |H|`` stays well below the depth of the anisotropy wells, and that
condition is left to the caller.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .gauge import PhaseAssignment, apply_gauge, assign_phases
from .geometry import Coordination, Geometry, build_geometry
from .halfint import as_half_integer

__all__ = [
    "FieldSpec",
    "build_hamiltonian",
    "build_tunneling",
    "zeeman",
]


@dataclass(frozen=True)
class FieldSpec:
    """Magnetic field of reduced magnitude ``h`` acting on a moment ``J``."""

    direction: tuple
    h: float
    J: Fraction

    def __post_init__(self):
        d = np.asarray(self.direction, dtype=float)
        if d.shape != (3,):
            raise ValueError("field direction must be a 3-vector")
        if abs(np.linalg.norm(d) - 1.0) > 1e-12:
            raise ValueError(f"field direction {tuple(d)} is not a unit vector")
        if self.h < 0:
            raise ValueError("field magnitude h must be non-negative")
        object.__setattr__(self, "direction", tuple(float(x) for x in d))
        object.__setattr__(self, "J", as_half_integer(self.J))

    @classmethod
    def along(cls, direction, h, J) -> "FieldSpec":
        """Like the constructor but normalizes ``direction`` first."""
        d = np.asarray(direction, dtype=float)
        norm = np.linalg.norm(d)
        if norm == 0:
            raise ValueError("field direction must be non-zero")
        return cls(tuple(d / norm), float(h), J)


def build_tunneling(geometry: Geometry, phases: PhaseAssignment, w: float) -> np.ndarray:
    """Hermitian tunnelling matrix with ``H[i, j] = w exp(i phi_ij)`` on every bond."""
    if phases.geometry is not geometry:
        raise ValueError("phase assignment was built for a different geometry")
    n = geometry.n_sites
    H = np.zeros((n, n), dtype=np.complex128)
    for i, j in geometry.bonds:
        phi = phases.phases[(i, j)]
        H[i, j] = w * complex(math.cos(phi), math.sin(phi))
        H[j, i] = H[i, j].conjugate()
    return H


def zeeman(geometry: Geometry, field: FieldSpec) -> np.ndarray:
    """Diagonal Zeeman matrix with entries ``-J h (d . n_k)``."""
    projections = geometry.sites @ np.asarray(field.direction)
    return np.diag(-float(field.J) * field.h * projections).astype(float)


def build_hamiltonian(coordination, J, w: float = 1.0, direction=None, h: float = 0.0,
                      gauge=None) -> np.ndarray:
    """Full ``tunnelling + Zeeman`` matrix, optionally after a gauge transform ``gauge``."""
    geometry = build_geometry(Coordination.parse(coordination))
    phases = assign_phases(geometry, J)
    if gauge is not None:
        phases = apply_gauge(phases, gauge)
    H = build_tunneling(geometry, phases, w)
    if h:
        if direction is None:
            direction = geometry.coordination.reference_direction
        H = H + zeeman(geometry, FieldSpec.along(direction, h, J))
    return H
