"""Bond phases fixed by the Berry flux through each plaquette.

A moment ``J`` circulating once around a plaquette of solid angle ``Omega``
picks up a phase ``J * Omega``. Only these fluxes are physical; the
individual bond phases are fixed here by a spanning-tree gauge (tree bonds
carry zero phase) and may be changed freely with :func:`apply_gauge`.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType

import numpy as np

from .geometry import Geometry
from .halfint import as_half_integer

__all__ = [
    "PhaseAssignment",
    "apply_gauge",
    "assign_phases",
    "constraint_rank",
    "plaquette_flux",
    "spanning_tree",
    "wrap_phase",
]

TWO_PI = 2.0 * math.pi
FLUX_TOL = 1e-10


def wrap_phase(x: float) -> float:
    """Reduce ``x`` to the interval (-pi, pi]."""
    r = math.remainder(x, TWO_PI)
    return math.pi if r <= -math.pi else r


@dataclass(frozen=True, eq=False)
class PhaseAssignment:
    """Antisymmetric map from directed bonds ``(i, j)`` to phases in (-pi, pi]."""

    geometry: Geometry
    J: Fraction
    phases: MappingProxyType
    orientation: int = 1

    def phase(self, i: int, j: int) -> float:
        return self.phases[(i, j)]

    def matrix(self) -> np.ndarray:
        """Phases as an antisymmetric ``n x n`` array, zero off the bond graph."""
        n = self.geometry.n_sites
        out = np.zeros((n, n))
        for (i, j), value in self.phases.items():
            out[i, j] = value
        return out

    def target_flux(self, index: int) -> float:
        return self.orientation * float(self.J) * self.geometry.plaquette_solid_angles[index]


def _freeze(geometry, J, phases, orientation):
    return PhaseAssignment(geometry, J, MappingProxyType(dict(phases)), orientation)


def spanning_tree(geometry: Geometry, root: int = 0) -> list[tuple[int, int]]:
    """Breadth-first spanning tree of the bond graph, neighbours visited in index order."""
    parent = {root: None}
    tree = []
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for u in geometry.neighbors(v):
            if u not in parent:
                parent[u] = v
                tree.append((v, u))
                queue.append(u)
    return tree


def assign_phases(geometry: Geometry, J, orientation: int = 1) -> PhaseAssignment:
    """Solve the plaquette constraints ``sum of phases = J * Omega (mod 2 pi)``.

    Tree bonds get phase zero; each remaining bond is fixed by peeling off a
    plaquette that has exactly one undetermined bond. For ``2J`` integer the
    fluxes add up to ``4 pi J = 0 (mod 2 pi)``, so the last plaquette closes
    consistently.

    Parameters
    ----------
    geometry : Geometry
    J : half-integer
        Moment value (int, float, Fraction or string).
    orientation : {1, -1}
        Sign of the Berry phase. ``-1`` is the time-reversed branch.
    """
    J = as_half_integer(J)
    if orientation not in (1, -1):
        raise ValueError("orientation must be +1 or -1")
    phases = {}
    for i, j in spanning_tree(geometry):
        phases[(i, j)] = phases[(j, i)] = 0.0

    n_plaq = len(geometry.plaquettes)
    pending = set(range(n_plaq))
    progress = True
    while pending and progress:
        progress = False
        for index in sorted(pending):
            edges = geometry.plaquette_edges(index)
            unknown = [e for e in edges if e not in phases]
            if len(unknown) > 1:
                continue
            pending.discard(index)
            if unknown:
                known = sum(phases[e] for e in edges if e in phases)
                i, j = unknown[0]
                value = wrap_phase(orientation * float(J) * geometry.plaquette_solid_angles[index]
                                   - known)
                phases[(i, j)] = value
                phases[(j, i)] = wrap_phase(-value)
                progress = True
    if len(phases) != 2 * len(geometry.bonds):
        raise RuntimeError("plaquette peeling left bonds undetermined")

    result = _freeze(geometry, J, phases, orientation)
    for index in range(n_plaq):
        if _flux_mismatch(result, index) > FLUX_TOL:
            raise RuntimeError(f"flux constraint violated on plaquette {index}")
    return result


def _flux_mismatch(assignment: PhaseAssignment, index: int) -> float:
    total = sum(assignment.phases[e] for e in assignment.geometry.plaquette_edges(index))
    return abs(wrap_phase(total - assignment.target_flux(index)))


def plaquette_flux(assignment: PhaseAssignment, index: int, reverse: bool = False) -> float:
    """Directed phase sum around plaquette ``index``, reduced to [0, 2 pi).

    With ``reverse=True`` the loop is traversed clockwise.
    """
    edges = assignment.geometry.plaquette_edges(index)
    if reverse:
        edges = [(j, i) for i, j in reversed(edges)]
    total = math.fsum(assignment.phases[e] for e in edges)
    flux = total % TWO_PI
    # fold values within rounding of 2 pi back to 0
    if TWO_PI - flux < 1e-12:
        flux = 0.0
    return flux


def apply_gauge(assignment: PhaseAssignment, f) -> PhaseAssignment:
    """Gauge transform ``phi_ij -> phi_ij + f_j - f_i`` with one real ``f_k`` per site."""
    f = np.asarray(f, dtype=float)
    if f.shape != (assignment.geometry.n_sites,):
        raise ValueError(f"need one gauge phase per site, got shape {f.shape}")
    phases = {}
    for (i, j), value in assignment.phases.items():
        if i < j:
            new = wrap_phase(value + f[j] - f[i])
            phases[(i, j)] = new
            phases[(j, i)] = wrap_phase(-new)
    return _freeze(assignment.geometry, assignment.J, phases, assignment.orientation)


def constraint_rank(geometry: Geometry) -> int:
    """Rank of the plaquette-by-bond incidence matrix (independent flux constraints)."""
    index = {b: k for k, b in enumerate(geometry.bonds)}
    incidence = np.zeros((len(geometry.plaquettes), len(geometry.bonds)))
    for p in range(len(geometry.plaquettes)):
        for i, j in geometry.plaquette_edges(p):
            if (i, j) in index:
                incidence[p, index[(i, j)]] += 1.0
            else:
                incidence[p, index[(j, i)]] -= 1.0
    return int(np.linalg.matrix_rank(incidence))
