"""Easy-axis configurations on the unit sphere and their tunnelling graphs.

Two cubic coordinations are supported: the octahedral (6-fold) one with wells
at the cube face centres and the cubic (8-fold) one with wells on the body
diagonals. Sites are numbered from 0 here; site ``k`` is the one-based
label ``k + 1``.
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Coordination",
    "DegenerateGeodesicError",
    "Geometry",
    "build_geometry",
    "solid_angle",
]

_ANTIPODAL_TOL = 1e-12


class DegenerateGeodesicError(ValueError):
    """Two consecutive loop vertices are antipodal, so the geodesic is undefined."""


class Coordination(enum.Enum):
    SIX_FOLD = 6
    EIGHT_FOLD = 8

    @property
    def sites(self) -> int:
        return self.value

    @property
    def plaquettes(self) -> int:
        """Number of faces ``p`` covering the sphere (8 for octahedral, 6 for cubic)."""
        return 8 if self is Coordination.SIX_FOLD else 6

    @property
    def period(self) -> float:
        """Period of the spectrum in ``J``, equal to ``p / 2``."""
        return self.plaquettes / 2

    @property
    def reference_direction(self) -> np.ndarray:
        """Field direction along the first easy axis."""
        if self is Coordination.SIX_FOLD:
            return np.array([0.0, 0.0, 1.0])
        return np.ones(3) / math.sqrt(3.0)

    @classmethod
    def parse(cls, value) -> "Coordination":
        """Accept ``6``, ``8``, ``"octahedral"``, ``"cubic"`` or an existing member."""
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        aliases = {
            "6": cls.SIX_FOLD, "six": cls.SIX_FOLD, "sixfold": cls.SIX_FOLD,
            "six_fold": cls.SIX_FOLD, "octahedral": cls.SIX_FOLD,
            "8": cls.EIGHT_FOLD, "eight": cls.EIGHT_FOLD, "eightfold": cls.EIGHT_FOLD,
            "eight_fold": cls.EIGHT_FOLD, "cubic": cls.EIGHT_FOLD,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(
                f"unknown coordination {value!r}; expected 6, 8, octahedral or cubic"
            ) from None


@dataclass(frozen=True, eq=False)
class Geometry:
    """Sites, nearest-neighbour bonds and outward-oriented plaquettes.

    ``bonds`` are ``(i, j)`` pairs with ``i < j``. Each plaquette is a loop of
    site indices running counterclockwise seen from outside the sphere.
    """

    coordination: Coordination
    sites: np.ndarray
    bonds: tuple
    plaquettes: tuple
    plaquette_solid_angles: tuple

    @property
    def n_sites(self) -> int:
        return self.sites.shape[0]

    def neighbors(self, i: int) -> list[int]:
        return sorted({b for a, b in self.bonds if a == i} | {a for a, b in self.bonds if b == i})

    def plaquette_edges(self, index: int) -> list[tuple[int, int]]:
        loop = self.plaquettes[index]
        return list(zip(loop, loop[1:] + loop[:1]))


def _spherical(theta: float, phi: float) -> np.ndarray:
    return np.array([math.sin(theta) * math.cos(phi),
                     math.sin(theta) * math.sin(phi),
                     math.cos(theta)])


def _six_fold_sites() -> np.ndarray:
    angles = [(0.0, 0.0), (math.pi, 0.0), (math.pi / 2, 0.0), (math.pi / 2, math.pi),
              (math.pi / 2, math.pi / 2), (math.pi / 2, 3 * math.pi / 2)]
    sites = np.array([_spherical(t, p) for t, p in angles])
    # exact zeros keep the printed Zeeman diagonals bit-comparable
    return np.round(sites, 15) + 0.0


def _eight_fold_sites() -> np.ndarray:
    # site 2k+1 on the upper diagonal at azimuth (2k+1)pi/4, site 2k+2 its antipode
    theta = math.acos(1.0 / math.sqrt(3.0))
    sites = []
    for k in range(4):
        n = _spherical(theta, (2 * k + 1) * math.pi / 4)
        sites.extend([n, -n])
    return np.array(sites)


def _rotation_system(sites: np.ndarray, adjacency: np.ndarray) -> list[list[int]]:
    """Neighbours of every site ordered counterclockwise about its outward normal."""
    order = []
    for v, n in enumerate(sites):
        nbrs = np.flatnonzero(adjacency[v])
        e1 = sites[nbrs[0]] - n * (n @ sites[nbrs[0]])
        e1 /= np.linalg.norm(e1)
        e2 = np.cross(n, e1)
        ang = [math.atan2(sites[u] @ e2, sites[u] @ e1) for u in nbrs]
        order.append([int(nbrs[i]) for i in np.argsort(ang)])
    return order


def _trace_faces(sites: np.ndarray, adjacency: np.ndarray) -> list[tuple[int, ...]]:
    rotation = _rotation_system(sites, adjacency)
    seen = set()
    faces = []
    for u in range(len(sites)):
        for v in rotation[u]:
            if (u, v) in seen:
                continue
            face = []
            a, b = u, v
            while (a, b) not in seen:
                seen.add((a, b))
                face.append(a)
                ring = rotation[b]
                a, b = b, ring[(ring.index(a) - 1) % len(ring)]
            faces.append(face)
    oriented = []
    for face in faces:
        if solid_angle(sites[face]) < 0:
            face = face[::-1]
        start = face.index(min(face))
        oriented.append(tuple(face[start:] + face[:start]))
    return sorted(oriented)


def solid_angle(loop) -> float:
    """Signed solid angle of the geodesic polygon through ``loop``.

    The polygon is fanned into triangles from its first vertex and each
    triangle contributes ``2 atan2(a.(b x c), 1 + a.b + b.c + c.a)``. The
    result is positive for loops running counterclockwise seen from outside.

    Raises
    ------
    DegenerateGeodesicError
        If two consecutive vertices (cyclically) are antipodal.
    """
    pts = np.asarray(loop, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 3 or pts.shape[0] < 3:
        raise ValueError("loop must be a sequence of at least three 3-vectors")
    pts = pts / np.linalg.norm(pts, axis=1, keepdims=True)
    for a, b in zip(pts, np.roll(pts, -1, axis=0)):
        if np.linalg.norm(a + b) < _ANTIPODAL_TOL:
            raise DegenerateGeodesicError("consecutive loop vertices are antipodal")
    a = pts[0]
    total = 0.0
    for b, c in zip(pts[1:-1], pts[2:]):
        total += 2.0 * math.atan2(a @ np.cross(b, c), 1.0 + a @ b + b @ c + c @ a)
    return total


@functools.lru_cache(maxsize=None)
def build_geometry(coordination) -> Geometry:
    """Build the site configuration, bond graph and plaquettes for a coordination."""
    coordination = Coordination.parse(coordination)
    if coordination is Coordination.SIX_FOLD:
        sites = _six_fold_sites()
    else:
        sites = _eight_fold_sites()
    gram = sites @ sites.T
    nearest = np.max(gram - 3.0 * np.eye(len(sites)))
    adjacency = np.isclose(gram, nearest, atol=1e-9) & ~np.eye(len(sites), dtype=bool)
    bonds = tuple((i, j) for i in range(len(sites)) for j in range(i + 1, len(sites))
                  if adjacency[i, j])
    plaquettes = tuple(_trace_faces(sites, adjacency))
    angles = tuple(solid_angle(sites[list(p)]) for p in plaquettes)
    sites.setflags(write=False)
    return Geometry(coordination, sites, bonds, plaquettes, angles)
