"""Classical cubic crystal-field potential, its stability sectors and the R3+ ion table.

The moment is treated classically, ``J_alpha -> J n_alpha``, so the fourth-
and sixth-order invariants become polynomials on the unit sphere:

    U(n) = A J^4 (sum n^4 - 3/5) + B J^4 (sum n^6 + 30 nx^2 ny^2 nz^2 - 5/7)

(the sixth-order term carries an explicit ``1/J^2``). Both terms scale as
``J^4``, so the positions of the minima do not depend on ``J``.
"""

from __future__ import annotations

import csv
import enum
import io
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources

import numpy as np

from . import kernels
from .geometry import Coordination
from .halfint import as_half_integer
from .spectra import ClassId, classify

__all__ = [
    "CefParams",
    "ClassAssignmentWarning",
    "IonClassReport",
    "IonRecord",
    "Sector",
    "classical_potential",
    "fibonacci_sphere",
    "ion_class",
    "load_ions",
    "minima_bruteforce",
    "minima_sector",
    "sector",
]

BOUNDARY_TOL = 1e-12


class Sector(enum.Enum):
    SIX_FOLD = "SixFold"
    EIGHT_FOLD = "EightFold"
    TWELVE_FOLD = "TwelveFold"
    BOUNDARY = "Boundary"

    @property
    def n_minima(self) -> int | None:
        return {"SixFold": 6, "EightFold": 8, "TwelveFold": 12}.get(self.value)


@dataclass(frozen=True)
class CefParams:
    A: float
    B: float
    J: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "J", as_half_integer(self.J))


def _check_nonzero(A, B):
    if A == 0 and B == 0:
        raise ValueError("CEF constants (A, B) = (0, 0) define no anisotropy")


def classical_potential(params: CefParams, n) -> float:
    """Classical CEF energy for the moment pointing along unit vector ``n``."""
    n = np.asarray(n, dtype=float)
    if n.shape != (3,) or abs(np.linalg.norm(n) - 1.0) > 1e-12:
        raise ValueError("n must be a unit 3-vector")
    j4 = float(params.J) ** 4
    sq = n * n
    quartic = float(np.sum(sq ** 2)) - 3.0 / 5.0
    sextic = float(np.sum(sq ** 3)) + 30.0 * float(np.prod(sq)) - 5.0 / 7.0
    return params.A * j4 * quartic + params.B * j4 * sextic


def sector(A: float, B: float) -> Sector:
    """Coordination whose directions minimize the potential for constants ``(A, B)``.

    SixFold for ``A < B/3`` and ``A < -3B/2``; EightFold for ``A > B/3`` and
    ``A > 35B/6``; TwelveFold for ``-3B/2 < A < 35B/6``. Points on a line
    separating two sectors (within ``1e-12`` relative) are Boundary. The line
    ``A = B/3`` only separates sectors for ``B < 0``; for ``B > 0`` it lies
    inside the TwelveFold sector.
    """
    _check_nonzero(A, B)
    tol = BOUNDARY_TOL * max(abs(A), abs(B))
    third, six_twelve, eight_twelve = B / 3.0, -1.5 * B, 35.0 * B / 6.0
    if A < third - tol and A < six_twelve - tol:
        return Sector.SIX_FOLD
    if A > third + tol and A > eight_twelve + tol:
        return Sector.EIGHT_FOLD
    if six_twelve + tol < A < eight_twelve - tol:
        return Sector.TWELVE_FOLD
    return Sector.BOUNDARY


# -- brute-force minimization ------------------------------------------------

def fibonacci_sphere(n: int) -> np.ndarray:
    """``n`` nearly uniform points on the unit sphere (golden-angle spiral)."""
    k = np.arange(n) + 0.5
    z = 1.0 - 2.0 * k / n
    r = np.sqrt(1.0 - z * z)
    phi = math.pi * (3.0 - math.sqrt(5.0)) * k
    return np.column_stack([r * np.cos(phi), r * np.sin(phi), z])


def _hessian(n, a, b):
    sq = n * n
    x2, y2, z2 = sq
    diag = 12 * a * sq + b * (30 * sq ** 2 + 60 * np.array([y2 * z2, x2 * z2, x2 * y2]))
    H = np.diag(diag)
    for i, j, k in ((0, 1, 2), (0, 2, 1), (1, 2, 0)):
        H[i, j] = H[j, i] = 120 * b * n[i] * n[j] * sq[k]
    return H


def _newton_polish(n, a, b, iterations=30):
    """Riemannian Newton iterations on the sphere, falling back to gradient steps."""
    scale = abs(a) + abs(b)
    for _ in range(iterations):
        g = kernels.cef_gradient_numpy(n, a, b)
        radial = g @ n
        t1 = np.cross(n, [1.0, 0.0, 0.0] if abs(n[0]) < 0.9 else [0.0, 1.0, 0.0])
        t1 /= np.linalg.norm(t1)
        t2 = np.cross(n, t1)
        basis = np.stack([t1, t2])
        grad = basis @ g
        if np.linalg.norm(grad) < 1e-15 * scale:
            break
        hess = basis @ (_hessian(n, a, b) - radial * np.eye(3)) @ basis.T
        if np.all(np.linalg.eigvalsh(hess) > 0):
            step = -np.linalg.solve(hess, grad)
        else:
            step = -grad / (12 * abs(a) + 90 * abs(b))
        n = n + basis.T @ step
        n /= np.linalg.norm(n)
    return n


def _angle(u, v):
    return math.atan2(np.linalg.norm(np.cross(u, v)), float(np.dot(u, v)))


def minima_bruteforce(params: CefParams, n_grid: int = 20000, steps: int = 50,
                      angle_tol: float = 1e-4) -> np.ndarray:
    """All global minima directions of the potential, found by brute force.

    A Fibonacci grid of ``n_grid`` points is relaxed by ``steps`` projected
    gradient steps; the low-energy survivors are clustered, polished by
    Newton iterations on the sphere and merged within ``angle_tol`` radians.
    Independent of :func:`sector`.

    Returns
    -------
    (k, 3) ndarray of unit vectors, sorted lexicographically.
    """
    _check_nonzero(params.A, params.B)
    a, b = float(params.A), float(params.B)
    points = fibonacci_sphere(n_grid)
    eta = 1.0 / (12 * abs(a) + 90 * abs(b))
    relaxed = kernels.cef_descend(points, a, b, steps, eta)
    energy = kernels.cef_energy(relaxed, a, b)
    spread = float(energy.max() - energy.min())
    keep = np.flatnonzero(energy <= energy.min() + 1e-3 * spread)
    keep = keep[np.argsort(energy[keep], kind="stable")]

    candidates = relaxed[keep]
    seeds = []
    while len(candidates):
        seeds.append(candidates[0])
        candidates = candidates[candidates @ candidates[0] < math.cos(0.1)]
    polished = [_newton_polish(s.copy(), a, b) for s in seeds]
    values = kernels.cef_energy_numpy(np.array(polished), a, b)
    best = values.min()
    minima = []
    for p, v in sorted(zip(polished, values), key=lambda pv: pv[1]):
        if v > best + 1e-9 * spread:
            continue
        if all(_angle(p, m) > angle_tol for m in minima):
            minima.append(p)
    out = np.array(minima)
    out[np.abs(out) < 1e-14] = 0.0
    order = np.lexsort(out.T[::-1])
    return out[order]


def _direction_family(n) -> str | None:
    mags = np.sort(np.abs(n))
    for name, ref in (("axis", [0, 0, 1]), ("diagonal", [1, 1, 1]), ("edge", [0, 1, 1])):
        ref = np.array(ref, float) / np.linalg.norm(ref)
        if np.allclose(mags, ref, atol=1e-6):
            return name
    return None


def minima_sector(minima) -> Sector | None:
    """Sector implied by a set of minima: 6 axes, 8 diagonals or 12 edge centres.

    Returns Boundary for a union of two complete families, ``None`` otherwise.
    """
    families = {}
    for n in minima:
        families.setdefault(_direction_family(n), []).append(n)
    if None in families:
        return None
    expected = {"axis": (6, Sector.SIX_FOLD), "diagonal": (8, Sector.EIGHT_FOLD),
                "edge": (12, Sector.TWELVE_FOLD)}
    for fam, members in families.items():
        if len(members) != expected[fam][0]:
            return None
    if len(families) == 1:
        return expected[next(iter(families))][1]
    return Sector.BOUNDARY


# -- ion table ---------------------------------------------------------------

class ClassAssignmentWarning(UserWarning):
    """The computed class of an ion disagrees with the printed ion table."""


@dataclass(frozen=True)
class IonRecord:
    symbol: str
    J: Fraction
    L: int
    S: Fraction
    class_six: int
    class_eight: int

    def table_class(self, coordination) -> int:
        if Coordination.parse(coordination) is Coordination.SIX_FOLD:
            return self.class_six
        return self.class_eight


@lru_cache(maxsize=None)
def load_ions() -> dict:
    """Read the bundled ``ions.tsv`` table, keyed by element symbol."""
    text = resources.files("berrymoments.data").joinpath("ions.tsv").read_text()
    rows = csv.DictReader(io.StringIO("".join(l for l in text.splitlines(True)
                                              if not l.startswith("#"))), delimiter="\t")
    table = {}
    for row in rows:
        table[row["symbol"]] = IonRecord(
            symbol=row["symbol"],
            J=Fraction(int(row["two_j"]), 2),
            L=int(row["two_l"]) // 2,
            S=Fraction(int(row["two_s"]), 2),
            class_six=int(row["class_six"]),
            class_eight=int(row["class_eight"]),
        )
    return table


@dataclass(frozen=True)
class IonClassReport:
    """Computed vs printed class of one ion.

    ``convention`` names the first reading that reproduces the printed class:
    ``"hund"`` (Hund J as is), ``"w-sign"`` (negative tunnelling amplitude,
    ``J -> J + p/4``, octahedral only) or ``"J=L+S"``; ``None`` if none does.
    """

    symbol: str
    coordination: Coordination
    J: Fraction
    computed: ClassId
    table_label: int
    agrees: bool
    convention: str | None
    message: str | None


def ion_class(symbol: str, coordination, warn: bool = True) -> IonClassReport:
    """Class of an R3+ ion from its Hund moment, checked against the ion table.

    Any disagreement with the printed class emits a
    :class:`ClassAssignmentWarning` (unless ``warn=False``) and is described
    in the report's ``message``.

    Raises
    ------
    KeyError
        For symbols not in the table; the message lists the known ones.
    """
    ions = load_ions()
    key = symbol.strip().capitalize()
    if key not in ions:
        raise KeyError(f"unknown ion {symbol!r}; known: {' '.join(ions)}")
    ion = ions[key]
    coordination = Coordination.parse(coordination)
    computed = classify(ion.J, coordination)
    listed = ion.table_class(coordination)
    if computed.label == listed:
        return IonClassReport(key, coordination, ion.J, computed, listed, True, "hund", None)

    convention = None
    if coordination is Coordination.SIX_FOLD:
        # odd-faced polyhedron: w -> -w maps the class of J onto that of J + p/4
        flipped = classify(ion.J + Fraction(coordination.plaquettes, 4), coordination)
        if flipped.label == listed:
            convention = "w-sign"
    if convention is None and classify(ion.L + ion.S, coordination).label == listed:
        convention = "J=L+S"

    message = (f"{key} (J={ion.J}) in {coordination.value}-fold: computed class "
               f"{computed.label}, table lists class {listed}")
    if convention == "w-sign":
        message += "; matches only if w < 0 for this ion"
    elif convention == "J=L+S":
        message += f"; matches only with J = L + S = {ion.L + ion.S}"
    else:
        message += "; no tested convention reproduces it"
    if warn:
        warnings.warn(message, ClassAssignmentWarning, stacklevel=2)
    return IonClassReport(key, coordination, ion.J, computed, listed, False, convention, message)
