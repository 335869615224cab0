"""Exact spectra, closed-form level formulas and the moment classification."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np

from .geometry import Coordination
from .halfint import as_half_integer
from .hamiltonian import build_hamiltonian
from .kernels import jacobi_eigh

__all__ = [
    "ClassId",
    "Spectrum",
    "classify",
    "closed_form",
    "closed_form_6",
    "closed_form_8",
    "degeneracy_groups",
    "eigenvalues",
    "eigh",
    "spectrum",
    "spectrum_for",
]

DEGENERACY_TOL = 1e-8
HERMITIAN_TOL = 1e-12


def _check_hermitian(m) -> np.ndarray:
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    scale = max(1.0, float(np.max(np.abs(m), initial=0.0)))
    if np.max(np.abs(m - m.conj().T), initial=0.0) > HERMITIAN_TOL * scale:
        raise ValueError("matrix is not Hermitian")
    return m


def eigh(m):
    """Eigenvalues (ascending) and eigenvectors of a Hermitian matrix."""
    return jacobi_eigh(_check_hermitian(m))


def eigenvalues(m) -> np.ndarray:
    """Full eigenvalue multiset of a Hermitian matrix, ascending.

    Raises
    ------
    ValueError
        If ``m`` is not square or not Hermitian.
    """
    return eigh(m)[0]


def degeneracy_groups(eigs, tol: float = DEGENERACY_TOL) -> list[tuple[float, int]]:
    """Merge adjacent sorted eigenvalues closer than ``tol * max(1, |E|)``.

    Group energies are the mean of their members.
    """
    eigs = np.asarray(eigs, dtype=float)
    if eigs.size == 0:
        return []
    groups = [[eigs[0]]]
    for e in eigs[1:]:
        prev = groups[-1][-1]
        if abs(e - prev) <= tol * max(1.0, abs(e)):
            groups[-1].append(e)
        else:
            groups.append([e])
    return [(float(np.mean(g)), len(g)) for g in groups]


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray
    groups: list = field(compare=False)
    tol: float = DEGENERACY_TOL

    @property
    def ground(self) -> tuple[float, int]:
        return self.groups[0]

    @property
    def first_excited(self) -> float | None:
        return self.groups[1][0] if len(self.groups) > 1 else None


def spectrum(m, tol: float = DEGENERACY_TOL) -> Spectrum:
    eigs = eigenvalues(m)
    return Spectrum(eigs, degeneracy_groups(eigs, tol), tol)


def spectrum_for(coordination, J, w: float = 1.0, direction=None, h: float = 0.0,
                 tol: float = DEGENERACY_TOL) -> Spectrum:
    """Spectrum of the full Hamiltonian for given moment, amplitude and field."""
    return spectrum(build_hamiltonian(coordination, J, w, direction, h), tol)


# -- closed forms ------------------------------------------------------------

# Evaluated at 50 significant digits: several radicands vanish exactly for
# flat levels, and in double precision sqrt(rounding) would leave ~1e-8 errors.
_DPS = 50


def _trig(q: Fraction):
    """``cos(pi q)`` and ``sin(pi q)`` at high precision for rational ``q``."""
    x = mpmath.mpf(q.numerator) / q.denominator
    return mpmath.cospi(x), mpmath.sinpi(x)


def _chi(t: Fraction):
    """chi(pi t) with chi(x) = cos(2x/3)cos(x/2) - sqrt(cos^2(x/3) + sin^2(2x/3)sin^2(x/2))."""
    c23, s23 = _trig(2 * t / 3)
    c12, s12 = _trig(t / 2)
    c13, _ = _trig(t / 3)
    return c23 * c12 - mpmath.sqrt(c13 ** 2 + s23 ** 2 * s12 ** 2)


def _xi(t: Fraction):
    """xi(pi t) with xi(x) = sqrt(3 + 2cos(x)cos(2x/3) + 4cos(x/2)cos(x/3)f(x))."""
    c1, _ = _trig(t)
    c23, _ = _trig(2 * t / 3)
    c12, s12 = _trig(t / 2)
    c13, s13 = _trig(t / 3)
    f = mpmath.sqrt(4 * s12 ** 2 * s13 ** 2 + 1)
    radicand = 3 + 2 * c1 * c23 + 4 * c12 * c13 * f
    return mpmath.sqrt(max(radicand, mpmath.mpf(0)))


def closed_form_6(J, w: float = 1.0) -> np.ndarray:
    """Octahedral levels ``(-1)^k 2 w chi(pi (J + 2k))``, k = 0..5, sorted."""
    j = as_half_integer(J)
    with mpmath.workdps(_DPS):
        levels = [float((-1) ** k * 2 * _chi(j + 2 * k)) for k in range(6)]
    return np.sort(np.array(levels) * w)


def closed_form_8(J, w: float = 1.0) -> np.ndarray:
    """Cubic levels ``+- w xi(pi (J + 3k))``, k = 0..3, sorted.

    The prefactor is ``w``, not ``2w``: with ``2w`` the ``J = 0`` ground level
    would be ``-6w`` instead of the ``-3w`` of the bare cube graph.
    """
    j = as_half_integer(J)
    with mpmath.workdps(_DPS):
        xs = [float(_xi(j + 3 * k)) for k in range(4)]
    levels = [s * w * x for x in xs for s in (1, -1)]
    return np.sort(levels)


def closed_form(coordination, J, w: float = 1.0) -> np.ndarray:
    if Coordination.parse(coordination) is Coordination.SIX_FOLD:
        return closed_form_6(J, w)
    return closed_form_8(J, w)


# -- classification ----------------------------------------------------------

@dataclass(frozen=True)
class ClassId:
    """Equivalence class of moments with identical tunnelling spectra.

    ``label = m + 1`` where ``J = |J_p n +- m/2|`` and ``J_p = p/2``.
    """

    coordination: Coordination
    label: int
    period: Fraction
    m: int

    @property
    def n_classes(self) -> int:
        return self.coordination.plaquettes // 2 + 1

    def describe(self) -> str:
        period = int(self.period)
        if self.m == 0:
            return f"{period}n"
        if 2 * self.m == self.coordination.plaquettes:
            return f"{period}n+{Fraction(self.m, 2)}"
        return f"{period}n+-{Fraction(self.m, 2)}"


def classify(J, coordination) -> ClassId:
    """Class of moment ``J`` in the given coordination.

    >>> classify(8, 6).label, classify("15/2", 6).label, classify(6, 6).label
    (1, 2, 5)
    """
    j = as_half_integer(J)
    coordination = Coordination.parse(coordination)
    p = coordination.plaquettes
    r = int(2 * j) % p
    m = min(r, p - r)
    return ClassId(coordination, m + 1, Fraction(p, 2), m)
