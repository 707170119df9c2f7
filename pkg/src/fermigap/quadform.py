"""Quadratic fermionic Hamiltonians parametrized by an (A, B) matrix pair.

A Hamiltonian of the form

    H = sum_{jk} A_jk (c+_j c_k - c_j c+_k) + B_jk (c+_j c+_k - c_j c_k)

with A real symmetric and B real anti-symmetric decouples into free
quasiparticle modes whose single-mode energies 2*Lambda_j are twice the
singular values of A + B.  Everything spectral about H (ground energy,
ground-state gap, the full 2^n level multiset) follows from those singular
values, so all routines here work on n x n matrices, never on the 2^n space.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import CapacityError, InputError, NumericalError

# Enumerating all 2^n subset-sum energies beyond this is pointless on a desk
# machine (2^22 ~ 4M float64 energies ~ 34 MB plus the sort).
SPECTRUM_MODE_CAP = 22


def _check_square_finite(m, name: str) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InputError(f"{name} must be a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InputError(f"{name} contains non-finite entries")
    return m


def first_symmetry_violation(m: np.ndarray, anti: bool = False):
    """Index pair (j, k) of the first exact (anti)symmetry violation, or None."""
    sign = -1.0 if anti else 1.0
    bad = np.argwhere(m != sign * m.T)
    if bad.size == 0:
        return None
    j, k = bad[0]
    return int(j), int(k)


@dataclass(frozen=True)
class CoefficientPair:
    """The (A, B) coefficient matrices of a quadratic fermionic Hamiltonian.

    Attributes
    ----------
    a : np.ndarray
        n x n real symmetric matrix (exactly: a[j, k] == a[k, j]).
    b : np.ndarray
        n x n real anti-symmetric matrix (exactly: b[j, k] == -b[k, j]).
    """

    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        a = _check_square_finite(self.a, "a")
        b = _check_square_finite(self.b, "b")
        if a.shape != b.shape:
            raise InputError(f"a and b shapes differ: {a.shape} vs {b.shape}")
        viol = first_symmetry_violation(a)
        if viol is not None:
            raise InputError(f"a is not symmetric at index pair {viol}")
        viol = first_symmetry_violation(b, anti=True)
        if viol is not None:
            raise InputError(f"b is not anti-symmetric at index pair {viol}")
        a = a.copy()
        b = b.copy()
        a.flags.writeable = False
        b.flags.writeable = False
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def n(self) -> int:
        return self.a.shape[0]

    @property
    def c(self) -> np.ndarray:
        """A + B, the matrix whose singular values fix the spectrum."""
        return self.a + self.b

    @staticmethod
    def identity(n: int) -> "CoefficientPair":
        return CoefficientPair(np.eye(n), np.zeros((n, n)))


def symmetrize_split(c) -> CoefficientPair:
    """Split a square matrix C into its symmetric and anti-symmetric parts.

    Returns the pair (A, B) = ((C + C^T)/2, (C - C^T)/2).  Both parts are
    exactly (anti)symmetric; A + B reproduces C up to one rounding of each
    entry (exactly, whenever C_jk + C_kj is representable).
    """
    c = _check_square_finite(c, "c")
    return CoefficientPair((c + c.T) / 2.0, (c - c.T) / 2.0)


@dataclass(frozen=True)
class LiebDecomposition:
    """Free-quasiparticle decomposition of an (A, B) pair.

    Orthogonal X, Y and non-negative lam (ascending) satisfying

        X (A - B) = diag(lam) Y,     Y (A + B) = diag(lam) X,

    so lam holds the singular values of A + B and row j of (X, Y) defines
    the j-th quasiparticle mode of energy 2*lam[j].
    """

    lam: np.ndarray
    x: np.ndarray
    y: np.ndarray

    @property
    def n(self) -> int:
        return self.lam.shape[0]

    def residuals(self, pair: CoefficientPair) -> tuple[float, float]:
        """Norms of the two defining equations, for diagnostics."""
        lam = np.diag(self.lam)
        r1 = np.linalg.norm(self.x @ (pair.a - pair.b) - lam @ self.y)
        r2 = np.linalg.norm(self.y @ (pair.a + pair.b) - lam @ self.x)
        return float(r1), float(r2)


def lieb_decompose(pair: CoefficientPair) -> LiebDecomposition:
    """Decompose the pair into decoupled quasiparticle modes.

    Computed from a real SVD of C = A + B: with C = U S V^T, the choices
    X = V^T (rows = right singular vectors) and Y = U^T satisfy both
    defining equations identically, including for zero singular values.
    """
    c = pair.c
    try:
        u, s, vh = np.linalg.svd(c)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"SVD of A+B failed to converge: {exc}") from exc
    # numpy returns descending singular values; flip to ascending.
    order = np.arange(s.shape[0])[::-1]
    return LiebDecomposition(lam=s[order], x=vh[order], y=u.T[order])


@dataclass(frozen=True)
class GapReport:
    """Ground energy and ground-state gap of a quadratic fermionic Hamiltonian.

    ground_energy is -sum(lam).  gap is twice the least singular value above
    zero_tolerance (0 if none).  degenerate flags singular values at or below
    the tolerance; each contributes a factor of 2 to the ground-level
    multiplicity.
    """

    ground_energy: float
    gap: float
    degenerate: bool
    zero_tolerance: float
    num_zero_modes: int


def default_zero_tolerance(lam: np.ndarray) -> float:
    """Numerical-rank convention: n * eps * sigma_max."""
    n = lam.shape[0]
    smax = float(lam.max(initial=0.0))
    return n * np.finfo(float).eps * smax


def gap_report_from_singular_values(lam, zero_tolerance: float | None = None) -> GapReport:
    """Build a GapReport from the singular values of A + B."""
    lam = np.asarray(lam, dtype=float)
    if zero_tolerance is None:
        zero_tolerance = default_zero_tolerance(lam)
    if zero_tolerance < 0:
        raise InputError("zero_tolerance must be non-negative")
    nonzero = lam[lam > zero_tolerance]
    num_zero = int(lam.size - nonzero.size)
    gap = 2.0 * float(nonzero.min()) if nonzero.size else 0.0
    return GapReport(
        ground_energy=-float(lam.sum()),
        gap=gap,
        degenerate=num_zero > 0,
        zero_tolerance=float(zero_tolerance),
        num_zero_modes=num_zero,
    )


def ground_gap(pair: CoefficientPair, zero_tolerance: float | None = None) -> GapReport:
    """Ground energy and gap: twice the least (nonzero) singular value of A+B."""
    lam = np.linalg.svd(pair.c, compute_uv=False)
    return gap_report_from_singular_values(lam, zero_tolerance)


def subset_sum_spectrum(decomp: LiebDecomposition, max_modes: int = SPECTRUM_MODE_CAP) -> np.ndarray:
    """All 2^n energies {-sum(lam) + sum_{j in S} 2 lam_j}, sorted ascending."""
    n = decomp.n
    if n > max_modes:
        raise CapacityError(
            f"n={n} exceeds the spectrum enumeration cap of {max_modes} modes"
        )
    energies = np.array([-decomp.lam.sum()])
    for lam_j in decomp.lam:
        energies = np.concatenate([energies, energies + 2.0 * lam_j])
    energies.sort()
    return energies


@dataclass(frozen=True)
class EvolutionSpec:
    """Adiabatic interpolation from the trivial pair (I, 0) to a target pair."""

    target: CoefficientPair
    description: str = ""


def interpolate(spec: EvolutionSpec, s: float) -> CoefficientPair:
    """Pair at interpolation parameter s: ((1-s) I + s A, s B)."""
    if not 0.0 <= s <= 1.0:
        raise InputError(f"s must lie in [0, 1], got {s}")
    n = spec.target.n
    a = (1.0 - s) * np.eye(n) + s * spec.target.a
    b = s * spec.target.b
    return CoefficientPair(a, b)


@dataclass(frozen=True)
class GapProfile:
    """Gap reports along an interpolation grid, with the grid argmin."""

    points: tuple  # of (s, GapReport)
    min_gap_index: int

    @property
    def min_gap_s(self) -> float:
        return self.points[self.min_gap_index][0]

    @property
    def min_gap(self) -> float:
        return self.points[self.min_gap_index][1].gap


def gap_profile(spec: EvolutionSpec, s_grid, zero_tolerance: float | None = None) -> GapProfile:
    """Evaluate ground_gap along the interpolation at each grid point."""
    s_grid = np.asarray(s_grid, dtype=float)
    if s_grid.size == 0:
        raise InputError("s_grid must be nonempty")
    points = tuple(
        (float(s), ground_gap(interpolate(spec, float(s)), zero_tolerance))
        for s in s_grid
    )
    gaps = [rep.gap for _, rep in points]
    return GapProfile(points=points, min_gap_index=int(np.argmin(gaps)))
