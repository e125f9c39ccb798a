"""Ground states of sparse Hermitian matrices and curvature-based
critical-point detection.

Small problems (dim <= 1024) go through a dense symmetric eigensolver;
larger ones use ARPACK's implicitly restarted Lanczos with a fixed,
deterministic start vector.  Either way the returned state is phase-fixed
(largest-magnitude amplitude real and nonnegative) and checked against a
residual tolerance, and the gap to the first excited state is reported so
callers can see when the "unique finite-size ground state" assumption is
fragile.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.sparse.linalg import eigsh

from .models import SparseHamiltonian

DENSE_DIM_MAX = 1024


class ConvergenceError(RuntimeError):
    """The iterative eigensolver failed to reach the residual tolerance."""


class DegeneracyWarning(UserWarning):
    """Ground state is nearly degenerate; entropies may be basis-sensitive."""


@dataclass(frozen=True)
class SolverConfig:
    residual_tol: float = 1e-9
    max_iterations: int = 10_000
    degeneracy_rtol: float = 1e-8
    fallback_seed: int = 20_240_101


@dataclass(frozen=True)
class PureState:
    """Normalized state over the d^N computational basis."""

    amplitudes: np.ndarray
    energy: float
    gap: float | None = None

    def __post_init__(self):
        norm = np.linalg.norm(self.amplitudes)
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"state norm deviates from 1 by {abs(norm - 1.0):.2e}")

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]


@dataclass(frozen=True)
class EnergyCurve:
    """Ground energies on a strictly increasing parameter grid."""

    parameters: np.ndarray
    energies: np.ndarray

    def __post_init__(self):
        if self.parameters.shape != self.energies.shape:
            raise ValueError("parameter and energy grids differ in length")
        if not (np.diff(self.parameters) > 0).all():
            raise ValueError("parameter grid must be strictly increasing")


def fix_phase(amplitudes: np.ndarray) -> np.ndarray:
    """Rotate the global phase so the largest-magnitude entry is real >= 0."""
    k = int(np.argmax(np.abs(amplitudes)))
    pivot = amplitudes[k]
    if pivot == 0:
        return amplitudes
    return amplitudes * (np.conj(pivot) / abs(pivot))


def _check_hermitian(ham: SparseHamiltonian):
    if not ham.hermitian:
        raise ValueError("ground_state requires a Hermitian Hamiltonian")
    defect = abs(ham.matrix - ham.matrix.conj().T)
    if defect.nnz and defect.max() > 0:
        raise ValueError("Hamiltonian matrix is not Hermitian")


def ground_state(ham: SparseHamiltonian,
                 config: SolverConfig = SolverConfig()) -> PureState:
    """Lowest eigenpair of a Hermitian Hamiltonian, deterministic and
    phase-fixed; the gap E1 - E0 rides along on the returned state."""
    _check_hermitian(ham)
    dim = ham.dim
    mat = ham.matrix

    if dim == 1:
        value = float(mat.toarray()[0, 0].real)
        return PureState(amplitudes=np.array([1.0 + 0j]), energy=value, gap=None)

    if dim <= DENSE_DIM_MAX:
        vals, vecs = np.linalg.eigh(mat.toarray())
        energy, vec, gap = vals[0], vecs[:, 0], float(vals[1] - vals[0])
    else:
        energy, vec, gap = _lanczos_lowest(mat, dim, config)

    vec = fix_phase(vec.astype(np.complex128))
    vec /= np.linalg.norm(vec)

    residual = np.linalg.norm(mat @ vec - energy * vec)
    if residual > config.residual_tol:
        raise ConvergenceError(
            f"ground-state residual {residual:.2e} exceeds tolerance "
            f"{config.residual_tol:.1e}")
    if gap is not None and gap < config.degeneracy_rtol * max(1.0, abs(energy)):
        warnings.warn(
            f"near-degenerate ground state: gap {gap:.3e} at E0 {energy:.6f}",
            DegeneracyWarning, stacklevel=2)
    return PureState(amplitudes=vec, energy=float(energy), gap=gap)


def _lanczos_lowest(mat, dim, config: SolverConfig):
    """Two lowest eigenpairs via ARPACK, retrying from a seeded vector once."""
    start_vectors = [np.full(dim, dim ** -0.5)]
    rng = np.random.default_rng(config.fallback_seed)
    start_vectors.append(rng.standard_normal(dim))
    last_error = None
    for attempt, v0 in enumerate(start_vectors):
        try:
            vals, vecs = eigsh(mat, k=2, which="SA", v0=v0, tol=0,
                               maxiter=config.max_iterations * (attempt + 1))
        except Exception as exc:  # ArpackNoConvergence and friends
            last_error = exc
            continue
        order = np.argsort(vals)
        vals, vecs = vals[order], vecs[:, order]
        return float(vals[0]), vecs[:, 0], float(vals[1] - vals[0])
    raise ConvergenceError(f"Lanczos failed to converge: {last_error}")


def second_derivative(curve: EnergyCurve) -> np.ndarray:
    """Central second differences of E0 on the interior of a uniform grid."""
    grid = np.asarray(curve.parameters, dtype=float)
    if grid.size < 3:
        raise ValueError("second derivative needs at least 3 grid points")
    steps = np.diff(grid)
    if not np.allclose(steps, steps[0], rtol=1e-8, atol=1e-12):
        raise ValueError("second derivative requires a uniform grid")
    e = np.asarray(curve.energies, dtype=float)
    return (e[2:] - 2.0 * e[1:-1] + e[:-2]) / steps[0] ** 2


def locate_discontinuity(second_derivs: np.ndarray,
                         interior_grid: np.ndarray) -> float | None:
    """Parameter of the largest jump of d2E/dx2 between adjacent points.

    The reported location is the right-hand point of the winning pair; ties
    go to the pair at the smaller parameter.  Returns None when the input
    has no variation (no discontinuity to report).
    """
    d2 = np.asarray(second_derivs, dtype=float)
    grid = np.asarray(interior_grid, dtype=float)
    if d2.shape != grid.shape:
        raise ValueError("curvature values and interior grid differ in length")
    if d2.size < 2 or np.all(d2 == d2[0]):
        return None
    jumps = np.abs(np.diff(d2))
    k = int(np.argmax(jumps))  # first occurrence = smaller parameter
    return float(grid[k + 1])
