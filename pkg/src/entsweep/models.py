"""Sparse Hamiltonians for the transverse-field Ising chain, the qutrit-
truncated lattice phi^4 model, and a chain of Rydberg atoms.

All three builders produce real-symmetric matrices in the computational
(Z / occupation-number) basis, in CSR form.  Periodic chains add the wrap
bond (N-1, 0); open chains omit it.  Rydberg energies are in units of the
Rabi frequency with lattice spacing a = 1 unless overridden.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .hilbert import LatticeSpec

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]])
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]])
NUMBER_QUBIT = np.array([[0.0, 0.0], [0.0, 1.0]])  # |1><1|, Rydberg-state projector


@dataclass(frozen=True)
class SparseHamiltonian:
    """A Hermitian operator on the full d^N Hilbert space."""

    matrix: sp.csr_matrix
    spec: LatticeSpec
    hermitian: bool = True

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def entries(self):
        """(rows, cols, values) triplet view of the stored matrix."""
        coo = self.matrix.tocoo()
        return coo.row, coo.col, coo.data

    def toarray(self) -> np.ndarray:
        return self.matrix.toarray()


@dataclass(frozen=True)
class IsingParams:
    h: float = 1.0           # transverse field
    J: float = 1.0           # nearest-neighbor coupling
    basis: str = "z"         # "z": field diagonal; "x": coupling diagonal


@dataclass(frozen=True)
class Phi4Params:
    omega: float = 1.0
    lam: float = 1.0         # anharmonicity
    kappa: float = 1.0       # nearest-neighbor coupling
    n_max: int = 3           # local truncation; 3 = qutrits

    def __post_init__(self):
        if self.n_max < 2:
            raise ValueError(f"n_max must be >= 2, got {self.n_max}")


@dataclass(frozen=True)
class RydbergParams:
    rabi: float = 1.0        # Omega; sets the energy unit
    detuning: float = 0.0    # Delta
    blockade_ratio: float = 1.5   # R_b / a, dimensionless
    spacing: float = 1.0     # a

    def __post_init__(self):
        if self.blockade_ratio <= 0:
            raise ValueError(f"blockade_ratio must be positive, "
                             f"got {self.blockade_ratio}")


def _embed(ops: dict, spec: LatticeSpec) -> sp.csr_matrix:
    """Kronecker chain placing each dense (d,d) operator at its site."""
    out = sp.identity(1, format="csr")
    eye = sp.identity(spec.local_dim, format="csr")
    for site in range(spec.num_sites):
        op = ops.get(site)
        out = sp.kron(out, eye if op is None else sp.csr_matrix(op), format="csr")
    return out


def _bonds(spec: LatticeSpec):
    """Nearest-neighbor pairs; the wrap bond only on periodic chains with N > 1."""
    pairs = [(i, i + 1) for i in range(spec.num_sites - 1)]
    if spec.periodic and spec.num_sites > 1:
        pairs.append((spec.num_sites - 1, 0))
    return pairs


def truncated_ladder(n_max: int) -> np.ndarray:
    """Annihilation operator on n_max levels: a|0> = 0 and a^dag|n_max-1> = 0."""
    return np.diag(np.sqrt(np.arange(1.0, n_max)), k=1)


def field_operator(n_max: int) -> np.ndarray:
    """phi = (a + a^dag) / sqrt(2), the omega-absorbed convention."""
    a = truncated_ladder(n_max)
    return (a + a.T) / np.sqrt(2.0)


def build_ising(spec: LatticeSpec, params: IsingParams) -> SparseHamiltonian:
    """Transverse-field Ising chain, - h sum(on-site) - J sum(neighbor pair).

    The "z" basis puts the field on sigma^z and the coupling on sigma^x
    sigma^x; the "x" basis swaps the two.  The spectra coincide on periodic
    chains (the bases are related by a Hadamard on every site).
    """
    if spec.local_dim != 2:
        raise ValueError(f"Ising model requires local_dim=2, got {spec.local_dim}")
    if params.basis not in ("z", "x"):
        raise ValueError(f"basis must be 'z' or 'x', got {params.basis!r}")
    onsite, pair = (SIGMA_Z, SIGMA_X) if params.basis == "z" else (SIGMA_X, SIGMA_Z)

    h_mat = sp.csr_matrix((spec.dim, spec.dim))
    for i in range(spec.num_sites):
        h_mat = h_mat - params.h * _embed({i: onsite}, spec)
    for i, j in _bonds(spec):
        h_mat = h_mat - params.J * _embed({i: pair, j: pair}, spec)
    return SparseHamiltonian(matrix=h_mat.tocsr(), spec=spec)


def build_phi4(spec: LatticeSpec, params: Phi4Params) -> SparseHamiltonian:
    """Lattice phi^4 chain on n_max-level truncated oscillators.

    Per site: omega (a^dag a + 1/2) + lam phi^4, with phi^4 the fourth matrix
    power of the truncated phi.  Bonds contribute -2 kappa phi_j phi_{j+1}.
    """
    if spec.local_dim != params.n_max:
        raise ValueError(f"local_dim={spec.local_dim} must equal "
                         f"n_max={params.n_max}")
    a = truncated_ladder(params.n_max)
    number = a.T @ a
    phi = field_operator(params.n_max)
    phi4 = np.linalg.matrix_power(phi, 4)
    onsite = params.omega * (number + 0.5 * np.eye(params.n_max)) + params.lam * phi4

    h_mat = sp.csr_matrix((spec.dim, spec.dim))
    for i in range(spec.num_sites):
        h_mat = h_mat + _embed({i: onsite}, spec)
    for i, j in _bonds(spec):
        h_mat = h_mat - 2.0 * params.kappa * _embed({i: phi, j: phi}, spec)
    return SparseHamiltonian(matrix=h_mat.tocsr(), spec=spec)


def rydberg_distance(i: int, j: int, spec: LatticeSpec, spacing: float) -> float:
    """Chain separation of atoms i < j; minimal arc length on periodic rings."""
    gap = abs(j - i)
    if spec.periodic:
        gap = min(gap, spec.num_sites - gap)
    return spacing * gap


def build_rydberg(spec: LatticeSpec, params: RydbergParams) -> SparseHamiltonian:
    """Rydberg chain: (Omega/2) sum(flips) - Delta sum(n_i) + sum V_ij n_i n_j.

    |g> maps to |0> and |r> to |1>.  V_ij = Omega (R_b / r_ij)^6 summed over
    all pairs i < j with no distance cutoff.
    """
    if spec.local_dim != 2:
        raise ValueError(f"Rydberg model requires local_dim=2, got {spec.local_dim}")
    n = spec.num_sites
    blockade = params.blockade_ratio * params.spacing

    # Diagonal part directly from per-configuration occupations.
    occ = ((np.arange(spec.dim)[:, None] >> (n - 1 - np.arange(n))[None, :]) & 1
           ).astype(np.float64)
    diag = -params.detuning * occ.sum(axis=1)
    for i in range(n):
        for j in range(i + 1, n):
            r_ij = rydberg_distance(i, j, spec, params.spacing)
            v_ij = params.rabi * (blockade / r_ij) ** 6
            diag += v_ij * occ[:, i] * occ[:, j]

    h_mat = sp.diags(diag, format="csr")
    for i in range(n):
        h_mat = h_mat + (params.rabi / 2.0) * _embed({i: SIGMA_X}, spec)
    return SparseHamiltonian(matrix=h_mat.tocsr(), spec=spec)


# Dimensionful defaults quoted for hardware-style runs: Omega = 2.5 * 2pi MHz,
# Delta = 3.5 Omega, R_b = 8.375 um.  The ratio R_b/a stays a free geometry
# knob (1.5 matches the chain runs in this package's docs).
PAPER_RABI_MHZ = 2.5 * 2.0 * np.pi
PAPER_BLOCKADE_UM = 8.375


def rydberg_paper_defaults(blockade_ratio: float = 1.5) -> RydbergParams:
    return RydbergParams(rabi=PAPER_RABI_MHZ, detuning=3.5 * PAPER_RABI_MHZ,
                         blockade_ratio=blockade_ratio)
