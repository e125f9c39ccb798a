"""Entanglement and information quantities of pure qudit states.

Everything is in nats (natural logarithm).  The von Neumann entropy of a
region comes from the partial trace of the state over the region's
complement, done by index arithmetic on the amplitude vector; the full
d^N x d^N density matrix is never formed.  Shannon entropies and mutual
informations come from the ditstring probability table and its marginals,
which is exactly what hardware shot counts estimate.

The composite quantities combine region entropies over an ABCD partition:

    weak monotonicity    S_weak   = S_AB + S_BC - S_A - S_C      >= 0
    strong subadditivity S_strong = S_AB + S_BC - S_B - S_ABC    >= 0
    S_delta = (S_AB + S_BC) - eta (S_A + S_C) - (1 - eta)(S_B + S_ABC)

with eta the cross-ratio of the partition edges, so S_delta is the convex
combination eta * S_weak + (1 - eta) * S_strong.  The mutual-information
versions substitute I for S term by term and are lower-bound style
approximations: each I_R <= S_R, but the signed combinations may overshoot.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .hilbert import LatticeSpec, Partition, complement_sites, cross_ratio
from .solver import PureState

REGION_NAMES = ("A", "B", "C", "AB", "BC", "AC", "ABC")

EIGENVALUE_CLIP = 1e-12
TRACE_TOL = 1e-8
PROB_SUM_TOL = 1e-9


@dataclass(frozen=True)
class ProbabilityTable:
    """Ditstring probabilities over an ascending list of chain sites."""

    probs: np.ndarray
    sites: tuple
    local_dim: int

    def __post_init__(self):
        expected = self.local_dim ** len(self.sites)
        if self.probs.shape != (expected,):
            raise ValueError(f"table length {self.probs.shape} does not match "
                             f"d^{len(self.sites)} = {expected}")
        if (self.probs < 0).any():
            raise ValueError("probabilities must be nonnegative")
        total = float(self.probs.sum())
        if abs(total - 1.0) > PROB_SUM_TOL:
            raise ValueError(f"probabilities sum to {total}, expected 1")

    @property
    def num_sites(self) -> int:
        return len(self.sites)

    def support_size(self) -> int:
        return int(np.count_nonzero(self.probs))


@dataclass(frozen=True)
class ReducedDensityMatrix:
    """Density matrix of a site subset, ordered by ascending site index."""

    subset: tuple
    matrix: np.ndarray

    def __post_init__(self):
        defect = np.abs(self.matrix - self.matrix.conj().T).max()
        if defect > 1e-12:
            raise ValueError(f"reduced density matrix not Hermitian ({defect:.2e})")
        trace = complex(np.trace(self.matrix)).real
        if abs(trace - 1.0) > 1e-10:
            raise ValueError(f"reduced density matrix trace {trace} != 1")


@dataclass(frozen=True)
class RegionQuantities:
    von_neumann: float
    shannon: float
    mutual_info: float


@dataclass(frozen=True)
class EntropyReport:
    """All per-region and composite quantities at one parameter point."""

    regions: dict
    eta: float
    s_weak: float
    s_strong: float
    s_delta: float
    i_weak: float
    i_strong: float
    i_delta: float

    def as_row(self) -> dict:
        row = {}
        for name in REGION_NAMES:
            row[f"S_{name}"] = self.regions[name].von_neumann
        for name in REGION_NAMES:
            row[f"H_{name}"] = self.regions[name].shannon
        for name in REGION_NAMES:
            row[f"I_{name}"] = self.regions[name].mutual_info
        row.update(S_weak=self.s_weak, S_strong=self.s_strong, S_delta=self.s_delta,
                   I_weak=self.i_weak, I_strong=self.i_strong, I_delta=self.i_delta,
                   eta=self.eta)
        return row


def probabilities(state: PureState, spec: LatticeSpec) -> ProbabilityTable:
    """Born-rule table |c_n|^2 over the full chain."""
    if state.dim != spec.dim:
        raise ValueError(f"state dimension {state.dim} != spec dimension {spec.dim}")
    probs = np.abs(state.amplitudes) ** 2
    return ProbabilityTable(probs=probs, sites=tuple(range(spec.num_sites)),
                            local_dim=spec.local_dim)


def table_from_probs(probs: np.ndarray, spec: LatticeSpec) -> ProbabilityTable:
    """Wrap a raw full-system probability vector in a validated table."""
    return ProbabilityTable(probs=np.asarray(probs, dtype=np.float64),
                            sites=tuple(range(spec.num_sites)),
                            local_dim=spec.local_dim)


def shannon(table: ProbabilityTable) -> float:
    """-sum p ln p with 0 ln 0 = 0."""
    p = table.probs[table.probs > 0]
    return float(-(p * np.log(p)).sum())


def _positions(table: ProbabilityTable, subset) -> list:
    site_index = {s: k for k, s in enumerate(table.sites)}
    missing = [s for s in subset if s not in site_index]
    if missing:
        raise ValueError(f"sites {missing} are not covered by this table")
    return [site_index[s] for s in subset]


def reduce_probabilities(table: ProbabilityTable, subset) -> ProbabilityTable:
    """Marginal table over ``subset``, summing out the remaining sites."""
    subset = tuple(sorted(subset))
    if not subset:
        raise ValueError("subset must be nonempty")
    pos = _positions(table, subset)
    marg = _kernels.marginalize(table.probs, table.num_sites, table.local_dim, pos)
    return ProbabilityTable(probs=marg, sites=subset, local_dim=table.local_dim)


def mutual_information(table: ProbabilityTable, region) -> float:
    """H(region) + H(complement) - H(all), complement taken within the table."""
    region = tuple(sorted(region))
    if not region:
        raise ValueError("region must be nonempty")
    others = tuple(s for s in table.sites if s not in set(region))
    if not others:
        raise ValueError("region must be a proper subset of the table's sites")
    h_region = shannon(reduce_probabilities(table, region))
    h_others = shannon(reduce_probabilities(table, others))
    return h_region + h_others - shannon(table)


def reduced_density_matrix(state: PureState, spec: LatticeSpec,
                           subset) -> ReducedDensityMatrix:
    """Partial trace of |psi><psi| over the complement of ``subset``."""
    subset = tuple(sorted(subset))
    if not subset:
        raise ValueError("subset must be nonempty")
    if len(subset) >= spec.num_sites:
        raise ValueError("subset must be a proper subset of the chain")
    if state.dim != spec.dim:
        raise ValueError(f"state dimension {state.dim} != spec dimension {spec.dim}")
    mat = _kernels.gather_matrix(state.amplitudes, spec.num_sites,
                                 spec.local_dim, subset)
    rho = mat @ mat.conj().T
    rho = 0.5 * (rho + rho.conj().T)  # scrub round-off asymmetry
    return ReducedDensityMatrix(subset=subset, matrix=rho)


def von_neumann(rho: ReducedDensityMatrix) -> float:
    """-sum lam ln lam over the eigenvalues, clipped into [0, 1]."""
    trace = complex(np.trace(rho.matrix)).real
    if abs(trace - 1.0) > TRACE_TOL:
        raise ValueError(f"density matrix trace {trace} deviates from 1")
    lam = np.linalg.eigvalsh(rho.matrix)
    lam = np.clip(lam, 0.0, 1.0)
    lam = lam[lam > EIGENVALUE_CLIP]
    return float(-(lam * np.log(lam)).sum())


def region_entropy(state: PureState, spec: LatticeSpec, sites) -> float:
    """von Neumann entropy of a site subset of a pure state."""
    return von_neumann(reduced_density_matrix(state, spec, sites))


def composite_mutual_information(table: ProbabilityTable,
                                 partition: Partition) -> dict:
    """Mutual-information versions of the composites from a full-system table."""
    if table.sites != tuple(range(partition.num_sites)):
        raise ValueError("composites need a full-system probability table")
    i_of = {name: mutual_information(table, partition.region_sites(name))
            for name in ("A", "B", "C", "AB", "BC", "ABC")}
    eta = cross_ratio(partition)
    i_weak = i_of["AB"] + i_of["BC"] - i_of["A"] - i_of["C"]
    i_strong = i_of["AB"] + i_of["BC"] - i_of["B"] - i_of["ABC"]
    i_delta = (i_of["AB"] + i_of["BC"]) - eta * (i_of["A"] + i_of["C"]) \
        - (1.0 - eta) * (i_of["B"] + i_of["ABC"])
    return {"weak": i_weak, "strong": i_strong, "delta": i_delta, "eta": eta}


def composite_report(state: PureState, spec: LatticeSpec,
                     partition: Partition) -> EntropyReport:
    """Per-region S, H, I and the composite quantities for one state.

    Covers the regions A, B, C, AB, BC, AC and ABC; AC is the only
    non-contiguous one and enters no composite.  When D is empty, ABC is the
    whole chain and gets S = I = 0 (pure state) with H equal to the full
    Shannon entropy.
    """
    if partition.num_sites != spec.num_sites:
        raise ValueError("partition and lattice sizes differ")
    table = probabilities(state, spec)
    h_full = shannon(table)
    all_sites = tuple(range(spec.num_sites))

    regions = {}
    for name in REGION_NAMES:
        sites = partition.region_sites(name)
        if sites == all_sites:
            regions[name] = RegionQuantities(0.0, h_full, 0.0)
            continue
        s_vn = region_entropy(state, spec, sites)
        h_marg = shannon(reduce_probabilities(table, sites))
        comp = complement_sites(sites, spec.num_sites)
        h_comp = shannon(reduce_probabilities(table, comp))
        regions[name] = RegionQuantities(s_vn, h_marg, h_marg + h_comp - h_full)

    eta = cross_ratio(partition)
    s = {name: regions[name].von_neumann for name in REGION_NAMES}
    i = {name: regions[name].mutual_info for name in REGION_NAMES}
    s_weak = s["AB"] + s["BC"] - s["A"] - s["C"]
    s_strong = s["AB"] + s["BC"] - s["B"] - s["ABC"]
    s_delta = (s["AB"] + s["BC"]) - eta * (s["A"] + s["C"]) \
        - (1.0 - eta) * (s["B"] + s["ABC"])
    i_weak = i["AB"] + i["BC"] - i["A"] - i["C"]
    i_strong = i["AB"] + i["BC"] - i["B"] - i["ABC"]
    i_delta = (i["AB"] + i["BC"]) - eta * (i["A"] + i["C"]) \
        - (1.0 - eta) * (i["B"] + i["ABC"])
    return EntropyReport(regions=regions, eta=eta,
                         s_weak=s_weak, s_strong=s_strong, s_delta=s_delta,
                         i_weak=i_weak, i_strong=i_strong, i_delta=i_delta)
