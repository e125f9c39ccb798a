"""Qudit computational basis, ditstring indexing, and ABCD chain partitions.

A ditstring is the base-d generalization of a bitstring: site j carries a
digit n_j in [0, d-1], and digit n_0 is the most significant, so a basis
index decodes as  index = sum_j n_j * d**(N-1-j).

Partitions label every site of the ring with one of A, B, C, D.  The blocks
must be cyclically contiguous in the order A, B, C, D (D may wrap around the
end of the pattern string, and may be empty only on request).  The four
block-boundary coordinates x1..x4 are taken in the rotated frame in which
the A block starts the chain at its original site index, so they satisfy
x1 < x2 < x3 < x4 and may exceed N-1 when blocks wrap.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

MAX_DIM = 2 ** 31
LABELS = "ABCD"

Boundary = str  # "pbc" | "obc"


@dataclass(frozen=True)
class LatticeSpec:
    """A 1D chain of ``num_sites`` qudits with ``local_dim`` levels each."""

    num_sites: int
    local_dim: int
    boundary: str = "pbc"

    def __post_init__(self):
        if self.num_sites < 1:
            raise ValueError(f"num_sites must be positive, got {self.num_sites}")
        if self.local_dim < 2:
            raise ValueError(f"local_dim must be >= 2, got {self.local_dim}")
        if self.boundary not in ("pbc", "obc"):
            raise ValueError(f"boundary must be 'pbc' or 'obc', got {self.boundary!r}")
        if self.local_dim ** self.num_sites > MAX_DIM:
            raise ValueError(
                f"d^N = {self.local_dim}^{self.num_sites} exceeds the supported "
                f"index range ({MAX_DIM})")

    @property
    def dim(self) -> int:
        return self.local_dim ** self.num_sites

    @property
    def periodic(self) -> bool:
        return self.boundary == "pbc"


def index_to_dits(index: int, spec: LatticeSpec) -> np.ndarray:
    """Digits of a basis index, most significant first."""
    if not 0 <= index < spec.dim:
        raise ValueError(f"index {index} out of range [0, {spec.dim})")
    dits = np.empty(spec.num_sites, dtype=np.int64)
    for j in range(spec.num_sites - 1, -1, -1):
        dits[j] = index % spec.local_dim
        index //= spec.local_dim
    return dits


def dits_to_index(dits, spec: LatticeSpec) -> int:
    """Inverse of :func:`index_to_dits`."""
    dits = np.asarray(dits, dtype=np.int64)
    if dits.shape != (spec.num_sites,):
        raise ValueError(f"expected {spec.num_sites} digits, got {dits.shape}")
    if (dits < 0).any() or (dits >= spec.local_dim).any():
        raise ValueError(f"digit out of range for local_dim={spec.local_dim}: {dits}")
    index = 0
    for n in dits:
        index = index * spec.local_dim + int(n)
    return index


def dits_to_text(dits) -> str:
    """Serialize digits as concatenated decimal characters (requires d <= 10)."""
    dits = np.asarray(dits, dtype=np.int64)
    if (dits > 9).any():
        raise ValueError("text serialization of ditstrings requires local_dim <= 10")
    return "".join(str(int(n)) for n in dits)


def text_to_dits(text: str, spec: LatticeSpec) -> np.ndarray:
    """Parse a concatenated-decimal ditstring, validating length and digit range."""
    if spec.local_dim > 10:
        raise ValueError("text serialization of ditstrings requires local_dim <= 10")
    if len(text) != spec.num_sites:
        raise ValueError(f"ditstring {text!r} has length {len(text)}, "
                         f"expected {spec.num_sites}")
    if not text.isdigit():
        raise ValueError(f"ditstring {text!r} contains non-digit characters")
    dits = np.array([int(c) for c in text], dtype=np.int64)
    if (dits >= spec.local_dim).any():
        raise ValueError(f"ditstring {text!r} has digits >= local_dim={spec.local_dim}")
    return dits


@dataclass(frozen=True)
class Partition:
    """ABCD labeling of a ring, with per-label site subsets and block edges."""

    pattern: str
    subsets: dict = field(repr=False)
    edges: tuple  # (x1, x2, x3, x4) in the rotated frame where A starts the chain

    @property
    def num_sites(self) -> int:
        return len(self.pattern)

    def region_sites(self, region) -> tuple:
        return subset_sites(self, region)


def parse_partition(pattern: str, spec: LatticeSpec, *,
                    allow_empty_d: bool = False) -> Partition:
    """Validate an ABCD pattern string and compute subsets and edges.

    The pattern assigns site i the label at character i.  Blocks must read
    A, B, C, D contiguously under some cyclic rotation; A, B, C must be
    nonempty, and D may be empty only when ``allow_empty_d`` is set.
    """
    n = spec.num_sites
    if len(pattern) != n:
        raise ValueError(f"pattern length {len(pattern)} != num_sites {n}")
    bad = set(pattern) - set(LABELS)
    if bad:
        raise ValueError(f"illegal partition characters: {sorted(bad)}")
    for lab in "ABC":
        if lab not in pattern:
            raise ValueError(f"partition block {lab} is empty in {pattern!r}")
    if "D" not in pattern and not allow_empty_d:
        raise ValueError(f"partition {pattern!r} has no D block; "
                         "pass allow_empty_d=True for three-part splits")

    starts = [i for i in range(n) if pattern[i] == "A" and pattern[i - 1] != "A"]
    if len(starts) != 1:
        raise ValueError(f"partition {pattern!r} is not cyclically contiguous")
    rot_start = starts[0]
    rotated = "".join(pattern[(rot_start + i) % n] for i in range(n))
    m = re.fullmatch(r"(A+)(B+)(C+)(D*)", rotated)
    if m is None:
        raise ValueError(f"partition {pattern!r} blocks are not in cyclic "
                         "order A, B, C, D")

    sizes = {lab: len(m.group(k + 1)) for k, lab in enumerate(LABELS)}
    x1 = rot_start
    x2 = x1 + sizes["A"]
    x3 = x2 + sizes["B"]
    x4 = x3 + sizes["C"]
    subsets = {
        lab: tuple(sorted((rot_start + i) % n
                          for i in range(n) if rotated[i] == lab))
        for lab in LABELS
    }
    return Partition(pattern=pattern, subsets=subsets, edges=(x1, x2, x3, x4))


def subset_sites(partition: Partition, region) -> tuple:
    """Union of the labels' site lists, in ascending site order."""
    labels = set(region)
    if not labels:
        raise ValueError("region must contain at least one label")
    bad = labels - set(LABELS)
    if bad:
        raise ValueError(f"unknown region labels: {sorted(bad)}")
    sites = sorted(set().union(*(partition.subsets[lab] for lab in labels)))
    return tuple(sites)


def complement_sites(sites, num_sites: int) -> tuple:
    """Sites of the chain not contained in ``sites``."""
    inside = set(sites)
    return tuple(i for i in range(num_sites) if i not in inside)


def cross_ratio(partition: Partition) -> float:
    """Conformal cross-ratio of the four block edges, eta in [0, 1]."""
    x1, x2, x3, x4 = partition.edges
    return (x2 - x1) * (x4 - x3) / ((x3 - x1) * (x4 - x2))
