"""Uniform per-site spin-y basis rotation and rotation-angle sweeps.

The rotation U = exp(i S_y phi) is applied to every site, with S_y the
spin-s representation at s = (d-1)/2 (for qubits S_y = sigma^y / 2, so this
reduces to exp(i sigma^y phi / 2)).  Local unitaries leave every region's
von Neumann entropy unchanged but move the ditstring probabilities, so the
mutual information traces out a basis-dependence curve under the constant
entanglement reference line.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .entropy import mutual_information, probabilities, region_entropy
from .hilbert import LatticeSpec
from .solver import PureState


def spin_y_matrix(d: int) -> np.ndarray:
    """Spin-y operator at s = (d-1)/2; |0> is the highest-weight state m = +s."""
    if d < 2:
        raise ValueError(f"spin operator needs d >= 2, got {d}")
    s = (d - 1) / 2.0
    m = s - np.arange(d)
    raising = np.zeros((d, d), dtype=complex)
    for a in range(1, d):  # S+ |m_a> lands on index a-1
        raising[a - 1, a] = np.sqrt(s * (s + 1) - m[a] * (m[a] + 1))
    return (raising - raising.conj().T) / 2j


def rotation_unitary(d: int, angle: float) -> np.ndarray:
    """Single-site U = exp(i S_y * angle)."""
    return expm(1j * spin_y_matrix(d) * angle)


def rotate_state(state: PureState, spec: LatticeSpec, angle: float) -> PureState:
    """Apply U^(tensor N) by contracting U into one site axis at a time.

    The returned state keeps the originating eigenvalue in ``energy`` as a
    label; it is generally no longer an eigenstate of the model Hamiltonian.
    """
    if state.dim != spec.dim:
        raise ValueError(f"state dimension {state.dim} != spec dimension {spec.dim}")
    u = rotation_unitary(spec.local_dim, angle)
    d, n = spec.local_dim, spec.num_sites
    tensor = state.amplitudes.astype(np.complex128).reshape((d,) * n)
    for site in range(n):
        tensor = np.moveaxis(np.tensordot(u, tensor, axes=([1], [site])), 0, site)
    amps = tensor.reshape(-1)
    amps /= np.linalg.norm(amps)
    return PureState(amplitudes=amps, energy=state.energy, gap=state.gap)


@dataclass(frozen=True)
class RotationSweep:
    angles: np.ndarray
    mutual_info: np.ndarray
    entropy: np.ndarray
    region: tuple


def rotation_sweep(state: PureState, spec: LatticeSpec, region,
                   angles=None) -> RotationSweep:
    """Mutual information of ``region`` per angle, with the von Neumann
    entropy alongside as the (constant) reference."""
    region = tuple(sorted(region))
    angles = np.linspace(0.0, np.pi, 33) if angles is None else \
        np.asarray(angles, dtype=float)
    mi = np.empty(angles.shape)
    s_vn = np.empty(angles.shape)
    for k, angle in enumerate(angles):
        rotated = rotate_state(state, spec, angle)
        mi[k] = mutual_information(probabilities(rotated, spec), region)
        s_vn[k] = region_entropy(rotated, spec, region)
    return RotationSweep(angles=angles, mutual_info=mi, entropy=s_vn,
                         region=region)
