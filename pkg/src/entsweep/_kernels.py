"""Index-arithmetic kernels on ditstring-indexed arrays.

The two operations here (marginalizing a probability table onto a site
subset, and gathering a state vector into a subset-by-complement matrix)
are the inner loops of every entropy sweep, so they carry numba-compiled
versions alongside plain-numpy reshape/transpose implementations.

Backend selection: the env variable ``ENTSWEEP_NUMBA`` picks the backend at
import time ("0"/"false"/"off" forces pure numpy; anything else, or unset,
uses numba when it is importable).  ``benchmarks/bench_kernels.py`` compares
the two.
"""

from __future__ import annotations

import os

import numpy as np

_FALSY = {"0", "false", "off", "no"}


def _numba_requested() -> bool:
    return os.environ.get("ENTSWEEP_NUMBA", "1").strip().lower() not in _FALSY


try:
    from numba import njit

    _NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _NUMBA_AVAILABLE = False

USE_NUMBA = _NUMBA_AVAILABLE and _numba_requested()


def active_backend() -> str:
    """Name of the backend the public kernels dispatch to."""
    return "numba" if USE_NUMBA else "numpy"


def _digit_weights(num_sites: int, local_dim: int) -> np.ndarray:
    """Place values of each site's digit, most significant first."""
    return local_dim ** np.arange(num_sites - 1, -1, -1, dtype=np.int64)


def _split_weights(num_sites, local_dim, keep):
    """Per-site divisors and output weights for a keep/drop index split."""
    keep = np.asarray(keep, dtype=np.int64)
    drop = np.array([s for s in range(num_sites) if s not in set(keep.tolist())],
                    dtype=np.int64)
    div = _digit_weights(num_sites, local_dim)
    wk = _digit_weights(len(keep), local_dim) if len(keep) else np.zeros(0, np.int64)
    wd = _digit_weights(len(drop), local_dim) if len(drop) else np.zeros(0, np.int64)
    return keep, drop, div, wk, wd


# ---------------------------------------------------------------------------
# pure-numpy implementations
# ---------------------------------------------------------------------------

def marginalize_numpy(probs: np.ndarray, num_sites: int, local_dim: int,
                      keep) -> np.ndarray:
    """Sum ``probs`` over the sites not in ``keep`` (ascending site order)."""
    keep = list(keep)
    drop = tuple(s for s in range(num_sites) if s not in set(keep))
    if not drop:
        return np.array(probs, copy=True)
    shaped = probs.reshape((local_dim,) * num_sites)
    return shaped.sum(axis=drop).reshape(-1)


def gather_matrix_numpy(amps: np.ndarray, num_sites: int, local_dim: int,
                        keep) -> np.ndarray:
    """Reshape ``amps`` into a (d^|keep|, d^|rest|) matrix, keep sites as rows."""
    keep = list(keep)
    drop = [s for s in range(num_sites) if s not in set(keep)]
    shaped = amps.reshape((local_dim,) * num_sites)
    return np.ascontiguousarray(shaped.transpose(keep + drop)).reshape(
        local_dim ** len(keep), local_dim ** len(drop))


# ---------------------------------------------------------------------------
# numba implementations
# ---------------------------------------------------------------------------

if _NUMBA_AVAILABLE:

    @njit(cache=True)
    def _marginalize_kernel(probs, div_keep, w_keep, local_dim, out):
        for i in range(probs.shape[0]):
            j = 0
            for k in range(div_keep.shape[0]):
                j += ((i // div_keep[k]) % local_dim) * w_keep[k]
            out[j] += probs[i]

    @njit(cache=True)
    def _gather_kernel(amps, div_keep, w_keep, div_drop, w_drop, local_dim, out):
        for i in range(amps.shape[0]):
            r = 0
            for k in range(div_keep.shape[0]):
                r += ((i // div_keep[k]) % local_dim) * w_keep[k]
            c = 0
            for k in range(div_drop.shape[0]):
                c += ((i // div_drop[k]) % local_dim) * w_drop[k]
            out[r, c] = amps[i]


def marginalize_numba(probs: np.ndarray, num_sites: int, local_dim: int,
                      keep) -> np.ndarray:
    keep, _, div, wk, _ = _split_weights(num_sites, local_dim, keep)
    out = np.zeros(local_dim ** len(keep), dtype=np.float64)
    _marginalize_kernel(np.ascontiguousarray(probs, dtype=np.float64),
                        div[keep], wk, local_dim, out)
    return out


def gather_matrix_numba(amps: np.ndarray, num_sites: int, local_dim: int,
                        keep) -> np.ndarray:
    keep, drop, div, wk, wd = _split_weights(num_sites, local_dim, keep)
    out = np.empty((local_dim ** len(keep), local_dim ** len(drop)),
                   dtype=np.complex128)
    _gather_kernel(np.ascontiguousarray(amps, dtype=np.complex128),
                   div[keep], wk, div[drop], wd, local_dim, out)
    return out


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

if USE_NUMBA:
    marginalize = marginalize_numba
    gather_matrix = gather_matrix_numba
else:
    marginalize = marginalize_numpy
    gather_matrix = gather_matrix_numpy
