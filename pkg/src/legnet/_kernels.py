"""Hot kernels for dense joint-table work.

Tables are flat arrays of ``2**n`` cells in little-endian order: bit ``k``
of a cell index is the truth value of event ``k``. The two operations that
dominate runtime are marginalization onto an event subset and the
proportional rescale step of the fitting loop; both are compiled with
numba when it is available.

Set ``LEGNET_DISABLE_NUMBA=1`` to force the pure-numpy fallback (the jit
variants are still defined when numba imports, so the benchmark can compare
both paths side by side).
"""

from __future__ import annotations

import os

import numpy as np

_DISABLE = os.environ.get("LEGNET_DISABLE_NUMBA", "").lower() in ("1", "true", "yes")


def _projection_indices(n_cells: int, positions: np.ndarray) -> np.ndarray:
    idx = np.arange(n_cells, dtype=np.int64)
    proj = np.zeros(n_cells, dtype=np.int64)
    for k in range(positions.shape[0]):
        proj |= ((idx >> positions[k]) & 1) << k
    return proj


def marginalize_numpy(cells: np.ndarray, positions: np.ndarray, m: int) -> np.ndarray:
    """Sum cells onto the subset of events at ``positions`` (subset bit k
    of the output index comes from source bit ``positions[k]``)."""
    proj = _projection_indices(cells.shape[0], positions)
    return np.bincount(proj, weights=cells, minlength=1 << m)


def rescale_numpy(cells: np.ndarray, positions: np.ndarray, ratio: np.ndarray) -> np.ndarray:
    """Multiply each cell by the ratio of its projected subset cell."""
    proj = _projection_indices(cells.shape[0], positions)
    return cells * ratio[proj]


NUMBA_ENABLED = False
marginalize_jit = None
rescale_jit = None

if not _DISABLE:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is a declared dependency
        pass
    else:
        @njit(cache=True)
        def marginalize_jit(cells, positions, m):  # type: ignore[no-redef]
            out = np.zeros(1 << m, dtype=np.float64)
            for i in range(cells.shape[0]):
                s = 0
                for k in range(positions.shape[0]):
                    s |= ((i >> positions[k]) & 1) << k
                out[s] += cells[i]
            return out

        @njit(cache=True)
        def rescale_jit(cells, positions, ratio):  # type: ignore[no-redef]
            out = np.empty_like(cells)
            for i in range(cells.shape[0]):
                s = 0
                for k in range(positions.shape[0]):
                    s |= ((i >> positions[k]) & 1) << k
                out[i] = cells[i] * ratio[s]
            return out

        NUMBA_ENABLED = True


if NUMBA_ENABLED:
    marginalize_cells = marginalize_jit
    rescale_cells = rescale_jit
else:
    marginalize_cells = marginalize_numpy
    rescale_cells = rescale_numpy


def warmup() -> None:
    """Trigger jit compilation on a tiny table so timed code never pays it."""
    cells = np.array([0.25, 0.25, 0.25, 0.25])
    pos = np.array([0], dtype=np.int64)
    marginalize_cells(cells, pos, 1)
    rescale_cells(cells, pos, np.array([1.0, 1.0]))
