"""Kernel selection: compiled extension when available, pure Python otherwise.

Set GOURDS_PURE=1 to force the pure-Python kernel.  Both kernels share the
packed representation from `tables`; these wrappers accept plain lists and
convert for the compiled kernel.
"""

from __future__ import annotations

import os

import numpy as np

from . import _kernel_py

_impl = None
if os.environ.get("GOURDS_PURE", "") != "1":
    try:
        from . import _kernel_c as _impl  # type: ignore
    except ImportError:
        _impl = None

IMPL = _impl.IMPL if _impl is not None else _kernel_py.IMPL


def replay(tables, occ: list[int], pos: list[int], empty: int, moves):
    """Apply packed moves, mutating occ/pos lists.  Returns (fail_index,
    empty); fail_index -1 means all moves were legal and applied."""
    if _impl is None or not moves:
        return _kernel_py.replay(tables.nbr, occ, pos, empty, moves)
    occ_arr = np.asarray(occ, dtype=np.int16)
    pos_arr = np.asarray(pos, dtype=np.int16)
    moves_arr = np.asarray(moves, dtype=np.int32).reshape(len(moves), 4)
    fail, empty = _impl.replay(tables.nbr_arr, occ_arr, pos_arr, empty, moves_arr)
    occ[:] = occ_arr.tolist()
    pos[:] = pos_arr.tolist()
    return fail, empty


def successors(tables, occ, pos, empty, sharp_mode: bool):
    if _impl is None:
        return _kernel_py.successors(tables.nbr, occ, pos, empty, 1 if sharp_mode else 0)
    occ_arr = np.asarray(occ, dtype=np.int16)
    pos_arr = np.asarray(pos, dtype=np.int16)
    return _impl.successors(tables.nbr_arr, occ_arr, pos_arr, empty, 1 if sharp_mode else 0)


def bfs(tables, occ, pos, empty, sharp_mode: bool, limit: int):
    """Returns (count, key set); count -1 when limit exceeded.  Keys are the
    int16-packed `pos` arrays of the reachable states."""
    if _impl is None:
        return _kernel_py.bfs(tables.nbr, occ, pos, empty, 1 if sharp_mode else 0, limit)
    occ_arr = np.asarray(occ, dtype=np.int16)
    pos_arr = np.asarray(pos, dtype=np.int16)
    return _impl.bfs(tables.nbr_arr, occ_arr, pos_arr, empty, 1 if sharp_mode else 0, limit)
