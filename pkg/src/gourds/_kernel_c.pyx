# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled move kernel: legality, replay, successor generation, BFS.

Mirrors _kernel_py; `kernel` selects whichever is available.
"""

from collections import deque

import numpy as np

cimport numpy as cnp

IMPL = "cython"


cdef inline int _dir(short[:, ::1] nbr, int a, int b) nogil:
    cdef int d
    for d in range(6):
        if nbr[a, d] == b:
            return d
    return -1


def replay(short[:, ::1] nbr, short[::1] occ, short[::1] pos, int empty,
           int[:, ::1] moves):
    """Apply packed moves in order, mutating occ/pos.

    Returns (fail_index, empty); fail_index -1 means full success.
    """
    cdef int i, tail, head, target, sharp, d1, d2, delta
    cdef int e_head, e_tail
    cdef int size = occ.shape[0]
    cdef int k = moves.shape[0]
    for i in range(k):
        tail = moves[i, 0]
        head = moves[i, 1]
        target = moves[i, 2]
        sharp = moves[i, 3]
        if target != empty:
            return i, empty
        if head < 0 or head >= size or tail < 0 or tail >= size:
            return i, empty
        e_head = occ[head]
        e_tail = occ[tail]
        if e_head < 0 or e_tail < 0 or (e_head ^ e_tail) != 1:
            return i, empty
        d1 = _dir(nbr, tail, head)
        d2 = _dir(nbr, head, target)
        if d1 < 0 or d2 < 0:
            return i, empty
        delta = (d2 - d1) % 6
        if delta == 3:
            return i, empty
        if delta == 2 or delta == 4:
            if sharp:
                occ[target] = e_head
                pos[e_head] = target
                occ[head] = e_tail
                pos[e_tail] = head
                occ[tail] = -1
                empty = tail
            else:
                occ[target] = e_head
                pos[e_head] = target
                occ[head] = -1
                empty = head
        else:
            if sharp:
                return i, empty
            occ[target] = e_head
            pos[e_head] = target
            occ[head] = e_tail
            pos[e_tail] = head
            occ[tail] = -1
            empty = tail
    return -1, empty


def successors(short[:, ::1] nbr, short[::1] occ, short[::1] pos, int empty,
               int sharp_mode):
    cdef int d, head, tail, e_head, d1, d2, delta
    out = []
    for d in range(6):
        head = nbr[empty, d]
        if head < 0:
            continue
        e_head = occ[head]
        if e_head < 0:
            continue
        tail = pos[e_head ^ 1]
        d1 = _dir(nbr, tail, head)
        if d1 < 0:
            continue
        d2 = _dir(nbr, head, empty)
        delta = (d2 - d1) % 6
        if delta == 3:
            continue
        if (delta == 2 or delta == 4) and sharp_mode:
            out.append((tail, head, empty, 1))
        else:
            out.append((tail, head, empty, 0))
    return out


def bfs(short[:, ::1] nbr, short[::1] occ0, short[::1] pos0, int empty,
        int sharp_mode, long limit):
    """Breadth-first closure; returns (count, set of int16 pos byte keys),
    or (-1, None) when the limit is exceeded."""
    cdef int size = occ0.shape[0]
    cdef int ends = pos0.shape[0]
    cdef cnp.ndarray occ_arr = np.empty(size, dtype=np.int16)
    cdef cnp.ndarray pos_arr = np.empty(ends, dtype=np.int16)
    cdef short[::1] occ = occ_arr
    cdef short[::1] pos = pos_arr
    cdef int i, d, head, tail, e_head, e_tail, d1, d2, delta, cur_empty
    cdef int new_empty, saved_h, saved_t

    start = np.asarray(pos0, dtype=np.int16).tobytes()
    visited = {start}
    queue = deque([(start, empty)])
    while queue:
        cur, cur_empty = queue.popleft()
        decoded = np.frombuffer(cur, dtype=np.int16)
        for i in range(ends):
            pos[i] = decoded[i]
        for i in range(size):
            occ[i] = -1
        for i in range(ends):
            occ[pos[i]] = i
        for d in range(6):
            head = nbr[cur_empty, d]
            if head < 0:
                continue
            e_head = occ[head]
            if e_head < 0:
                continue
            e_tail = e_head ^ 1
            tail = pos[e_tail]
            d1 = _dir(nbr, tail, head)
            if d1 < 0:
                continue
            d2 = _dir(nbr, head, cur_empty)
            delta = (d2 - d1) % 6
            if delta == 3:
                continue
            saved_h = pos[e_head]
            saved_t = pos[e_tail]
            if (delta == 2 or delta == 4) and not sharp_mode:
                pos[e_head] = cur_empty
                new_empty = head
            else:
                pos[e_head] = cur_empty
                pos[e_tail] = head
                new_empty = tail
            key = pos_arr.tobytes()
            pos[e_head] = saved_h
            pos[e_tail] = saved_t
            if key not in visited:
                if len(visited) >= limit:
                    return -1, None
                visited.add(key)
                queue.append((key, new_empty))
    return len(visited), visited
