"""Pure-Python move kernel: legality, replay, successor generation, BFS.

Mirrors the compiled kernel in _kernel_c.pyx; `kernel` picks one at import.
All functions work on the packed representation of `tables`.
"""

from __future__ import annotations

from array import array
from collections import deque

IMPL = "python"


def replay(nbr, occ, pos, empty, moves):
    """Apply packed moves in order, mutating occ/pos.

    Returns (fail_index, empty): fail_index is -1 on full success, else the
    index of the first illegal move (state is left as of that move).
    """
    for i, (tail, head, target, sharp) in enumerate(moves):
        if target != empty:
            return i, empty
        e_head = occ[head] if 0 <= head < len(occ) else -1
        e_tail = occ[tail] if 0 <= tail < len(occ) else -1
        if e_head < 0 or e_tail < 0 or (e_head ^ e_tail) != 1:
            return i, empty
        d1 = -1
        row = nbr[tail]
        for d in range(6):
            if row[d] == head:
                d1 = d
                break
        d2 = -1
        row = nbr[head]
        for d in range(6):
            if row[d] == target:
                d2 = d
                break
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


def successors(nbr, occ, pos, empty, sharp_mode):
    """All legal moves from the given state, as packed tuples, in the fixed
    angular-scan order around the empty cell."""
    out = []
    row_e = nbr[empty]
    for d in range(6):
        head = row_e[d]
        if head < 0:
            continue
        e_head = occ[head]
        if e_head < 0:
            continue
        tail = pos[e_head ^ 1]
        d1 = -1
        row = nbr[tail]
        for k in range(6):
            if row[k] == head:
                d1 = k
                break
        if d1 < 0:
            continue
        d2 = -1
        row = nbr[head]
        for k in range(6):
            if row[k] == empty:
                d2 = k
                break
        delta = (d2 - d1) % 6
        if delta == 3:
            continue
        if (delta == 2 or delta == 4) and sharp_mode:
            out.append((tail, head, empty, 1))
        else:
            out.append((tail, head, empty, 0))
    return out


def bfs(nbr, occ, pos, empty, sharp_mode, limit):
    """Breadth-first closure of the state space.

    Returns (count, keys) where keys is a set of int16-packed `pos` byte
    strings.  Returns count = -1 if the limit was exceeded.
    """
    size = len(occ)
    start = tuple(pos)
    visited = {start}
    queue = deque([(start, empty)])
    scratch = [-1] * size
    while queue:
        cur, cur_empty = queue.popleft()
        for i in range(size):
            scratch[i] = -1
        for e, c in enumerate(cur):
            scratch[c] = e
        for tail, head, target, sharp in successors(nbr, scratch, cur, cur_empty, sharp_mode):
            e_head = scratch[head]
            e_tail = scratch[tail]
            nxt = list(cur)
            if sharp == 0 and _is_triangle(nbr, tail, head, target):
                nxt[e_head] = target
                new_empty = head
            else:
                nxt[e_head] = target
                nxt[e_tail] = head
                new_empty = tail
            nxt_t = tuple(nxt)
            if nxt_t not in visited:
                if len(visited) >= limit:
                    return -1, None
                visited.add(nxt_t)
                queue.append((nxt_t, new_empty))
    keys = {array("h", state).tobytes() for state in visited}
    return len(visited), keys


def _is_triangle(nbr, tail, head, target):
    row = nbr[tail]
    for d in range(6):
        if row[d] == target:
            return True
    return False
