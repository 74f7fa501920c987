"""Pure-Python versions of the enumeration kernels.

Permutations here are integer arrays on points ``0..L-1``.  The compiled
module ``_kernels`` implements the same functions with identical results.
"""
from __future__ import annotations

import itertools

import numpy as np

MODE_ALL = 0
MODE_CONNECTED = 1
MODE_CENTRED = 2


def row_cycle_counts(perms: np.ndarray) -> np.ndarray:
    """Number of cycles of every row of a 2-d array of permutations."""
    perms = np.asarray(perms)
    n_rows, width = perms.shape
    out = np.zeros(n_rows, dtype=np.int64)
    for r in range(n_rows):
        row = perms[r].tolist()
        seen = [False] * width
        count = 0
        for start in range(width):
            if seen[start]:
                continue
            count += 1
            x = start
            while not seen[x]:
                seen[x] = True
                x = row[x]
        out[r] = count
    return out


def _find(parent: list[int], a: int) -> int:
    while parent[a] != a:
        parent[a] = parent[parent[a]]
        a = parent[a]
    return a


def _admissible(pi, block, group, n_blocks, n_groups, mode) -> bool:
    parent = list(range(n_blocks))
    for x, y in enumerate(pi):
        ra, rb = _find(parent, block[x]), _find(parent, block[y])
        if ra != rb:
            parent[ra] = rb
    if mode == MODE_CENTRED:
        sizes = [0] * n_blocks
        for b in range(n_blocks):
            sizes[_find(parent, b)] += 1
        if any(sizes[_find(parent, b)] < 2 for b in range(n_blocks)):
            return False
    gparent = list(range(n_groups))
    for b in range(n_blocks):
        ra, rb = _find(gparent, group[b]), _find(gparent, group[_find(parent, b)])
        if ra != rb:
            gparent[ra] = rb
    root = _find(gparent, 0)
    return all(_find(gparent, g) == root for g in range(n_groups))


def accumulate(members, globs, classes, n_classes, gamma_plus, gamma_minus_inv,
               block, group, n_groups, mode):
    """Histogram of vertex-cycle counts over all tuples of class members.

    ``members[c]`` holds the candidate permutations of colour ``c`` on its
    local points, ``globs[c]`` maps local points to global ones and
    ``classes[c]`` assigns each member a weight class.  For every tuple the
    global permutation ``pi`` is assembled and, if it passes the
    connectivity filter, ``hist[v, combo]`` is incremented where ``v`` is
    the number of cycles of ``gamma_minus_inv ∘ pi ∘ gamma_plus`` and
    ``combo`` the mixed-radix index of the members' weight classes.
    """
    width = len(gamma_plus)
    n_combo = 1
    for k in n_classes:
        n_combo *= int(k)
    hist = np.zeros((width + 1, n_combo), dtype=np.int64)
    if any(len(m) == 0 for m in members):
        return hist
    gp = [int(x) for x in gamma_plus]
    gmi = [int(x) for x in gamma_minus_inv]
    blk = [int(x) for x in block]
    grp = [int(x) for x in group]
    n_blocks = len(grp)
    rows = [m.tolist() for m in members]
    gl = [g.tolist() for g in globs]
    cls = [c.tolist() for c in classes]
    pi = list(range(width))
    for idx in itertools.product(*(range(len(r)) for r in rows)):
        combo = 0
        for c, i in enumerate(idx):
            g = gl[c]
            for j, t in enumerate(rows[c][i]):
                pi[g[j]] = g[t]
            combo = combo * n_classes[c] + cls[c][i]
        if mode != MODE_ALL and not _admissible(pi, blk, grp, n_blocks, n_groups, mode):
            continue
        seen = [False] * width
        v = 0
        for start in range(width):
            if seen[start]:
                continue
            v += 1
            x = start
            while not seen[x]:
                seen[x] = True
                x = gmi[pi[gp[x]]]
        hist[v, combo] += 1
    return hist
