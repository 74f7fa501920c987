# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled enumeration kernels; see ``_kernels_py`` for the reference versions."""
import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, free

cnp.import_array()

MODE_ALL = 0
MODE_CONNECTED = 1
MODE_CENTRED = 2


def row_cycle_counts(perms):
    cdef cnp.int32_t[:, ::1] p = np.ascontiguousarray(perms, dtype=np.int32)
    cdef Py_ssize_t n_rows = p.shape[0], width = p.shape[1], r, s, x
    cdef cnp.int64_t[::1] out = np.zeros(n_rows, dtype=np.int64)
    cdef int *stamp = <int *> malloc(max(width, 1) * sizeof(int))
    cdef int count
    for s in range(width):
        stamp[s] = -1
    try:
        for r in range(n_rows):
            count = 0
            for s in range(width):
                if stamp[s] == r:
                    continue
                count += 1
                x = s
                while stamp[x] != r:
                    stamp[x] = r
                    x = p[r, x]
            out[r] = count
    finally:
        free(stamp)
    return np.asarray(out)


cdef inline int _find(int *parent, int a) nogil:
    while parent[a] != a:
        parent[a] = parent[parent[a]]
        a = parent[a]
    return a


cdef bint _admissible(int *pi, int width, int *block, int *group, int n_blocks,
                      int n_groups, int mode, int *parent, int *gparent, int *sizes) nogil:
    cdef int x, b, ra, rb, root
    for b in range(n_blocks):
        parent[b] = b
        sizes[b] = 0
    for x in range(width):
        ra = _find(parent, block[x])
        rb = _find(parent, block[pi[x]])
        if ra != rb:
            parent[ra] = rb
    if mode == 2:
        for b in range(n_blocks):
            sizes[_find(parent, b)] += 1
        for b in range(n_blocks):
            if sizes[_find(parent, b)] < 2:
                return False
    for b in range(n_groups):
        gparent[b] = b
    for b in range(n_blocks):
        ra = _find(gparent, group[b])
        rb = _find(gparent, group[_find(parent, b)])
        if ra != rb:
            gparent[ra] = rb
    root = _find(gparent, 0)
    for b in range(n_groups):
        if _find(gparent, b) != root:
            return False
    return True


def accumulate(members, globs, classes, n_classes, gamma_plus, gamma_minus_inv,
               block, group, n_groups, mode):
    cdef int n_colours = len(members)
    cdef int width = len(gamma_plus)
    cdef long long n_combo = 1
    for k in n_classes:
        n_combo *= int(k)
    hist_arr = np.zeros((width + 1, n_combo), dtype=np.int64)
    if any(len(m) == 0 for m in members):
        return hist_arr
    cdef cnp.int64_t[:, ::1] hist = hist_arr

    flat_m = np.ascontiguousarray(np.concatenate([np.asarray(m, dtype=np.int32).ravel() for m in members]))
    flat_g = np.ascontiguousarray(np.concatenate([np.asarray(g, dtype=np.int32) for g in globs]))
    flat_c = np.ascontiguousarray(np.concatenate([np.asarray(c, dtype=np.int32) for c in classes]))
    moff = np.zeros(n_colours, dtype=np.int64)
    goff = np.zeros(n_colours, dtype=np.int64)
    coff = np.zeros(n_colours, dtype=np.int64)
    sizes_k = np.zeros(n_colours, dtype=np.int64)
    lens = np.zeros(n_colours, dtype=np.int64)
    radix = np.zeros(n_colours, dtype=np.int64)
    pos_m = pos_g = pos_c = 0
    for c in range(n_colours):
        moff[c], goff[c], coff[c] = pos_m, pos_g, pos_c
        sizes_k[c] = len(members[c])
        lens[c] = len(globs[c])
        radix[c] = int(n_classes[c])
        pos_m += members[c].size
        pos_g += len(globs[c])
        pos_c += len(classes[c])

    cdef cnp.int32_t[::1] fm = flat_m
    cdef cnp.int32_t[::1] fg = flat_g
    cdef cnp.int32_t[::1] fc = flat_c
    cdef cnp.int64_t[::1] mo = moff, go = goff, co = coff, kk = sizes_k, ll = lens, rx = radix
    cdef cnp.int32_t[::1] gp = np.ascontiguousarray(gamma_plus, dtype=np.int32)
    cdef cnp.int32_t[::1] gmi = np.ascontiguousarray(gamma_minus_inv, dtype=np.int32)
    cdef cnp.int32_t[::1] blk = np.ascontiguousarray(block, dtype=np.int32)
    cdef cnp.int32_t[::1] grp = np.ascontiguousarray(group, dtype=np.int32)
    cdef int n_blocks = len(group)
    cdef int ngroups = n_groups
    cdef int cmode = mode

    cdef int *pi = <int *> malloc(max(width, 1) * sizeof(int))
    cdef long long *stamp = <long long *> malloc(max(width, 1) * sizeof(long long))
    cdef long long *idx = <long long *> malloc(max(n_colours, 1) * sizeof(long long))
    cdef int *blockp = <int *> malloc(max(width, 1) * sizeof(int))
    cdef int *groupp = <int *> malloc(max(n_blocks, 1) * sizeof(int))
    cdef int *parent = <int *> malloc(max(n_blocks, 1) * sizeof(int))
    cdef int *gparent = <int *> malloc(max(ngroups, 1) * sizeof(int))
    cdef int *bsizes = <int *> malloc(max(n_blocks, 1) * sizeof(int))
    cdef int c2, j, x, v, start
    cdef long long combo, tick = 0
    cdef Py_ssize_t base, L
    try:
        with nogil:
            for x in range(width):
                pi[x] = x
                stamp[x] = -1
                blockp[x] = blk[x]
            for x in range(n_blocks):
                groupp[x] = grp[x]
            for c2 in range(n_colours):
                idx[c2] = 0
                L = ll[c2]
                base = mo[c2]
                for j in range(L):
                    pi[fg[go[c2] + j]] = fg[go[c2] + fm[base + j]]
            while True:
                if cmode == 0 or _admissible(pi, width, blockp, groupp, n_blocks, ngroups,
                                             cmode, parent, gparent, bsizes):
                    combo = 0
                    for c2 in range(n_colours):
                        combo = combo * rx[c2] + fc[co[c2] + idx[c2]]
                    v = 0
                    for start in range(width):
                        if stamp[start] == tick:
                            continue
                        v += 1
                        x = start
                        while stamp[x] != tick:
                            stamp[x] = tick
                            x = gmi[pi[gp[x]]]
                    hist[v, combo] += 1
                    tick += 1
                # odometer step: the last colour varies fastest
                c2 = n_colours - 1
                while c2 >= 0:
                    idx[c2] += 1
                    if idx[c2] == kk[c2]:
                        idx[c2] = 0
                    L = ll[c2]
                    base = mo[c2] + idx[c2] * L
                    for j in range(L):
                        pi[fg[go[c2] + j]] = fg[go[c2] + fm[base + j]]
                    if idx[c2] != 0:
                        break
                    c2 -= 1
                if c2 < 0:
                    break
    finally:
        free(pi); free(stamp); free(idx); free(blockp); free(groupp)
        free(parent); free(gparent); free(bsizes)
    return hist_arr
